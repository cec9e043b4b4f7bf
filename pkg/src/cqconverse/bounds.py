"""Lower bounds on the decoding error probability of c-q channel codes.

* :func:`lemma1_bound` - bound for one codebook and any decoder,
  ``1 - (1/M) Tr (sum_k rho_{u^k}**(1/beta))**beta``.
* :func:`theorem1_bound` - bound for every code of rate ``R`` and length ``n``,
  ``1 - exp(-n (-s R + min_pi E0(s, pi)))``.
* :func:`sc_exponent` / :func:`exponent_curve` - the best exponent
  ``sup_s [-s R + min_pi E0(s, pi)]``, positive for ``R > C``.

Negative (vacuous) bounds are returned as computed, flagged, never clamped.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

from .channel import CqChannel, Codebook
from .hermitian import DIM_CAP, DimensionLimitError
from .info import PowerSum, _check_beta, power_factor, spectral_scale
from .optimizer import OptimizerConfig, min_e0_over_prior

DEFAULT_S_GRID = tuple(np.round(np.arange(-0.95, 0.0, 0.05), 10)) + (0.0,)
GOLDEN_ITERS = 30


class BoundValue(NamedTuple):
    value: float
    vacuous: bool


def _bound(value: float) -> BoundValue:
    return BoundValue(float(value), bool(value <= 0.0))


def lemma1_bound(ch: CqChannel, cb: Codebook, beta: float, max_dim: int = DIM_CAP) -> BoundValue:
    """Error lower bound valid for every decoder of codebook ``cb``."""
    _check_beta(beta)
    cb.check_alphabet(ch.a)
    if ch.dim**cb.n > max_dim:
        raise DimensionLimitError(f"codeword dimension {ch.dim}**{cb.n} exceeds cap {max_dim}")
    if beta == 1.0:
        return _bound(0.0)
    c = spectral_scale(ch.states)
    letter_factors = [power_factor(r, beta, c) for r in ch.states]
    factors = [reduce(np.kron, (letter_factors[i] for i in word)) for word in cb.words]
    total = c**cb.n * PowerSum(factors, np.ones(cb.M)).trace_power(beta)
    return _bound(1.0 - total / cb.M)


_MIN_E0_CACHE: dict = {}


def clear_cache():
    _MIN_E0_CACHE.clear()


def min_e0(ch: CqChannel, s: float, cfg: OptimizerConfig = OptimizerConfig()) -> float:
    """Cached ``min_pi E0(s, pi)``; the inner optimum does not depend on ``n`` or ``R``."""
    key = (ch.fingerprint, float(s), cfg)
    hit = _MIN_E0_CACHE.get(key)
    if hit is None:
        if s == 0.0:
            hit = (0.0, True)
        else:
            res = min_e0_over_prior(ch, s, cfg)
            hit = (res.value, res.converged)
        _MIN_E0_CACHE[key] = hit
    return hit[0]


def cache_converged(ch: CqChannel) -> bool:
    """False if any cached inner optimization for ``ch`` stopped without certifying optimality."""
    fp = ch.fingerprint
    return all(ok for (f, _, _), (_, ok) in _MIN_E0_CACHE.items() if f == fp)


def theorem1_bound(ch: CqChannel, n: int, rate: float, s: float,
                   cfg: OptimizerConfig = OptimizerConfig()) -> BoundValue:
    """``1 - exp(-n (-s R + min_pi E0(s, pi)))`` for rate ``R`` in nats."""
    if n < 1 or rate < 0:
        raise ValueError(f"need n >= 1 and rate >= 0, got n={n}, rate={rate}")
    if not -1.0 < s <= 0.0:
        raise ValueError(f"s must lie in (-1, 0], got {s}")
    exponent = -s * rate + min_e0(ch, s, cfg)
    return _bound(-np.expm1(-n * exponent))


def _golden_max(func, lo: float, hi: float, iters: int = GOLDEN_ITERS):
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = func(d)
    return (c, fc) if fc >= fd else (d, fd)


def _check_grid(s_grid) -> np.ndarray:
    grid = np.unique(np.asarray(s_grid if s_grid is not None else DEFAULT_S_GRID, dtype=float))
    if grid.size == 0:
        raise ValueError("empty s grid")
    if grid[0] <= -1.0 or grid[-1] > 0.0:
        raise ValueError("s grid must lie in (-1, 0]")
    return grid


def sc_exponent(ch: CqChannel, rate: float, s_grid: Sequence[float] | None = None,
                cfg: OptimizerConfig = OptimizerConfig(), refine: bool = True) -> tuple[float, float]:
    """Best converse exponent ``sup_s [-s R + min_pi E0(s, pi)]`` and its maximizer.

    Maximum over ``s_grid``, then golden-section search on the grid cells
    adjacent to the grid argmax (never beyond the grid's range).
    """
    if rate < 0:
        raise ValueError(f"rate must be non-negative, got {rate}")
    grid = _check_grid(s_grid)

    def objective(s):
        return -s * rate + min_e0(ch, s, cfg)

    vals = np.array([objective(s) for s in grid])
    k = int(np.argmax(vals))
    best_s, best = float(grid[k]), float(vals[k])
    if refine and grid.size > 1:
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
        s_ref, v_ref = _golden_max(objective, float(lo), float(hi))
        if v_ref > best:
            best_s, best = float(s_ref), float(v_ref)
    return best, best_s


@dataclass(frozen=True)
class ExponentCurve:
    rate_grid: np.ndarray
    exponents: np.ndarray
    s_argmax: np.ndarray

    def rows(self):
        return list(zip(self.rate_grid.tolist(), self.exponents.tolist(), self.s_argmax.tolist()))


def exponent_curve(ch: CqChannel, rate_grid: Sequence[float], s_grid: Sequence[float] | None = None,
                   cfg: OptimizerConfig = OptimizerConfig()) -> ExponentCurve:
    """:func:`sc_exponent` over a rate grid.

    Each rate is also scored against every other rate's refined maximizer,
    so the reported curve is the exact upper envelope of the evaluated lines
    and therefore nondecreasing in the rate.
    """
    rates = np.asarray(rate_grid, dtype=float)
    grid = _check_grid(s_grid)
    pts = [sc_exponent(ch, r, grid, cfg) for r in rates]
    cand = np.unique(np.concatenate([grid, [s for _, s in pts]]))
    e0s = np.array([min_e0(ch, s, cfg) for s in cand])
    exps, sargs = [], []
    for r in rates:
        vals = -cand * r + e0s
        k = int(np.argmax(vals))
        exps.append(float(vals[k]))
        sargs.append(float(cand[k]))
    return ExponentCurve(rates, np.array(exps), np.array(sargs))
