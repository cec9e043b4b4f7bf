"""Maximization over input priors.

Both objectives used here, the trace functional ``f(pi)`` and the Holevo
quantity ``I(pi)``, are concave on the probability simplex, so projected
gradient ascent with a first-order stationarity check certifies a global
maximum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

import numpy as np

from .channel import CqChannel, as_prior, codeword_state, uniform_prior
from .hermitian import mat_power
from .info import (
    _check_beta,
    TraceFunctional,
    _check_s,
    kkt_pairings,
    mutual_info,
    mutual_info_grad,
    trace_functional,
)

SUPPORT_EPS = 1e-9


@dataclass(frozen=True)
class OptimizerConfig:
    max_iters: int = 5000
    tol: float = 1e-10
    kkt_tol: float = 1e-6
    armijo_shrink: float = 0.5
    armijo_slope: float = 1e-4
    grid_resolution: int = 200

    def __post_init__(self):
        if self.max_iters < 1 or self.tol <= 0 or self.kkt_tol <= 0 or self.grid_resolution < 1:
            raise ValueError(f"invalid optimizer configuration: {self}")
        if not (0 < self.armijo_shrink < 1 and 0 < self.armijo_slope < 1):
            raise ValueError(f"invalid Armijo parameters: {self}")


@dataclass(frozen=True)
class OptimizerResult:
    pi_star: np.ndarray
    value: float
    iterations: int
    kkt_residual: float
    converged: bool
    history: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class KKTReport:
    residual: float
    slacks: np.ndarray
    trace_s_beta: float


def project_simplex(v) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum x = 1}`` (sort-and-threshold)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def stationarity_residual(grad, p, support_eps: float = SUPPORT_EPS) -> float:
    """First-order optimality gap of a concave objective on the simplex.

    With ``gbar = p . grad``: the largest of ``grad_i - gbar`` over all letters
    and ``|grad_i - gbar|`` over letters with ``p_i > support_eps``. It is zero
    exactly at a maximizer and bounds the suboptimality ``max f - f(p)``.
    """
    gbar = float(p @ grad)
    slack = grad - gbar
    res = float(slack.max())
    on = p > support_eps
    if on.any():
        res = max(res, float(np.abs(slack[on]).max()))
    return max(res, 0.0)


def projected_gradient_ascent(objective, gradient, x0, cfg: OptimizerConfig = OptimizerConfig(),
                              residual_scale: float = 1.0):
    """Maximize a smooth concave function over the probability simplex.

    Armijo backtracking on the projection arc. The initial trial step is the
    Barzilai-Borwein step ``|dx|^2 / -(dx . dg)`` when the last move saw
    negative curvature, else twice the last accepted step. Stops once the objective
    change is ``<= cfg.tol`` and the certificate
    ``stationarity_residual(gradient) * residual_scale`` is ``<= cfg.kkt_tol``.
    """
    x = project_simplex(x0)
    fx = objective(x)
    g = gradient(x)
    history = [fx]
    trial = 2.0
    res = stationarity_residual(g, x) * residual_scale
    it = 0
    for it in range(1, cfg.max_iters + 1):
        t = min(trial, 1e8)
        stalled = False
        while True:
            x_new = project_simplex(x + t * g)
            d = x_new - x
            f_new = objective(x_new)
            if f_new >= fx + cfg.armijo_slope * float(g @ d):
                break
            t *= cfg.armijo_shrink
            if t < 1e-30:
                x_new, f_new, stalled = x, fx, True
                break
        if f_new < fx:
            # only reachable through rounding when d is ~0; keep the ascent monotone
            x_new, f_new = x, fx
        change = f_new - fx
        g_new = gradient(x_new)
        dx, dg = x_new - x, g_new - g
        curv = -float(dx @ dg)
        trial = float(dx @ dx) / curv if curv > 0 else 2.0 * t
        x, fx, g = x_new, f_new, g_new
        history.append(fx)
        res = stationarity_residual(g, x) * residual_scale
        if res <= cfg.kkt_tol and change <= cfg.tol:
            break
        if stalled:
            break
    return OptimizerResult(x, float(fx), it, res, res <= cfg.kkt_tol, tuple(history))


def kkt_check(ch: CqChannel, prior, beta: float, support_eps: float = SUPPORT_EPS) -> KKTReport:
    """Optimality conditions for the trace functional at ``prior``.

    Slack ``i`` is ``Tr S**(beta-1) rho_i**(1/beta) - Tr S**beta`` with
    ``S = sum_i pi_i rho_i**(1/beta)``. At a maximizer every slack is ``<= 0``
    and slacks of letters in the support vanish.
    """
    p = as_prior(prior, ch.a)
    pairings, tsb = kkt_pairings(ch, p, beta)
    slacks = pairings - tsb
    res = float(slacks.max())
    on = p > support_eps
    if on.any():
        res = max(res, float(np.abs(slacks[on]).max()))
    return KKTReport(max(res, 0.0), slacks, tsb)


def maximize_trace_functional(ch: CqChannel, beta: float, cfg: OptimizerConfig = OptimizerConfig()) -> OptimizerResult:
    """``max_pi Tr (sum_i pi_i rho_i**(1/beta))**beta`` over the simplex, from the uniform prior."""
    _check_beta(beta)
    if ch.a == 1:
        p = np.ones(1)
        return OptimizerResult(p, trace_functional(ch, p, beta), 0, kkt_check(ch, p, beta).residual, True, (1.0,))
    tf = TraceFunctional(ch, beta)
    res = projected_gradient_ascent(
        tf.value,
        tf.grad,
        uniform_prior(ch.a),
        cfg,
        residual_scale=1.0 / beta,
    )
    kkt = kkt_check(ch, res.pi_star, beta).residual
    return OptimizerResult(res.pi_star, res.value, res.iterations, kkt, kkt <= cfg.kkt_tol, res.history)


def min_e0_over_prior(ch: CqChannel, s: float, cfg: OptimizerConfig = OptimizerConfig()) -> OptimizerResult:
    """``min_pi E0(s, pi) = -log max_pi f(pi)`` at ``beta = s + 1``."""
    _check_s(s)
    res = maximize_trace_functional(ch, s + 1.0, cfg)
    return OptimizerResult(
        res.pi_star, -float(np.log(res.value)), res.iterations, res.kkt_residual, res.converged,
        tuple(-np.log(h) for h in res.history),
    )


def capacity(ch: CqChannel, cfg: OptimizerConfig = OptimizerConfig()) -> OptimizerResult:
    """``C = max_pi I(pi)`` in nats."""
    if ch.a == 1:
        p = np.ones(1)
        return OptimizerResult(p, mutual_info(ch, p), 0, 0.0, True, (0.0,))
    return projected_gradient_ascent(
        lambda p: mutual_info(ch, p),
        lambda p: mutual_info_grad(ch, p),
        uniform_prior(ch.a),
        cfg,
    )


def compositions(parts: int, total: int) -> np.ndarray:
    """All non-negative integer vectors of length ``parts`` summing to ``total`` (stars and bars)."""
    if parts == 1:
        return np.array([[total]])
    bars = np.array(list(combinations(range(total + parts - 1), parts - 1)))
    edges = np.column_stack([np.full(len(bars), -1), bars, np.full(len(bars), total + parts - 1)])
    return np.diff(edges, axis=1) - 1


def simplex_grid(parts: int, resolution: int):
    """Yield the grid ``{p : p_i in (1/resolution) Z, sum p = 1}`` in chunks, as integer counts."""
    if parts == 1:
        yield np.array([[resolution]])
        return
    for first in range(resolution + 1):
        rest = compositions(parts - 1, resolution - first)
        yield np.column_stack([np.full(len(rest), first), rest])


def _batched_trace_power(weights: np.ndarray, mats: np.ndarray, beta: float) -> np.ndarray:
    d = mats.shape[1]
    s = np.tensordot(weights, mats.reshape(len(mats), d * d), axes=1).reshape(-1, d, d)
    w = np.clip(np.linalg.eigvalsh(s), 0.0, None)
    return np.sum(w**beta, axis=1)


def multiletter_max_bruteforce(
    ch: CqChannel, beta: float, n: int = 2, grid_resolution: int = 200,
    polish_step: float = 1.0 / 2000, max_points: int = 5_000_000,
) -> float:
    """Brute-force ``max_P Tr (sum_u P(u) rho_u**(1/beta))**beta`` over ``P`` on ``X**n``.

    Every ``rho_u`` is built as an explicit tensor product and raised to
    ``1/beta`` by eigendecomposition. The maximum over the grid of step
    ``1/grid_resolution`` is followed by a pairwise mass-transfer polish at
    ``polish_step``.
    """
    _check_beta(beta)
    if n not in (1, 2):
        raise ValueError("brute force supports n = 1 or 2 only")
    words = list(product(range(ch.a), repeat=n))
    k = len(words)
    npoints = comb(grid_resolution + k - 1, k - 1)
    if npoints > max_points:
        raise ValueError(f"grid has {npoints} points (a**n = {k}); lower grid_resolution")
    mats = np.stack([mat_power(codeword_state(ch, w), 1.0 / beta) for w in words])

    best_val, best_p = -np.inf, None
    for chunk in simplex_grid(k, grid_resolution):
        p = chunk / grid_resolution
        vals = _batched_trace_power(p, mats, beta)
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val, best_p = float(vals[j]), p[j].copy()

    if k == 1:
        return best_val
    pairs = [(i, j) for i in range(k) for j in range(k) if i != j]
    for _ in range(100_000):
        cands = []
        for i, j in pairs:
            delta = min(polish_step, best_p[j])
            if delta <= 0:
                continue
            q = best_p.copy()
            q[i] += delta
            q[j] -= delta
            cands.append(q)
        if not cands:
            break
        cands = np.array(cands)
        vals = _batched_trace_power(cands, mats, beta)
        j = int(np.argmax(vals))
        if vals[j] <= best_val:
            break
        best_val, best_p = float(vals[j]), cands[j]
    return best_val
