"""Randomized checks of the operator inequalities behind the converse bound.

Every suite draws its trials from per-trial generators seeded by
``trial_seed(seed, index)``, so a single failing trial can be replayed with
``numpy.random.default_rng(trial_seed)`` regardless of trial order.

Inequality suites report ``worst_violation`` as the smallest eigenvalue of
``larger - smaller`` across trials; a suite passes when it is ``>= -tolerance``.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import lemma1_bound
from .channel import CqChannel, Codebook, Povm, average_error, codeword_state
from .hermitian import (
    as_hermitian,
    eig_hermitian,
    identity,
    mat_power,
    min_eigenvalue,
    support_power,
    trace_norm,
)
from .info import PowerSum, e0, mutual_info, power_factor, spectral_scale

VIOLATION_TOL = 1e-9
POVM_EPS = 1e-6
BETAS = (0.2, 0.5, 0.8, 1.0)


@dataclass(frozen=True)
class PsdEnsembleConfig:
    """Random ensemble settings: matrix dimension range, trial count, seed, eigenvalue scale."""

    min_dim: int = 2
    max_dim: int = 6
    trials: int = 500
    seed: int = 0
    scale: float = 1.0

    def __post_init__(self):
        if not 1 <= self.min_dim <= self.max_dim <= 8:
            raise ValueError("need 1 <= min_dim <= max_dim <= 8")
        if self.trials < 1 or self.scale <= 0:
            raise ValueError("trials and scale must be positive")


@dataclass
class VerdictReport:
    suite: str
    trials: int
    worst_violation: float
    tolerance: float
    failing_seeds: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failing_seeds

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def trial_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def _trials(cfg: PsdEnsembleConfig):
    for i in range(cfg.trials):
        ts = trial_seed(cfg.seed, i)
        yield ts, np.random.default_rng(ts)


def _collect(suite: str, cfg: PsdEnsembleConfig, margins, tol: float = VIOLATION_TOL, **details) -> VerdictReport:
    worst = np.inf
    failing = []
    for ts, m in margins:
        worst = min(worst, m)
        if m < -tol:
            failing.append(ts)
    return VerdictReport(suite, cfg.trials, float(worst), tol, failing, details)


# -- generators ---------------------------------------------------------------

def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_psd(dim: int, seed=None, scale: float = 1.0, rank: int | None = None) -> np.ndarray:
    """``scale * G G^H`` for a ``dim x rank`` complex standard-normal ``G``."""
    rng = _rng(seed)
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    return as_hermitian(scale * g @ g.conj().T)


def random_density(dim: int, seed=None, rank: int | None = None) -> np.ndarray:
    a = random_psd(dim, seed, rank=rank)
    return a / np.trace(a).real


def random_channel(dim: int, a: int, seed=None, pure_fraction: float = 0.0) -> CqChannel:
    rng = _rng(seed)
    states = []
    for _ in range(a):
        rank = 1 if rng.random() < pure_fraction else int(rng.integers(1, dim + 1))
        states.append(random_density(dim, rng, rank=rank))
    return CqChannel(tuple(states))


def random_prior(a: int, seed=None) -> np.ndarray:
    return _rng(seed).dirichlet(np.ones(a))


def random_povm(dim: int, m: int, seed=None, eps: float = POVM_EPS) -> Povm:
    """Normalize random PSD ``A_k`` by ``T = sum A_k + eps I``; the slack goes to ``X_0``."""
    if m < 1:
        raise ValueError("need at least one decoding outcome")
    rng = _rng(seed)
    parts = [random_psd(dim, rng) for _ in range(m)]
    return povm_from_parts(parts, eps)


def povm_from_parts(parts, eps: float = POVM_EPS) -> Povm:
    dim = parts[0].shape[0]
    t = sum(parts) + eps * identity(dim)
    t_inv_half = support_power(t, -0.5)
    xs = [as_hermitian(t_inv_half @ a @ t_inv_half) for a in parts]
    x0 = identity(dim) - sum(xs)
    return Povm((x0, *xs))


def random_contraction(dim: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    c = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return c / np.linalg.norm(c, 2) * rng.uniform(0.5, 1.0)


def helstrom_min_error(rho1, rho2) -> tuple[float, np.ndarray]:
    """Minimum error for two equiprobable states and the projector decoding ``rho1``.

    ``Pe = (1 - ||rho1 - rho2||_1 / 2) / 2``; the decoder projects onto the
    positive eigenspace of ``rho1 - rho2``.
    """
    rho1, rho2 = as_hermitian(rho1), as_hermitian(rho2)
    if rho1.shape != rho2.shape:
        raise ValueError(f"dimension mismatch {rho1.shape} vs {rho2.shape}")
    diff = rho1 - rho2
    pe = 0.5 * (1.0 - 0.5 * trace_norm(diff))
    dec = eig_hermitian(diff)
    v = dec.eigenvectors[:, dec.eigenvalues > 0]
    return float(pe), v @ v.conj().T


def helstrom_povm(rho1, rho2) -> Povm:
    _, proj = helstrom_min_error(rho1, rho2)
    dim = proj.shape[0]
    return Povm((np.zeros((dim, dim), dtype=complex), proj, identity(dim) - proj))


# -- suites -------------------------------------------------------------------

def _dim(rng, cfg):
    return int(rng.integers(cfg.min_dim, cfg.max_dim + 1))


def check_lemma1(cfg: PsdEnsembleConfig = PsdEnsembleConfig(max_dim=3, trials=200)) -> VerdictReport:
    """``average_error >= lemma1_bound`` for random codes, decoders and ``beta``."""
    def margins():
        for ts, rng in _trials(cfg):
            d = int(rng.integers(cfg.min_dim, min(cfg.max_dim, 3) + 1))
            a = int(rng.integers(1, 4))
            n = int(rng.integers(1, 3))
            m = int(rng.integers(1, 5))
            ch = random_channel(d, a, rng, pure_fraction=0.3)
            cb = Codebook(n, tuple(tuple(rng.integers(0, a, n)) for _ in range(m)))
            povm = random_povm(d**n, m, rng)
            beta = float(rng.choice(BETAS))
            yield ts, average_error(ch, cb, povm) - lemma1_bound(ch, cb, beta).value
    return _collect("lemma1", cfg, margins())


def power_mean(mats, p, beta: float) -> np.ndarray:
    """``(sum_i p_i A_i**(1/beta))**beta`` via the factored spectrum (accurate for small ``beta``)."""
    c = spectral_scale(mats)
    ps = PowerSum([power_factor(x, beta, c) for x in mats], p)
    return c * ps.matrix_power(beta)


def _lemma4_lhs_rhs(mats, p, alpha, beta):
    return power_mean(mats, p, alpha), power_mean(mats, p, beta)


def check_lemma4(cfg: PsdEnsembleConfig = PsdEnsembleConfig(), alpha: float | None = None,
                 beta: float | None = None) -> VerdictReport:
    """``(sum pi_i A_i**(1/alpha))**alpha >= (sum pi_i A_i**(1/beta))**beta`` for ``alpha <= beta``.

    With ``alpha``/``beta`` unset, each trial draws its own pair in ``[0.2, 1]``.
    """
    if alpha is not None and beta is not None and not 0 < alpha <= beta <= 1:
        raise ValueError("need 0 < alpha <= beta <= 1")

    def margins():
        for ts, rng in _trials(cfg):
            d = _dim(rng, cfg)
            k = int(rng.integers(1, 5))
            mats = [random_psd(d, rng, cfg.scale) for _ in range(k)]
            mats = [x / np.trace(x).real for x in mats]
            p = random_prior(k, rng)
            if alpha is None or beta is None:
                lo, hi = np.sort(rng.uniform(0.2, 1.0, 2))
            else:
                lo, hi = alpha, beta
            lhs, rhs = _lemma4_lhs_rhs(mats, p, lo, hi)
            yield ts, min_eigenvalue(lhs - rhs)
    return _collect("lemma4", cfg, margins())


def check_transformer_inequality(cfg: PsdEnsembleConfig = PsdEnsembleConfig(),
                                 gamma: float | None = None) -> VerdictReport:
    """``C^H A**gamma C <= (C^H A C)**gamma`` for PSD ``A`` and ``||C|| <= 1``."""
    if gamma is not None and not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")

    def margins():
        for ts, rng in _trials(cfg):
            d = _dim(rng, cfg)
            a = random_psd(d, rng, cfg.scale)
            c = random_contraction(d, rng)
            g = float(rng.uniform(0.05, 1.0)) if gamma is None else gamma
            lhs = c.conj().T @ mat_power(a, g) @ c
            rhs = mat_power(c.conj().T @ a @ c, g)
            yield ts, min_eigenvalue(rhs - lhs)
    return _collect("transformer", cfg, margins())


def check_operator_concavity(cfg: PsdEnsembleConfig = PsdEnsembleConfig(),
                             beta: float | None = None) -> VerdictReport:
    """``(lam A + (1-lam) B)**beta >= lam A**beta + (1-lam) B**beta``."""
    if beta is not None and not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1]")

    def margins():
        for ts, rng in _trials(cfg):
            d = _dim(rng, cfg)
            a = random_psd(d, rng, cfg.scale)
            b = random_psd(d, rng, cfg.scale)
            lam = float(rng.uniform(0.0, 1.0))
            bt = float(rng.uniform(0.05, 1.0)) if beta is None else beta
            mix = mat_power(lam * a + (1 - lam) * b, bt)
            yield ts, min_eigenvalue(mix - lam * mat_power(a, bt) - (1 - lam) * mat_power(b, bt))
    return _collect("concavity", cfg, margins())


def check_operator_monotone(cfg: PsdEnsembleConfig = PsdEnsembleConfig(),
                            beta: float | None = None) -> VerdictReport:
    """``A <= B  =>  A**beta <= B**beta`` with ``B = A + random PSD``."""
    if beta is not None and not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1]")

    def margins():
        for ts, rng in _trials(cfg):
            d = _dim(rng, cfg)
            a = random_psd(d, rng, cfg.scale)
            b = a + random_psd(d, rng, cfg.scale, rank=int(rng.integers(1, d + 1)))
            bt = float(rng.uniform(0.05, 1.0)) if beta is None else beta
            yield ts, min_eigenvalue(mat_power(b, bt) - mat_power(a, bt))
    return _collect("monotone", cfg, margins())


DERIVATIVE_TOL = 1e-5
DERIVATIVE_STEP = 1e-5


def _path(rng, k):
    """A smooth path through the simplex interior: softmax of a random quadratic."""
    c0, c1, c2 = rng.standard_normal((3, k))

    def pi(t):
        z = c0 + c1 * t + 0.5 * c2 * t * t
        w = np.exp(z - z.max())
        return w / w.sum()

    def dpi(t):
        p = pi(t)
        dz = c1 + c2 * t
        return p * (dz - p @ dz)

    return pi, dpi


def trace_derivative_error(mats, pi, dpi, beta: float, t: float = 0.0, h: float = DERIVATIVE_STEP):
    """Relative gap between ``d/dt Tr X(t)**beta`` by central difference and ``Tr beta X**(beta-1) X'``.

    ``X(t) = sum_i pi_i(t) mats_i``.
    """
    def x_of(tt):
        return sum(w * m for w, m in zip(pi(tt), mats))

    def tr_f(tt):
        return float(np.sum(np.clip(eig_hermitian(x_of(tt)).eigenvalues, 0, None) ** beta))

    numeric = (tr_f(t + h) - tr_f(t - h)) / (2 * h)
    dx = sum(w * m for w, m in zip(dpi(t), mats))
    analytic = float(np.real(np.vdot(support_power(x_of(t), beta - 1.0), dx))) * beta
    return abs(numeric - analytic) / max(abs(analytic), 1e-12), numeric, analytic


def check_trace_derivative(cfg: PsdEnsembleConfig = PsdEnsembleConfig(max_dim=4, trials=100)) -> VerdictReport:
    """Chain rule ``d/dt Tr f(X(t)) = Tr f'(X(t)) X'(t)`` for ``f = x**beta``.

    ``X(t) = sum_i pi_i(t) rho_i**(1/beta)`` along random interior simplex
    paths; reported violations are negated relative errors.
    """
    def margins():
        for ts, rng in _trials(cfg):
            d = _dim(rng, cfg)
            k = int(rng.integers(2, 5))
            beta = float(rng.uniform(0.3, 1.0))
            rhos = [random_density(d, rng) for _ in range(k)]
            mats = [mat_power(r, 1.0 / beta) for r in rhos]
            pi, dpi = _path(rng, k)
            err, _, _ = trace_derivative_error(mats, pi, dpi, beta, float(rng.uniform(-0.5, 0.5)))
            yield ts, -err
    return _collect("trace_derivative", cfg, margins(), tol=DERIVATIVE_TOL)


E0_TOLS = {"e1_zero": 1e-12, "e2_nonpositive": 1e-12, "e3_monotone": 1e-10, "e4_slope": 1e-3}
E0_S_GRID = tuple(np.round(np.arange(-0.95, 0.0, 0.05), 10)) + (0.0,)
SLOPE_STEP = 1e-4


def e0_property_margins(ch: CqChannel, prior, s_grid=E0_S_GRID) -> dict:
    """Raw margins for E0(0)=0, E0<=0, monotonicity in ``s`` and slope at 0 = I(pi).

    Each margin is ``>= -tolerance`` when its property holds.
    """
    vals = np.array([e0(ch, prior, s).value for s in s_grid])
    at_zero = e0(ch, prior, 0.0).value
    slope = (at_zero - e0(ch, prior, -SLOPE_STEP).value) / SLOPE_STEP
    return {
        "e1_zero": -abs(at_zero),
        "e2_nonpositive": float(-vals.max()),
        "e3_monotone": float(np.diff(vals).min()) if len(vals) > 1 else 0.0,
        "e4_slope": -abs(slope - mutual_info(ch, prior)),
    }


def check_e0_properties(cfg: PsdEnsembleConfig = PsdEnsembleConfig(max_dim=4, trials=50)) -> VerdictReport:
    """Sign, monotonicity and slope properties of ``E0(s, pi)`` on random channels and priors."""
    worst = {k: np.inf for k in E0_TOLS}
    failing = []
    for ts, rng in _trials(cfg):
        d = _dim(rng, cfg)
        a = int(rng.integers(1, 5))
        ch = random_channel(d, a, rng, pure_fraction=0.25)
        p = random_prior(a, rng)
        m = e0_property_margins(ch, p)
        for key, val in m.items():
            worst[key] = min(worst[key], val)
        if any(m[k] < -E0_TOLS[k] for k in E0_TOLS):
            failing.append(ts)
    # report the top-level number on one scale: margin divided by its tolerance
    scaled = min(worst[k] / E0_TOLS[k] for k in E0_TOLS)
    details = {k: float(v) for k, v in worst.items()}
    details["tolerances"] = dict(E0_TOLS)
    return VerdictReport("e0_properties", cfg.trials, float(scaled), 1.0, failing, details)


def check_helstrom_consistency(cfg: PsdEnsembleConfig = PsdEnsembleConfig(max_dim=4, trials=100)) -> VerdictReport:
    """Helstrom decoder fed to ``average_error`` reproduces the closed form within 1e-10."""
    def margins():
        for ts, rng in _trials(cfg):
            d = _dim(rng, cfg)
            ch = random_channel(d, 2, rng, pure_fraction=0.3)
            pe, _ = helstrom_min_error(*ch.states)
            got = average_error(ch, Codebook(1, ((0,), (1,))), helstrom_povm(*ch.states))
            yield ts, -abs(got - pe)
    return _collect("helstrom", cfg, margins(), tol=1e-10)


SUITES = {
    "lemma1": check_lemma1,
    "lemma4": check_lemma4,
    "transformer": check_transformer_inequality,
    "concavity": check_operator_concavity,
    "monotone": check_operator_monotone,
    "trace_derivative": check_trace_derivative,
    "e0_properties": check_e0_properties,
    "helstrom": check_helstrom_consistency,
}

DEFAULT_CONFIGS = {
    "lemma1": PsdEnsembleConfig(max_dim=3, trials=200),
    "lemma4": PsdEnsembleConfig(),
    "transformer": PsdEnsembleConfig(),
    "concavity": PsdEnsembleConfig(),
    "monotone": PsdEnsembleConfig(),
    "trace_derivative": PsdEnsembleConfig(max_dim=4, trials=100),
    "e0_properties": PsdEnsembleConfig(max_dim=4, trials=50),
    "helstrom": PsdEnsembleConfig(max_dim=4, trials=100),
}


def run_suite(name: str, seed: int = 0, trials: int | None = None) -> VerdictReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    base = DEFAULT_CONFIGS[name]
    cfg = PsdEnsembleConfig(base.min_dim, base.max_dim, trials or base.trials, seed, base.scale)
    return SUITES[name](cfg)
