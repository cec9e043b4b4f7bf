"""Entropies, Holevo mutual information and the Gallager-type function E0.

The central quantity is the trace functional

    f(pi) = Tr (sum_i pi_i rho_i**(1/beta))**beta,    0 < beta <= 1,

with ``E0(s, pi) = -log f(pi)`` at ``beta = s + 1``.

For small ``beta`` the powers ``rho**(1/beta)`` span many orders of
magnitude and eigensolving the sum directly loses digits. Instead each
power is written as ``F F^H`` with ``F = V diag(lambda**(1/(2 beta)))``, and
the spectrum of ``S = B B^H`` (``B`` = the stacked, weighted factors) comes
from a QR + SVD of ``B^H``; see :class:`PowerSum`.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import CqChannel, as_prior, average_state
from .hermitian import _psd_spectrum, eig_hermitian

UNDERFLOW_WARN = 1e-12
AMP_FLOOR = 1e-150


def _check_beta(beta: float):
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")


def _check_s(s: float):
    if not -1.0 < s <= 0.0:
        raise ValueError(f"s must lie in (-1, 0], got {s}")


def power_factor(rho, beta: float, scale: float = 1.0) -> np.ndarray:
    """Return ``F`` with ``F @ F^H == (rho / scale)**(1/beta)``, dropping the kernel.

    Pass ``scale`` = the largest eigenvalue in play so the dominant power is
    O(1). Eigenvalues whose power still underflows are dropped; this costs at
    most their mass in ``Tr (...)**beta`` and warns when that exceeds 1e-12.
    """
    dec = _psd_spectrum(rho)
    w = dec.eigenvalues
    # eigenvalues at roundoff level are kernel, not signal
    keep = w > len(w) * np.finfo(float).eps * w.max(initial=0.0)
    amp = np.zeros_like(w)
    amp[keep] = (w[keep] / scale) ** (0.5 / beta)
    tiny = keep & (amp < AMP_FLOOR)
    lost = w[tiny].sum()
    if lost > UNDERFLOW_WARN * w.sum():
        warnings.warn(f"rho**(1/beta) underflows at beta={beta:g}; dropped eigenvalue mass {lost:.1e}",
                      RuntimeWarning, stacklevel=2)
    keep &= ~tiny
    return dec.eigenvectors[:, keep] * amp[keep]


def spectral_scale(mats) -> float:
    """Largest eigenvalue over ``mats`` (1.0 if all vanish); the ``scale`` for :func:`power_factor`."""
    top = max(float(np.linalg.eigvalsh(np.asarray(m)).max(initial=0.0)) for m in mats)
    return top if top > 0 else 1.0


class PowerSum:
    """Spectrum of ``S = sum_k w_k F_k F_k^H`` computed from the factors.

    Parameters
    ----------
    factors : sequence of (d, r_k) arrays
    weights : sequence of non-negative floats
    rank : rank of ``S`` if already known; it depends only on which weights are positive
    """

    def __init__(self, factors: Sequence[np.ndarray], weights: Sequence[float], rank: int | None = None):
        self.factors = list(factors)
        self.weights = np.asarray(weights, dtype=float)
        d = self.factors[0].shape[0]
        used = [k for k, (wk, fk) in enumerate(zip(self.weights, self.factors)) if wk > 0 and fk.shape[1]]
        self._owner = np.concatenate([np.full(self.factors[k].shape[1], k) for k in used]) if used else np.zeros(0, int)
        if not used:
            self.sigma = np.zeros(0)
            self.vectors = np.zeros((d, 0), dtype=complex)
            self._left = np.zeros((0, 0), dtype=complex)
            self.rank = 0
            return
        g = np.hstack([np.sqrt(self.weights[k]) * self.factors[k] for k in used]).conj().T
        norms = np.abs(g).max(axis=1)
        order = np.argsort(-norms, kind="stable")
        g, norms, self._owner = g[order], norms[order], self._owner[order]
        # S = Y^H D^2 Y with row-scaled Y and D > 0, so rank S = rank Y; the
        # scaled matrix cannot tell tiny genuine eigenvalues from rank loss
        if rank is None:
            rank = np.linalg.matrix_rank(g / norms[:, None])
        self.rank = int(rank)
        q, r = np.linalg.qr(g)
        u, sigma, wh = np.linalg.svd(r, full_matrices=False)
        self.sigma = sigma[:rank]
        self.vectors = wh.conj().T[:, :rank]
        # left singular vectors of the stacked factors: G W = L diag(sigma)
        self._left = (q @ u)[:, :rank]

    @property
    def eigenvalues(self) -> np.ndarray:
        """Non-zero eigenvalues of ``S`` (descending)."""
        return self.sigma**2

    def trace_power(self, p: float) -> float:
        """``Tr S**p`` on the support of ``S``."""
        return float(np.sum(self.sigma ** (2.0 * p)))

    def matrix_power(self, p: float) -> np.ndarray:
        v = self.vectors
        return (v * self.sigma ** (2.0 * p)) @ v.conj().T

    def pairing(self, factor: np.ndarray, p: float) -> float:
        """``Tr S**p F F^H`` with the power taken on the support of ``S``."""
        proj = self.vectors.conj().T @ factor
        return float(np.sum(self.sigma[:, None] ** (2.0 * p) * np.abs(proj) ** 2))

    def member_pairing(self, k: int, p: float) -> float:
        """``Tr S**p F_k F_k^H`` for a summand of ``S``.

        For ``w_k > 0`` this reads the summand's rows of the left singular
        vectors, ``sum_j sigma_j**(2p+2) |L[rows_k, j]|**2 / w_k``, which
        avoids multiplying eigenvector error by ``sigma**(2p)`` when ``p < 0``.
        """
        rows = self._owner == k
        if not rows.any():
            return self.pairing(self.factors[k], p)
        mass = np.sum(np.abs(self._left[rows]) ** 2, axis=0)
        return float(np.sum(self.sigma ** (2.0 * p + 2.0) * mass) / self.weights[k])


def von_neumann_entropy(rho) -> float:
    """``-sum lambda log lambda`` over the spectrum, in nats (``0 log 0 = 0``)."""
    w = np.clip(eig_hermitian(rho).eigenvalues, 0.0, None)
    w = w[w > 0]
    return float(-np.sum(w * np.log(w)))


def mutual_info(ch: CqChannel, prior) -> float:
    """Holevo quantity ``H(sum pi_i rho_i) - sum pi_i H(rho_i)`` in nats."""
    p = as_prior(prior, ch.a)
    mixed = von_neumann_entropy(average_state(ch, p))
    return mixed - float(sum(pi * von_neumann_entropy(r) for pi, r in zip(p, ch.states) if pi > 0))


def mutual_info_grad(ch: CqChannel, prior) -> np.ndarray:
    """Partial derivatives of the Holevo quantity in each ``pi_i``.

    ``dI/dpi_i = Tr rho_i log rho_i - Tr rho_i log rho_bar - 1``, the exact
    derivative of the formula extended off the simplex. The log of the
    average state is floored at ``log(1e-300)`` on its kernel, which keeps
    the gradient finite for unused letters outside the current support.
    """
    p = as_prior(prior, ch.a)
    dec = eig_hermitian(average_state(ch, p))
    logw = np.log(np.clip(dec.eigenvalues, 1e-300, None))
    v = dec.eigenvectors
    out = np.empty(ch.a)
    for i, r in enumerate(ch.states):
        diag = np.einsum("ji,jk,ki->i", v.conj(), r, v).real
        out[i] = -von_neumann_entropy(r) - float(diag @ logw) - 1.0
    return out


class TraceFunctional:
    """``f(pi) = Tr (sum_i pi_i rho_i**(1/beta))**beta`` for a fixed channel and ``beta``.

    The state factors are computed once, scaled by the largest eigenvalue
    ``c`` so that ``f = c * Tr (sum_i pi_i (rho_i / c)**(1/beta))**beta``.
    Weights are used as given (no renormalization), so finite differences
    may step off the simplex.
    """

    def __init__(self, ch: CqChannel, beta: float):
        _check_beta(beta)
        self.ch, self.beta = ch, beta
        self.scale = spectral_scale(ch.states)
        self.factors = [power_factor(r, beta, self.scale) for r in ch.states]
        self._traces = np.array([np.trace(r).real for r in ch.states])
        self._ranks: dict = {}
        self._last = None

    def _weights(self, prior) -> np.ndarray:
        p = np.asarray(prior, dtype=float)
        if p.shape != (self.ch.a,) or (p < 0).any():
            raise ValueError(f"need {self.ch.a} non-negative weights, got {prior!r}")
        return p

    def _sum(self, p: np.ndarray) -> PowerSum:
        key = p.tobytes()
        if self._last is not None and self._last[0] == key:
            return self._last[1]
        support = tuple(p > 0)
        ps = PowerSum(self.factors, p, self._ranks.get(support))
        self._ranks[support] = ps.rank
        self._last = (key, ps)
        return ps

    def value(self, prior) -> float:
        p = self._weights(prior)
        if self.beta == 1.0:
            return float(p @ self._traces)
        return self.scale * self._sum(p).trace_power(self.beta)

    def pairings(self, prior) -> tuple[np.ndarray, float]:
        """``(Tr S**(beta-1) rho_i**(1/beta) for each i, Tr S**beta)``."""
        ps = self._sum(self._weights(prior))
        g = np.array([ps.member_pairing(k, self.beta - 1.0) for k in range(self.ch.a)])
        return self.scale * g, self.scale * ps.trace_power(self.beta)

    def grad(self, prior) -> np.ndarray:
        return self.beta * self.pairings(prior)[0]


def trace_functional(ch: CqChannel, prior, beta: float) -> float:
    """``Tr (sum_i pi_i rho_i**(1/beta))**beta``."""
    return TraceFunctional(ch, beta).value(as_prior(prior, ch.a))


def trace_functional_grad(ch: CqChannel, prior, beta: float) -> np.ndarray:
    """Gradient of :func:`trace_functional` with respect to the prior.

    ``df/dpi_i = beta * Tr S**(beta-1) rho_i**(1/beta)`` where
    ``S = sum_i pi_i rho_i**(1/beta)``; the negative power is taken on the
    support of ``S``.
    """
    return TraceFunctional(ch, beta).grad(as_prior(prior, ch.a))


def kkt_pairings(ch: CqChannel, prior, beta: float) -> tuple[np.ndarray, float]:
    """Return ``(Tr S**(beta-1) rho_i**(1/beta) for each i, Tr S**beta)``."""
    return TraceFunctional(ch, beta).pairings(as_prior(prior, ch.a))


@dataclass(frozen=True)
class E0Point:
    s: float
    value: float
    beta: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "beta", self.s + 1.0)


def e0(ch: CqChannel, prior, s: float) -> E0Point:
    """``E0(s, pi) = -log Tr (sum_i pi_i rho_i**(1/(1+s)))**(1+s)`` for ``-1 < s <= 0``."""
    _check_s(s)
    return E0Point(s, -float(np.log(trace_functional(ch, prior, s + 1.0))))


def e0_slope_at_zero(ch: CqChannel, prior) -> float:
    """Left derivative of ``E0(., pi)`` at ``s = 0``, which equals ``I(pi)``."""
    return mutual_info(ch, prior)
