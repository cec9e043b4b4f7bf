"""Classical-quantum channels, priors, codebooks and POVMs.

Input letters are 0-based throughout the Python API. The JSON codebook
format uses 1-based letters; :mod:`cqconverse.io` converts at the boundary.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .hermitian import (
    DIM_CAP,
    DimensionLimitError,
    TOL_PSD,
    as_hermitian,
    eig_hermitian,
    identity,
    min_eigenvalue,
    tensor,
)

TOL_TRACE = 1e-10
TOL_POVM = 1e-9
TOL_PRIOR = 1e-12


def as_density(rho) -> np.ndarray:
    """Validate a density operator (PSD, unit trace) and return it symmetrized."""
    rho = as_hermitian(rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TOL_TRACE:
        raise ValueError(f"density operator must have unit trace, got {tr:.12g}")
    lo = min_eigenvalue(rho)
    if lo < -TOL_PSD:
        raise ValueError(f"density operator is not PSD (min eigenvalue {lo:.3e})")
    return rho


def is_pure(rho, tol: float = 1e-9) -> bool:
    """Rank one within ``tol`` (second largest eigenvalue below ``tol``)."""
    w = eig_hermitian(rho).eigenvalues
    return len(w) == 1 or bool(w[-2] <= tol)


def pure_state(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def as_prior(probs, size: int | None = None) -> np.ndarray:
    """Validate a probability vector; renormalize tiny sum drift."""
    p = np.asarray(probs, dtype=float).ravel()
    if size is not None and p.size != size:
        raise ValueError(f"prior has {p.size} entries, channel has {size} letters")
    if p.size == 0 or np.any(p < 0) or not np.all(np.isfinite(p)):
        raise ValueError("prior entries must be finite and non-negative")
    total = p.sum()
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"prior must sum to 1, got {total:.12g}")
    return p / total


def uniform_prior(a: int) -> np.ndarray:
    return np.full(a, 1.0 / a)


@dataclass(frozen=True, eq=False)
class CqChannel:
    """A classical-quantum channel ``i -> states[i]`` on a ``dim``-dimensional carrier."""

    states: tuple
    labels: tuple | None = None

    def __post_init__(self):
        if len(self.states) < 1:
            raise ValueError("channel needs at least one input letter")
        states = tuple(as_density(r) for r in self.states)
        dims = {r.shape[0] for r in states}
        if len(dims) != 1:
            raise ValueError(f"all channel states must share one dimension, got {sorted(dims)}")
        for r in states:
            r.setflags(write=False)
        object.__setattr__(self, "states", states)
        if self.labels is not None:
            if len(self.labels) != len(states):
                raise ValueError("labels length does not match number of states")
            object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    @property
    def a(self) -> int:
        """Input alphabet size."""
        return len(self.states)

    @property
    def fingerprint(self) -> str:
        h = hashlib.sha256()
        for r in self.states:
            h.update(np.ascontiguousarray(r).tobytes())
        return h.hexdigest()

    def pure_letters(self) -> list[bool]:
        return [is_pure(r) for r in self.states]

    def relabel(self, perm: Sequence[int]) -> "CqChannel":
        return CqChannel(tuple(self.states[i] for i in perm))

    @classmethod
    def classical(cls, transition) -> "CqChannel":
        """Embed a classical channel ``P(y|x)`` (rows = inputs) as diagonal states."""
        w = np.asarray(transition, dtype=float)
        return cls(tuple(np.diag(row).astype(complex) for row in w))


@dataclass(frozen=True)
class Codebook:
    """``M`` codewords of block length ``n``; letters are 0-based, repeats allowed."""

    n: int
    words: tuple

    def __post_init__(self):
        words = tuple(tuple(int(i) for i in w) for w in self.words)
        if len(words) < 1:
            raise ValueError("codebook needs at least one codeword")
        if self.n < 1 or any(len(w) != self.n for w in words):
            raise ValueError(f"every codeword must have length n={self.n}")
        if any(i < 0 for w in words for i in w):
            raise ValueError("codeword letters must be non-negative")
        object.__setattr__(self, "words", words)

    @property
    def M(self) -> int:
        return len(self.words)

    @property
    def rate(self) -> float:
        """``log(M) / n`` in nats per channel use."""
        return float(np.log(self.M) / self.n)

    def check_alphabet(self, a: int):
        bad = [i for w in self.words for i in w if i >= a]
        if bad:
            raise ValueError(f"codeword letter {bad[0]} outside alphabet of size {a}")


@dataclass(frozen=True, eq=False)
class Povm:
    """Measurement ``elements[0..M]``; ``elements[0]`` is the evasion outcome."""

    elements: tuple

    def __post_init__(self):
        els = tuple(as_hermitian(x) for x in self.elements)
        if len(els) < 2:
            raise ValueError("POVM needs the evasion element plus at least one outcome")
        dims = {x.shape[0] for x in els}
        if len(dims) != 1:
            raise ValueError("POVM elements must share one dimension")
        for k, x in enumerate(els):
            lo = min_eigenvalue(x)
            if lo < -TOL_POVM:
                raise ValueError(f"POVM element {k} is not PSD (min eigenvalue {lo:.3e})")
        total = sum(els)
        err = np.abs(total - identity(total.shape[0])).max()
        if err > TOL_POVM:
            raise ValueError(f"POVM elements do not sum to identity (max deviation {err:.3e})")
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def M(self) -> int:
        return len(self.elements) - 1


def codeword_state(ch: CqChannel, word: Sequence[int], max_dim: int = DIM_CAP) -> np.ndarray:
    """Tensor product of the letter states of ``word``, in order."""
    word = [int(i) for i in word]
    if not word:
        raise ValueError("empty codeword")
    for i in word:
        if not 0 <= i < ch.a:
            raise ValueError(f"letter {i} outside alphabet of size {ch.a}")
    if ch.dim ** len(word) > max_dim:
        raise DimensionLimitError(
            f"codeword state dimension {ch.dim}**{len(word)} exceeds cap {max_dim}"
        )
    return reduce(lambda x, y: tensor(x, y, max_dim), (ch.states[i] for i in word))


def average_state(ch: CqChannel, prior) -> np.ndarray:
    p = as_prior(prior, ch.a)
    return sum(pi * r for pi, r in zip(p, ch.states))


def average_error(ch: CqChannel, cb: Codebook, povm: Povm, max_dim: int = DIM_CAP) -> float:
    """``1 - (1/M) sum_k Tr(rho_{u^k} X_k)``; the evasion outcome never counts."""
    cb.check_alphabet(ch.a)
    if povm.M != cb.M:
        raise ValueError(f"POVM has {povm.M} decoding outcomes, codebook has {cb.M} words")
    if povm.dim != ch.dim**cb.n:
        raise ValueError(f"POVM dimension {povm.dim} does not match carrier {ch.dim}**{cb.n}")
    success = 0.0
    for k, word in enumerate(cb.words, start=1):
        rho = codeword_state(ch, word, max_dim)
        success += np.vdot(rho, povm.elements[k]).real
    return float(1.0 - success / cb.M)
