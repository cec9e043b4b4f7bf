"""
Dense Hermitian linear algebra
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
Eigendecomposition, fractional powers and logarithms of positive
semidefinite matrices, Kronecker products and trace norms.

Matrices are plain complex ``numpy`` arrays. Every entry point passes its
input through :func:`as_hermitian`, which symmetrizes ``(A + A^H) / 2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL_HERM = 1e-12
TOL_PSD = 1e-10
EIG_FLOOR = 1e-300
DIM_CAP = 4096

JACOBI_MAX_SWEEPS = 100
JACOBI_REL_TOL = 1e-12


class EigenConvergenceError(np.linalg.LinAlgError):
    def __init__(self, dim: int, residual: float):
        self.dim = dim
        self.residual = residual
        super().__init__(
            f"eigensolver did not converge for dim={dim} (off-diagonal residual {residual:.3e})"
        )


class NotPSDError(ValueError):
    def __init__(self, eigenvalue: float):
        self.eigenvalue = eigenvalue
        super().__init__(f"matrix is not PSD: eigenvalue {eigenvalue:.3e} < -{TOL_PSD:g}")


class DimensionLimitError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order and the matching unitary of eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply(self, func) -> np.ndarray:
        """Return ``V diag(func(lambda)) V^H``."""
        v = self.eigenvectors
        return (v * func(self.eigenvalues)) @ v.conj().T


def as_hermitian(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    return 0.5 * (a + a.conj().T)


def is_hermitian(a, tol: float = TOL_HERM) -> bool:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    return bool(np.abs(a - a.conj().T).max(initial=0.0) <= tol * scale)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def jacobi_eigh(a, max_sweeps: int = JACOBI_MAX_SWEEPS, rel_tol: float = JACOBI_REL_TOL):
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Each rotation annihilates one off-diagonal pair ``(p, q)``. The complex
    phase of ``a[p, q]`` is folded into the rotation, so the 2x2 problem
    reduces to the classic real symmetric one.

    Returns
    -------
    SpectralDecomposition
        Eigenvalues sorted ascending.

    Raises
    ------
    EigenConvergenceError
        If the off-diagonal Frobenius norm is still above
        ``rel_tol * ||A||_F`` after ``max_sweeps`` sweeps.
    """
    a = as_hermitian(a)
    # work at unit scale so squared norms neither overflow nor underflow
    size = float(np.abs(a).max())
    a = a / size if size > 0 else a.copy()
    n = a.shape[0]
    v = identity(n)
    threshold = rel_tol * np.linalg.norm(a)

    def off_norm():
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    residual = off_norm()
    sweeps = 0
    while residual > threshold:
        if sweeps == max_sweeps:
            raise EigenConvergenceError(n, residual)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < np.finfo(float).tiny:
                    continue
                phase = apq / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                rot = np.array([[c, s * phase], [-s * np.conj(phase), c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ rot
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        sweeps += 1
        residual = off_norm()

    w = np.diag(a).real * (size if size > 0 else 1.0)
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], v[:, order])


def eig_hermitian(a, method: str = "lapack") -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    ``method="lapack"`` calls ``numpy.linalg.eigh``; ``method="jacobi"``
    uses :func:`jacobi_eigh`. Both return ascending eigenvalues.
    """
    a = as_hermitian(a)
    if method == "jacobi":
        return jacobi_eigh(a)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError:
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        raise EigenConvergenceError(a.shape[0], float(off)) from None
    return SpectralDecomposition(w, v)


def _psd_spectrum(a) -> SpectralDecomposition:
    dec = eig_hermitian(a)
    w = dec.eigenvalues
    if w[0] < -TOL_PSD:
        raise NotPSDError(float(w[0]))
    return SpectralDecomposition(np.clip(w, 0.0, None), dec.eigenvectors)


def mat_power(a, p: float) -> np.ndarray:
    """``A**p`` for PSD ``A`` and ``p > 0``, with ``0**p = 0``.

    Eigenvalues in ``[-TOL_PSD, 0)`` are clamped to zero.
    """
    if not p > 0:
        raise ValueError(f"power must be positive, got {p}")
    if p == 1:
        a = as_hermitian(a)
        _psd_spectrum(a)
        return a
    return _psd_spectrum(a).apply(lambda w: w**p)


def support_power(a, p: float, cutoff: float = 0.0) -> np.ndarray:
    """``A**p`` on the support of PSD ``A``; any real ``p``.

    Eigenvalues ``<= cutoff`` are treated as outside the support and map to 0.
    This is how negative powers such as ``S**(beta - 1)`` are taken.
    """
    dec = _psd_spectrum(a)
    w = dec.eigenvalues
    keep = w > cutoff
    out = np.zeros_like(w)
    out[keep] = w[keep] ** p
    return dec.apply(lambda _: out)


def mat_log(a) -> np.ndarray:
    """Natural logarithm on the support of PSD ``A`` (zero on the kernel)."""
    dec = _psd_spectrum(a)
    w = dec.eigenvalues
    out = np.zeros_like(w)
    keep = w > EIG_FLOOR
    out[keep] = np.log(w[keep])
    return dec.apply(lambda _: out)


def mat_exp(a) -> np.ndarray:
    return eig_hermitian(a).apply(np.exp)


def tensor(a, b, max_dim: int = DIM_CAP) -> np.ndarray:
    """Kronecker product, composite index ``j = j1 * dim_b + j2``."""
    a = as_hermitian(a)
    b = as_hermitian(b)
    dim = a.shape[0] * b.shape[0]
    if dim > max_dim:
        raise DimensionLimitError(f"composite dimension {dim} exceeds cap {max_dim}")
    return np.kron(a, b)


def trace_norm(a) -> float:
    return float(np.abs(eig_hermitian(a).eigenvalues).sum())


def min_eigenvalue(a) -> float:
    return float(eig_hermitian(a).eigenvalues[0])


def loewner_leq(a, b, tol: float = 1e-9) -> bool:
    """True when ``A <= B`` in the PSD order, up to ``tol``."""
    return min_eigenvalue(np.asarray(b) - np.asarray(a)) >= -tol


def matrix_from_literal(obj: dict) -> np.ndarray:
    """Parse ``{"dim": d, "re": [[...]], "im": [[...]]}`` into a Hermitian array."""
    if not isinstance(obj, dict):
        raise ValueError("matrix literal must be a JSON object")
    unknown = set(obj) - {"dim", "re", "im"}
    if unknown:
        raise ValueError(f"unknown matrix literal keys: {sorted(unknown)}")
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
    except KeyError as exc:
        raise ValueError(f"matrix literal missing key {exc}") from None
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if dim < 1 or re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(f"matrix literal shape mismatch: dim={dim}, re {re.shape}, im {im.shape}")
    a = re + 1j * im
    if not is_hermitian(a):
        raise ValueError("matrix literal is not Hermitian")
    return as_hermitian(a)


def matrix_to_literal(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"dim": int(a.shape[0]), "re": a.real.tolist(), "im": a.imag.tolist()}
