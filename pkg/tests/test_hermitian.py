import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cqconverse.hermitian import (
    DimensionLimitError,
    EigenConvergenceError,
    NotPSDError,
    as_hermitian,
    eig_hermitian,
    identity,
    is_hermitian,
    jacobi_eigh,
    loewner_leq,
    mat_exp,
    mat_log,
    mat_power,
    matrix_from_literal,
    matrix_to_literal,
    min_eigenvalue,
    support_power,
    tensor,
    trace_norm,
)
from cqconverse.verify import random_psd

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 6)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_trivial_cases(method):
    dec = eig_hermitian(identity(3), method)
    np.testing.assert_allclose(dec.eigenvalues, [1, 1, 1])
    np.testing.assert_allclose(dec.eigenvectors.conj().T @ dec.eigenvectors, np.eye(3), atol=1e-14)
    dec = eig_hermitian(np.diag([2.0, -1.0]), method)
    np.testing.assert_allclose(dec.eigenvalues, [-1, 2])
    np.testing.assert_allclose(np.abs(dec.eigenvectors), [[0, 1], [1, 0]], atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(dims, seeds)
def test_jacobi_reconstructs_and_matches_lapack(dim, seed):
    a = random_hermitian(dim, seed)
    dec = jacobi_eigh(a)
    v = dec.eigenvectors
    np.testing.assert_allclose(v.conj().T @ v, np.eye(dim), atol=1e-12)
    np.testing.assert_allclose(dec.reconstruct(), a, atol=1e-11)
    np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(a), atol=1e-11)
    # trace and Frobenius norm are spectral invariants
    assert dec.eigenvalues.sum() == pytest.approx(np.trace(a).real, abs=1e-11)
    assert np.sum(dec.eigenvalues**2) == pytest.approx(np.linalg.norm(a) ** 2, rel=1e-11)


def test_jacobi_budget_exhaustion_raises():
    with pytest.raises(EigenConvergenceError) as info:
        jacobi_eigh(random_hermitian(5, 3), max_sweeps=1)
    assert info.value.dim == 5 and info.value.residual > 0
    assert "dim=5" in str(info.value)


def test_eig_rejects_unknown_method():
    with pytest.raises(ValueError):
        eig_hermitian(identity(2), "qr")


def test_as_hermitian_symmetrizes_and_rejects_non_square():
    a = np.array([[1, 2 + 1j], [0, 3]])
    h = as_hermitian(a)
    assert is_hermitian(h)
    assert not is_hermitian(a)
    with pytest.raises(ValueError):
        as_hermitian(np.zeros((2, 3)))


def test_mat_power_examples():
    np.testing.assert_allclose(mat_power(identity(4), 0.37), identity(4), atol=1e-14)
    np.testing.assert_allclose(mat_power(np.diag([4.0, 9.0]), 0.5), np.diag([2, 3]), atol=1e-14)
    with pytest.raises(ValueError):
        mat_power(identity(2), 0.0)
    with pytest.raises(NotPSDError) as info:
        mat_power(np.diag([1.0, -1e-3]), 0.5)
    assert info.value.eigenvalue == pytest.approx(-1e-3)


def test_mat_power_clamps_roundoff_negatives():
    out = mat_power(np.diag([1.0, -1e-12]), 0.5)
    np.testing.assert_allclose(out, np.diag([1, 0]), atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(dims, seeds, st.floats(0.1, 3.0))
def test_power_round_trip(dim, seed, p):
    a = random_psd(dim, seed) + 0.1 * identity(dim)
    np.testing.assert_allclose(mat_power(mat_power(a, p), 1 / p), a, atol=1e-9)
    np.testing.assert_allclose(mat_power(a, p) @ mat_power(a, p), mat_power(a, 2 * p), atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(dims, seeds, st.floats(0.05, 1.0))
def test_power_is_operator_monotone(dim, seed, p):
    a = random_psd(dim, seed)
    b = a + random_psd(dim, seed + 1)
    assert loewner_leq(mat_power(a, p), mat_power(b, p), tol=1e-9)


def test_support_power_inverts_on_support():
    a = np.diag([4.0, 0.0, 0.25])
    np.testing.assert_allclose(support_power(a, -1.0), np.diag([0.25, 0, 4]))
    np.testing.assert_allclose(support_power(a, -0.5, cutoff=0.3), np.diag([0.5, 0, 0]))


def test_log_and_exp():
    np.testing.assert_allclose(mat_log(identity(3)), np.zeros((3, 3)), atol=1e-15)
    np.testing.assert_allclose(mat_log(np.diag([np.e, 1.0])), np.diag([1, 0]), atol=1e-14)
    np.testing.assert_allclose(mat_log(np.diag([2.0, 0.0])), np.diag([np.log(2), 0]), atol=1e-15)
    a = random_psd(4, 7) + identity(4)
    np.testing.assert_allclose(mat_exp(mat_log(a)), a, atol=1e-10)


def test_tensor_examples_and_cap():
    a, b = np.diag([1.0, 2.0]), np.array([[0, 1], [1, 0]], dtype=complex)
    t = tensor(a, b)
    assert t.shape == (4, 4)
    # composite index j = j1 * dim_b + j2
    assert t[1, 0] == 1 and t[3, 2] == 2
    with pytest.raises(DimensionLimitError):
        tensor(identity(64), identity(65))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_tensor_associative_and_trace_multiplicative(seed):
    a, b, c = (random_hermitian(d, seed + d) for d in (2, 3, 2))
    np.testing.assert_allclose(tensor(tensor(a, b), c), tensor(a, tensor(b, c)), atol=1e-13)
    assert np.trace(tensor(a, b)) == pytest.approx(np.trace(a) * np.trace(b))


def test_trace_norm_and_min_eigenvalue():
    assert trace_norm(np.zeros((3, 3))) == 0
    assert trace_norm(np.diag([1.0, -1.0])) == pytest.approx(2)
    a = random_psd(5, 11)
    assert trace_norm(a) == pytest.approx(np.trace(a).real, abs=1e-10)
    assert min_eigenvalue(identity(4)) == pytest.approx(1)
    assert min_eigenvalue(np.diag([3.0, -2.0, 0.0])) == pytest.approx(-2)
    for seed in range(20):
        assert min_eigenvalue(random_psd(4, seed)) >= -1e-10


def test_literal_round_trip_and_validation():
    a = random_hermitian(3, 5)
    np.testing.assert_allclose(matrix_from_literal(matrix_to_literal(a)), a)
    assert matrix_from_literal({"dim": 1, "re": [[2.0]]})[0, 0] == 2
    for bad in (
        {"dim": 2, "re": [[1, 0], [0, 1]], "extra": 1},
        {"dim": 3, "re": [[1, 0], [0, 1]]},
        {"re": [[1]]},
        {"dim": 2, "re": [[1, 1], [0, 1]]},
        [[1]],
    ):
        with pytest.raises(ValueError):
            matrix_from_literal(bad)


@pytest.mark.parametrize("scale", [1e-305, 1.0, 1e300])
def test_jacobi_extreme_scales(scale):
    dec = jacobi_eigh(scale * np.array([[1.0, 1.0], [1.0, -1.0]]))
    np.testing.assert_allclose(dec.eigenvalues, [-np.sqrt(2) * scale, np.sqrt(2) * scale], rtol=1e-13)


def test_jacobi_on_diagonal_and_zero_input():
    np.testing.assert_array_equal(jacobi_eigh(np.zeros((3, 3))).eigenvalues, [0, 0, 0])
    dec = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(dec.eigenvalues, [1, 2, 3])
