import math

import numpy as np
import pytest

from cqconverse import bounds
from cqconverse.bounds import (
    DEFAULT_S_GRID,
    cache_converged,
    clear_cache,
    exponent_curve,
    lemma1_bound,
    sc_exponent,
    theorem1_bound,
)
from cqconverse.channel import CqChannel, Codebook, average_error, codeword_state, pure_state
from cqconverse.hermitian import DimensionLimitError, mat_power
from cqconverse.optimizer import capacity
from cqconverse.verify import helstrom_min_error, random_channel, random_povm

ONE_MINUS_HALF_SQRT2 = 0.292893218813
BSC_CAPACITY = math.log(2) + 0.1 * math.log(0.1) + 0.9 * math.log(0.9)
ZERO_PLUS = CqChannel((pure_state([1, 0]), pure_state([1, 1])))


def dense_lemma1(ch, cb, beta):
    s = sum(mat_power(codeword_state(ch, w), 1 / beta) for w in cb.words)
    return 1 - float(np.sum(np.clip(np.linalg.eigvalsh(s), 0, None) ** beta)) / cb.M


def test_lemma1_trivial_cases():
    ch = random_channel(2, 3, 1)
    cb = Codebook(2, [[0, 1], [2, 2], [1, 0]])
    assert lemma1_bound(ch, cb, 1.0) == (0.0, True)
    basis = CqChannel(tuple(pure_state(v) for v in np.eye(3)))
    for beta in (0.2, 0.5, 0.9):
        val = lemma1_bound(basis, Codebook(1, [[0], [1], [2]]), beta)
        assert val.value == pytest.approx(0, abs=1e-12)


def test_lemma1_identical_pure_codewords():
    val = lemma1_bound(ZERO_PLUS, Codebook(1, [[1], [1]]), 0.5)
    assert val.value == pytest.approx(ONE_MINUS_HALF_SQRT2, abs=1e-12)
    assert not val.vacuous


@pytest.mark.parametrize("seed", range(8))
def test_lemma1_matches_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    d, a = 2, int(rng.integers(2, 4))
    ch = CqChannel(tuple(np.eye(d) * 0.05 + 0.9 * pure_state(rng.normal(size=d) + 1j * rng.normal(size=d))
                         for _ in range(a)))
    cb = Codebook(2, [tuple(rng.integers(0, a, 2)) for _ in range(3)])
    for beta in (0.4, 0.7):
        assert lemma1_bound(ch, cb, beta).value == pytest.approx(dense_lemma1(ch, cb, beta), abs=1e-9)


def test_lemma1_dimension_cap_and_alphabet():
    ch = random_channel(2, 2, 0)
    with pytest.raises(DimensionLimitError):
        lemma1_bound(ch, Codebook(3, [[0, 0, 0]]), 0.5, max_dim=4)
    with pytest.raises(ValueError):
        lemma1_bound(ch, Codebook(1, [[2]]), 0.5)
    with pytest.raises(ValueError):
        lemma1_bound(ch, Codebook(1, [[0]]), 0.0)


def test_lemma1_below_helstrom_error():
    rng = np.random.default_rng(21)
    for _ in range(20):
        ch = random_channel(2, 2, rng, pure_fraction=0.5)
        cb = Codebook(1, [[0], [1]])
        pe, _ = helstrom_min_error(*ch.states)
        for beta in (0.2, 0.5, 0.8):
            assert pe >= lemma1_bound(ch, cb, beta).value - 1e-9


def test_theorem1_boundary_and_arguments():
    ch = random_channel(2, 2, 3)
    assert theorem1_bound(ch, 5, 0.3, 0.0) == (0.0, True)
    for bad in ((0, 0.1, -0.5), (2, -0.1, -0.5), (2, 0.1, -1.0), (2, 0.1, 0.2)):
        with pytest.raises(ValueError):
            theorem1_bound(ch, *bad)


def test_theorem1_single_state_closed_form():
    ch = CqChannel((np.diag([0.4, 0.6]),))
    for m, n in ((2, 1), (4, 2), (3, 3)):
        rate = math.log(m) / n
        for s in (-0.8, -0.5, -0.1):
            assert theorem1_bound(ch, n, rate, s).value == pytest.approx(1 - m**s, abs=1e-12)
            # M identical codewords cannot beat guessing: min Pe = 1 - 1/M
            assert 1 - 1 / m >= 1 - m**s


def test_theorem1_increases_to_one_in_n():
    rate = 1.2 * capacity(ZERO_PLUS).value
    exponent, s_star = sc_exponent(ZERO_PLUS, rate)
    vals = [theorem1_bound(ZERO_PLUS, n, rate, s_star).value for n in range(1, 51)]
    assert np.all(np.diff(vals) > 0)
    assert vals[0] > 0 and vals[-1] == pytest.approx(1 - math.exp(-50 * exponent))


def test_theorem1_never_exceeds_achieved_error():
    rng = np.random.default_rng(5)
    for _ in range(15):
        ch = random_channel(2, 2, rng, pure_fraction=0.4)
        n, m = int(rng.integers(1, 3)), int(rng.integers(2, 5))
        cb = Codebook(n, [tuple(rng.integers(0, 2, n)) for _ in range(m)])
        pe = average_error(ch, cb, random_povm(2**n, m, rng))
        for s in DEFAULT_S_GRID:
            assert pe >= theorem1_bound(ch, n, cb.rate, s).value - 1e-9


def test_sc_exponent_trivial_cases():
    ch = random_channel(2, 3, 8)
    assert sc_exponent(ch, 0.0) == pytest.approx((0.0, 0.0), abs=1e-12)
    single = CqChannel((np.eye(2) / 2,))
    exponent, s_star = sc_exponent(single, 0.4)
    # sup of -sR is approached at the grid edge
    assert s_star == pytest.approx(-0.95)
    assert exponent == pytest.approx(0.95 * 0.4)
    with pytest.raises(ValueError):
        sc_exponent(ch, -1.0)
    with pytest.raises(ValueError):
        sc_exponent(ch, 0.1, s_grid=[-1.0, -0.5])


def test_sc_exponent_zero_below_capacity_positive_above():
    c = capacity(ZERO_PLUS).value
    assert sc_exponent(ZERO_PLUS, 0.5 * c)[0] == pytest.approx(0, abs=1e-12)
    exponent, s_star = sc_exponent(ZERO_PLUS, 1.2 * c)
    assert exponent > 1e-4 and -1 < s_star < 0


def test_refinement_never_worse_than_grid():
    rate = 1.5 * capacity(ZERO_PLUS).value
    coarse, _ = sc_exponent(ZERO_PLUS, rate, refine=False)
    fine, _ = sc_exponent(ZERO_PLUS, rate)
    assert fine >= coarse


def test_bsc_exponent_crosses_near_capacity():
    ch = CqChannel.classical([[0.9, 0.1], [0.1, 0.9]])
    below = sc_exponent(ch, BSC_CAPACITY - 0.02)[0]
    above = sc_exponent(ch, BSC_CAPACITY + 0.05)[0]
    assert below <= 1e-9
    assert above > 1e-3


def test_exponent_curve_monotone_and_rows():
    rates = np.linspace(0, 0.7, 15)
    curve = exponent_curve(ZERO_PLUS, rates)
    assert curve.exponents[0] == pytest.approx(0, abs=1e-12)
    assert np.all(np.diff(curve.exponents) >= 0)
    rows = curve.rows()
    assert len(rows) == 15 and rows[3][0] == pytest.approx(rates[3])
    assert exponent_curve(ZERO_PLUS, [0.0]).exponents.tolist() == [0.0]


def test_min_e0_cache():
    clear_cache()
    ch = random_channel(2, 2, 4)
    first = bounds.min_e0(ch, -0.5)
    assert len(bounds._MIN_E0_CACHE) == 1
    assert bounds.min_e0(ch, -0.5) == first
    assert len(bounds._MIN_E0_CACHE) == 1
    assert cache_converged(ch)
    clear_cache()
    assert not bounds._MIN_E0_CACHE
