import json

import numpy as np
import pytest

from cqconverse import verify
from cqconverse.channel import CqChannel, Codebook, average_error, pure_state
from cqconverse.hermitian import identity, min_eigenvalue
from cqconverse.verify import (
    PsdEnsembleConfig,
    VerdictReport,
    helstrom_min_error,
    helstrom_povm,
    povm_from_parts,
    random_channel,
    random_contraction,
    random_density,
    random_povm,
    random_psd,
    run_suite,
    trace_derivative_error,
    trial_seed,
)

HELSTROM_ZERO_PLUS = 0.146446609407  # (1 - 1/sqrt 2) / 2
SMALL = PsdEnsembleConfig(max_dim=4, trials=40, seed=3)


def test_generators_are_deterministic_and_valid():
    np.testing.assert_array_equal(random_psd(4, 9), random_psd(4, 9))
    assert min_eigenvalue(random_psd(5, 1, scale=3.0)) >= -1e-10
    assert np.linalg.matrix_rank(random_psd(5, 2, rank=2)) == 2
    rho = random_density(3, 4)
    assert np.trace(rho).real == pytest.approx(1)
    ch = random_channel(3, 4, 5, pure_fraction=1.0)
    assert all(ch.pure_letters())
    assert np.linalg.norm(random_contraction(4, 6), 2) <= 1 + 1e-12


def test_random_povm():
    povm = random_povm(3, 4, 7)
    assert povm.M == 4
    np.testing.assert_allclose(sum(povm.elements), identity(3), atol=1e-12)
    with pytest.raises(ValueError):
        random_povm(2, 0, 1)
    eps = 1e-6
    single = povm_from_parts([identity(2)], eps)
    np.testing.assert_allclose(single.elements[1], identity(2) / (1 + eps), atol=1e-15)
    np.testing.assert_allclose(single.elements[0], identity(2) * eps / (1 + eps), atol=1e-15)


def test_helstrom_examples():
    rho = random_density(3, 2)
    assert helstrom_min_error(rho, rho)[0] == pytest.approx(0.5)
    assert helstrom_min_error(pure_state([1, 0]), pure_state([0, 1]))[0] == pytest.approx(0, abs=1e-15)
    pe, proj = helstrom_min_error(pure_state([1, 0]), pure_state([1, 1]))
    assert pe == pytest.approx(HELSTROM_ZERO_PLUS, abs=1e-12)
    np.testing.assert_allclose(proj @ proj, proj, atol=1e-14)
    with pytest.raises(ValueError):
        helstrom_min_error(np.eye(2) / 2, np.eye(3) / 3)


def test_helstrom_povm_attains_the_minimum():
    rng = np.random.default_rng(1)
    for _ in range(10):
        ch = random_channel(3, 2, rng)
        pe, _ = helstrom_min_error(*ch.states)
        got = average_error(ch, Codebook(1, [[0], [1]]), helstrom_povm(*ch.states))
        assert got == pytest.approx(pe, abs=1e-12)
        # no random decoder does better
        assert average_error(ch, Codebook(1, [[0], [1]]), random_povm(3, 2, rng)) >= pe - 1e-12


def test_trial_seed_replay():
    assert trial_seed(0, 5) == trial_seed(0, 5)
    assert trial_seed(0, 5) != trial_seed(1, 5)
    assert len({trial_seed(2, i) for i in range(100)}) == 100


@pytest.mark.parametrize("name", sorted(verify.SUITES))
def test_suites_pass_and_are_reproducible(name):
    rep = run_suite(name, seed=4, trials=25)
    assert rep.passed, rep.to_json()
    assert rep.trials == 25
    assert run_suite(name, seed=4, trials=25).to_json() == rep.to_json()


def test_report_serialization():
    rep = VerdictReport("x", 3, -1e-3, 1e-9, [11], {"k": 1.0})
    assert not rep.passed
    d = json.loads(rep.to_json())
    assert d["passed"] is False and d["failing_seeds"] == [11]


def test_failing_trials_are_reported_by_seed():
    # with an impossible tolerance every lemma1 trial with a strict margin fails
    cfg = PsdEnsembleConfig(max_dim=2, trials=5, seed=0)
    rep = verify._collect("demo", cfg, ((verify.trial_seed(0, i), -1.0) for i in range(5)))
    assert rep.failing_seeds == [verify.trial_seed(0, i) for i in range(5)]
    assert rep.worst_violation == -1


def test_equality_cases_give_zero_margin():
    lemma4 = verify.check_lemma4(SMALL, alpha=0.6, beta=0.6)
    assert abs(lemma4.worst_violation) <= 1e-12
    transformer = verify.check_transformer_inequality(SMALL, gamma=1.0)
    assert abs(transformer.worst_violation) <= 1e-12
    concavity = verify.check_operator_concavity(SMALL, beta=1.0)
    assert abs(concavity.worst_violation) <= 1e-12


def test_transformer_identity_contraction():
    a = random_psd(3, 1)
    np.testing.assert_allclose(identity(3) @ verify.mat_power(a, 0.4) @ identity(3), verify.mat_power(a, 0.4))


def test_suite_argument_validation():
    with pytest.raises(ValueError):
        verify.check_lemma4(SMALL, alpha=0.8, beta=0.5)
    with pytest.raises(ValueError):
        verify.check_transformer_inequality(SMALL, gamma=1.5)
    with pytest.raises(ValueError):
        verify.check_operator_concavity(SMALL, beta=0.0)
    with pytest.raises(ValueError):
        verify.check_operator_monotone(SMALL, beta=2.0)
    with pytest.raises(ValueError):
        PsdEnsembleConfig(min_dim=3, max_dim=2)
    with pytest.raises(KeyError):
        run_suite("nope")


def test_monotone_commuting_case():
    a, b = np.diag([0.1, 0.5, 2.0]), np.diag([0.2, 0.5, 3.0])
    for beta in (0.1, 0.5, 1.0):
        diff = verify.mat_power(b, beta) - verify.mat_power(a, beta)
        np.testing.assert_allclose(np.diag(diff).real, np.diag(b).real ** beta - np.diag(a).real ** beta,
                                   atol=1e-14)


def test_trace_derivative_trivial_paths():
    mats = [random_psd(3, 1), random_psd(3, 2)]
    err, numeric, analytic = trace_derivative_error(mats, lambda t: np.array([0.3, 0.7]),
                                                    lambda t: np.zeros(2), 0.5)
    assert numeric == pytest.approx(0, abs=1e-10) and analytic == 0
    scalars = [np.array([[2.0]]), np.array([[5.0]])]
    err, numeric, analytic = trace_derivative_error(
        scalars, lambda t: np.array([1 - t, t]) * 0.5 + 0.25, lambda t: np.array([-0.5, 0.5]), 0.4)
    assert analytic == pytest.approx(0.4 * 2.75**-0.6 * 1.5, rel=1e-12)
    assert err <= 1e-8


def test_e0_property_margins_single_state():
    ch = CqChannel((random_density(2, 3),))
    m = verify.e0_property_margins(ch, [1.0])
    assert all(v >= -1e-11 for v in m.values())
