import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.channel_adversary import (
    AdversarySpec,
    YieldVector,
    adversary_yield_vector,
    passive_yield_vector,
)
from src.constants.common import MODES, SECURITY_KEYS, VERDICTS
from src.photon_source import (
    build_explicit,
    build_near_single_factorial,
    build_poissonian,
    build_spike,
    poisson_pmf,
)
from src.protocol import YieldEstimate
from src.security import (
    bound_multi_yield,
    bound_normalized_multi_yield,
    check_basic_security,
    check_decoy_security,
    check_dimensions,
    check_multi_photon_consistency,
    evaluate_analytic,
    evaluate_empirical,
    expected_yield,
    general_ratio_argmax,
    general_ratio_bound,
    multi_photon_yield,
    near_single_general_ratio,
    near_single_ratio,
    normal_op_margin,
    normalized_bound_coefficient,
    normalized_multi_yield,
    optimal_signal_mu,
    poisson_pair_ratio_bound,
    select_ratio_bound,
)
from src.utils.exceptions import (
    ConfigurationError,
    DimensionError,
    DomainError,
    UnboundedRatioError,
    UndefinedQuantityError,
)
from src.utils.streams import make_stream


def naive_pns(n_max=30):
    return adversary_yield_vector(AdversarySpec(kind="naive_pns"), n_max)


def test_normal_op_margin_worked_value():
    assert normal_op_margin(0.3, 1.0) == pytest.approx(0.604, abs=1e-3)
    assert normal_op_margin(0.5, 1.0) == pytest.approx(0.82436064, rel=1e-7)
    assert normal_op_margin(0.99, 1.0) == pytest.approx(0.99995, abs=1e-5)
    assert normal_op_margin(1.0, 1.0) == 1.0


def test_normal_op_margin_domain():
    with pytest.raises(DomainError):
        normal_op_margin(0.0, 1.0)


def test_pair_ratio_bound_values():
    assert poisson_pair_ratio_bound(0.3, 1.0) == pytest.approx(0.18122649, rel=1e-7)
    assert poisson_pair_ratio_bound(0.5, 1.0) == pytest.approx(0.41218032, rel=1e-7)


def test_pair_ratio_bound_domain():
    for mu, mu_prime in [(1.0, 1.0), (1.0, 0.5), (0.0, 1.0)]:
        with pytest.raises(DomainError):
            poisson_pair_ratio_bound(mu, mu_prime)


def test_basic_security_worked_example():
    assert check_basic_security(0.1, 0.1) == VERDICTS.INSECURE
    assert check_basic_security(0.2, 0.1) == VERDICTS.SECURE


def test_naive_pns_is_insecure():
    signal, decoy = build_poissonian(0.3), build_poissonian(1.0)
    yields = naive_pns()
    Y_s, Y_d = expected_yield(signal, yields), expected_yield(decoy, yields)
    report = check_decoy_security(Y_s, Y_d, poisson_pair_ratio_bound(0.3, 1.0))
    assert report.condition_rhs == pytest.approx(0.0479, abs=1e-4)
    assert report.condition_lhs == pytest.approx(0.0369, abs=1e-4)
    assert report.verdict == VERDICTS.INSECURE
    assert report.margin < 0


def test_equality_is_insecure():
    report = check_decoy_security(0.05, 0.1, 0.5)
    assert report.margin == 0.0
    assert report.verdict == VERDICTS.INSECURE


def test_multi_photon_yield_and_normalized_yield():
    signal = build_poissonian(0.3)
    yields = naive_pns()
    assert multi_photon_yield(signal, yields) == pytest.approx(0.03693631, rel=1e-6)
    assert normalized_multi_yield(signal, yields) == pytest.approx(1.0)
    with pytest.raises(UndefinedQuantityError):
        normalized_multi_yield(build_near_single_factorial(0.0), yields)


def test_dimension_mismatch():
    with pytest.raises(DimensionError) as error:
        check_dimensions(build_poissonian(0.3, 30), passive_yield_vector(0.1, 20))
    assert str(error.value) == "Length mismatch: 31 probabilities against 21 yields"


def test_bound_multi_yield_clamps():
    assert bound_multi_yield(0.1, 0.5) == pytest.approx(0.05)
    assert bound_multi_yield(0.5, 9864.0) == 1.0


def test_normalized_bound_coefficients():
    signal = build_poissonian(0.3)
    ratio = poisson_pair_ratio_bound(0.3, 1.0)
    assert normalized_bound_coefficient(signal, ratio) == pytest.approx(4.9064, rel=1e-3)
    signal = build_poissonian(0.5)
    ratio = poisson_pair_ratio_bound(0.5, 1.0)
    assert normalized_bound_coefficient(signal, ratio) == pytest.approx(4.569, rel=1e-3)
    assert bound_normalized_multi_yield(0.1, signal, 1.0) == pytest.approx(0.4569, rel=1e-3)


def test_general_ratio_reduces_to_pair_bound():
    ratio, n = general_ratio_argmax(build_poissonian(0.3), build_poissonian(1.0))
    assert n == 2
    assert ratio == pytest.approx(poisson_pair_ratio_bound(0.3, 1.0), rel=1e-12)


def test_spike_source_general_ratio():
    signal, decoy = build_spike(1e-3, 10), build_poissonian(1.0)
    ratio, n = general_ratio_argmax(signal, decoy)
    assert n == 10
    assert ratio == pytest.approx(1e-3 / poisson_pmf(10, 1.0), rel=1e-12)
    assert abs(ratio - 9864) <= 1


def test_spike_source_fails_under_honest_channel():
    signal, decoy = build_spike(1e-3, 10), build_poissonian(1.0)
    for eta in np.linspace(1e-4, 0.5, 50):
        report = evaluate_analytic(signal, decoy, passive_yield_vector(eta, 30))
        assert report.ratio_method == "general"
        assert report.verdict == VERDICTS.INSECURE


def test_unbounded_general_ratio():
    signal = build_spike(1e-3, 10, n_max=30)
    decoy = build_near_single_factorial(0.0)
    with pytest.raises(UnboundedRatioError):
        general_ratio_bound(signal, decoy)


def test_near_single_ratio():
    assert near_single_ratio(0.01, 1.0) == pytest.approx(0.05436560, rel=1e-7)
    with pytest.raises(DomainError):
        near_single_ratio(1.0, 1.0)


def test_near_single_general_ratio_closed_form():
    assert near_single_general_ratio(0.01, 1.0) == pytest.approx(
        0.01 * math.e / (math.e - 2), rel=1e-9
    )
    assert near_single_general_ratio(0.0, 1.0) == 0.0
    signal = build_near_single_factorial(0.01)
    for mu_prime in [0.5, 1.0, 2.0]:
        assert general_ratio_bound(signal, build_poissonian(mu_prime)) == pytest.approx(
            near_single_general_ratio(0.01, mu_prime), rel=1e-9
        )


def test_select_ratio_bound():
    poisson_03, poisson_1 = build_poissonian(0.3), build_poissonian(1.0)
    ratio, method = select_ratio_bound(poisson_03, poisson_1)
    assert method == "poisson_pair"
    assert ratio == pytest.approx(0.18122649, rel=1e-7)

    ratio, method = select_ratio_bound(poisson_1, poisson_1)
    assert method == "general"
    assert ratio == pytest.approx(1.0)

    near_single = build_near_single_factorial(0.01)
    ratio, method = select_ratio_bound(near_single, poisson_1, "near_single")
    assert ratio == pytest.approx(0.05436560, rel=1e-7)
    assert select_ratio_bound(near_single, poisson_1)[1] == "general"

    with pytest.raises(ConfigurationError):
        select_ratio_bound(near_single, poisson_1, "poisson_pair")
    with pytest.raises(ConfigurationError):
        select_ratio_bound(poisson_03, poisson_1, "near_single")
    with pytest.raises(ConfigurationError):
        select_ratio_bound(poisson_03, poisson_1, "heuristic")


def test_evaluate_analytic_report():
    signal, decoy = build_poissonian(0.3), build_poissonian(1.0)
    report = evaluate_analytic(signal, decoy, passive_yield_vector(0.1, 30))
    assert report.mode == MODES.ANALYTIC
    assert report.z is None
    assert report.is_secure
    assert report.Y_s == pytest.approx(1 - math.exp(-0.03), rel=1e-10)
    assert report.Y_d == pytest.approx(1 - math.exp(-0.1), rel=1e-10)
    assert report.normal_op_margin == pytest.approx(0.604, abs=1e-3)
    assert report.general_argmax == 2
    assert report.basic_verdict == VERDICTS.INSECURE
    assert list(report.to_dict().keys()) == SECURITY_KEYS


def test_rate_matching_is_caught_analytically():
    signal, decoy = build_poissonian(0.3), build_poissonian(1.0)
    spec = AdversarySpec(kind="rate_matching_pns", eta_mimic=0.01)
    yields = adversary_yield_vector(spec, 30, signal=signal)
    report = evaluate_analytic(signal, decoy, yields)
    assert report.condition_lhs == pytest.approx(0.0029955, rel=1e-4)
    assert report.condition_rhs == pytest.approx(0.003884, rel=1e-3)
    assert report.verdict == VERDICTS.INSECURE


def test_evaluate_empirical_uses_pessimistic_sides():
    signal, decoy = build_poissonian(0.3), build_poissonian(1.0)
    signal_estimate = YieldEstimate(y_hat=0.03, std_err=0.001, sent=90000, detected=2700)
    decoy_estimate = YieldEstimate(y_hat=0.1, std_err=0.003, sent=10000, detected=1000)
    report = evaluate_empirical(signal_estimate, decoy_estimate, signal, decoy, z=3.0)
    assert report.mode == MODES.EMPIRICAL
    assert report.z == 3.0
    assert report.Y_s == pytest.approx(0.027)
    assert report.Y_d == pytest.approx(0.109)


def test_evaluate_empirical_clamps_to_unit_interval():
    signal, decoy = build_poissonian(0.3), build_poissonian(1.0)
    signal_estimate = YieldEstimate(y_hat=0.001, std_err=0.01, sent=100, detected=0)
    decoy_estimate = YieldEstimate(y_hat=0.99, std_err=0.01, sent=100, detected=99)
    report = evaluate_empirical(signal_estimate, decoy_estimate, signal, decoy, z=3.0)
    assert report.Y_s == 0.0
    assert report.Y_d == 1.0
    assert report.verdict == VERDICTS.INSECURE


def test_optimal_signal_mu():
    mu, margin = optimal_signal_mu(1.0, 0.1)
    assert 0 < mu < 1.0
    assert margin > 0
    for other in [0.1, 0.3, 0.9]:
        signal, decoy = build_poissonian(other), build_poissonian(1.0)
        report = evaluate_analytic(signal, decoy, passive_yield_vector(0.1, 30))
        assert report.margin <= margin + 1e-12
    with pytest.raises(DomainError):
        optimal_signal_mu(1.0, 0.0)


def test_pair_bound_soundness_over_random_vectors():
    rng = make_stream(20240101)
    for _ in range(10000):
        mu_prime = rng.uniform(0.01, 2.0)
        mu = rng.uniform(0.0, mu_prime)
        if mu <= 0 or mu >= mu_prime:
            continue
        signal, decoy = build_poissonian(mu), build_poissonian(mu_prime)
        y = rng.random(31)
        y[0] = 0.0
        yields = YieldVector(y)
        decoy_multi = multi_photon_yield(decoy, yields)
        A = multi_photon_yield(signal, yields) / decoy_multi
        assert A <= poisson_pair_ratio_bound(mu, mu_prime) + 1e-12


def test_pair_bound_saturates_on_two_photon_vector():
    rng = make_stream(7)
    for _ in range(100):
        mu_prime = rng.uniform(0.01, 2.0)
        mu = rng.uniform(0.001, 0.999) * mu_prime
        signal, decoy = build_poissonian(mu), build_poissonian(mu_prime)
        yields = adversary_yield_vector(AdversarySpec(kind="optimal_pns", beta=0.7), 30)
        A = multi_photon_yield(signal, yields) / multi_photon_yield(decoy, yields)
        assert A == pytest.approx(poisson_pair_ratio_bound(mu, mu_prime), rel=1e-12)


def test_ratio_monotone_in_photon_number():
    rng = make_stream(99)
    ns = np.arange(1, 31)
    for _ in range(1000):
        mu_prime = rng.uniform(0.02, 2.0)
        mu = rng.uniform(0.01, mu_prime - 0.005)
        ratios = np.array(
            [poisson_pmf(int(n), mu) / poisson_pmf(int(n), mu_prime) for n in ns]
        )
        assert np.all(np.diff(ratios) < 0)


@settings(max_examples=200)
@given(
    y=st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=30, max_size=30),
    mu_prime=st.floats(min_value=0.05, max_value=2.0),
)
def test_multi_photon_consistency_holds_for_any_vector(y, mu_prime):
    decoy = build_poissonian(mu_prime)
    yields = YieldVector([0.0] + y)
    Y_d = expected_yield(decoy, yields)
    assert check_multi_photon_consistency(decoy, yields, Y_d)


@settings(max_examples=200)
@given(
    y=st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=30, max_size=30),
    mu=st.floats(min_value=0.01, max_value=1.0),
    gap=st.floats(min_value=0.01, max_value=1.0),
)
def test_signal_multi_photon_yield_never_exceeds_its_bound(y, mu, gap):
    signal, decoy = build_poissonian(mu), build_poissonian(mu + gap)
    yields = YieldVector([0.0] + y)
    ratio = poisson_pair_ratio_bound(mu, mu + gap)
    Y_d = expected_yield(decoy, yields)
    assert multi_photon_yield(signal, yields) <= ratio * Y_d + 1e-12


def test_two_photon_only_attack_yields():
    signal = build_poissonian(0.3)
    yields = adversary_yield_vector(AdversarySpec(kind="optimal_pns", beta=1.0), 30)
    assert multi_photon_yield(signal, yields) == pytest.approx(0.03333682, rel=1e-6)
    assert normalized_multi_yield(signal, yields) == pytest.approx(0.90254556, rel=1e-6)
    naive_decoy_yield = expected_yield(build_poissonian(1.0), naive_pns())
    assert bound_multi_yield(naive_decoy_yield, 0.18122649) == pytest.approx(
        0.04788915, rel=1e-6
    )


@pytest.mark.parametrize(
    "signal, decoy",
    [
        (build_near_single_factorial(0.05), build_poissonian(0.8)),
        (build_spike(1e-3, 10), build_poissonian(1.0)),
        (build_spike(0.2, 3), build_explicit([0.1, 0.5, 0.2, 0.2])),
        (build_explicit([0.0, 0.9, 0.08, 0.02]), build_poissonian(0.5)),
        (build_explicit([0.0, 0.95, 0.04, 0.01]), build_near_single_factorial(0.2)),
    ],
    ids=[
        "factorial-poisson",
        "spike-poisson",
        "spike-explicit",
        "explicit-poisson",
        "explicit-factorial",
    ],
)
def test_general_ratio_bound_soundness_over_random_vectors(signal, decoy):
    rng = make_stream(31)
    ratio = general_ratio_bound(signal, decoy)
    for _ in range(1000):
        y = rng.random(31)
        y[0] = 0.0
        yields = YieldVector(y)
        assert multi_photon_yield(signal, yields) <= ratio * multi_photon_yield(
            decoy, yields
        ) * (1 + 1e-12)


@pytest.mark.parametrize("mu_prime", [0.5, 1.0, 2.0])
def test_general_method_uses_closed_form_for_factorial_tail(mu_prime):
    signal, decoy = build_near_single_factorial(0.01), build_poissonian(mu_prime)
    ratio, method = select_ratio_bound(signal, decoy)
    assert method == "general"
    assert ratio == pytest.approx(general_ratio_bound(signal, decoy), rel=1e-9)


def test_inconsistent_decoy_yields_are_flagged(mocker):
    mocker.patch("src.security.check_multi_photon_consistency", return_value=False)
    warning = mocker.patch("src.security.logger.warning")
    signal, decoy = build_poissonian(0.3), build_poissonian(1.0)
    report = evaluate_analytic(signal, decoy, passive_yield_vector(0.1, 30))
    assert report.is_secure
    warning.assert_called_once()
    assert "Decoy multi-photon yield exceeds" in warning.call_args[0][0]


def test_unclamped_multi_yield_bound_is_recorded():
    signal, decoy = build_spike(1e-3, 10), build_poissonian(1.0)
    report = evaluate_analytic(signal, decoy, passive_yield_vector(0.5, 30))
    assert report.Y_s_multi_upper == pytest.approx(report.general_ratio * report.Y_d)
    assert report.Y_s_multi_upper > 1.0
    assert report.Y_s_multi_upper_effective == 1.0
    assert bound_multi_yield(report.Y_d, report.general_ratio) == 1.0
    assert report.to_dict()["y_s_multi_upper"] == report.Y_s_multi_upper


@given(
    Y_s=st.floats(min_value=0.0, max_value=1.0),
    Y_d=st.floats(min_value=0.0, max_value=1.0),
    ratio=st.floats(min_value=0.0, max_value=1e4),
)
def test_secure_verdict_implies_signal_yield_above_bound(Y_s, Y_d, ratio):
    report = check_decoy_security(Y_s, Y_d, ratio)
    if report.is_secure:
        assert Y_s > bound_multi_yield(Y_d, ratio)
        assert report.margin > 0
    else:
        assert report.margin <= 0
