"""
Yield bounds and security conditions of the decoy-state method.

Eve chooses y_n but cannot tell which source an n-photon pulse came from, so
the multi-photon part of the signal yield is bounded by a coefficient times the
decoy yield. A session is secure only if the signal yield strictly exceeds that
bound; equality is insecure.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from src.channel_adversary import passive_yield_vector
from src.constants.common import MODES, VERDICTS
from src.logger import logger
from src.photon_source import build_poissonian, multi_photon_prob, poisson_pmf
from src.utils.exceptions import (
    ConfigurationError,
    DimensionError,
    DomainError,
    UnboundedRatioError,
    UndefinedQuantityError,
)


@dataclass
class SecurityReport:
    Y_s: float
    Y_d: float
    multi_bound_ratio: float
    Y_s_multi_upper: float
    condition_lhs: float
    condition_rhs: float
    verdict: str
    margin: float
    mode: str = MODES.ANALYTIC
    z: Optional[float] = None
    normal_op_margin: Optional[float] = None
    normalized_multi_upper: Optional[float] = None
    ratio_method: str = "explicit"
    general_ratio: Optional[float] = None
    general_argmax: Optional[int] = None
    near_single_ratio: Optional[float] = None
    basic_verdict: Optional[str] = None
    truncation_deficit: float = 0.0
    inputs_echo: dict = field(default_factory=dict)

    @property
    def is_secure(self):
        return self.verdict == VERDICTS.SECURE

    @property
    def Y_s_multi_upper_effective(self):
        return min(self.Y_s_multi_upper, 1.0)

    @property
    def normalized_multi_upper_effective(self):
        if self.normalized_multi_upper is None:
            return None
        return min(self.normalized_multi_upper, 1.0)

    def to_dict(self):
        return {
            "y_s": self.Y_s,
            "y_d": self.Y_d,
            "ratio_bound": self.multi_bound_ratio,
            "y_s_multi_upper": self.Y_s_multi_upper,
            "condition_lhs": self.condition_lhs,
            "condition_rhs": self.condition_rhs,
            "verdict": self.verdict,
            "normal_op_margin": self.normal_op_margin,
            "mode": self.mode,
            "z": self.z,
            "margin": self.margin,
        }

    def details(self):
        return {
            "ratio_method": self.ratio_method,
            "general_ratio": self.general_ratio,
            "general_argmax": self.general_argmax,
            "near_single_ratio": self.near_single_ratio,
            "y_s_multi_upper_effective": self.Y_s_multi_upper_effective,
            "normalized_multi_upper": self.normalized_multi_upper,
            "normalized_multi_upper_effective": self.normalized_multi_upper_effective,
            "basic_verdict": self.basic_verdict,
            "truncation_deficit": self.truncation_deficit,
        }


def check_dimensions(dist, yields):
    if dist.n_max != yields.n_max:
        logger.critical(
            f"Distribution {dist} has n_max={dist.n_max}, yield vector has n_max={yields.n_max}"
        )
        raise DimensionError(
            f"Length mismatch: {dist.n_max + 1} probabilities against {yields.n_max + 1} yields"
        )


def expected_yield(dist, yields):
    check_dimensions(dist, yields)
    return float(np.dot(dist.probs, yields.y))


def multi_photon_yield(dist, yields):
    check_dimensions(dist, yields)
    return float(np.dot(dist.probs[2:], yields.y[2:]))


def normalized_multi_yield(dist, yields):
    p_multi = multi_photon_prob(dist)
    if p_multi <= 0:
        raise UndefinedQuantityError(
            f"{dist} has no multi-photon mass, normalized multi-photon yield is undefined"
        )
    return multi_photon_yield(dist, yields) / p_multi


def poisson_pair_ratio_bound(mu, mu_prime):
    if not 0 < mu < mu_prime:
        logger.critical(f"Pair bound requested for mu={mu}, mu'={mu_prime}")
        raise DomainError(
            f"The pair bound needs 0 < mu < mu', got mu={mu}, mu'={mu_prime}"
        )
    # P_2(mu) / P_2(mu')
    return math.exp(mu_prime - mu) * (mu / mu_prime) ** 2


def general_ratio_argmax(signal, decoy):
    if signal.n_max != decoy.n_max:
        raise DimensionError("Signal and decoy distributions differ in n_max")
    best_ratio, best_n = 0.0, None
    for n in range(2, signal.n_max + 1):
        p_n, q_n = signal.probs[n], decoy.probs[n]
        if p_n <= 0:
            continue
        if q_n <= 0:
            logger.critical(f"{signal} emits {n} photons but {decoy} never does")
            raise UnboundedRatioError(
                f"Decoy source cannot certify {n}-photon pulses of the signal source"
            )
        ratio = p_n / q_n
        if ratio > best_ratio:
            best_ratio, best_n = float(ratio), n
    return best_ratio, best_n


def general_ratio_bound(signal, decoy):
    return general_ratio_argmax(signal, decoy)[0]


def bound_multi_yield(Y_d, ratio):
    """Bound on the signal multi-photon yield, clamped to 1.

    The unclamped ratio * Y_d is kept in SecurityReport.Y_s_multi_upper.
    """
    unclamped = ratio * Y_d
    if unclamped > 1.0:
        logger.debug(f"Multi-photon yield bound {unclamped:.6g} clamped to 1")
    return min(unclamped, 1.0)


def normalized_bound_coefficient(signal, ratio):
    p_multi = multi_photon_prob(signal)
    if p_multi <= 0:
        raise UndefinedQuantityError(
            f"{signal} has no multi-photon mass, normalized bound is undefined"
        )
    return ratio / p_multi


def bound_normalized_multi_yield(Y_d, signal, mu_prime):
    if not signal.is_poissonian():
        raise DomainError(f"Normalized pair bound needs a Poissonian signal, got {signal}")
    ratio = poisson_pair_ratio_bound(signal.mean_photon_number, mu_prime)
    return normalized_bound_coefficient(signal, ratio) * Y_d


def check_basic_security(y, p_multi):
    return VERDICTS.SECURE if y > p_multi else VERDICTS.INSECURE


def check_decoy_security(Y_s, Y_d, ratio):
    rhs = ratio * Y_d
    return SecurityReport(
        Y_s=Y_s,
        Y_d=Y_d,
        multi_bound_ratio=ratio,
        Y_s_multi_upper=rhs,
        condition_lhs=Y_s,
        condition_rhs=rhs,
        verdict=VERDICTS.SECURE if Y_s > rhs else VERDICTS.INSECURE,
        margin=Y_s - rhs,
    )


def normal_op_margin(mu, mu_prime):
    if mu <= 0 or mu_prime <= 0:
        raise DomainError(
            f"Normal operation margin needs positive means, got mu={mu}, mu'={mu_prime}"
        )
    # (e^mu' / mu') (mu / e^mu)
    return math.exp(mu_prime - mu) * mu / mu_prime


def near_single_ratio(epsilon, mu_prime):
    if not 0 <= epsilon < 1 or mu_prime <= 0:
        raise DomainError(
            f"Near-single coefficient needs 0 <= epsilon < 1 and mu' > 0, got {epsilon}, {mu_prime}"
        )
    return epsilon / poisson_pmf(2, mu_prime)


def near_single_general_ratio(epsilon, mu_prime, n_max=30):
    # factorial-tail source against Poisson(mu'): p_n / P_n(mu') = k e^mu' / mu'^n
    if epsilon == 0:
        return 0.0
    ns = np.arange(2, n_max + 1)
    k = epsilon / math.fsum(1.0 / math.factorial(int(n)) for n in ns)
    n_best = 2 if mu_prime >= 1 else n_max
    return k * math.exp(mu_prime - n_best * math.log(mu_prime))


def check_multi_photon_consistency(decoy, yields, Y_d):
    return multi_photon_yield(decoy, yields) <= Y_d + 1e-15


def pair_means(signal, decoy):
    if signal.is_poissonian() and decoy.is_poissonian():
        return signal.mean_photon_number, decoy.mean_photon_number
    return None


def select_ratio_bound(signal, decoy, method="auto"):
    means = pair_means(signal, decoy)
    if method == "auto":
        if means is not None and 0 < means[0] < means[1]:
            method = "poisson_pair"
        else:
            method = "general"
    if method == "poisson_pair":
        if means is None:
            raise ConfigurationError(
                f"ratio_method 'poisson_pair' needs two Poissonian sources, got {signal} and {decoy}"
            )
        return poisson_pair_ratio_bound(*means), method
    if method == "general":
        if signal.kind == "near_single_factorial" and decoy.is_poissonian():
            ratio = near_single_general_ratio(
                signal.params["epsilon"], decoy.mean_photon_number, signal.n_max
            )
            return ratio, method
        return general_ratio_bound(signal, decoy), method
    if method == "near_single":
        if signal.kind != "near_single_factorial" or not decoy.is_poissonian():
            raise ConfigurationError(
                f"ratio_method 'near_single' needs a near_single_factorial signal and a Poissonian decoy, got {signal} and {decoy}"
            )
        return (
            near_single_ratio(signal.params["epsilon"], decoy.mean_photon_number),
            method,
        )
    raise ConfigurationError(f"Unknown ratio_method: '{method}'")


def evaluate_security(
    Y_s,
    Y_d,
    signal,
    decoy,
    mode=MODES.ANALYTIC,
    z=None,
    ratio_method="auto",
    inputs_echo=None,
):
    ratio, method_used = select_ratio_bound(signal, decoy, ratio_method)
    report = check_decoy_security(Y_s, Y_d, ratio)
    report.mode = mode
    report.z = z
    report.ratio_method = method_used
    report.inputs_echo = inputs_echo or {}
    report.truncation_deficit = max(signal.deficit, decoy.deficit)

    means = pair_means(signal, decoy)
    if means is not None and means[0] > 0 and means[1] > 0:
        report.normal_op_margin = normal_op_margin(*means)

    report.general_ratio, report.general_argmax = general_ratio_argmax(signal, decoy)
    if signal.kind == "near_single_factorial" and decoy.is_poissonian():
        report.near_single_ratio = near_single_ratio(
            signal.params["epsilon"], decoy.mean_photon_number
        )

    p_multi = multi_photon_prob(signal)
    if p_multi > 0:
        report.normalized_multi_upper = normalized_bound_coefficient(signal, ratio) * Y_d
    # no-decoy baseline
    report.basic_verdict = check_basic_security(Y_s, p_multi)

    logger.debug(
        f"{mode} check: Y_s={Y_s:.6g} vs {ratio:.6g} * Y_d={Y_d:.6g} -> {report.verdict}"
    )
    return report


def evaluate_analytic(signal, decoy, yields, ratio_method="auto", inputs_echo=None):
    Y_s, Y_d = expected_yield(signal, yields), expected_yield(decoy, yields)
    if not check_multi_photon_consistency(decoy, yields, Y_d):
        logger.warning(
            f"Decoy multi-photon yield exceeds Y_d={Y_d:.6g} under {yields}, check the yield vector"
        )
    return evaluate_security(
        Y_s,
        Y_d,
        signal,
        decoy,
        mode=MODES.ANALYTIC,
        ratio_method=ratio_method,
        inputs_echo=inputs_echo,
    )


def evaluate_empirical(
    signal_estimate,
    decoy_estimate,
    signal,
    decoy,
    z=3.0,
    ratio_method="auto",
    inputs_echo=None,
):
    # pessimistic side of each estimate
    Y_s = max(0.0, signal_estimate.y_hat - z * signal_estimate.std_err)
    Y_d = min(1.0, decoy_estimate.y_hat + z * decoy_estimate.std_err)
    return evaluate_security(
        Y_s,
        Y_d,
        signal,
        decoy,
        mode=MODES.EMPIRICAL,
        z=z,
        ratio_method=ratio_method,
        inputs_echo=inputs_echo,
    )


def honest_margin(mu, mu_prime, eta, n_max=30):
    honest = passive_yield_vector(eta, n_max)
    signal, decoy = build_poissonian(mu, n_max), build_poissonian(mu_prime, n_max)
    ratio = poisson_pair_ratio_bound(mu, mu_prime)
    return expected_yield(signal, honest) - ratio * expected_yield(decoy, honest)


def optimal_signal_mu(mu_prime, eta, n_max=30):
    """Signal intensity with the largest honest-channel margin for a given decoy."""
    if mu_prime <= 0 or not 0 < eta <= 1:
        raise DomainError(f"Need mu' > 0 and 0 < eta <= 1, got {mu_prime}, {eta}")
    result = minimize_scalar(
        lambda mu: -honest_margin(mu, mu_prime, eta, n_max),
        bounds=(1e-6 * mu_prime, mu_prime * (1 - 1e-9)),
        method="bounded",
        options={"xatol": 1e-9 * mu_prime},
    )
    return float(result.x), float(-result.fun)
