"""
Per-photon-number yields for honest channels and photon-number-splitting attacks.

Eve's whole observable effect is the map n -> y_n. One YieldVector is shared by
both sources of a session, so pulses of equal photon number see equal yields
whichever source emitted them.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.logger import logger
from src.photon_source import multi_photon_prob
from src.utils.exceptions import (
    ConfigurationError,
    InfeasibleAdversaryError,
    UndefinedQuantityError,
)


@dataclass(frozen=True, eq=False)
class YieldVector:
    y: np.ndarray
    description: str = "explicit"

    def __post_init__(self):
        y = np.array(self.y, dtype=np.float64, copy=True)
        if y.ndim != 1 or len(y) < 1:
            raise ConfigurationError(f"Yield vector must be one-dimensional: {self.y}")
        if np.any(~np.isfinite(y)) or np.any(y < 0) or np.any(y > 1):
            logger.critical(f"Yield vector out of range: {y}")
            raise ConfigurationError("Yield vector entries must lie in [0, 1]")
        if y[0] != 0:
            # detectors are ideal, empty pulses never click
            raise ConfigurationError(f"Yield of the vacuum must be 0, got {y[0]}")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    @property
    def n_max(self):
        return len(self.y) - 1

    def __getitem__(self, n):
        return self.y[n]

    def __str__(self):
        return self.description


@dataclass
class AdversarySpec:
    kind: str
    eta: Optional[float] = None
    beta: Optional[float] = None
    target_yield: Optional[float] = None
    explicit_y: Optional[list] = None
    # transmittance whose honest signal yield rate matching should reproduce
    eta_mimic: Optional[float] = None

    def __post_init__(self):
        required = {
            "passive": ["eta"],
            "naive_pns": [],
            "optimal_pns": ["beta"],
            "rate_matching_pns": [],
            "explicit": ["explicit_y"],
        }
        if self.kind not in required:
            raise ConfigurationError(f"Unknown adversary kind: '{self.kind}'")
        for name in required[self.kind]:
            if getattr(self, name) is None:
                raise ConfigurationError(
                    f"Adversary '{self.kind}' needs parameter '{name}'"
                )
        if self.kind == "rate_matching_pns" and (
            (self.target_yield is None) == (self.eta_mimic is None)
        ):
            raise ConfigurationError(
                "Adversary 'rate_matching_pns' needs exactly one of 'target_yield' or 'eta_mimic'"
            )
        for name in ["eta", "beta", "target_yield", "eta_mimic"]:
            value = getattr(self, name)
            if value is not None and not 0 <= value <= 1:
                raise ConfigurationError(
                    f"Adversary parameter '{name}' must lie in [0, 1], got {value}"
                )


def passive_yield_vector(eta, n_max):
    if not 0 <= eta <= 1:
        raise ConfigurationError(f"Transmittance must lie in [0, 1], got {eta}")
    ns = np.arange(n_max + 1)
    # threshold detector: at least one of n photons survives
    y = 1.0 - (1.0 - eta) ** ns
    y[0] = 0.0
    return YieldVector(y, description=f"passive{{eta={eta}}}")


def rate_matching_yield_vector(target_yield, signal, n_max):
    p_multi = multi_photon_prob(signal)
    if target_yield > p_multi:
        logger.critical(
            f"Rate matching needs yield {target_yield:.6g} from multi-photon mass {p_multi:.6g}"
        )
        raise InfeasibleAdversaryError(
            f"Rate matching infeasible: target yield {target_yield:.6g} exceeds multi-photon probability {p_multi:.6g} of {signal}"
        )
    # target 0 with no multi-photon mass is a blocked channel
    c = 0.0 if target_yield == 0 else target_yield / p_multi
    y = np.zeros(n_max + 1)
    y[2:] = c
    logger.debug(f"Rate matching multiplier c={c:.6g} for target {target_yield:.6g}")
    return YieldVector(y, description=f"rate_matching_pns{{c={c:.6g}}}")


def adversary_yield_vector(spec, n_max, signal=None):
    if spec.kind == "passive":
        return passive_yield_vector(spec.eta, n_max)
    if spec.kind == "naive_pns":
        # block singles, forward every multi-photon pulse losslessly
        y = np.ones(n_max + 1)
        y[:2] = 0.0
        return YieldVector(y, description="naive_pns")
    if spec.kind == "optimal_pns":
        y = np.zeros(n_max + 1)
        y[2] = spec.beta
        return YieldVector(y, description=f"optimal_pns{{beta={spec.beta}}}")
    if spec.kind == "rate_matching_pns":
        if signal is None:
            raise ConfigurationError("Rate matching needs the signal distribution")
        target_yield = spec.target_yield
        if target_yield is None:
            # deferred import, security imports this module
            from src.security import expected_yield

            honest = passive_yield_vector(spec.eta_mimic, signal.n_max)
            target_yield = expected_yield(signal, honest)
        return rate_matching_yield_vector(target_yield, signal, n_max)
    if spec.kind == "explicit":
        y = np.zeros(n_max + 1)
        given = np.asarray(spec.explicit_y, dtype=np.float64)
        if len(given) > n_max + 1:
            raise ConfigurationError(
                f"Explicit yield vector longer than n_max+1={n_max + 1}"
            )
        y[: len(given)] = given
        return YieldVector(y, description="explicit")
    raise ConfigurationError(f"Unknown adversary kind: '{spec.kind}'")


def realize_detections(yields, photon_numbers, rng):
    draws = rng.random(len(photon_numbers))
    return draws < yields.y[photon_numbers]


def realize_detection(yields, n, rng):
    return bool(realize_detections(yields, np.array([n]), rng)[0])


def decoy_posterior(n, alpha, signal, decoy):
    signal_mass = (1.0 - alpha) * signal.probs[n]
    decoy_mass = alpha * decoy.probs[n]
    total = signal_mass + decoy_mass
    if total == 0:
        raise UndefinedQuantityError(
            f"Neither source emits {n} photons, posterior is undefined"
        )
    return decoy_mass / total
