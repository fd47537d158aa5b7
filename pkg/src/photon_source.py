"""
Photon-number distributions of the signal and decoy sources.

A phase-randomized coherent source is a Poissonian mixture of Fock states,
so every source is carried as a truncated probability vector over n = 0..n_max.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from src.constants.common import LOG_SPACE_THRESHOLD, TRUNCATION_TOLERANCE
from src.logger import logger
from src.utils.exceptions import ConfigurationError, DomainError

DEFAULT_N_MAX = 30


@dataclass(frozen=True, eq=False)
class PhotonNumberDistribution:
    probs: np.ndarray
    kind: str
    mean_photon_number: float
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64, copy=True)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def n_max(self):
        return len(self.probs) - 1

    @property
    def deficit(self):
        return max(0.0, 1.0 - math.fsum(self.probs))

    @property
    def label(self):
        params = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind}{{{params}}}"

    @property
    def cdf(self):
        return np.cumsum(self.probs)

    def is_poissonian(self):
        return self.kind == "poisson"

    def __str__(self):
        return self.label


def poisson_pmf(n, mu):
    if n < 0 or mu < 0:
        logger.critical(f"Poisson pmf requested for n={n}, mu={mu}")
        raise DomainError(
            f"Poisson pmf needs non-negative n and mu, got n={n}, mu={mu}"
        )
    if not math.isfinite(mu):
        raise DomainError(f"Poisson pmf needs a finite mean, got mu={mu}")
    if mu == 0:
        return 1.0 if n == 0 else 0.0
    if n <= LOG_SPACE_THRESHOLD:
        return math.exp(-mu) * mu**n / math.factorial(n)
    return math.exp(n * math.log(mu) - mu - gammaln(n + 1))


def check_truncation(probs, description):
    deficit = 1.0 - math.fsum(probs)
    if deficit > TRUNCATION_TOLERANCE:
        logger.critical(
            f"Truncated tail mass {deficit:.3e} of {description} exceeds {TRUNCATION_TOLERANCE}"
        )
        raise ConfigurationError(
            f"n_max={len(probs) - 1} is too small for {description}: truncation deficit {deficit:.3e}"
        )
    return max(deficit, 0.0)


def check_n_max(n_max):
    if n_max < 2:
        raise ConfigurationError(f"n_max must be at least 2, got {n_max}")


def build_poissonian(mu, n_max=DEFAULT_N_MAX):
    check_n_max(n_max)
    if mu < 0:
        raise DomainError(f"Mean photon number must be non-negative, got mu={mu}")
    probs = [poisson_pmf(n, mu) for n in range(n_max + 1)]
    deficit = check_truncation(probs, f"poisson{{mu={mu}}}")
    logger.debug(f"Built poisson{{mu={mu}}} with truncation deficit {deficit:.3e}")
    return PhotonNumberDistribution(
        probs=probs,
        kind="poisson",
        mean_photon_number=float(mu),
        params={"mu": mu},
    )


def mean_of(probs):
    return float(np.dot(np.arange(len(probs)), probs))


def build_near_single_factorial(epsilon, n_max=DEFAULT_N_MAX):
    check_n_max(n_max)
    if not 0 <= epsilon < 1:
        raise ConfigurationError(f"epsilon must lie in [0, 1), got {epsilon}")
    ns = np.arange(2, n_max + 1)
    inverse_factorials = np.exp(-gammaln(ns + 1))
    # k fixes the multi-photon tail to epsilon, k = epsilon / (e - 2) without truncation
    k = epsilon / inverse_factorials.sum()
    probs = np.zeros(n_max + 1)
    probs[1] = 1.0 - epsilon
    probs[2:] = k * inverse_factorials
    check_truncation(probs, f"near_single_factorial{{epsilon={epsilon}}}")
    return PhotonNumberDistribution(
        probs=probs,
        kind="near_single_factorial",
        mean_photon_number=mean_of(probs),
        params={"epsilon": epsilon},
    )


def build_spike(epsilon, spike_n, n_max=DEFAULT_N_MAX):
    check_n_max(n_max)
    if not 2 <= spike_n <= n_max:
        logger.critical(f"Spike position {spike_n} outside [2, {n_max}]")
        raise ConfigurationError(
            f"Spike photon number must lie in [2, {n_max}], got {spike_n}"
        )
    if not 0 <= epsilon <= 1:
        raise ConfigurationError(f"epsilon must lie in [0, 1], got {epsilon}")
    probs = np.zeros(n_max + 1)
    probs[1] = 1.0 - epsilon
    probs[spike_n] += epsilon
    return PhotonNumberDistribution(
        probs=probs,
        kind="spike",
        mean_photon_number=mean_of(probs),
        params={"epsilon": epsilon, "n": spike_n},
    )


def build_explicit(probs, n_max=DEFAULT_N_MAX):
    check_n_max(n_max)
    probs = np.asarray(probs, dtype=np.float64)
    if np.any(probs < 0) or np.any(probs > 1):
        raise ConfigurationError(f"Explicit probabilities must lie in [0, 1]: {probs}")
    if len(probs) > n_max + 1:
        if np.any(probs[n_max + 1 :] > 0):
            raise ConfigurationError(
                f"Explicit distribution has mass beyond n_max={n_max}"
            )
        probs = probs[: n_max + 1]
    padded = np.zeros(n_max + 1)
    padded[: len(probs)] = probs
    total = math.fsum(padded)
    if total > 1.0 + 1e-12:
        raise ConfigurationError(f"Explicit probabilities sum to {total} > 1")
    check_truncation(padded, "explicit distribution")
    return PhotonNumberDistribution(
        probs=padded,
        kind="explicit",
        mean_photon_number=mean_of(padded),
        params={"probs": [float(p) for p in probs]},
    )


def multi_photon_prob(dist):
    return math.fsum(dist.probs[2:])


def inverse_cdf(dist, draws):
    photon_numbers = np.searchsorted(dist.cdf, draws, side="right")
    # draws landing in the truncation deficit count as vacuum
    photon_numbers[photon_numbers > dist.n_max] = 0
    return photon_numbers


def sample_photon_numbers(dist, rng, size):
    return inverse_cdf(dist, rng.random(size))


def sample_photon_number(dist, rng):
    return int(sample_photon_numbers(dist, rng, 1)[0])
