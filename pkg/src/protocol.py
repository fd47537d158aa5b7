"""
Monte Carlo decoy-state BB84 sessions.

Each pulse is replaced by a decoy pulse with probability alpha, gets a photon
number from its source and a uniformly random BB84 state, and is registered by
Bob according to the session's single yield vector. Sessions run in batches,
batch i drawing from the stream derived from (seed, i), and the per-batch
tallies merge associatively.
"""
import math
from dataclasses import dataclass
from functools import reduce
from typing import Optional

import numpy as np

from src.channel_adversary import adversary_yield_vector, realize_detections
from src.constants.common import DECOY, SIGNAL, SOURCE_NAMES
from src.logger import logger
from src.photon_source import inverse_cdf
from src.utils.exceptions import (
    ConfigurationError,
    EstimateUnavailableError,
    MergeError,
    UndefinedQuantityError,
)
from src.utils.streams import make_stream


@dataclass
class SessionConfig:
    pulses: int
    alpha: float
    signal_source: object
    decoy_source: object
    adversary: object
    seed: int
    confidence_z: float = 3.0
    abort_tolerance: float = 0.25
    batch_size: int = 100000
    expected_ratio: Optional[float] = None

    def __post_init__(self):
        if self.pulses < 1:
            logger.critical(f"Session needs at least one pulse, got {self.pulses}")
            raise ConfigurationError(f"pulses must be at least 1, got {self.pulses}")
        if not 0 <= self.alpha <= 1:
            raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch_size must be positive, got {self.batch_size}")
        if self.signal_source.n_max != self.decoy_source.n_max:
            raise ConfigurationError(
                "Signal and decoy distributions must share the same n_max"
            )

    @property
    def n_max(self):
        return self.signal_source.n_max

    @property
    def source_labels(self):
        return (self.signal_source.label, self.decoy_source.label)

    def batch_sizes(self):
        full, rest = divmod(self.pulses, self.batch_size)
        return [self.batch_size] * full + ([rest] if rest else [])


@dataclass(eq=False)
class Tally:
    n_max: int
    source_labels: tuple
    per_n_sent: np.ndarray = None
    per_n_detected: np.ndarray = None
    sifted_signal: int = 0
    # ones among the sifted key bits, the key itself is not post-processed
    sifted_ones: int = 0

    def __post_init__(self):
        shape = (len(SOURCE_NAMES), self.n_max + 1)
        if self.per_n_sent is None:
            self.per_n_sent = np.zeros(shape, dtype=np.int64)
        if self.per_n_detected is None:
            self.per_n_detected = np.zeros(shape, dtype=np.int64)

    @classmethod
    def empty(cls, n_max, source_labels):
        return cls(n_max=n_max, source_labels=tuple(source_labels))

    @property
    def sent_signal(self):
        return int(self.per_n_sent[SIGNAL].sum())

    @property
    def sent_decoy(self):
        return int(self.per_n_sent[DECOY].sum())

    @property
    def detected_signal(self):
        return int(self.per_n_detected[SIGNAL].sum())

    @property
    def detected_decoy(self):
        return int(self.per_n_detected[DECOY].sum())

    @property
    def pulses(self):
        return self.sent_signal + self.sent_decoy

    def to_dict(self):
        return {
            "sent_signal": self.sent_signal,
            "sent_decoy": self.sent_decoy,
            "detected_signal": self.detected_signal,
            "detected_decoy": self.detected_decoy,
            "sifted_signal": self.sifted_signal,
            "sifted_ones": self.sifted_ones,
            "per_n_sent": {
                name: self.per_n_sent[index].tolist()
                for index, name in enumerate(SOURCE_NAMES)
            },
            "per_n_detected": {
                name: self.per_n_detected[index].tolist()
                for index, name in enumerate(SOURCE_NAMES)
            },
        }


@dataclass
class YieldEstimate:
    y_hat: float
    std_err: float
    sent: int
    detected: int

    @classmethod
    def from_counts(cls, sent, detected, source="source"):
        if sent <= 0:
            logger.error(f"No {source} pulses were sent, its yield cannot be estimated")
            raise EstimateUnavailableError(f"No {source} pulses sent: yield estimate unavailable")
        y_hat = detected / sent
        std_err = math.sqrt(y_hat * (1.0 - y_hat) / sent)
        return cls(y_hat=y_hat, std_err=std_err, sent=int(sent), detected=int(detected))

    def to_dict(self):
        return {
            "y_hat": self.y_hat,
            "std_err": self.std_err,
            "sent": self.sent,
            "detected": self.detected,
        }


def session_yield_vector(config):
    return adversary_yield_vector(
        config.adversary, config.n_max, signal=config.signal_source
    )


def run_batch(config, yields, batch_index, batch_pulses):
    rng = make_stream(config.seed, batch_index)
    n_max = config.n_max

    is_decoy = rng.random(batch_pulses) < config.alpha
    source_draws = rng.random(batch_pulses)
    photon_numbers = np.where(
        is_decoy,
        inverse_cdf(config.decoy_source, source_draws),
        inverse_cdf(config.signal_source, source_draws),
    )
    # decoy pulses get a random BB84 state too, they are dropped at sifting
    alice_bits = rng.integers(0, 2, batch_pulses)
    alice_bases = rng.integers(0, 2, batch_pulses)
    detected = realize_detections(yields, photon_numbers, rng)
    bob_bases = rng.integers(0, 2, batch_pulses)

    is_signal = ~is_decoy
    sifted = detected & is_signal & (alice_bases == bob_bases)

    tally = Tally.empty(n_max, config.source_labels)
    for index, mask in [(SIGNAL, is_signal), (DECOY, is_decoy)]:
        tally.per_n_sent[index] = np.bincount(
            photon_numbers[mask], minlength=n_max + 1
        )
        tally.per_n_detected[index] = np.bincount(
            photon_numbers[mask & detected], minlength=n_max + 1
        )
    tally.sifted_signal = int(sifted.sum())
    tally.sifted_ones = int(alice_bits[sifted].sum())
    return tally


def run_session(config, yields=None):
    if yields is None:
        yields = session_yield_vector(config)
    if yields.n_max != config.n_max:
        raise ConfigurationError(
            f"Yield vector n_max={yields.n_max} does not match sources n_max={config.n_max}"
        )
    batch_sizes = config.batch_sizes()
    logger.info(
        f"Running {config.pulses} pulses in {len(batch_sizes)} batch(es), seed {config.seed}"
    )
    batches = []
    for batch_index, batch_pulses in enumerate(batch_sizes):
        batches.append(run_batch(config, yields, batch_index, batch_pulses))
        logger.debug(f"Batch {batch_index}: {batch_pulses} pulses")
    return merge_all(batches)


def merge_tallies(a, b):
    if a.n_max != b.n_max or tuple(a.source_labels) != tuple(b.source_labels):
        logger.critical(
            f"Cannot merge tallies of {a.source_labels}/n_max={a.n_max} and {b.source_labels}/n_max={b.n_max}"
        )
        raise MergeError("Tallies come from different source configurations")
    return Tally(
        n_max=a.n_max,
        source_labels=tuple(a.source_labels),
        per_n_sent=a.per_n_sent + b.per_n_sent,
        per_n_detected=a.per_n_detected + b.per_n_detected,
        sifted_signal=a.sifted_signal + b.sifted_signal,
        sifted_ones=a.sifted_ones + b.sifted_ones,
    )


def merge_all(tallies):
    return reduce(merge_tallies, tallies)


def estimate_yields(tally):
    signal = YieldEstimate.from_counts(
        tally.sent_signal, tally.detected_signal, source="signal"
    )
    decoy = YieldEstimate.from_counts(
        tally.sent_decoy, tally.detected_decoy, source="decoy"
    )
    return signal, decoy


def expected_yield_ratio(signal_source, decoy_source):
    # small-loss limit of Y_d / Y_s, exactly mu'/mu for Poissonian pairs
    if signal_source.mean_photon_number <= 0:
        raise UndefinedQuantityError(
            f"Signal source {signal_source} emits no photons, expected yield ratio is undefined"
        )
    return decoy_source.mean_photon_number / signal_source.mean_photon_number


def abort_arithmetic(signal, decoy, expected_ratio, tolerance, z):
    decoy_lower = decoy.y_hat - z * decoy.std_err
    ceiling = expected_ratio * (1.0 + tolerance) * (signal.y_hat + z * signal.std_err)
    return {
        "expected_ratio": expected_ratio,
        "tolerance": tolerance,
        "z": z,
        "decoy_lower": decoy_lower,
        "ceiling": ceiling,
        "aborted": bool(decoy_lower > ceiling),
    }


def abort_decision(signal, decoy, expected_ratio, tolerance=0.25, z=3.0):
    if expected_ratio <= 0:
        raise ConfigurationError(f"expected_ratio must be positive, got {expected_ratio}")
    return abort_arithmetic(signal, decoy, expected_ratio, tolerance, z)["aborted"]
