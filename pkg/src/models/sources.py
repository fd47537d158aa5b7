from src.models.interfaces.SourceModel import SourceModel
from src.photon_source import (
    build_explicit,
    build_near_single_factorial,
    build_poissonian,
    build_spike,
)


class Poisson(SourceModel):
    """Phase-randomized weak coherent source"""

    type_name = "poisson"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.mu = self.options["mu"]

    def build(self, n_max):
        return build_poissonian(self.mu, n_max)


class NearSingleFactorial(SourceModel):
    """Near-single-photon source with a factorial multi-photon tail"""

    type_name = "near_single_factorial"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.epsilon = self.options["epsilon"]

    def build(self, n_max):
        return build_near_single_factorial(self.epsilon, n_max)


class Spike(SourceModel):
    type_name = "spike"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.epsilon = self.options["epsilon"]
        self.spike_n = self.options["n"]

    def build(self, n_max):
        return build_spike(self.epsilon, self.spike_n, n_max)


class Explicit(SourceModel):
    type_name = "explicit"

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.probs = self.options["probs"]

    def build(self, n_max):
        return build_explicit(self.probs, n_max)
