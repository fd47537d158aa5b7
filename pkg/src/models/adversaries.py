from src.models.interfaces.AdversaryModel import AdversaryModel


class Passive(AdversaryModel):
    """Honest lossy channel with transmittance eta and a threshold detector"""

    type_name = "passive"

    def spec(self):
        return self.make_spec("passive", eta=self.options["eta"])


class NaivePNS(AdversaryModel):
    """Blocks single photons and forwards every multi-photon pulse"""

    type_name = "naive_pns"

    def spec(self):
        return self.make_spec("naive_pns")


class OptimalPNS(AdversaryModel):
    """Forwards only two-photon pulses, with probability beta"""

    type_name = "optimal_pns"

    def spec(self):
        return self.make_spec("optimal_pns", beta=self.options["beta"])


class RateMatchingPNS(AdversaryModel):
    """Scales multi-photon yields to reproduce an expected signal yield"""

    type_name = "rate_matching_pns"

    def spec(self):
        return self.make_spec(
            "rate_matching_pns",
            eta_mimic=self.options.get("eta_mimic"),
            target_yield=self.options.get("target_yield"),
        )


class ExplicitYields(AdversaryModel):
    type_name = "explicit"

    def spec(self):
        return self.make_spec("explicit", explicit_y=list(self.options["y"]))
