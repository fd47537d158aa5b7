from dotmap import DotMap

CONFIG_DEFAULTS = DotMap(
    {
        "pulses": 1000000,
        # Note: a null seed is replaced by a generated one and echoed in the report
        "seed": None,
        "alpha": 0.1,
        "n_max": 30,
        "batch_size": 100000,
        "signal": {"type": "poisson", "mu": 0.3},
        "decoy": {"type": "poisson", "mu": 1.0},
        "adversary": {"type": "passive", "eta": 0.1},
        "confidence_z": 3.0,
        "abort_tolerance": 0.25,
        # null means mean photon number ratio, i.e. mu'/mu for Poissonian pairs
        "expected_ratio": None,
        "ratio_method": "auto",
        "log_level": "INFO",
    },
    _dynamic=False,
)
