PROBABILITY = {"type": "number", "minimum": 0, "maximum": 1}

NON_NEGATIVE_NUMBER = {"type": "number", "minimum": 0}

ARRAY_OF_PROBABILITIES = {
    "type": "array",
    "items": PROBABILITY,
    "minItems": 1,
}

SOURCE_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "required": ["type", "mu"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "poisson"},
                "mu": NON_NEGATIVE_NUMBER,
            },
        },
        {
            "type": "object",
            "required": ["type", "epsilon"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "near_single_factorial"},
                "epsilon": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
            },
        },
        {
            "type": "object",
            "required": ["type", "epsilon", "n"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "spike"},
                "epsilon": PROBABILITY,
                "n": {"type": "integer", "minimum": 2},
            },
        },
        {
            "type": "object",
            "required": ["type", "probs"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "explicit"},
                "probs": ARRAY_OF_PROBABILITIES,
            },
        },
    ]
}

ADVERSARY_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "required": ["type", "eta"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "passive"},
                "eta": PROBABILITY,
            },
        },
        {
            "type": "object",
            "required": ["type"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "naive_pns"},
            },
        },
        {
            "type": "object",
            "required": ["type", "beta"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "optimal_pns"},
                "beta": PROBABILITY,
            },
        },
        {
            "type": "object",
            "required": ["type"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "rate_matching_pns"},
                # Eve mimics the honest signal yield at this transmittance
                "eta_mimic": PROBABILITY,
                # or an explicit signal-source yield
                "target_yield": PROBABILITY,
            },
            "oneOf": [
                {"required": ["eta_mimic"]},
                {"required": ["target_yield"]},
            ],
        },
        {
            "type": "object",
            "required": ["type", "y"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "explicit"},
                "y": ARRAY_OF_PROBABILITIES,
            },
        },
    ]
}
