from src.constants.common import RATIO_METHODS
from src.schemas.constants import ADVERSARY_SCHEMA, PROBABILITY, SOURCE_SCHEMA

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "decoy-state-qkd/src/schemas/config-schema.json",
    "title": "Config Schema",
    "description": "Decoy-state session and analysis configuration",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "pulses": {"type": "integer", "minimum": 1},
        "seed": {
            "oneOf": [
                {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
                {"type": "null"},
            ]
        },
        "alpha": PROBABILITY,
        "n_max": {"type": "integer", "minimum": 2, "maximum": 170},
        "batch_size": {"type": "integer", "minimum": 1},
        "signal": SOURCE_SCHEMA,
        "decoy": SOURCE_SCHEMA,
        "adversary": ADVERSARY_SCHEMA,
        "confidence_z": {"type": "number", "exclusiveMinimum": 0},
        "abort_tolerance": {"type": "number", "minimum": 0},
        "expected_ratio": {
            "oneOf": [
                {"type": "number", "exclusiveMinimum": 0},
                {"type": "null"},
            ]
        },
        "ratio_method": {"type": "string", "enum": RATIO_METHODS},
        "log_level": {
            "type": "string",
            "enum": ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        },
    },
}
