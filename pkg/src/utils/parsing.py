import math
from copy import deepcopy

import numpy as np
from deepmerge import Merger
from dotmap import DotMap

from src.defaults import CONFIG_DEFAULTS
from src.logger import logger
from src.utils.exceptions import ConfigurationError
from src.utils.file import load_json
from src.utils.validations import validate_config_json

OVERRIDE_MERGER = Merger(
    # pass in a list of tuples,with the
    # strategies you are looking to apply
    # to each type.
    [
        # (list, ["prepend"]),
        (dict, ["merge"])
    ],
    # next, choose the fallback strategies,
    # applied to all other types:
    ["override"],
    # finally, choose the strategies in
    # the case where the types conflict:
    ["override"],
)

# Typed sub-objects are replaced as a whole, merging would mix parameters of different types
WHOLESALE_KEYS = ["signal", "decoy", "adversary"]


def merge_with_defaults(user_config):
    user_config = deepcopy(user_config)
    replacements = {
        key: user_config.pop(key) for key in WHOLESALE_KEYS if key in user_config
    }
    merged = OVERRIDE_MERGER.merge(deepcopy(CONFIG_DEFAULTS.toDict()), user_config)
    merged.update(replacements)
    return merged


def open_config_with_defaults(config_path=None, overrides=None):
    user_config = load_json(config_path) if config_path is not None else {}
    if not isinstance(user_config, dict):
        raise ConfigurationError(f"Provided config JSON is Invalid: '{config_path}'")
    merged = merge_with_defaults(user_config)

    # precedence: flag > file > default
    for key, value in (overrides or {}).items():
        if value is not None:
            logger.debug(f"Overriding '{key}' from command line: {value}")
            merged[key] = value

    validate_config_json(merged, config_path or "<defaults>")
    # https://github.com/drgrib/dotmap/issues/74
    return DotMap(merged, _dynamic=False)


def sweep_values(start, stop, step=None, num=None, log_scale=False):
    if log_scale:
        if num is None or num < 2:
            raise ConfigurationError("Log-spaced sweeps need --num of at least 2")
        if start <= 0 or stop <= 0:
            raise ConfigurationError(
                f"Log-spaced sweeps need positive bounds, got [{start}, {stop}]"
            )
        return np.geomspace(start, stop, num)
    if num is not None:
        return np.linspace(start, stop, num)
    if step is None or step <= 0:
        raise ConfigurationError("Linear sweeps need a positive --step or a --num")
    if stop < start:
        raise ConfigurationError(f"Invalid sweep range: start {start} > stop {stop}")
    # the last point never passes stop, 1e-9 keeps exact divisions
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.linspace(start, min(start + (count - 1) * step, stop), count)
