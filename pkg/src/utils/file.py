import json
import sys

import numpy as np
import pandas as pd

from src.logger import logger
from src.utils.exceptions import ConfigurationError


def load_json(path, **rest):
    try:
        with open(path, "r") as f:
            loaded = json.load(f, **rest)
    except FileNotFoundError:
        logger.critical(f"Config file not found: '{path}'")
        raise ConfigurationError(f"Given config file does not exist: '{path}'")
    except json.decoder.JSONDecodeError as error:
        logger.critical(f"Error when loading json file at: '{path}'\n{error}")
        raise ConfigurationError(f"Could not parse json file: '{path}'") from None
    return loaded


def to_jsonable(value):
    # numpy scalars and arrays leak out of the numeric modules
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def write_json_report(report, output_path=None):
    text = json.dumps(to_jsonable(report), indent=2)
    if output_path is None:
        sys.stdout.write(text + "\n")
        sys.stdout.flush()
    else:
        with open(output_path, "w") as f:
            f.write(text + "\n")
        logger.info(f"Report written to: '{output_path}'")


def write_csv_rows(rows, columns, output_path=None):
    frame = pd.DataFrame(rows, columns=columns)
    if output_path is None:
        frame.to_csv(sys.stdout, index=False)
        sys.stdout.flush()
    else:
        frame.to_csv(output_path, index=False)
        logger.info(f"Sweep written to: '{output_path}'")
    return frame
