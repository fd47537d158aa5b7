import json
import os
from copy import deepcopy

from freezegun import freeze_time

from main import entry_point_for_args
from src.entry import entry_point

FROZEN_TIMESTAMP = "1970-01-01"


def make_args(command, config_path=None, output=None, **overrides):
    args = {
        "command": command,
        "config_path": config_path,
        "output": output,
        "pulses": None,
        "seed": None,
        "alpha": None,
        "n_max": None,
        "verbose": False,
        "quiet": True,
    }
    args.update(overrides)
    return args


def run_entry_point(command, config_path=None, output=None, **overrides):
    args = make_args(command, config_path, output, **overrides)
    with freeze_time(FROZEN_TIMESTAMP):
        return entry_point(command, args)


def run_for_exit_code(command, config_path=None, output=None, **overrides):
    args = make_args(command, config_path, output, **overrides)
    with freeze_time(FROZEN_TIMESTAMP):
        return entry_point_for_args(args)


def read_report(path):
    with open(path) as f:
        return json.load(f)


def write_modified(modify_content, boilerplate, sample_json_path):
    if boilerplate is None:
        return

    content = deepcopy(boilerplate)

    if modify_content is not None:
        returned_value = modify_content(content)
        if returned_value is not None:
            content = returned_value

    with open(sample_json_path, "w") as f:
        json.dump(content, f)


def remove_file(path):
    if os.path.exists(path):
        os.remove(path)


def generate_write_config_and_run(run_sample, sample_path, config_boilerplate=None):
    if config_boilerplate is None:
        raise Exception("No boilerplate found. Provide a config boilerplate to write json.")

    def write_config_and_run(mocker, modify_config=None, **run_kwargs):
        sample_config_path = sample_path.joinpath("config.json")
        write_modified(modify_config, config_boilerplate, sample_config_path)

        exception = "No Error"
        try:
            run_sample(mocker, sample_config_path, **run_kwargs)
        except Exception as e:
            exception = e

        remove_file(sample_config_path)

        return exception

    return write_config_and_run
