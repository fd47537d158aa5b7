"""

 Decoy-state QKD: command entry points

 analyze, simulate and sweep each resolve the configuration, run the
 corresponding pipeline and return a report with the process exit code.

"""
from datetime import datetime, timezone
from time import time

from rich.table import Table

from src.constants.common import EXIT_CODES, SWEEP_CSV_HEADER, SWEEP_PARAMS
from src.logger import console, logger
from src.models.manager import MODEL_MANAGER
from src.photon_source import multi_photon_prob
from src.protocol import (
    SessionConfig,
    abort_arithmetic,
    estimate_yields,
    expected_yield_ratio,
    run_session,
    session_yield_vector,
)
from src.channel_adversary import decoy_posterior
from src.security import evaluate_analytic, evaluate_empirical, optimal_signal_mu
from src.utils.exceptions import ConfigurationError, UndefinedQuantityError
from src.utils.file import write_csv_rows, write_json_report
from src.utils.parsing import open_config_with_defaults, sweep_values
from src.utils.streams import generate_seed

POST_ABORT_NOTE = "post-abort, informational"

# sweep parameter -> (config key, option names it may replace)
SWEEP_TARGETS = {
    "eta": ("adversary", ["eta", "eta_mimic"]),
    "mu": ("signal", ["mu"]),
    "mu_prime": ("decoy", ["mu"]),
    "epsilon": ("signal", ["epsilon"]),
}


def entry_point(command, args):
    # flags win over the config, and apply before it is loaded
    if args.get("verbose"):
        logger.set_level("DEBUG")
    elif args.get("quiet"):
        logger.set_level("WARNING")
    tuning_config = load_tuning_config(args)
    if not (args.get("verbose") or args.get("quiet")):
        logger.set_level(tuning_config.log_level)

    if command == "analyze":
        report = cmd_analyze(tuning_config)
        write_json_report(report.document, args.get("output"))
    elif command == "simulate":
        report = cmd_simulate(tuning_config)
        write_json_report(report.document, args.get("output"))
    elif command == "sweep":
        report = cmd_sweep(tuning_config, sweep_spec_from_args(args))
        write_csv_rows(report.rows, SWEEP_CSV_HEADER, args.get("output"))
    else:
        raise ConfigurationError(f"Unknown command: '{command}'")
    return report.exit_code


def load_tuning_config(args):
    overrides = {
        "pulses": args.get("pulses"),
        "seed": args.get("seed"),
        "alpha": args.get("alpha"),
        "n_max": args.get("n_max"),
    }
    return open_config_with_defaults(args.get("config_path"), overrides)


def sweep_spec_from_args(args):
    return {
        "param": args.get("param"),
        "start": args.get("start"),
        "stop": args.get("stop"),
        "step": args.get("step"),
        "num": args.get("num"),
        "log_scale": bool(args.get("log_scale")),
    }


class RunReport:
    def __init__(self, document=None, rows=None, exit_code=EXIT_CODES.SECURE):
        self.document = document
        self.rows = rows
        self.exit_code = exit_code


def build_models(tuning_config):
    signal_model = MODEL_MANAGER.create_source(tuning_config.signal.toDict())
    decoy_model = MODEL_MANAGER.create_source(tuning_config.decoy.toDict())
    adversary_model = MODEL_MANAGER.create_adversary(tuning_config.adversary.toDict())
    return signal_model, decoy_model, adversary_model


def build_session_config(tuning_config, models=None, seed=None):
    signal_model, decoy_model, adversary_model = models or build_models(tuning_config)
    n_max = tuning_config.n_max
    return SessionConfig(
        pulses=tuning_config.pulses,
        alpha=tuning_config.alpha,
        signal_source=signal_model.build(n_max),
        decoy_source=decoy_model.build(n_max),
        adversary=adversary_model.spec(),
        seed=tuning_config.seed if seed is None else seed,
        confidence_z=tuning_config.confidence_z,
        abort_tolerance=tuning_config.abort_tolerance,
        batch_size=tuning_config.batch_size,
        expected_ratio=tuning_config.expected_ratio,
    )


def config_echo(tuning_config, **resolved):
    echo = tuning_config.toDict()
    echo.update(resolved)
    return echo


def timing_block(started_at, start_time, pulses=None, aborted=False):
    duration = time() - start_time
    timing = {
        "started_at": started_at,
        "duration_s": duration,
        "pulses_per_second": None,
        "note": POST_ABORT_NOTE if aborted else None,
    }
    if pulses is not None and duration > 0:
        timing["pulses_per_second"] = pulses / duration
    return timing


def exit_code_for(security_report, aborted=False):
    if aborted or not security_report.is_secure:
        return EXIT_CODES.INSECURE_OR_ABORTED
    return EXIT_CODES.SECURE


def cmd_analyze(tuning_config):
    started_at, start_time = datetime.now(timezone.utc).isoformat(), time()
    session_config = build_session_config(tuning_config, seed=0)
    yields = session_yield_vector(session_config)

    security_report = evaluate_analytic(
        session_config.signal_source,
        session_config.decoy_source,
        yields,
        ratio_method=tuning_config.ratio_method,
        inputs_echo={"yield_vector": yields.y.tolist()},
    )
    print_config_summary(tuning_config, session_config, yields, "analyze")
    print_security_summary(security_report)

    document = {
        "config": config_echo(tuning_config),
        "tally": None,
        "yields": {
            "signal": None,
            "decoy": None,
            "adversary": yields.y.tolist(),
            "abort_test": None,
        },
        "aborted": False,
        "security": security_report.to_dict(),
        "timing": timing_block(started_at, start_time),
    }
    return RunReport(document=document, exit_code=exit_code_for(security_report))


def cmd_simulate(tuning_config):
    started_at, start_time = datetime.now(timezone.utc).isoformat(), time()
    seed = tuning_config.seed
    if seed is None:
        seed = generate_seed()
        logger.info(f"No seed configured, generated seed {seed}")

    session_config = build_session_config(tuning_config, seed=seed)
    yields = session_yield_vector(session_config)
    print_config_summary(tuning_config, session_config, yields, "simulate")

    tally = run_session(session_config, yields)
    signal_estimate, decoy_estimate = estimate_yields(tally)

    expected_ratio = session_config.expected_ratio
    if expected_ratio is None:
        expected_ratio = expected_yield_ratio(
            session_config.signal_source, session_config.decoy_source
        )
    abort_test = abort_arithmetic(
        signal_estimate,
        decoy_estimate,
        expected_ratio,
        session_config.abort_tolerance,
        session_config.confidence_z,
    )
    aborted = abort_test.pop("aborted")
    abort_test["note"] = POST_ABORT_NOTE if aborted else None
    if aborted:
        logger.warning(
            f"Decoy yield {decoy_estimate.y_hat:.6g} is too large against signal yield {signal_estimate.y_hat:.6g}: session aborted"
        )

    security_report = evaluate_empirical(
        signal_estimate,
        decoy_estimate,
        session_config.signal_source,
        session_config.decoy_source,
        z=session_config.confidence_z,
        ratio_method=tuning_config.ratio_method,
        inputs_echo={"yield_vector": yields.y.tolist()},
    )
    print_security_summary(security_report, aborted=aborted)

    document = {
        "config": config_echo(tuning_config, seed=seed),
        "tally": tally.to_dict(),
        "yields": {
            "signal": signal_estimate.to_dict(),
            "decoy": decoy_estimate.to_dict(),
            "adversary": yields.y.tolist(),
            "abort_test": abort_test,
        },
        "aborted": aborted,
        "security": security_report.to_dict(),
        "timing": timing_block(
            started_at, start_time, pulses=tally.pulses, aborted=aborted
        ),
    }
    return RunReport(
        document=document, exit_code=exit_code_for(security_report, aborted)
    )


def swept_models(tuning_config, param, value):
    signal_model, decoy_model, adversary_model = build_models(tuning_config)
    models = {"signal": signal_model, "decoy": decoy_model, "adversary": adversary_model}
    key, option_names = SWEEP_TARGETS[param]
    model = models[key]
    for name in option_names:
        if name in model.options:
            models[key] = model.with_param(name, float(value))
            break
    else:
        raise ConfigurationError(
            f"Sweep parameter '{param}' does not apply to {key} type '{model.type_name}'"
        )
    return models["signal"], models["decoy"], models["adversary"]


def cmd_sweep(tuning_config, sweep_spec):
    param = sweep_spec["param"]
    if param not in SWEEP_PARAMS:
        logger.critical(f"Unknown sweep parameter '{param}', choose from {SWEEP_PARAMS}")
        raise ConfigurationError(f"Unknown sweep parameter: '{param}'")
    values = sweep_values(
        sweep_spec["start"],
        sweep_spec["stop"],
        step=sweep_spec.get("step"),
        num=sweep_spec.get("num"),
        log_scale=sweep_spec.get("log_scale", False),
    )
    logger.info(f"Sweeping '{param}' over {len(values)} point(s)")

    rows = []
    for value in values:
        models = swept_models(tuning_config, param, value)
        session_config = build_session_config(tuning_config, models=models, seed=0)
        yields = session_yield_vector(session_config)
        security_report = evaluate_analytic(
            session_config.signal_source,
            session_config.decoy_source,
            yields,
            ratio_method=tuning_config.ratio_method,
        )
        rows.append(
            [
                param,
                float(value),
                security_report.Y_s,
                security_report.Y_d,
                security_report.multi_bound_ratio,
                security_report.condition_lhs,
                security_report.condition_rhs,
                security_report.margin,
                security_report.verdict,
            ]
        )
    # a sweep reports verdicts per row, the run itself succeeded
    return RunReport(rows=rows, exit_code=EXIT_CODES.SECURE)


def decoy_posteriors(session_config, photon_numbers=(1, 2, 3)):
    """Chance that a pulse with n photons was a decoy, as Eve sees it"""
    posteriors = {}
    for n in photon_numbers:
        try:
            posteriors[n] = decoy_posterior(
                n,
                session_config.alpha,
                session_config.signal_source,
                session_config.decoy_source,
            )
        except UndefinedQuantityError:
            posteriors[n] = None
    return posteriors


def honest_channel_optimum(session_config):
    signal, decoy = session_config.signal_source, session_config.decoy_source
    adversary = session_config.adversary
    if adversary.kind != "passive" or adversary.eta == 0:
        return None
    if not (signal.is_poissonian() and decoy.is_poissonian()) or decoy.mean_photon_number <= 0:
        return None
    return optimal_signal_mu(
        decoy.mean_photon_number, adversary.eta, session_config.n_max
    )


def print_config_summary(tuning_config, session_config, yields, command):
    logger.info("")
    table = Table(title="Current Configurations", show_header=False, show_lines=False)
    table.add_column("Key", style="cyan", no_wrap=True)
    table.add_column("Value", style="magenta")
    table.add_row("Command", command)
    table.add_row("Signal Source", f"{session_config.signal_source}")
    table.add_row("Decoy Source", f"{session_config.decoy_source}")
    table.add_row("Adversary", f"{yields}")
    table.add_row(
        "Signal Multi-photon Probability",
        f"{multi_photon_prob(session_config.signal_source):.6g}",
    )
    if command == "simulate":
        table.add_row("Pulses", f"{session_config.pulses}")
        table.add_row("Decoy Probability (alpha)", f"{session_config.alpha}")
        table.add_row("Seed", f"{session_config.seed}")
    for n, posterior in decoy_posteriors(session_config).items():
        value = "undefined" if posterior is None else f"{posterior:.6g}"
        table.add_row(f"Decoy Posterior (n={n})", value)
    optimum = honest_channel_optimum(session_config)
    if optimum is not None:
        table.add_row(
            "Best Signal mu (honest channel)",
            f"{optimum[0]:.6g} (margin {optimum[1]:.6g})",
        )
    table.add_row("n_max", f"{session_config.n_max}")
    table.add_row("Ratio Method", f"{tuning_config.ratio_method}")
    console.print(table, justify="center")


def print_security_summary(security_report, aborted=False):
    title = "Security Check"
    if aborted:
        title = f"{title} ({POST_ABORT_NOTE})"
    table = Table(title=title, show_header=False, show_lines=False)
    table.add_column("Key", style="cyan", no_wrap=True)
    table.add_column("Value", style="magenta")
    table.add_row("Mode", security_report.mode)
    table.add_row("Y_s", f"{security_report.Y_s:.6g}")
    table.add_row("Y_d", f"{security_report.Y_d:.6g}")
    table.add_row(
        f"Ratio Bound ({security_report.ratio_method})",
        f"{security_report.multi_bound_ratio:.6g}",
    )
    for key, value in security_report.details().items():
        if key == "ratio_method" or value is None:
            continue
        table.add_row(key, f"{value:.6g}" if isinstance(value, float) else f"{value}")
    if security_report.normal_op_margin is not None:
        table.add_row("Normal Operation Margin", f"{security_report.normal_op_margin:.6g}")
    table.add_row("Margin", f"{security_report.margin:.6g}")
    verdict_style = "green" if security_report.is_secure else "red"
    table.add_row("Verdict", f"[{verdict_style}]{security_report.verdict}[/{verdict_style}]")
    if aborted:
        table.add_row("Aborted", "[red]yes[/red]")
    console.print(table, justify="center")
