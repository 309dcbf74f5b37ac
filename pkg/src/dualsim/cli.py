"""Command-line interface.

Subcommands: run (replication summaries as CSV), validate (output-accuracy
report), compare (staffing-scenario study), calibrate (fit the service model
to the configured targets), arrivals-check (empirical arrival rates against
the configured profile).

Settings resolve in a fixed order: explicit flags win, then the DUALSIM_SEED
environment variable (seed only), then the configuration file. All files land
in the output directory and every written path is printed; given the same
invocation, config and seed, the files are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import reporting
from .config import Config, ConfigError, default_config_path, load_config
from .experiments import (
    arrival_profile_check,
    calibrate,
    CalibrationTargets,
    multi_scenario_experiment,
    run_replications,
    validation_experiment,
)
from .types import ValidationError

_ENGINE_CHOICES = ("des", "abs", "both")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed_value(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"seed must be >= 0, got {value}")
    return value


def _alpha_value(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not (0.0 < value < 1.0):
        raise argparse.ArgumentTypeError(f"alpha must be strictly between 0 and 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualsim",
        description="Fitting-room staffing simulations: one operation, two engines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, default=None,
                       help="configuration file (default: the shipped one)")
        p.add_argument("--engine", choices=_ENGINE_CHOICES, default="both")
        p.add_argument("--replications", type=_positive_int, default=None,
                       help="override the configured replication count")
        p.add_argument("--seed", type=_seed_value, default=None,
                       help="master seed (beats DUALSIM_SEED and the config)")
        p.add_argument("--alpha", type=_alpha_value, default=None,
                       help="override the configured significance level")
        p.add_argument("--outdir", type=Path, default=Path("dualsim-out"),
                       help="directory for emitted files (default: dualsim-out)")
        p.add_argument("--format", choices=("text", "json"), default="text",
                       help="stdout format; files are always written")

    p = sub.add_parser("run", help="run replications of one scenario")
    common(p)
    p.add_argument("--scenario", default=None,
                   help="scenario id from the config (default: the first)")

    p = sub.add_parser("validate", help="compare engine outputs (and observed data)")
    common(p)
    p.add_argument("--scenario", default=None)
    p.add_argument("--observed", type=Path, default=None,
                   help="observed waiting times: JSON array or one number per line")
    p.add_argument("--pool-customer-waits", action="store_true",
                   help="test observed data against pooled per-customer waits")

    p = sub.add_parser("compare", help="paired comparison of all configured scenarios")
    common(p)

    p = sub.add_parser("calibrate", help="fit service means to the configured targets")
    common(p)

    p = sub.add_parser("arrivals-check", help="empirical vs configured arrival rates")
    common(p)

    return parser


def _resolve_seed(args, config: Config) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DUALSIM_SEED")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError([f"DUALSIM_SEED must be an integer, got {env!r}"], "environment")
        if value < 0:
            raise ConfigError([f"DUALSIM_SEED must be >= 0, got {value}"], "environment")
        return value
    return config.experiment.master_seed


def _engines(args) -> list[str]:
    return ["des", "abs"] if args.engine == "both" else [args.engine]


def _pick_scenario(args, config: Config):
    wanted = getattr(args, "scenario", None)
    if wanted is None:
        return config.scenarios[0]
    return config.scenario(wanted)


def _read_observed(path: Path) -> list[float]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError([f"cannot read observed data: {exc}"], str(path)) from None
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            data = [line for line in text.split() if line]
        values = [float(v) for v in data]
    except (ValueError, TypeError) as exc:
        raise ConfigError(
            [f"observed data must be a JSON array of numbers or one number per line ({exc})"],
            str(path),
        ) from None
    if not values:
        raise ConfigError(["observed data is empty"], str(path))
    return values


def _emit(args, path: Path) -> None:
    # keep stdout parseable when --format json: written files go to stderr
    stream = sys.stderr if args.format == "json" else sys.stdout
    print(path.as_posix(), file=stream)


# -- subcommands --------------------------------------------------------------

def _cmd_run(args, config: Config) -> dict:
    scenario = _pick_scenario(args, config)
    reps = args.replications or config.experiment.replications
    seed = _resolve_seed(args, config)
    payload = {"schema_version": 1, "report": "run", "scenario_id": scenario.id,
               "replications": reps, "master_seed": seed, "engines": {}, "files": []}
    texts = []
    for engine in _engines(args):
        rep_set = run_replications(engine, scenario, config.service, config.profile, reps, seed)
        header, rows = reporting.replication_csv_rows(rep_set)
        path = args.outdir / f"run_{engine}_scenario{scenario.id}.csv"
        reporting.write_csv(path, header, rows)
        _emit(args, path)
        payload["files"].append(path.as_posix())
        n = len(rep_set.summaries)
        payload["engines"][engine] = {
            "mean_wait": sum(rep_set.mean_waits) / n,
            "mean_time_in_system": sum(rep_set.mean_times_in_system) / n,
        }
        texts.append(reporting.run_text(engine, scenario.id, rep_set))
    payload["text"] = texts
    return payload


def _cmd_validate(args, config: Config) -> dict:
    scenario = _pick_scenario(args, config)
    reps = args.replications or config.experiment.replications
    seed = _resolve_seed(args, config)
    alpha = args.alpha or config.experiment.alpha
    observed = _read_observed(args.observed) if args.observed else None
    settings = config.experiment.validation

    des_set = run_replications("des", scenario, config.service, config.profile, reps, seed)
    abs_set = run_replications("abs", scenario, config.service, config.profile, reps, seed)
    report = validation_experiment(
        des_set,
        abs_set,
        observed=observed,
        alpha=alpha,
        variance_similarity_threshold=settings.variance_similarity_threshold,
        histogram_bin_width=settings.histogram_bin_width,
        pool_customer_waits=args.pool_customer_waits,
    )
    payload = report.to_json_dict()
    files = []
    path = reporting.write_json(args.outdir / f"validation_scenario{scenario.id}.json", payload)
    _emit(args, path)
    files.append(path.as_posix())
    for name, hist in (
        ("des", report.des_histogram),
        ("abs", report.abs_histogram),
        ("observed", report.observed_histogram),
    ):
        if hist is None:
            continue
        header, rows = reporting.histogram_csv_rows(hist)
        path = reporting.write_csv(args.outdir / f"wait_histogram_{name}.csv", header, rows)
        _emit(args, path)
        files.append(path.as_posix())
    payload["files"] = files
    payload["text"] = [reporting.validation_text(report)]
    return payload


def _cmd_compare(args, config: Config) -> dict:
    reps = args.replications or config.experiment.replications
    seed = _resolve_seed(args, config)
    alpha = args.alpha or config.experiment.alpha
    report = multi_scenario_experiment(
        args.engine, list(config.scenarios), config.service, config.profile,
        reps, seed, alpha=alpha,
    )
    payload = report.to_json_dict()
    path = reporting.write_json(args.outdir / "comparison.json", payload)
    _emit(args, path)
    payload["files"] = [path.as_posix()]
    payload["text"] = [reporting.comparison_text(report)]
    return payload


def _cmd_calibrate(args, config: Config) -> dict:
    settings = config.experiment.calibration
    if settings is None:
        raise ConfigError(
            ["experiment.calibration: required by the calibrate command"], config.source
        )
    result = calibrate(
        CalibrationTargets(
            mean_wait=settings.mean_wait,
            mean_time_in_system=settings.mean_time_in_system,
        ),
        config.service,
        config.scenarios[0],
        config.profile,
        search_space=settings.search_space,
        budget=settings.budget,
        replications=settings.replications,
        master_seed=settings.master_seed,
    )
    payload = result.to_json_dict()
    fragment = {"service_model": payload["service_model"]}
    path = reporting.write_json(args.outdir / "calibrated_service_model.json", fragment)
    _emit(args, path)
    payload["files"] = [path.as_posix()]
    payload["text"] = [reporting.calibration_text(result)]
    return payload


def _cmd_arrivals_check(args, config: Config) -> dict:
    reps = args.replications or config.experiment.replications
    seed = _resolve_seed(args, config)
    payload = arrival_profile_check(config.profile, reps, seed)
    path = reporting.write_json(args.outdir / "arrivals_check.json", payload)
    _emit(args, path)
    payload["files"] = [path.as_posix()]
    payload["text"] = [reporting.arrivals_check_text(payload)]
    return payload


_COMMANDS = {
    "run": _cmd_run,
    "validate": _cmd_validate,
    "compare": _cmd_compare,
    "calibrate": _cmd_calibrate,
    "arrivals-check": _cmd_arrivals_check,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if args.config else load_config(default_config_path())
        args.outdir.mkdir(parents=True, exist_ok=True)
        payload = _COMMANDS[args.command](args, config)
    except (ConfigError, ValidationError) as exc:
        if args.format == "json":
            print(json.dumps({"error": str(exc)}), file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        if args.format == "json":
            print(json.dumps({"error": str(exc)}), file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1

    texts = payload.pop("text", [])
    if args.format == "json":
        sys.stdout.write(reporting.json_document(payload))
    else:
        for block in texts:
            print()
            print(block)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
