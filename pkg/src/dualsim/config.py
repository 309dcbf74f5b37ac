"""Configuration loading and validation.

One JSON document drives everything: the arrival profile, the service model,
the staffing scenarios (reference scenario first), and the experiment
settings. Validation collects every problem it can find and reports them
together instead of stopping at the first; unknown keys are rejected so typos
do not silently fall back to defaults. ``notes`` arrays of free-form strings
are allowed at the top level and inside sections, standing in for comments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .arrivals import build_arrival_profile
from .types import (
    RANDOM_PICK,
    STRICT_FIFO,
    ArrivalProfile,
    Scenario,
    ServiceModel,
)

SCHEMA_VERSION = 1

_HOURS = 8
_CALIBRATION_PARAM_NAMES = ("job1_mean", "job2_mean", "job3_mean", "dwell_mean")


class ConfigError(ValueError):
    """Every problem found in one configuration document, together."""

    def __init__(self, errors: list[str], source: str = "<config>"):
        self.errors = list(errors)
        self.source = source
        listing = "\n".join(f"  - {e}" for e in self.errors)
        super().__init__(
            f"{source}: {len(self.errors)} configuration problem(s)\n{listing}"
        )


@dataclass(frozen=True)
class CalibrationSettings:
    """How the calibrate command fits the service model."""

    mean_wait: float
    mean_time_in_system: float
    budget: int = 60
    replications: int = 30
    master_seed: int = 42
    search_space: dict | None = None


@dataclass(frozen=True)
class ValidationSettings:
    variance_similarity_threshold: float = 0.20
    histogram_bin_width: float = 1.0


@dataclass(frozen=True)
class ExperimentSettings:
    replications: int
    master_seed: int
    alpha: float
    calibration: CalibrationSettings | None
    validation: ValidationSettings


@dataclass(frozen=True)
class Config:
    profile: ArrivalProfile
    service: ServiceModel
    scenarios: tuple[Scenario, ...]
    experiment: ExperimentSettings
    source: str

    def scenario(self, scenario_id: str) -> Scenario:
        for sc in self.scenarios:
            if sc.id == scenario_id:
                return sc
        known = ", ".join(sc.id for sc in self.scenarios)
        raise ConfigError(
            [f"unknown scenario id {scenario_id!r} (configured: {known})"], self.source
        )


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


class _Checker:
    """Accumulates error strings while picking values out of nested dicts."""

    def __init__(self) -> None:
        self.errors: list[str] = []

    def fail(self, message: str) -> None:
        self.errors.append(message)

    def section(self, data: dict, key: str, where: str) -> dict | None:
        value = data.get(key)
        if value is None:
            self.fail(f"{where}: missing required section {key!r}")
            return None
        if not isinstance(value, dict):
            self.fail(f"{where}.{key}: expected an object, got {type(value).__name__}")
            return None
        return value

    def reject_unknown(self, data: dict, allowed: set[str], where: str) -> None:
        unknown = sorted(set(data) - allowed - {"notes"})
        if unknown:
            self.fail(f"{where}: unknown key(s) {', '.join(unknown)}")
        notes = data.get("notes")
        if notes is not None and not (
            isinstance(notes, list) and all(isinstance(n, str) for n in notes)
        ):
            self.fail(f"{where}.notes: expected a list of strings")

    def number(self, data: dict, key: str, where: str, *, default=None,
               minimum=None, maximum=None, exclusive_minimum=None, required=True):
        if key not in data:
            if required:
                self.fail(f"{where}.{key}: missing required value")
            return default
        value = data[key]
        if not _is_number(value):
            self.fail(f"{where}.{key}: expected a number, got {value!r}")
            return default
        if exclusive_minimum is not None and value <= exclusive_minimum:
            self.fail(f"{where}.{key}: must be > {exclusive_minimum} (got {value})")
            return default
        if minimum is not None and value < minimum:
            self.fail(f"{where}.{key}: must be >= {minimum} (got {value})")
            return default
        if maximum is not None and value > maximum:
            self.fail(f"{where}.{key}: must be <= {maximum} (got {value})")
            return default
        return float(value)

    def integer(self, data: dict, key: str, where: str, *, default=None,
                minimum=None, required=True):
        if key not in data:
            if required:
                self.fail(f"{where}.{key}: missing required value")
            return default
        value = data[key]
        if not _is_int(value):
            self.fail(f"{where}.{key}: expected an integer, got {value!r}")
            return default
        if minimum is not None and value < minimum:
            self.fail(f"{where}.{key}: must be >= {minimum} (got {value})")
            return default
        return value


def _parse_profile(check: _Checker, section: dict) -> ArrivalProfile | None:
    check.reject_unknown(section, {"hourly_rates"}, "arrival_profile")
    rates = section.get("hourly_rates")
    if rates is None:
        check.fail("arrival_profile.hourly_rates: missing required value")
        return None
    if not isinstance(rates, list) or len(rates) != _HOURS:
        check.fail(
            f"arrival_profile.hourly_rates: expected a list of {_HOURS} rates, "
            f"got {rates!r}"
        )
        return None
    bad = [r for r in rates if not _is_number(r) or r < 0]
    if bad:
        check.fail(
            f"arrival_profile.hourly_rates: rates must be numbers >= 0 (got {bad})"
        )
        return None
    return build_arrival_profile([float(r) for r in rates])


def _parse_service(check: _Checker, section: dict) -> ServiceModel | None:
    where = "service_model"
    check.reject_unknown(
        section,
        {"job1_mean", "job2_mean", "job3_mean", "dwell_mean", "help_probability", "rooms"},
        where,
    )
    j1 = check.number(section, "job1_mean", where, exclusive_minimum=0.0)
    j2 = check.number(section, "job2_mean", where, exclusive_minimum=0.0)
    j3 = check.number(section, "job3_mean", where, exclusive_minimum=0.0)
    dwell = check.number(section, "dwell_mean", where, exclusive_minimum=0.0)
    help_p = check.number(
        section, "help_probability", where, default=0.10,
        minimum=0.0, maximum=1.0, required=False,
    )
    rooms = check.integer(section, "rooms", where, default=8, minimum=1, required=False)
    if None in (j1, j2, j3, dwell, help_p, rooms):
        return None
    return ServiceModel(
        job1_mean=j1, job2_mean=j2, job3_mean=j3, dwell_mean=dwell,
        help_probability=help_p, rooms=rooms,
    )


def _parse_scenarios(check: _Checker, raw) -> tuple[Scenario, ...] | None:
    if not isinstance(raw, list) or not raw:
        check.fail("scenarios: expected a non-empty list of scenario objects")
        return None
    scenarios: list[Scenario] = []
    seen: set[str] = set()
    for index, entry in enumerate(raw):
        where = f"scenarios[{index}]"
        if not isinstance(entry, dict):
            check.fail(f"{where}: expected an object, got {type(entry).__name__}")
            continue
        check.reject_unknown(entry, {"id", "assignment", "abs_queue_discipline"}, where)
        raw_id = entry.get("id")
        if isinstance(raw_id, str) and raw_id:
            scenario_id = raw_id
        elif _is_int(raw_id):
            scenario_id = str(raw_id)
        else:
            check.fail(f"{where}.id: expected a non-empty string or integer")
            continue
        if scenario_id in seen:
            check.fail(f"{where}.id: duplicate scenario id {scenario_id!r}")
            continue
        seen.add(scenario_id)
        where = f"scenarios[{scenario_id}]"

        assignment_raw = entry.get("assignment")
        if not isinstance(assignment_raw, dict):
            check.fail(f"{where}.assignment: expected an object mapping jobs to staff")
            continue
        assignment: dict[int, str] = {}
        ok = True
        for key, staff in assignment_raw.items():
            if str(key) not in ("1", "2", "3"):
                check.fail(f"{where}.assignment: unknown job {key!r} (jobs are 1, 2, 3)")
                ok = False
                continue
            if not isinstance(staff, str) or not staff:
                check.fail(f"{where}.assignment[{key}]: staff id must be a non-empty string")
                ok = False
                continue
            assignment[int(str(key))] = staff
        for job in (1, 2, 3):
            if job not in assignment:
                check.fail(f"{where}.assignment: job {job} has no staff assigned")
                ok = False
        discipline = entry.get("abs_queue_discipline", RANDOM_PICK)
        if discipline not in (STRICT_FIFO, RANDOM_PICK):
            check.fail(
                f"{where}.abs_queue_discipline: expected {STRICT_FIFO!r} or "
                f"{RANDOM_PICK!r}, got {discipline!r}"
            )
            ok = False
        if not ok:
            continue
        scenarios.append(
            Scenario(id=scenario_id, assignment=assignment, abs_queue_discipline=discipline)
        )
    if check.errors:
        return None
    return tuple(scenarios)


def _parse_calibration(check: _Checker, section: dict) -> CalibrationSettings | None:
    where = "experiment.calibration"
    check.reject_unknown(
        section,
        {"targets", "budget", "replications", "master_seed", "search_space"},
        where,
    )
    targets = check.section(section, "targets", where)
    mean_wait = mean_tis = None
    if targets is not None:
        check.reject_unknown(targets, {"mean_wait", "mean_time_in_system"}, f"{where}.targets")
        mean_wait = check.number(targets, "mean_wait", f"{where}.targets", exclusive_minimum=0.0)
        mean_tis = check.number(
            targets, "mean_time_in_system", f"{where}.targets", exclusive_minimum=0.0
        )
    budget = check.integer(section, "budget", where, default=60, minimum=1, required=False)
    replications = check.integer(
        section, "replications", where, default=30, minimum=1, required=False
    )
    master_seed = check.integer(
        section, "master_seed", where, default=42, minimum=0, required=False
    )
    search_space = None
    if "search_space" in section:
        raw = section["search_space"]
        if not isinstance(raw, dict) or not raw:
            check.fail(f"{where}.search_space: expected a non-empty object")
        else:
            search_space = {}
            for name, bounds in raw.items():
                if name not in _CALIBRATION_PARAM_NAMES:
                    check.fail(
                        f"{where}.search_space: unknown parameter {name!r} "
                        f"(searchable: {', '.join(_CALIBRATION_PARAM_NAMES)})"
                    )
                    continue
                if bounds is None:
                    search_space[name] = None
                elif (
                    isinstance(bounds, list) and len(bounds) == 2
                    and all(_is_number(b) for b in bounds) and 0 < bounds[0] <= bounds[1]
                ):
                    search_space[name] = (float(bounds[0]), float(bounds[1]))
                else:
                    check.fail(
                        f"{where}.search_space.{name}: expected null or [low, high] "
                        f"with 0 < low <= high"
                    )
    if mean_wait is None or mean_tis is None or None in (budget, replications, master_seed):
        return None
    return CalibrationSettings(
        mean_wait=mean_wait,
        mean_time_in_system=mean_tis,
        budget=budget,
        replications=replications,
        master_seed=master_seed,
        search_space=search_space,
    )


def _parse_experiment(check: _Checker, section: dict) -> ExperimentSettings | None:
    where = "experiment"
    check.reject_unknown(
        section,
        {"replications", "master_seed", "alpha", "calibration", "validation"},
        where,
    )
    replications = check.integer(section, "replications", where, default=100, minimum=1, required=False)
    master_seed = check.integer(section, "master_seed", where, minimum=0)
    alpha = check.number(section, "alpha", where, default=0.05, required=False)
    if alpha is not None and not (0.0 < alpha < 1.0):
        check.fail(f"{where}.alpha: must be strictly between 0 and 1 (got {alpha})")
        alpha = None

    calibration = None
    if "calibration" in section:
        sub = check.section(section, "calibration", where)
        if sub is not None:
            calibration = _parse_calibration(check, sub)

    validation = ValidationSettings()
    if "validation" in section:
        sub = check.section(section, "validation", where)
        if sub is not None:
            check.reject_unknown(
                sub, {"variance_similarity_threshold", "histogram_bin_width"},
                f"{where}.validation",
            )
            threshold = check.number(
                sub, "variance_similarity_threshold", f"{where}.validation",
                default=0.20, exclusive_minimum=0.0, required=False,
            )
            bin_width = check.number(
                sub, "histogram_bin_width", f"{where}.validation",
                default=1.0, exclusive_minimum=0.0, required=False,
            )
            if threshold is not None and bin_width is not None:
                validation = ValidationSettings(
                    variance_similarity_threshold=threshold,
                    histogram_bin_width=bin_width,
                )
    if None in (replications, master_seed, alpha):
        return None
    return ExperimentSettings(
        replications=replications,
        master_seed=master_seed,
        alpha=alpha,
        calibration=calibration,
        validation=validation,
    )


def parse_config(data, source: str = "<config>") -> Config:
    """Validate a parsed JSON document and build the runtime objects."""
    check = _Checker()
    if not isinstance(data, dict):
        raise ConfigError(["top level: expected a JSON object"], source)

    check.reject_unknown(
        data,
        {"schema_version", "arrival_profile", "service_model", "scenarios", "experiment"},
        "top level",
    )
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        check.fail(
            f"schema_version: expected {SCHEMA_VERSION}, got {version!r}"
        )

    profile = service = scenarios = experiment = None
    section = check.section(data, "arrival_profile", "top level")
    if section is not None:
        profile = _parse_profile(check, section)
    section = check.section(data, "service_model", "top level")
    if section is not None:
        service = _parse_service(check, section)
    if "scenarios" in data:
        scenarios = _parse_scenarios(check, data["scenarios"])
    else:
        check.fail("top level: missing required section 'scenarios'")
    section = check.section(data, "experiment", "top level")
    if section is not None:
        experiment = _parse_experiment(check, section)

    if check.errors:
        raise ConfigError(check.errors, source)
    assert profile is not None and service is not None
    assert scenarios is not None and experiment is not None
    return Config(
        profile=profile,
        service=service,
        scenarios=scenarios,
        experiment=experiment,
        source=source,
    )


def load_config(path: str | Path) -> Config:
    """Read and validate a configuration file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError([f"cannot read file: {exc}"], str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"invalid JSON: {exc}"], str(path)) from None
    return parse_config(data, source=str(path))


def default_config_path() -> Path:
    """Path of the configuration shipped inside the package."""
    return Path(__file__).resolve().parent / "data" / "default_config.json"


def load_default_config() -> Config:
    return load_config(default_config_path())
