"""Fitting-room staffing simulations: one operation, two engines.

An event-calendar engine and an agent-statechart engine simulate the same
fitting-room day (entry counting, room dwell with optional help, return
counting) on common random numbers, so their outputs can be compared
statistically and staffing scenarios can be compared pairwise.
"""

from .arrivals import (
    CustomerDraws,
    PresetServices,
    StreamServices,
    build_arrival_profile,
    draw_customers,
    sample_arrivals,
)
from .abs_engine import run_abs, simulate_abs
from .config import (
    Config,
    ConfigError,
    default_config_path,
    load_config,
    load_default_config,
)
from .des_engine import run_des, simulate_des
from .experiments import (
    CalibrationTargets,
    arrival_profile_check,
    calibrate,
    multi_scenario_experiment,
    run_replications,
    validation_experiment,
)
from .rng import RngStream, StreamBundle, derive_stream, derive_streams
from .stats import (
    bonferroni_level,
    classify_ci,
    descriptive,
    histogram,
    mann_whitney,
    mean_ci,
    paired_t_ci,
    student_t_quantile,
)
from .types import (
    ArrivalProfile,
    CustomerRecord,
    RunOutput,
    Scenario,
    ServiceModel,
    StateMachineViolation,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "ArrivalProfile",
    "CalibrationTargets",
    "Config",
    "ConfigError",
    "CustomerDraws",
    "CustomerRecord",
    "PresetServices",
    "RngStream",
    "RunOutput",
    "Scenario",
    "ServiceModel",
    "StateMachineViolation",
    "StreamBundle",
    "StreamServices",
    "ValidationError",
    "arrival_profile_check",
    "bonferroni_level",
    "build_arrival_profile",
    "calibrate",
    "classify_ci",
    "default_config_path",
    "descriptive",
    "draw_customers",
    "derive_stream",
    "derive_streams",
    "histogram",
    "load_config",
    "load_default_config",
    "mann_whitney",
    "mean_ci",
    "multi_scenario_experiment",
    "paired_t_ci",
    "run_abs",
    "run_des",
    "run_replications",
    "sample_arrivals",
    "simulate_abs",
    "simulate_des",
    "student_t_quantile",
    "validation_experiment",
]
