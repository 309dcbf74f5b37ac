"""Replication running, validation and scenario-comparison experiments.

Replication ``i`` of any engine or scenario draws its randomness from streams
keyed by ``(master_seed, i, purpose)``, so runs with the same master seed are
paired through common random numbers: identical arrivals and customer
variates, and one shared service-duration stream whose draws land on whoever
starts service next. Paired scenario comparisons exploit that directly by
taking per-replication differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .abs_engine import run_abs
from .arrivals import sample_arrivals
from .des_engine import run_des
from .rng import derive_streams
from .stats import (
    ConfidenceInterval,
    DescriptiveStats,
    FrequencyHistogram,
    MannWhitneyResult,
    bonferroni_level,
    classify_ci,
    descriptive,
    histogram,
    mann_whitney,
    mean_ci,
    paired_t_ci,
)
from .types import ArrivalProfile, RunOutput, Scenario, ServiceModel, ValidationError

DES = "des"
ABS = "abs"
ENGINES = (DES, ABS)

WAITING_TIME = "waiting_time"
TIME_IN_SYSTEM = "time_in_system"
MEASURES = (WAITING_TIME, TIME_IN_SYSTEM)

FAIL_TO_REJECT = "fail_to_reject"
REJECT = "reject"
NOT_EVALUABLE = "not_evaluable"

_RUNNERS = {DES: run_des, ABS: run_abs}


@dataclass(frozen=True)
class ReplicationSummary:
    """Day-level outputs of one replication (means over its customers)."""

    replication: int
    n_customers: int
    mean_total_wait: float
    mean_time_in_system: float
    utilisation: dict[str, float]


@dataclass(frozen=True)
class ReplicationSet:
    engine: str
    scenario_id: str
    master_seed: int
    outputs: tuple[RunOutput, ...]
    summaries: tuple[ReplicationSummary, ...]

    @property
    def mean_waits(self) -> list[float]:
        return [s.mean_total_wait for s in self.summaries]

    @property
    def mean_times_in_system(self) -> list[float]:
        return [s.mean_time_in_system for s in self.summaries]

    def pooled_customer_waits(self) -> list[float]:
        waits: list[float] = []
        for output in self.outputs:
            waits.extend(output.total_waits)
        return waits

    def mean_customer_wait_variance(self) -> float | None:
        """Mean over replications of the per-day customer-wait sample variance."""
        variances = [
            descriptive(output.total_waits).variance
            for output in self.outputs
            if len(output.records) >= 2
        ]
        if not variances:
            return None
        return math.fsum(variances) / len(variances)


def _summarize(index: int, output: RunOutput) -> ReplicationSummary:
    n = len(output.records)
    if n == 0:
        # An empty day contributes zero means rather than poisoning averages.
        return ReplicationSummary(index, 0, 0.0, 0.0, dict(output.utilisation))
    return ReplicationSummary(
        replication=index,
        n_customers=n,
        mean_total_wait=math.fsum(output.total_waits) / n,
        mean_time_in_system=math.fsum(output.times_in_system) / n,
        utilisation=dict(output.utilisation),
    )


def run_replications(
    engine: str,
    scenario: Scenario,
    service: ServiceModel,
    profile: ArrivalProfile,
    n: int,
    master_seed: int,
) -> ReplicationSet:
    """Run ``n`` independent replications, ordered by replication index."""
    if engine not in _RUNNERS:
        raise ValidationError(f"unknown engine {engine!r}; choose from {ENGINES}")
    if not (isinstance(n, int) and n >= 1):
        raise ValidationError(f"replication count must be a positive integer (got {n})")
    runner = _RUNNERS[engine]
    outputs = []
    summaries = []
    for i in range(n):
        output = runner(scenario, service, profile, derive_streams(master_seed, i))
        outputs.append(output)
        summaries.append(_summarize(i, output))
    return ReplicationSet(
        engine=engine,
        scenario_id=scenario.id,
        master_seed=master_seed,
        outputs=tuple(outputs),
        summaries=tuple(summaries),
    )


# ---------------------------------------------------------------------------
# validation experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    """Output-accuracy comparison of the two engines against each other and,
    when a sample is provided, against observed waiting times.

    The named hypotheses: Ho_C/Ho_D say the DES/ABS mean-wait distribution
    matches the observed one (Mann-Whitney),
    Ho_E/Ho_F say the DES/ABS waiting-time variability is similar to the
    observed one (relative variance difference within the threshold), and
    Ho_A/Ho_B combine the two per engine. Without observed data they are all
    not evaluable and only the DES-vs-ABS test is reported.
    """

    alpha: float
    replications: int
    master_seed: int
    scenario_id: str
    variance_similarity_threshold: float
    pool_customer_waits: bool
    des_stats: DescriptiveStats
    abs_stats: DescriptiveStats
    observed_stats: DescriptiveStats | None
    des_vs_abs: MannWhitneyResult
    des_vs_observed: MannWhitneyResult | None
    abs_vs_observed: MannWhitneyResult | None
    des_wait_variance: float | None
    abs_wait_variance: float | None
    observed_wait_variance: float | None
    variance_ratio_des_abs: float | None
    des_histogram: FrequencyHistogram
    abs_histogram: FrequencyHistogram
    observed_histogram: FrequencyHistogram | None
    hypotheses: dict[str, str]

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "report": "validation",
            "alpha": self.alpha,
            "replications": self.replications,
            "master_seed": self.master_seed,
            "scenario_id": self.scenario_id,
            "variance_similarity_threshold": self.variance_similarity_threshold,
            "pool_customer_waits": self.pool_customer_waits,
            "descriptive": {
                "des": self.des_stats.to_json_dict(),
                "abs": self.abs_stats.to_json_dict(),
                "observed": self.observed_stats.to_json_dict()
                if self.observed_stats
                else None,
            },
            "tests": {
                "des_vs_abs": self.des_vs_abs.to_json_dict(),
                "des_vs_observed": self.des_vs_observed.to_json_dict()
                if self.des_vs_observed
                else None,
                "abs_vs_observed": self.abs_vs_observed.to_json_dict()
                if self.abs_vs_observed
                else None,
            },
            "variance": {
                "des": self.des_wait_variance,
                "abs": self.abs_wait_variance,
                "observed": self.observed_wait_variance,
                "ratio_des_abs": self.variance_ratio_des_abs,
            },
            "histograms": {
                "des": self.des_histogram.to_json_dict(),
                "abs": self.abs_histogram.to_json_dict(),
                "observed": self.observed_histogram.to_json_dict()
                if self.observed_histogram
                else None,
            },
            "hypotheses": dict(sorted(self.hypotheses.items())),
        }


def _first_run_waits(rep_set: ReplicationSet) -> list[float]:
    return rep_set.outputs[0].total_waits if rep_set.outputs else []


def validation_experiment(
    des_set: ReplicationSet,
    abs_set: ReplicationSet,
    observed: list[float] | None = None,
    alpha: float = 0.05,
    variance_similarity_threshold: float = 0.20,
    histogram_bin_width: float = 1.0,
    pool_customer_waits: bool = False,
) -> ValidationReport:
    """Compare the two engines' waiting-time output, optionally against data.

    Model-vs-model tests always use per-replication mean waits. Model-vs-
    observed tests use the same unit by default; ``pool_customer_waits=True``
    pools individual customer waits across replications instead, which is the
    apples-to-apples unit when the observed sample is customer-level. Variance
    similarity always compares customer-level variances (mean per-day sample
    variance against the observed sample variance).
    """
    if des_set.engine != DES or abs_set.engine != ABS:
        raise ValidationError("validation_experiment expects a DES set and an ABS set")
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1) (got {alpha})")
    if observed is not None and len(observed) == 0:
        raise ValidationError("observed sample, when given, must be non-empty")

    des_vs_abs = mann_whitney(des_set.mean_waits, abs_set.mean_waits)
    des_var = des_set.mean_customer_wait_variance()
    abs_var = abs_set.mean_customer_wait_variance()
    ratio = des_var / abs_var if des_var is not None and abs_var else None

    hypotheses = {k: NOT_EVALUABLE for k in ("Ho_A", "Ho_B", "Ho_C", "Ho_D", "Ho_E", "Ho_F")}
    des_vs_obs = abs_vs_obs = None
    obs_stats = obs_var = obs_hist = None

    if observed is not None:
        obs_values = [float(v) for v in observed]
        obs_stats = descriptive(obs_values)
        obs_var = obs_stats.variance
        obs_hist = histogram(obs_values, histogram_bin_width)
        if pool_customer_waits:
            des_unit = des_set.pooled_customer_waits()
            abs_unit = abs_set.pooled_customer_waits()
        else:
            des_unit = des_set.mean_waits
            abs_unit = abs_set.mean_waits
        des_vs_obs = mann_whitney(des_unit, obs_values)
        abs_vs_obs = mann_whitney(abs_unit, obs_values)
        hypotheses["Ho_C"] = FAIL_TO_REJECT if des_vs_obs.p_value > alpha else REJECT
        hypotheses["Ho_D"] = FAIL_TO_REJECT if abs_vs_obs.p_value > alpha else REJECT
        if obs_var:
            for key, model_var in (("Ho_E", des_var), ("Ho_F", abs_var)):
                if model_var is None:
                    continue
                rel_diff = abs(model_var - obs_var) / obs_var
                hypotheses[key] = (
                    FAIL_TO_REJECT
                    if rel_diff <= variance_similarity_threshold
                    else REJECT
                )
        for combined, parts in (("Ho_A", ("Ho_C", "Ho_E")), ("Ho_B", ("Ho_D", "Ho_F"))):
            verdicts = [hypotheses[p] for p in parts]
            if NOT_EVALUABLE in verdicts:
                hypotheses[combined] = NOT_EVALUABLE
            elif all(v == FAIL_TO_REJECT for v in verdicts):
                hypotheses[combined] = FAIL_TO_REJECT
            else:
                hypotheses[combined] = REJECT

    return ValidationReport(
        alpha=alpha,
        replications=len(des_set.summaries),
        master_seed=des_set.master_seed,
        scenario_id=des_set.scenario_id,
        variance_similarity_threshold=variance_similarity_threshold,
        pool_customer_waits=pool_customer_waits,
        des_stats=descriptive(des_set.pooled_customer_waits()),
        abs_stats=descriptive(abs_set.pooled_customer_waits()),
        observed_stats=obs_stats,
        des_vs_abs=des_vs_abs,
        des_vs_observed=des_vs_obs,
        abs_vs_observed=abs_vs_obs,
        des_wait_variance=des_var,
        abs_wait_variance=abs_var,
        observed_wait_variance=obs_var,
        variance_ratio_des_abs=ratio,
        des_histogram=histogram(_first_run_waits(des_set), histogram_bin_width),
        abs_histogram=histogram(_first_run_waits(abs_set), histogram_bin_width),
        observed_histogram=obs_hist,
        hypotheses=hypotheses,
    )


# ---------------------------------------------------------------------------
# multi-scenario comparison experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioRow:
    """One scenario's summary for one measure, over replication means."""

    scenario_id: str
    measure: str
    mean: float
    standard_deviation: float | None
    ci: ConfidenceInterval

    def to_json_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "measure": self.measure,
            "mean": self.mean,
            "standard_deviation": self.standard_deviation,
            "ci_lower": self.ci.ci_lower,
            "ci_upper": self.ci.ci_upper,
            "ci_level": self.ci.level,
        }


@dataclass(frozen=True)
class PairedComparison:
    """Reference-minus-other paired difference with its Bonferroni-level CI."""

    reference_id: str
    other_id: str
    measure: str
    mean_difference: float
    ci: ConfidenceInterval
    verdict: str

    def to_json_dict(self) -> dict:
        return {
            "reference_id": self.reference_id,
            "other_id": self.other_id,
            "measure": self.measure,
            "mean_difference": self.mean_difference,
            "ci_lower": self.ci.ci_lower,
            "ci_upper": self.ci.ci_upper,
            "ci_level": self.ci.level,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class EngineComparison:
    engine: str
    rows: tuple[ScenarioRow, ...]
    comparisons: tuple[PairedComparison, ...]
    ho_h: str

    def to_json_dict(self) -> dict:
        return {
            "engine": self.engine,
            "scenario_rows": [r.to_json_dict() for r in self.rows],
            "comparisons": [c.to_json_dict() for c in self.comparisons],
            "Ho_H": self.ho_h,
        }


@dataclass(frozen=True)
class ScenarioComparisonReport:
    """Staffing-scenario comparison, one block per engine.

    Ho_G (both engines lead to the same conclusions) holds when the verdict
    patterns agree across engines for every comparison and measure; Ho_H (more
    staff means less waiting) holds per engine when the point estimates of both
    measures are non-increasing along the scenario order.
    """

    alpha: float
    replications: int
    master_seed: int
    scenario_ids: tuple[str, ...]
    comparisons_count: int
    per_comparison_alpha: float
    engines: dict[str, EngineComparison]
    ho_g: str

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "report": "scenario_comparison",
            "alpha": self.alpha,
            "replications": self.replications,
            "master_seed": self.master_seed,
            "scenario_ids": list(self.scenario_ids),
            "comparisons_count": self.comparisons_count,
            "per_comparison_alpha": self.per_comparison_alpha,
            "engines": {
                name: block.to_json_dict()
                for name, block in sorted(self.engines.items())
            },
            "Ho_G": self.ho_g,
        }


def _measure_values(rep_set: ReplicationSet, measure: str) -> list[float]:
    if measure == WAITING_TIME:
        return rep_set.mean_waits
    return rep_set.mean_times_in_system


def _engine_comparison(
    engine: str,
    scenarios: list[Scenario],
    sets: dict[str, ReplicationSet],
    alpha: float,
    per_comparison_alpha: float,
) -> EngineComparison:
    rows = []
    for scenario in scenarios:
        for measure in MEASURES:
            values = _measure_values(sets[scenario.id], measure)
            stats = descriptive(values)
            rows.append(
                ScenarioRow(
                    scenario_id=scenario.id,
                    measure=measure,
                    mean=stats.mean,
                    standard_deviation=stats.standard_deviation,
                    ci=mean_ci(values, level=1.0 - alpha),
                )
            )
    reference = scenarios[0]
    comparisons = []
    for other in scenarios[1:]:
        for measure in MEASURES:
            ref_values = _measure_values(sets[reference.id], measure)
            other_values = _measure_values(sets[other.id], measure)
            diffs = [a - b for a, b in zip(ref_values, other_values)]
            ci = paired_t_ci(diffs, level=1.0 - per_comparison_alpha)
            comparisons.append(
                PairedComparison(
                    reference_id=reference.id,
                    other_id=other.id,
                    measure=measure,
                    mean_difference=ci.mean,
                    ci=ci,
                    verdict=classify_ci(ci.ci_lower, ci.ci_upper),
                )
            )
    ordered_means = {
        measure: [
            descriptive(_measure_values(sets[s.id], measure)).mean for s in scenarios
        ]
        for measure in MEASURES
    }
    monotone = all(
        all(seq[i] >= seq[i + 1] for i in range(len(seq) - 1))
        for seq in ordered_means.values()
    )
    return EngineComparison(
        engine=engine,
        rows=tuple(rows),
        comparisons=tuple(comparisons),
        ho_h=FAIL_TO_REJECT if monotone else REJECT,
    )


def multi_scenario_experiment(
    engine: str,
    scenarios: list[Scenario],
    service: ServiceModel,
    profile: ArrivalProfile,
    replications: int,
    master_seed: int,
    alpha: float = 0.05,
) -> ScenarioComparisonReport:
    """Compare staffing scenarios against the first one, pairwise and paired.

    ``engine`` is ``"des"``, ``"abs"`` or ``"both"``. The per-comparison
    significance level is Bonferroni-corrected: alpha divided by the number of
    comparisons (scenarios minus one); each paired CI is built at the matching
    confidence, and degradation of waiting when removing staff shows up as a
    ``first_greater`` verdict since differences are reference minus other.
    """
    if len(scenarios) < 2:
        raise ValidationError("scenario comparison needs at least two scenarios")
    ids = [s.id for s in scenarios]
    if len(set(ids)) != len(ids):
        raise ValidationError(f"duplicate scenario ids in {ids}")
    engine_names = list(ENGINES) if engine == "both" else [engine]
    for name in engine_names:
        if name not in ENGINES:
            raise ValidationError(f"unknown engine {name!r}")

    comparisons_count = len(scenarios) - 1
    per_comparison_alpha = bonferroni_level(alpha, comparisons_count)

    blocks: dict[str, EngineComparison] = {}
    for name in engine_names:
        sets = {
            scenario.id: run_replications(
                name, scenario, service, profile, replications, master_seed
            )
            for scenario in scenarios
        }
        blocks[name] = _engine_comparison(
            name, scenarios, sets, alpha, per_comparison_alpha
        )

    if len(blocks) == 2:
        des_pattern = [(c.other_id, c.measure, c.verdict) for c in blocks[DES].comparisons]
        abs_pattern = [(c.other_id, c.measure, c.verdict) for c in blocks[ABS].comparisons]
        ho_g = FAIL_TO_REJECT if des_pattern == abs_pattern else REJECT
    else:
        ho_g = NOT_EVALUABLE

    return ScenarioComparisonReport(
        alpha=alpha,
        replications=replications,
        master_seed=master_seed,
        scenario_ids=tuple(ids),
        comparisons_count=comparisons_count,
        per_comparison_alpha=per_comparison_alpha,
        engines=blocks,
        ho_g=ho_g,
    )


# ---------------------------------------------------------------------------
# calibration
# ---------------------------------------------------------------------------

_CALIBRATION_PARAMS = ("dwell_mean", "job1_mean", "job3_mean", "job2_mean")


@dataclass(frozen=True)
class CalibrationTargets:
    mean_wait: float
    mean_time_in_system: float

    def __post_init__(self) -> None:
        if self.mean_wait < 0 or self.mean_time_in_system <= 0:
            raise ValidationError("calibration targets must be non-negative")


@dataclass(frozen=True)
class CalibrationResult:
    model: ServiceModel
    achieved_mean_wait: float
    achieved_time_in_system: float
    relative_errors: dict[str, float]
    objective: float
    evaluations: int

    def to_json_dict(self) -> dict:
        return {
            "service_model": {
                "job1_mean": self.model.job1_mean,
                "job2_mean": self.model.job2_mean,
                "job3_mean": self.model.job3_mean,
                "dwell_mean": self.model.dwell_mean,
                "help_probability": self.model.help_probability,
                "rooms": self.model.rooms,
            },
            "achieved": {
                "mean_wait": self.achieved_mean_wait,
                "mean_time_in_system": self.achieved_time_in_system,
            },
            "relative_errors": dict(sorted(self.relative_errors.items())),
            "objective": self.objective,
            "evaluations": self.evaluations,
        }


def calibrate(
    targets: CalibrationTargets,
    base_service: ServiceModel,
    scenario: Scenario,
    profile: ArrivalProfile,
    search_space: dict[str, tuple[float, float]] | None = None,
    budget: int = 60,
    replications: int = 30,
    master_seed: int = 42,
) -> CalibrationResult:
    """Fit service-time means so the scenario hits the target outputs.

    Coordinate search over the service means, minimising the summed squared
    relative error of mean waiting time and mean time in system, each estimated
    from ``replications`` paired runs of the event-calendar engine (same master
    seed for every candidate, so the objective is smooth in the parameters).
    ``search_space`` names the parameters the search may move, mapped to
    (low, high) bounds or None for the default 0.2x..5x band around the base
    value; parameters not listed stay at their base values. Returns the best
    model found with its residuals; an unreachable target simply shows up as a
    large residual rather than an error.
    """
    if not (isinstance(budget, int) and budget >= 1):
        raise ValidationError(f"budget must allow at least one evaluation (got {budget})")
    if replications < 1:
        raise ValidationError("calibration needs at least one replication")
    if search_space is not None:
        unknown = set(search_space) - set(_CALIBRATION_PARAMS)
        if unknown:
            raise ValidationError(
                f"search_space has unknown parameter(s) {sorted(unknown)}; "
                f"searchable: {_CALIBRATION_PARAMS}"
            )
        if not search_space:
            raise ValidationError("search_space must name at least one parameter")
        params = tuple(name for name in _CALIBRATION_PARAMS if name in search_space)
    else:
        params = _CALIBRATION_PARAMS
    bounds = {}
    for name in params:
        given = search_space.get(name) if search_space is not None else None
        if given is None:
            base = getattr(base_service, name)
            bounds[name] = (base * 0.2, base * 5.0)
        else:
            lo, hi = given
            if not (0 < lo <= hi):
                raise ValidationError(
                    f"search_space bounds for {name} must satisfy 0 < low <= high"
                )
            bounds[name] = (float(lo), float(hi))

    evaluations = 0
    cache: dict[tuple[float, ...], tuple[float, float, float]] = {}

    def evaluate(model: ServiceModel) -> tuple[float, float, float]:
        nonlocal evaluations
        key = (model.job1_mean, model.job2_mean, model.job3_mean, model.dwell_mean)
        if key in cache:
            return cache[key]
        evaluations += 1
        rep_set = run_replications(DES, scenario, model, profile, replications, master_seed)
        wait = math.fsum(rep_set.mean_waits) / len(rep_set.summaries)
        tis = math.fsum(rep_set.mean_times_in_system) / len(rep_set.summaries)
        err_wait = (wait - targets.mean_wait) / targets.mean_wait if targets.mean_wait else wait
        err_tis = (tis - targets.mean_time_in_system) / targets.mean_time_in_system
        result = (err_wait**2 + err_tis**2, wait, tis)
        cache[key] = result
        return result

    def with_param(model: ServiceModel, name: str, value: float) -> ServiceModel:
        kwargs = {
            "job1_mean": model.job1_mean,
            "job2_mean": model.job2_mean,
            "job3_mean": model.job3_mean,
            "dwell_mean": model.dwell_mean,
            "help_probability": model.help_probability,
            "rooms": model.rooms,
        }
        kwargs[name] = value
        return ServiceModel(**kwargs)

    best_model = base_service
    best_obj, best_wait, best_tis = evaluate(base_service)

    step = 0.20
    while evaluations < budget and step >= 0.01 and best_obj > 1e-8:
        improved = False
        for name in params:
            if evaluations >= budget:
                break
            current = getattr(best_model, name)
            lo, hi = bounds[name]
            for factor in (1.0 + step, 1.0 - step):
                candidate_value = min(hi, max(lo, current * factor))
                if candidate_value == current or evaluations >= budget:
                    continue
                candidate = with_param(best_model, name, candidate_value)
                obj, wait, tis = evaluate(candidate)
                if obj < best_obj:
                    best_model, best_obj, best_wait, best_tis = candidate, obj, wait, tis
                    improved = True
                    break
        if not improved:
            step /= 2.0

    return CalibrationResult(
        model=best_model,
        achieved_mean_wait=best_wait,
        achieved_time_in_system=best_tis,
        relative_errors={
            "mean_wait": abs(best_wait - targets.mean_wait) / targets.mean_wait
            if targets.mean_wait
            else abs(best_wait),
            "mean_time_in_system": abs(best_tis - targets.mean_time_in_system)
            / targets.mean_time_in_system,
        },
        objective=best_obj,
        evaluations=evaluations,
    )


# ---------------------------------------------------------------------------
# arrival-process check
# ---------------------------------------------------------------------------

def arrival_profile_check(
    profile: ArrivalProfile, replications: int, master_seed: int
) -> dict:
    """Empirical arrival counts against the configured rates, per hour.

    Samples ``replications`` days of arrivals (nothing else) and reports the
    mean count per hour bucket next to the configured expectation, with a
    z-score against the Poisson standard error of the mean; hours with rate 0
    get a null z when the observation agrees. Returned as a plain dict ready
    for JSON emission.
    """
    if not (isinstance(replications, int) and replications >= 1):
        raise ValidationError(
            f"replication count must be a positive integer (got {replications})"
        )
    hours = int(profile.horizon // 60.0)
    totals = 0.0
    bucket_sums = [0.0] * hours
    for i in range(replications):
        streams = derive_streams(master_seed, i)
        times = sample_arrivals(profile, streams.arrivals)
        totals += len(times)
        for t in times:
            bucket_sums[min(hours - 1, int(t // 60.0))] += 1.0

    expected_total = profile.total_expected_arrivals
    observed_mean_total = totals / replications
    se_total = math.sqrt(expected_total / replications) if expected_total > 0 else 0.0
    z_total = (
        (observed_mean_total - expected_total) / se_total if se_total > 0 else None
    )
    rows = []
    for hour, (start, end, rate) in enumerate(profile.segments):
        expected = rate * (end - start)
        observed = bucket_sums[hour] / replications
        se = math.sqrt(expected / replications) if expected > 0 else 0.0
        z = (observed - expected) / se if se > 0 else None
        rows.append(
            {
                "hour": hour,
                "configured_rate": rate,
                "expected_count": expected,
                "observed_mean_count": observed,
                "standard_error": se,
                "z": z,
            }
        )
    return {
        "schema_version": 1,
        "report": "arrivals_check",
        "replications": replications,
        "master_seed": master_seed,
        "expected_total": expected_total,
        "observed_mean_total": observed_mean_total,
        "standard_error_total": se_total,
        "z_total": z_total,
        "hours": rows,
    }
