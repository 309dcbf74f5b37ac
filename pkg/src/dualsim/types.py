"""Core value types shared by both simulation engines.

All times are minutes from shop opening. The operating day runs from 0 to the
horizon (480 minutes by default); customers already inside at closing time are
allowed to finish, so drain-phase events may legitimately carry timestamps past
the horizon.
"""

from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_HORIZON = 480.0

JOBS = (1, 2, 3)
JOB_NAMES = {1: "count_in", 2: "help", 3: "count_out"}

STRICT_FIFO = "strict_fifo"
RANDOM_PICK = "random_pick"
QUEUE_DISCIPLINES = (STRICT_FIFO, RANDOM_PICK)


class ValidationError(ValueError):
    """A domain value failed its construction-time checks."""


class StateMachineViolation(RuntimeError):
    """An agent was driven through a transition its statechart does not allow."""


@dataclass(frozen=True)
class ArrivalProfile:
    """Piecewise-constant arrival-rate schedule.

    ``segments`` is a tuple of ``(start, end, rate)`` triples covering
    ``[0, horizon)`` contiguously; rates are customers per minute.
    """

    segments: tuple[tuple[float, float, float], ...]
    horizon: float

    def __post_init__(self) -> None:
        if self.horizon <= 0:
            raise ValidationError(f"horizon must be positive (got {self.horizon})")
        if not self.segments:
            raise ValidationError("arrival profile needs at least one segment")
        cursor = 0.0
        for i, (start, end, rate) in enumerate(self.segments):
            if start != cursor:
                raise ValidationError(
                    f"segment {i} starts at {start}, expected {cursor} (segments must be contiguous)"
                )
            if end <= start:
                raise ValidationError(f"segment {i} has non-positive length")
            if rate < 0:
                raise ValidationError(f"segment {i} has negative rate {rate}")
            cursor = end
        if cursor != self.horizon:
            raise ValidationError(
                f"segments end at {cursor} but horizon is {self.horizon}"
            )

    @property
    def total_expected_arrivals(self) -> float:
        return sum((end - start) * rate for start, end, rate in self.segments)


@dataclass(frozen=True)
class ServiceModel:
    """Service-time means (minutes) and fitting-room parameters.

    Job 1 counts garments in and hands over the number card, job 2 is in-room
    help, job 3 takes the card back and counts garments out. Durations are
    exponentially distributed with these means. ``help_probability`` is the
    chance an individual customer requests help while trying on.
    """

    job1_mean: float
    job2_mean: float
    job3_mean: float
    dwell_mean: float
    help_probability: float = 0.10
    rooms: int = 8

    def __post_init__(self) -> None:
        for name in ("job1_mean", "job2_mean", "job3_mean", "dwell_mean"):
            value = getattr(self, name)
            if not value > 0:
                raise ValidationError(f"{name} must be positive (got {value})")
        if not 0.0 <= self.help_probability <= 1.0:
            raise ValidationError(
                f"help_probability must be within [0, 1] (got {self.help_probability})"
            )
        if not (isinstance(self.rooms, int) and self.rooms >= 1):
            raise ValidationError(f"rooms must be a positive integer (got {self.rooms})")

    def job_mean(self, job: int) -> float:
        return (self.job1_mean, self.job2_mean, self.job3_mean)[job - 1]


@dataclass(frozen=True)
class Scenario:
    """A staffing arrangement: which staff member covers which job.

    ``assignment`` maps each job (1, 2, 3) to a staff id. A staff member may
    cover several jobs; each job is covered by exactly one staff member.
    ``abs_queue_discipline`` only affects the agent-based engine: with
    ``random_pick`` an idle staff agent picks uniformly among everyone waiting
    for its jobs instead of the longest-waiting customer.
    """

    id: str
    assignment: dict[int, str]
    abs_queue_discipline: str = RANDOM_PICK

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("scenario id must be non-empty")
        missing = [job for job in JOBS if job not in self.assignment]
        if missing:
            raise ValidationError(
                f"scenario {self.id!r}: no staff assigned to job(s) {missing}"
            )
        unknown = sorted(set(self.assignment) - set(JOBS))
        if unknown:
            raise ValidationError(
                f"scenario {self.id!r}: unknown job(s) {unknown}; jobs are 1, 2 and 3"
            )
        for job, staff in self.assignment.items():
            if not staff:
                raise ValidationError(f"scenario {self.id!r}: job {job} has empty staff id")
        if self.abs_queue_discipline not in QUEUE_DISCIPLINES:
            raise ValidationError(
                f"scenario {self.id!r}: abs_queue_discipline must be one of "
                f"{QUEUE_DISCIPLINES} (got {self.abs_queue_discipline!r})"
            )

    @property
    def staff_ids(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.assignment.values())))

    @property
    def staff_count(self) -> int:
        return len(self.staff_ids)

    def jobs_of(self, staff_id: str) -> tuple[int, ...]:
        return tuple(job for job in JOBS if self.assignment[job] == staff_id)


@dataclass(frozen=True)
class CustomerRecord:
    """Per-customer outcome of one simulated day.

    ``total_wait`` is entry + help + return waiting; time spent waiting for a
    free fitting room is tracked separately in ``room_wait`` and excluded.
    ``time_in_system`` is departure minus arrival.
    """

    id: int
    arrival: float
    entry_wait: float
    help_wait: float
    return_wait: float
    room_wait: float
    dwell: float
    needs_help: bool
    departure: float
    total_wait: float = field(init=False)
    time_in_system: float = field(init=False)

    def __post_init__(self) -> None:
        for name in ("entry_wait", "help_wait", "return_wait", "room_wait"):
            if getattr(self, name) < 0:
                raise ValidationError(f"customer {self.id}: negative {name}")
        if self.departure < self.arrival:
            raise ValidationError(f"customer {self.id}: departure precedes arrival")
        if not self.needs_help and self.help_wait != 0.0:
            raise ValidationError(
                f"customer {self.id}: help_wait without a help request"
            )
        object.__setattr__(
            self, "total_wait", self.entry_wait + self.help_wait + self.return_wait
        )
        object.__setattr__(self, "time_in_system", self.departure - self.arrival)


@dataclass(frozen=True)
class RunOutput:
    """Everything one engine run produces for one day."""

    records: tuple[CustomerRecord, ...]
    busy_time: dict[str, float]
    utilisation: dict[str, float]
    end_time: float

    def __post_init__(self) -> None:
        for staff_id, u in self.utilisation.items():
            if not 0.0 <= u <= 1.0:
                raise ValidationError(f"utilisation of {staff_id} outside [0, 1]: {u}")

    @property
    def total_waits(self) -> list[float]:
        return [r.total_wait for r in self.records]

    @property
    def times_in_system(self) -> list[float]:
        return [r.time_in_system for r in self.records]
