"""Arrival generation and per-customer variate drawing.

Arrivals follow a non-homogeneous Poisson process with a piecewise-constant
rate: within each segment, inter-arrival gaps are exponential with the
segment's rate, and sampling restarts at every segment boundary (the partial
gap that crosses a boundary is discarded, not carried over). Arrivals stop at
the horizon; customers already inside then drain out.

Randomness is split by what it belongs to. Customer-intrinsic variates
(arrival time, dwell, help point, help flag) are drawn up front in arrival
order, so replications with the same master seed see the same customers in
every engine and staffing scenario. Job durations are operational: they are
drawn from the services stream at the moment a service starts. Scenarios with
the same master seed therefore share the service-draw sequence but may hand
the draws to different customers once schedules diverge, while the arrival
lists always match exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import ARRIVALS, DWELL, HELP_FLAGS, SERVICES, RngStream, StreamBundle
from .types import DEFAULT_HORIZON, ArrivalProfile, ServiceModel, ValidationError

HOUR = 60.0


def build_arrival_profile(
    hourly_rates: list[float] | tuple[float, ...], horizon: float = DEFAULT_HORIZON
) -> ArrivalProfile:
    """Build a profile from one rate (customers/minute) per one-hour slot."""
    rates = list(hourly_rates)
    if len(rates) * HOUR != horizon:
        raise ValidationError(
            f"{len(rates)} hourly rates cover {len(rates) * HOUR:.0f} minutes, "
            f"but the horizon is {horizon}"
        )
    for i, rate in enumerate(rates):
        if not math.isfinite(rate) or rate < 0:
            raise ValidationError(f"hourly rate {i} must be finite and >= 0 (got {rate})")
    segments = tuple(
        (i * HOUR, (i + 1) * HOUR, float(rate)) for i, rate in enumerate(rates)
    )
    return ArrivalProfile(segments=segments, horizon=float(horizon))


def sample_arrivals(profile: ArrivalProfile, stream: RngStream) -> list[float]:
    """Draw one day of arrival times, strictly increasing, all < horizon."""
    if stream.purpose != ARRIVALS:
        raise ValidationError(
            f"sample_arrivals needs the {ARRIVALS!r} stream, got {stream.purpose!r}"
        )
    times: list[float] = []
    for start, end, rate in profile.segments:
        if rate == 0.0:
            continue
        mean_gap = 1.0 / rate
        t = start
        while True:
            t += -mean_gap * math.log1p(-stream.random())
            if t >= end:
                break
            times.append(t)
    return times


@dataclass(frozen=True)
class CustomerDraws:
    """Customer-intrinsic randomness, drawn before the run in arrival order.

    ``help_point`` is the fraction of the dwell that elapses before a help
    request fires; it is drawn for every customer so that stream consumption
    never depends on the help flag.
    """

    arrival: float
    dwell_time: float
    help_point: float
    needs_help: bool

    def dwell_split(self) -> tuple[float, float]:
        """(time in room before the help request, dwell remaining after help)."""
        before = self.dwell_time * self.help_point
        return before, self.dwell_time - before


class StreamServices:
    """Job durations drawn from the services stream as each service starts."""

    def __init__(self, service: ServiceModel, stream: RngStream) -> None:
        if stream.purpose != SERVICES:
            raise ValidationError(
                f"StreamServices needs the {SERVICES!r} stream, got {stream.purpose!r}"
            )
        self._service = service
        self._stream = stream

    def job_time(self, job: int, customer_id: int) -> float:
        return self._stream.exponential(self._service.job_mean(job))


class PresetServices:
    """Fixed per-customer job durations, for scripted and exactness tests.

    ``times`` holds one (job1, job2, job3) triple per customer id.
    """

    def __init__(self, times: list[tuple[float, float, float]]) -> None:
        self._times = [tuple(float(t) for t in triple) for triple in times]

    def job_time(self, job: int, customer_id: int) -> float:
        return self._times[customer_id][job - 1]


def draw_customers(
    profile: ArrivalProfile, service: ServiceModel, streams: StreamBundle
) -> list[CustomerDraws]:
    """Sample the day's customers with their intrinsic variates, in arrival order."""
    for name, wanted in (("help_flags", HELP_FLAGS), ("dwell", DWELL)):
        if getattr(streams, name).purpose != wanted:
            raise ValidationError(f"stream bundle field {name} has the wrong purpose")

    arrivals = sample_arrivals(profile, streams.arrivals)
    n = len(arrivals)

    du = streams.dwell.random_array(2 * n)
    dwell = -service.dwell_mean * np.log1p(-du[0:n])
    help_point = du[n : 2 * n]

    flags = streams.help_flags.random_array(n) < service.help_probability

    return [
        CustomerDraws(
            arrival=arrivals[i],
            dwell_time=float(dwell[i]),
            help_point=float(help_point[i]),
            needs_help=bool(flags[i]),
        )
        for i in range(n)
    ]
