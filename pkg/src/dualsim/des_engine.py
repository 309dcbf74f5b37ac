"""Event-calendar simulation of the fitting-room day (process view).

The model is three single queues in front of one shared pool of staff: job 1
counts garments in at the entrance, job 2 answers help requests at the rooms,
job 3 counts garments out. A customer flows entry queue -> room -> (optional
help) -> return queue -> out. Staff always serve the longest-waiting customer
across the queues of their assigned jobs (strict FIFO).

Tie-breaking on the calendar: at equal timestamps completions run before
service starts, which run before new demand (arrivals, help requests); within
a class, insertion order decides. The day ends when the calendar drains.
"""

from __future__ import annotations

import heapq
from collections import deque

from .arrivals import CustomerDraws, StreamServices, draw_customers
from .rng import StreamBundle
from .types import (
    ArrivalProfile,
    CustomerRecord,
    RunOutput,
    Scenario,
    ServiceModel,
)

ARRIVAL = "arrival"
SERVICE_START = "service_start"
SERVICE_END = "service_end"
DWELL_END = "dwell_end"
HELP_REQUEST = "help_request"
DEPARTURE = "departure"

# Priority classes at equal timestamps.
PRIO_COMPLETION = 0   # service_end, dwell_end, departure
PRIO_START = 1        # service_start
PRIO_DEMAND = 2       # arrival, help_request


class EventCalendar:
    """Future-event list ordered by (time, priority, insertion sequence)."""

    __slots__ = ("_heap", "_seq")

    def __init__(self) -> None:
        self._heap: list[tuple[float, int, int, str, int, int]] = []
        self._seq = 0

    def push(self, time: float, prio: int, kind: str, cid: int, job: int = 0) -> None:
        heapq.heappush(self._heap, (time, prio, self._seq, kind, cid, job))
        self._seq += 1

    def pop(self) -> tuple[float, int, int, str, int, int]:
        return heapq.heappop(self._heap)

    def __len__(self) -> int:
        return len(self._heap)


class _Customer:
    __slots__ = (
        "cid", "draws", "job1_start", "room_request", "room_enter",
        "help_join", "job2_start", "return_join", "job3_start",
        "departure", "post_help_dwell",
    )

    def __init__(self, cid: int, draws: CustomerDraws):
        self.cid = cid
        self.draws = draws
        self.job1_start = 0.0
        self.room_request = 0.0
        self.room_enter = 0.0
        self.help_join = 0.0
        self.job2_start = 0.0
        self.return_join = 0.0
        self.job3_start = 0.0
        self.departure = 0.0
        self.post_help_dwell = 0.0


class _Staff:
    __slots__ = ("sid", "jobs", "current", "busy_time")

    def __init__(self, sid: str, jobs: tuple[int, ...]):
        self.sid = sid
        self.jobs = jobs
        self.current: tuple[int, int] | None = None  # (cid, job)
        self.busy_time = 0.0


class DesRun:
    """One day's simulation; ``step()`` consumes exactly one calendar event."""

    def __init__(
        self,
        scenario: Scenario,
        rooms: int,
        draws: list[CustomerDraws],
        services,
        horizon: float,
        trace: list | None = None,
    ):
        self.scenario = scenario
        self.rooms = rooms
        self.services = services
        self.horizon = horizon
        self.trace = trace
        self.calendar = EventCalendar()
        self.clock = 0.0
        self.customers = [_Customer(i, d) for i, d in enumerate(draws)]
        # Queue entries are (join_time, cid); jobs 1/2/3 = entry/help/return.
        self.queues: dict[int, deque[tuple[float, int]]] = {
            1: deque(), 2: deque(), 3: deque()
        }
        self.staff = {
            sid: _Staff(sid, scenario.jobs_of(sid)) for sid in scenario.staff_ids
        }
        self.staff_order = scenario.staff_ids
        self.staff_for_job = {
            job: scenario.assignment[job] for job in (1, 2, 3)
        }
        self.room_occupied = 0
        self.room_waiting: deque[int] = deque()
        for cust in self.customers:
            self.calendar.push(cust.draws.arrival, PRIO_DEMAND, ARRIVAL, cust.cid)

    # -- event processing ---------------------------------------------------

    def run(self) -> RunOutput:
        while len(self.calendar):
            self.step()
        return self._finalize()

    def step(self) -> None:
        time, prio, _seq, kind, cid, job = self.calendar.pop()
        self.clock = time
        if kind == ARRIVAL:
            self.queues[1].append((time, cid))
            self._emit(time, ARRIVAL, cid)
            self._try_assign(time)
        elif kind == SERVICE_START:
            # Staff and customer were committed when this event was scheduled;
            # the duration is drawn now, at the moment the service begins.
            duration = self.services.job_time(job, cid)
            self.staff[self.staff_for_job[job]].busy_time += duration
            self.calendar.push(
                time + duration, PRIO_COMPLETION, SERVICE_END, cid, job,
            )
            self._emit(time, f"{SERVICE_START}(job{job})", cid, self.staff_for_job[job])
        elif kind == SERVICE_END:
            self._service_end(time, cid, job)
        elif kind == DWELL_END:
            self._dwell_end(time, cid)
        elif kind == HELP_REQUEST:
            cust = self.customers[cid]
            cust.help_join = time
            self.queues[2].append((time, cid))
            self._emit(time, HELP_REQUEST, cid)
            self._try_assign(time)
        elif kind == DEPARTURE:
            self.customers[cid].departure = time
            self._emit(time, DEPARTURE, cid)
        else:  # pragma: no cover - calendar only ever holds the kinds above
            raise RuntimeError(f"unknown event kind {kind!r}")

    def _service_end(self, time: float, cid: int, job: int) -> None:
        staff = self.staff[self.staff_for_job[job]]
        staff.current = None
        self._emit(time, f"{SERVICE_END}(job{job})", cid, staff.sid)
        cust = self.customers[cid]
        if job == 1:
            cust.room_request = time
            if self.room_occupied < self.rooms:
                self._enter_room(time, cid)
            else:
                self.room_waiting.append(cid)
        elif job == 2:
            # Help over; the interrupted dwell resumes where it left off.
            self.calendar.push(
                time + cust.post_help_dwell, PRIO_COMPLETION, DWELL_END, cid
            )
        else:
            self.calendar.push(time, PRIO_COMPLETION, DEPARTURE, cid)
        self._try_assign(time)

    def _dwell_end(self, time: float, cid: int) -> None:
        self.room_occupied -= 1
        if self.room_waiting:
            self._enter_room(time, self.room_waiting.popleft())
        cust = self.customers[cid]
        cust.return_join = time
        self.queues[3].append((time, cid))
        self._emit(time, DWELL_END, cid)
        self._try_assign(time)

    def _enter_room(self, time: float, cid: int) -> None:
        cust = self.customers[cid]
        cust.room_enter = time
        self.room_occupied += 1
        draws = cust.draws
        if draws.needs_help:
            before, after = draws.dwell_split()
            cust.post_help_dwell = after
            self.calendar.push(time + before, PRIO_DEMAND, HELP_REQUEST, cid)
        else:
            self.calendar.push(
                time + draws.dwell_time, PRIO_COMPLETION, DWELL_END, cid
            )

    def _try_assign(self, time: float) -> None:
        for sid in self.staff_order:
            staff = self.staff[sid]
            if staff.current is not None:
                continue
            best_join = 0.0
            best_job = 0
            for job in staff.jobs:
                queue = self.queues[job]
                if queue:
                    join_time = queue[0][0]
                    # Strictly-less keeps the lower job index on a tied join time.
                    if best_job == 0 or join_time < best_join:
                        best_join = join_time
                        best_job = job
            if best_job == 0:
                continue
            _join, cid = self.queues[best_job].popleft()
            cust = self.customers[cid]
            if best_job == 1:
                cust.job1_start = time
            elif best_job == 2:
                cust.job2_start = time
            else:
                cust.job3_start = time
            staff.current = (cid, best_job)
            self.calendar.push(time, PRIO_START, SERVICE_START, cid, best_job)

    # -- output ---------------------------------------------------------------

    def _emit(self, time: float, event: str, cid: int, staff_id: str = "") -> None:
        if self.trace is not None:
            self.trace.append(
                (
                    time,
                    event,
                    cid,
                    staff_id,
                    f"{len(self.queues[1])}/{len(self.queues[2])}/{len(self.queues[3])}",
                )
            )

    def _finalize(self) -> RunOutput:
        records = tuple(
            CustomerRecord(
                id=cust.cid,
                arrival=cust.draws.arrival,
                entry_wait=cust.job1_start - cust.draws.arrival,
                help_wait=(cust.job2_start - cust.help_join) if cust.draws.needs_help else 0.0,
                return_wait=cust.job3_start - cust.return_join,
                room_wait=cust.room_enter - cust.room_request,
                dwell=cust.draws.dwell_time,
                needs_help=cust.draws.needs_help,
                departure=cust.departure,
            )
            for cust in self.customers
        )
        end_time = max(self.horizon, self.clock)
        busy = {sid: self.staff[sid].busy_time for sid in self.staff_order}
        return RunOutput(
            records=records,
            busy_time=busy,
            utilisation={sid: busy[sid] / end_time for sid in self.staff_order},
            end_time=end_time,
        )


def simulate_des(
    scenario: Scenario,
    rooms: int,
    draws: list[CustomerDraws],
    services,
    horizon: float,
    trace: list | None = None,
) -> RunOutput:
    """Run the engine on given customers and a job-duration source."""
    return DesRun(scenario, rooms, draws, services, horizon, trace).run()


def run_des(
    scenario: Scenario,
    service: ServiceModel,
    profile: ArrivalProfile,
    streams: StreamBundle,
    trace: list | None = None,
) -> RunOutput:
    """Simulate one day: draw the customers, then drain the calendar."""
    draws = draw_customers(profile, service, streams)
    services = StreamServices(service, streams.services)
    return simulate_des(scenario, service.rooms, draws, services, profile.horizon, trace)
