"""Agent-based simulation of the fitting-room day.

The same operation as the event-calendar engine, but modelled from the
individual's point of view: customer agents and staff agents move through
explicit statecharts, a fitting-room agent guards the number of free rooms,
and a mediator matches idle staff to outstanding requests. Agents schedule
their own timed triggers on a shared scheduler whose tie-breaking matches the
other engine (completions, then service starts, then new demand; insertion
order within a class).

The one behavioural difference lives in the mediator: under ``strict_fifo`` an
idle staff agent takes the longest-waiting request for its jobs (making the two
engines exactly equivalent given the same draws), while under ``random_pick``
(the default) it grabs uniformly at random among everyone currently waiting
for its jobs, the way an unmanaged queue behaves. Those picks burn a dedicated
choice stream so arrival and service randomness stay common with the other
engine.
"""

from __future__ import annotations

import heapq
from collections import deque

from .arrivals import CustomerDraws, StreamServices, draw_customers
from .rng import RngStream, StreamBundle
from .types import (
    RANDOM_PICK,
    STRICT_FIFO,
    ArrivalProfile,
    CustomerRecord,
    RunOutput,
    Scenario,
    ServiceModel,
    StateMachineViolation,
    ValidationError,
)

# Customer statechart.
ARRIVED = "Arrived"
WAITING_ENTRY = "WaitingEntry"
BEING_COUNTED_IN = "BeingCountedIn"
TRYING_ON = "TryingOn"
WAITING_HELP = "WaitingHelp"
RECEIVING_HELP = "ReceivingHelp"
WAITING_RETURN = "WaitingReturn"
BEING_COUNTED_OUT = "BeingCountedOut"
DEPARTED = "Departed"

# Staff statechart.
IDLE = "Idle"
COUNTING_IN = "CountingIn"
HELPING = "Helping"
COUNTING_OUT = "CountingOut"

# (state, trigger) -> (new state, job requested on entering the new state).
CUSTOMER_EDGES: dict[tuple[str, str], tuple[str, int | None]] = {
    (ARRIVED, "join_entry"): (WAITING_ENTRY, 1),
    (WAITING_ENTRY, "accepted_entry"): (BEING_COUNTED_IN, None),
    (BEING_COUNTED_IN, "room_admitted"): (TRYING_ON, None),
    (TRYING_ON, "help_point"): (WAITING_HELP, 2),
    (WAITING_HELP, "accepted_help"): (RECEIVING_HELP, None),
    (RECEIVING_HELP, "help_done"): (TRYING_ON, None),
    (TRYING_ON, "dwell_done"): (WAITING_RETURN, 3),
    (WAITING_RETURN, "accepted_return"): (BEING_COUNTED_OUT, None),
    (BEING_COUNTED_OUT, "countout_done"): (DEPARTED, None),
}

STAFF_EDGES: dict[tuple[str, str], tuple[str, int | None]] = {
    (IDLE, "accept_job1"): (COUNTING_IN, None),
    (IDLE, "accept_job2"): (HELPING, None),
    (IDLE, "accept_job3"): (COUNTING_OUT, None),
    (COUNTING_IN, "finish"): (IDLE, None),
    (HELPING, "finish"): (IDLE, None),
    (COUNTING_OUT, "finish"): (IDLE, None),
}

_ACCEPT_TRIGGER = {1: "accepted_entry", 2: "accepted_help", 3: "accepted_return"}

# Scheduler priority classes at equal timestamps (same as the other engine).
PRIO_COMPLETION = 0
PRIO_START = 1
PRIO_DEMAND = 2


class CustomerAgent:
    __slots__ = (
        "cid", "draws", "state", "job1_start", "room_request", "room_enter",
        "help_join", "job2_start", "return_join", "job3_start", "departure",
        "post_help_dwell",
    )

    EDGES = CUSTOMER_EDGES

    def __init__(self, cid: int, draws: CustomerDraws):
        self.cid = cid
        self.draws = draws
        self.state = ARRIVED
        self.job1_start = 0.0
        self.room_request = 0.0
        self.room_enter = 0.0
        self.help_join = 0.0
        self.job2_start = 0.0
        self.return_join = 0.0
        self.job3_start = 0.0
        self.departure = 0.0
        self.post_help_dwell = 0.0

    @property
    def name(self) -> str:
        return f"customer{self.cid}"


class StaffAgent:
    __slots__ = ("sid", "jobs", "state", "busy_time")

    EDGES = STAFF_EDGES

    def __init__(self, sid: str, jobs: tuple[int, ...]):
        self.sid = sid
        self.jobs = jobs
        self.state = IDLE
        self.busy_time = 0.0

    @property
    def name(self) -> str:
        return self.sid


def agent_transition(agent, trigger: str, log: list | None = None):
    """Drive one agent through one statechart edge.

    Returns the messages the transition emits (requests the mediator should
    hear, as ``("request", job)`` tuples). Raises ``StateMachineViolation`` if
    the agent's chart has no such edge from its current state.
    """
    edge = agent.EDGES.get((agent.state, trigger))
    if edge is None:
        raise StateMachineViolation(
            f"{agent.name}: no transition {trigger!r} from state {agent.state!r}"
        )
    new_state, requested_job = edge
    if log is not None:
        log.append((agent.name, agent.state, trigger, new_state))
    agent.state = new_state
    return [("request", requested_job)] if requested_job is not None else []


class FittingRoomAgent:
    """Counts occupied rooms and holds the overflow queue, first come first in."""

    __slots__ = ("capacity", "occupied", "waiting")

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.occupied = 0
        self.waiting: deque[int] = deque()


class Mediator:
    """Outstanding request sets per job, matched to idle staff on demand."""

    __slots__ = ("requests",)

    def __init__(self) -> None:
        self.requests: dict[int, list[tuple[float, int]]] = {1: [], 2: [], 3: []}

    def post(self, job: int, time: float, cid: int) -> None:
        self.requests[job].append((time, cid))

    def outstanding(self, jobs: tuple[int, ...]) -> int:
        return sum(len(self.requests[job]) for job in jobs)

    def claim_fifo(self, jobs: tuple[int, ...]) -> tuple[int, float, int] | None:
        """Take the longest-waiting request across the given jobs."""
        best_job = 0
        best_time = 0.0
        for job in jobs:
            bucket = self.requests[job]
            if bucket and (best_job == 0 or bucket[0][0] < best_time):
                best_time = bucket[0][0]
                best_job = job
        if best_job == 0:
            return None
        time, cid = self.requests[best_job].pop(0)
        return best_job, time, cid

    def claim_random(
        self, jobs: tuple[int, ...], choice: RngStream
    ) -> tuple[int, float, int] | None:
        """Take a uniformly random request across the given jobs.

        Consumes one draw only when there is an actual choice to make.
        """
        candidates = [
            (job, i) for job in jobs for i in range(len(self.requests[job]))
        ]
        if not candidates:
            return None
        job, i = candidates[0] if len(candidates) == 1 else candidates[
            choice.pick_index(len(candidates))
        ]
        time, cid = self.requests[job].pop(i)
        return job, time, cid


class AbsRun:
    """One day's simulation driven by agent statecharts."""

    def __init__(
        self,
        scenario: Scenario,
        rooms: int,
        draws: list[CustomerDraws],
        services,
        horizon: float,
        choice_stream: RngStream | None = None,
        trace: list | None = None,
        transition_log: list | None = None,
    ):
        if scenario.abs_queue_discipline == RANDOM_PICK and choice_stream is None:
            raise ValidationError(
                "random_pick discipline needs the abs_choice stream"
            )
        self.scenario = scenario
        self.discipline = scenario.abs_queue_discipline
        self.choice_stream = choice_stream
        self.services = services
        self.horizon = horizon
        self.trace = trace
        self.transition_log = transition_log
        self.customers = [CustomerAgent(i, d) for i, d in enumerate(draws)]
        self.staff = {
            sid: StaffAgent(sid, scenario.jobs_of(sid)) for sid in scenario.staff_ids
        }
        self.staff_order = scenario.staff_ids
        self.staff_for_job = {job: scenario.assignment[job] for job in (1, 2, 3)}
        self.rooms = FittingRoomAgent(rooms)
        self.mediator = Mediator()
        self.clock = 0.0
        self._heap: list[tuple[float, int, int, str, int, int]] = []
        self._seq = 0
        for cust in self.customers:
            self._schedule(cust.draws.arrival, PRIO_DEMAND, "arrive", cust.cid)

    def _schedule(self, time: float, prio: int, kind: str, cid: int, job: int = 0) -> None:
        heapq.heappush(self._heap, (time, prio, self._seq, kind, cid, job))
        self._seq += 1

    def _apply(self, agent, trigger: str):
        return agent_transition(agent, trigger, self.transition_log)

    # -- trigger handlers -----------------------------------------------------

    def run(self) -> RunOutput:
        while self._heap:
            time, prio, _seq, kind, cid, job = heapq.heappop(self._heap)
            self.clock = time
            getattr(self, "_on_" + kind)(time, cid, job)
        return self._finalize()

    def _on_arrive(self, time: float, cid: int, job: int) -> None:
        cust = self.customers[cid]
        for _msg, req_job in self._apply(cust, "join_entry"):
            self.mediator.post(req_job, time, cid)
        self._emit(time, "arrival", cid, "", cust.state)
        self._match(time)

    def _on_begin_service(self, time: float, cid: int, job: int) -> None:
        cust = self.customers[cid]
        duration = self.services.job_time(job, cid)
        self.staff[self.staff_for_job[job]].busy_time += duration
        self._schedule(
            time + duration, PRIO_COMPLETION, "finish_service", cid, job
        )
        self._emit(time, f"service_start(job{job})", cid, self.staff_for_job[job], cust.state)

    def _on_finish_service(self, time: float, cid: int, job: int) -> None:
        staff = self.staff[self.staff_for_job[job]]
        self._apply(staff, "finish")
        cust = self.customers[cid]
        if job == 1:
            cust.room_request = time
            if self.rooms.occupied < self.rooms.capacity:
                self._admit(time, cid)
            else:
                self.rooms.waiting.append(cid)
        elif job == 2:
            self._apply(cust, "help_done")
            self._schedule(
                time + cust.post_help_dwell, PRIO_COMPLETION, "dwell_complete", cid
            )
        else:
            self._schedule(time, PRIO_COMPLETION, "depart", cid)
        self._emit(time, f"service_end(job{job})", cid, staff.sid, cust.state)
        self._match(time)

    def _on_dwell_complete(self, time: float, cid: int, job: int) -> None:
        self.rooms.occupied -= 1
        if self.rooms.waiting:
            self._admit(time, self.rooms.waiting.popleft())
        cust = self.customers[cid]
        cust.return_join = time
        for _msg, req_job in self._apply(cust, "dwell_done"):
            self.mediator.post(req_job, time, cid)
        self._emit(time, "dwell_end", cid, "", cust.state)
        self._match(time)

    def _on_help_moment(self, time: float, cid: int, job: int) -> None:
        cust = self.customers[cid]
        cust.help_join = time
        for _msg, req_job in self._apply(cust, "help_point"):
            self.mediator.post(req_job, time, cid)
        self._emit(time, "help_request", cid, "", cust.state)
        self._match(time)

    def _on_depart(self, time: float, cid: int, job: int) -> None:
        cust = self.customers[cid]
        self._apply(cust, "countout_done")
        cust.departure = time
        self._emit(time, "departure", cid, "", cust.state)

    def _admit(self, time: float, cid: int) -> None:
        cust = self.customers[cid]
        self.rooms.occupied += 1
        cust.room_enter = time
        self._apply(cust, "room_admitted")
        draws = cust.draws
        if draws.needs_help:
            before, after = draws.dwell_split()
            cust.post_help_dwell = after
            self._schedule(time + before, PRIO_DEMAND, "help_moment", cid)
        else:
            self._schedule(time + draws.dwell_time, PRIO_COMPLETION, "dwell_complete", cid)

    def _match(self, time: float) -> None:
        for sid in self.staff_order:
            staff = self.staff[sid]
            if staff.state != IDLE:
                continue
            if self.discipline == STRICT_FIFO:
                claimed = self.mediator.claim_fifo(staff.jobs)
            else:
                claimed = self.mediator.claim_random(staff.jobs, self.choice_stream)
            if claimed is None:
                continue
            job, _req_time, cid = claimed
            cust = self.customers[cid]
            if job == 1:
                cust.job1_start = time
            elif job == 2:
                cust.job2_start = time
            else:
                cust.job3_start = time
            self._apply(cust, _ACCEPT_TRIGGER[job])
            self._apply(staff, f"accept_job{job}")
            self._schedule(time, PRIO_START, "begin_service", cid, job)

    # -- output ---------------------------------------------------------------

    def _emit(self, time: float, event: str, cid: int, staff_id: str, state: str) -> None:
        if self.trace is not None:
            m = self.mediator.requests
            self.trace.append(
                (time, event, cid, staff_id, f"{len(m[1])}/{len(m[2])}/{len(m[3])}", state)
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


def simulate_abs(
    scenario: Scenario,
    rooms: int,
    draws: list[CustomerDraws],
    services,
    horizon: float,
    choice_stream: RngStream | None = None,
    trace: list | None = None,
    transition_log: list | None = None,
) -> RunOutput:
    """Run the engine on given customers and a job-duration source."""
    return AbsRun(
        scenario, rooms, draws, services, horizon, choice_stream, trace, transition_log
    ).run()


def run_abs(
    scenario: Scenario,
    service: ServiceModel,
    profile: ArrivalProfile,
    streams: StreamBundle,
    trace: list | None = None,
    transition_log: list | None = None,
) -> RunOutput:
    """Simulate one day: draw the customers, then let the agents play it out."""
    draws = draw_customers(profile, service, streams)
    services = StreamServices(service, streams.services)
    return simulate_abs(
        scenario,
        service.rooms,
        draws,
        services,
        profile.horizon,
        streams.abs_choice,
        trace,
        transition_log,
    )
