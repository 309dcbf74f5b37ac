"""Event-calendar engine behavior on fully scripted days.

Every test here uses PresetServices and hand-built customer draws, so each
expected number can be traced by hand.
"""

import pytest

from dualsim.arrivals import CustomerDraws, PresetServices, build_arrival_profile
from dualsim.des_engine import run_des, simulate_des
from dualsim.rng import derive_streams
from dualsim.types import Scenario, ServiceModel

ONE_STAFF = Scenario(id="one", assignment={1: "s1", 2: "s1", 3: "s1"},
                     abs_queue_discipline="strict_fifo")


def customer(arrival, dwell, needs_help=False, help_point=0.5):
    return CustomerDraws(arrival=arrival, dwell_time=dwell,
                         help_point=help_point, needs_help=needs_help)


def test_two_customer_day_traced_by_hand():
    # c0 arrives at 0: count-in 0-1, room 1-3, count-out 3-4, out at 4.
    # c1 arrives at 0.5: waits for staff until 1, count-in 1-2, room 2-4,
    # count-out 4-5, out at 5.
    draws = [customer(0.0, 2.0), customer(0.5, 2.0)]
    services = PresetServices([(1.0, 9.9, 1.0), (1.0, 9.9, 1.0)])
    out = simulate_des(ONE_STAFF, rooms=2, draws=draws, services=services, horizon=480.0)

    c0, c1 = out.records
    assert (c0.entry_wait, c0.return_wait, c0.room_wait) == (0.0, 0.0, 0.0)
    assert c0.time_in_system == 4.0
    assert (c1.entry_wait, c1.return_wait) == (0.5, 0.0)
    assert c1.time_in_system == 4.5
    assert out.busy_time["s1"] == pytest.approx(4.0)


def test_help_request_interrupts_and_resumes_the_dwell():
    # count-in 0-1, dwell starts at 1, help fires at 1 + 4*0.25 = 2,
    # help service 2-2.5, remaining dwell 3 ends at 5.5, count-out 5.5-6.5
    draws = [customer(0.0, 4.0, needs_help=True, help_point=0.25)]
    services = PresetServices([(1.0, 0.5, 1.0)])
    out = simulate_des(ONE_STAFF, rooms=1, draws=draws, services=services, horizon=480.0)

    rec = out.records[0]
    assert rec.help_wait == 0.0
    assert rec.departure == pytest.approx(6.5)
    assert rec.time_in_system == pytest.approx(6.5)
    assert out.busy_time["s1"] == pytest.approx(2.5)


def test_help_wait_accrues_while_staff_is_busy():
    # c1's help fires while the single staff member is counting c0 out
    draws = [
        customer(0.0, 10.0, needs_help=True, help_point=0.5),
        customer(1.0, 1.0),
    ]
    # c0: count-in 0-1, in room 1..., help at 6
    # c1: count-in 1-2, room 2-3, count-out starts 3, runs 3-8
    # c0's help waits from 6 until 8, then 8-8.5
    services = PresetServices([(1.0, 0.5, 1.0), (1.0, 9.9, 5.0)])
    out = simulate_des(ONE_STAFF, rooms=2, draws=draws, services=services, horizon=480.0)

    c0 = out.records[0]
    assert c0.needs_help
    assert c0.help_wait == pytest.approx(2.0)
    # dwell resumes after help: 5 remaining, ends 13.5, count-out 13.5-14.5
    assert c0.departure == pytest.approx(14.5)
    assert c0.total_wait == pytest.approx(2.0)


def test_full_rooms_make_customers_wait_without_counting_it():
    draws = [customer(0.0, 2.0), customer(0.5, 2.0)]
    services = PresetServices([(1.0, 9.9, 1.0)] * 2)
    out = simulate_des(ONE_STAFF, rooms=1, draws=draws, services=services, horizon=480.0)

    c0, c1 = out.records
    assert c0.room_wait == 0.0
    # c1 finishes count-in at 2 but the only room frees at 3
    assert c1.room_wait == pytest.approx(1.0)
    assert c1.total_wait == pytest.approx(0.5)  # entry wait only
    assert c1.departure == pytest.approx(6.0)


def test_dedicated_help_staff_answers_while_entry_is_busy():
    split = Scenario(id="two", assignment={1: "s1", 2: "s2", 3: "s1"},
                     abs_queue_discipline="strict_fifo")
    draws = [
        customer(0.0, 10.0, needs_help=True, help_point=0.5),
        customer(1.0, 1.0),
    ]
    services = PresetServices([(1.0, 0.5, 1.0), (1.0, 9.9, 5.0)])
    out = simulate_des(split, rooms=2, draws=draws, services=services, horizon=480.0)

    c0 = out.records[0]
    assert c0.help_wait == 0.0  # s2 idles until the request at 6
    assert out.busy_time["s2"] == pytest.approx(0.5)
    assert out.busy_time["s1"] == pytest.approx(3.0 + 5.0)


def test_tied_queue_joins_prefer_the_entry_job():
    # with one staff member, a count-in request and a count-out request that
    # joined at the same instant resolve in favour of the lower job number
    draws = [customer(0.0, 1.0), customer(1.5, 5.0), customer(2.0, 5.0)]
    # c0: count-in 0-1, room 1-2, joins return queue at 2
    # c1: count-in 1.5-2.5 keeps the staff busy at t=2
    # c2: arrives 2, joins entry queue at 2 (same join time as c0's return)
    services = PresetServices([(1.0, 9.9, 1.0), (1.0, 9.9, 1.0), (1.0, 9.9, 1.0)])
    out = simulate_des(ONE_STAFF, rooms=3, draws=draws, services=services, horizon=480.0)

    c0, c1, c2 = out.records
    assert c2.entry_wait == pytest.approx(0.5)   # served at 2.5, before c0
    assert c0.return_wait == pytest.approx(1.5)  # waits until 3.5
    assert c1.entry_wait == pytest.approx(0.0)


def test_day_drains_past_the_horizon():
    profile = build_arrival_profile([0.0] * 7 + [0.5])
    model = ServiceModel(job1_mean=2.0, job2_mean=0.5, job3_mean=2.0,
                         dwell_mean=30.0, help_probability=0.2, rooms=8)
    out = run_des(Scenario(id="drain", assignment={1: "a", 2: "a", 3: "a"}),
                  model, profile, derive_streams(12, 0))
    assert out.records, "the last hour should still produce customers"
    assert out.end_time >= 480.0
    last_departure = max(r.departure for r in out.records)
    assert out.end_time == pytest.approx(max(480.0, last_departure))
    assert all(r.departure > r.arrival for r in out.records)


def test_utilisation_is_busy_time_over_end_time():
    draws = [customer(0.0, 2.0)]
    services = PresetServices([(1.0, 9.9, 1.0)])
    out = simulate_des(ONE_STAFF, rooms=1, draws=draws, services=services, horizon=480.0)
    assert out.utilisation["s1"] == pytest.approx(out.busy_time["s1"] / out.end_time)
    assert out.end_time == 480.0


def test_empty_day_is_legal():
    out = simulate_des(ONE_STAFF, rooms=1, draws=[], services=PresetServices([]),
                       horizon=480.0)
    assert out.records == ()
    assert out.busy_time["s1"] == 0.0


def test_run_is_reproducible_for_a_given_key():
    profile = build_arrival_profile([0.3] * 8)
    model = ServiceModel(job1_mean=1.0, job2_mean=0.5, job3_mean=1.0, dwell_mean=5.0)
    scenario = Scenario(id="r", assignment={1: "a", 2: "a", 3: "a"})
    first = run_des(scenario, model, profile, derive_streams(21, 5))
    second = run_des(scenario, model, profile, derive_streams(21, 5))
    assert first.records == second.records
    assert first.busy_time == second.busy_time


def test_trace_collects_the_event_sequence():
    draws = [customer(0.0, 2.0)]
    trace = []
    simulate_des(ONE_STAFF, rooms=1, draws=draws,
                 services=PresetServices([(1.0, 9.9, 1.0)]),
                 horizon=480.0, trace=trace)
    kinds = [entry[1] for entry in trace]
    assert kinds[0] == "arrival"
    assert kinds[-1] == "departure"
    assert "service_start(job1)" in kinds
    assert "dwell_end" in kinds
