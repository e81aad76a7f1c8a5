"""Warden strategies: fair schedules, the indistinguishable pair, and the
ownership-driven adversary."""

from collections import Counter

import pytest

from lockstep.core import Declare, Flip, Program, Repeat, See
from lockstep.errors import UnsupportedParameterError, UsageError
from lockstep.protocols import (
    AllRoomsAllPrisoners,
    ProtocolInstance,
    one_room_known,
    two_switch_prisoner_at_a_time,
)
from lockstep.scheduling import (
    RoundRobin,
    S1Adversary,
    SchedulePair,
    SeededRandom,
    SingleRoomSchedule,
    WitnessSchedule,
    build_schedule_pair,
    build_scheduler,
    extend_to_valid,
    find_recurring_config,
)
from lockstep.verifier import simulate


def toy(programs, r):
    return ProtocolInstance(
        family="toy",
        n=len(programs),
        r=r,
        m=2,
        programs=tuple(Program(f"p{i}", b) for i, b in enumerate(programs)),
        start=(0,) * r,
        config_names=("0", "1"),
        guarantee=None,
        default_win=AllRoomsAllPrisoners(),
    )


WATCHERS = ((See(1),), (See(1),))


# -- fair schedules -----------------------------------------------------------


def test_round_robin_is_window_fair():
    sched = RoundRobin(3, 2)
    events = [sched.next(None, step) for step in range(1000)]
    window = 3 * 2
    for lo in range(0, 1000 - window, window):
        assert sorted(events[lo : lo + window]) == [
            (p, room) for p in range(3) for room in range(2)
        ]


def test_seeded_random_replays_and_balances():
    a = SeededRandom(2, 2, seed=9)
    b = SeededRandom(2, 2, seed=9)
    assert [a.next(None, i) for i in range(50)] == [b.next(None, i) for i in range(50)]

    sched = SeededRandom(2, 2, seed=0)
    counts = Counter(sched.next(None, i) for i in range(100_000))
    for pair in ((0, 0), (0, 1), (1, 0), (1, 1)):
        assert abs(counts[pair] - 25_000) <= 1_250  # within 5%


def test_witness_schedule_is_finite():
    sched = WitnessSchedule(2, 2)
    assert len(sched.events) == 16
    assert sched.next(None, 16) is None


# -- recurrence and the schedule pair ------------------------------------------


def test_recurring_config_goldens():
    watch = tuple(Program(f"p{i}", body) for i, body in enumerate(WATCHERS))
    assert find_recurring_config(watch, 0, 2) == (0, 1)
    assert find_recurring_config(one_room_known(2).programs, 0, 2) == (0, 1)
    baton = two_switch_prisoner_at_a_time(2, 2)
    assert find_recurring_config(baton.programs, 0, 2) == (1, 1)


def test_schedule_pair_needs_two_rooms():
    with pytest.raises(UnsupportedParameterError):
        build_schedule_pair(one_room_known(2).programs, 2, 1)


def test_schedule_pair_observations_coincide():
    base = two_switch_prisoner_at_a_time(2, 2)
    pair = build_schedule_pair(base.programs, 2, 2)
    assert isinstance(pair, SchedulePair)
    assert pair.start_configs == (0, 1)
    assert pair.horizon_note == {
        "recurring_config": 1,
        "cycle_length": 1,
        "detected_pass": 2,
    }
    inst = base.with_start(pair.start_configs)
    res1 = simulate(inst, pair.s1, max_steps=500)
    # The pointer schedule is stateful; use a fresh pair for the second run.
    fresh = build_schedule_pair(base.programs, 2, 2)
    res2 = simulate(inst, fresh.s2, max_steps=500)
    for p in range(2):
        obs1 = [rec.observed for rec in res1.records if rec.prisoner == p]
        obs2 = [rec.observed for rec in res2.records if rec.prisoner == p]
        assert obs1 == obs2
    assert res1.outcome.kind == res2.outcome.kind == "StepLimit"
    assert fresh.s2.advances == 249


def test_pointer_advances_every_pass_when_nothing_fires():
    watch = tuple(Program(f"p{i}", body) for i, body in enumerate(WATCHERS))
    pair = build_schedule_pair(watch, 2, 2)
    inst = toy(list(WATCHERS), 2).with_start(pair.start_configs)
    res = simulate(inst, pair.s2, max_steps=20)
    assert pair.s2.advances == 9  # every pass after the first event
    assert {rec.room for rec in res.records} == {0, 1}


def test_extend_to_valid_prefix_then_round_robin():
    ext = extend_to_valid(SingleRoomSchedule(2), 0, 2, 2)
    rr = RoundRobin(2, 2)
    assert [ext.next(None, s) for s in range(12)] == [
        rr.next(None, s) for s in range(12)
    ]

    ext3 = extend_to_valid(SingleRoomSchedule(2), 3, 2, 2)
    events = [ext3.next(None, s) for s in range(7)]
    assert events == [(0, 0), (1, 0), (0, 0), (0, 0), (0, 1), (1, 0), (1, 1)]
    # The round-robin tail keeps its window fairness after the prefix.
    tail = [ext3.next(None, s) for s in range(7, 3 + 8)]
    assert sorted(events[3:] + tail) == sorted(
        [(p, room) for p in range(2) for room in range(2)] * 2
    )


# -- the single-switch adversary ------------------------------------------------


@pytest.mark.parametrize("n,r,m", [(2, 5, 3), (1, 5, 2), (2, 4, 2)])
def test_adversary_parameter_guards(n, r, m):
    with pytest.raises(UnsupportedParameterError):
        S1Adversary(toy(list(WATCHERS), 5).programs, n, r, m=m)


def test_adversary_degenerates_to_least_recent_for_watchers():
    inst = toy(list(WATCHERS), 5)
    adv = S1Adversary(inst.programs, 2, 5)
    res = simulate(inst, adv, max_steps=30)
    assert res.outcome.kind == "StepLimit"
    # Finished prisoners everywhere: always the direct case, lexicographic
    # least-recently-used order.
    assert [(rec.prisoner, rec.room) for rec in res.records[:10]] == [
        (p, room) for p in range(2) for room in range(5)
    ]
    assert set(adv.condition_log) == {4}
    assert adv.forced_words == 0 and adv.direct_events == 30
    assert adv.audit_violations == []


def test_adversary_forces_owners_out_of_togglers():
    inst = toy(
        [(Repeat(50, (Flip(0, 1),)),), (Repeat(50, (Flip(1, 0),)),)], 5
    )
    adv = S1Adversary(inst.programs, 2, 5)
    res = simulate(inst, adv, max_steps=400)
    assert res.outcome.kind == "StepLimit"
    assert set(adv.condition_log) == {1, 3, 4}  # 4 once both burn out
    assert adv.forced_words == 39
    assert adv.audit_violations == []


def test_adversary_outlasts_a_patient_counter():
    # Counting to 200 needs more than 300 events, so the run must time out;
    # what matters is that the table conditions stay in range and nobody is
    # starved of visits.
    inst = toy(
        [(Repeat(200, (Flip(1, 0),)), Declare()), (Repeat(400, (Flip(0, 1),)),)], 5
    )
    adv = S1Adversary(inst.programs, 2, 5)
    res = simulate(inst, adv, max_steps=300)
    assert res.outcome.kind == "StepLimit"
    assert set(adv.condition_log) <= {1, 3}
    assert adv.forced_words > 0
    assert adv.audit_violations == []


def test_adversary_permits_legitimate_correct_declarations():
    # A hostile schedule only has to defeat would-be winning strategies; a
    # run where the declarer really has seen every room may still declare.
    inst = one_room_known(2, 5)
    adv = S1Adversary(inst.programs, 2, 5)
    res = simulate(inst, adv, max_steps=10_000)
    assert res.outcome.kind == "DeclaredCorrect"
    assert res.outcome.step == 11
    assert adv.audit_violations == []


# -- registry -----------------------------------------------------------------


def test_scheduler_registry():
    inst = two_switch_prisoner_at_a_time(2, 5)
    assert isinstance(build_scheduler("round-robin", inst), RoundRobin)
    assert isinstance(build_scheduler("lemma1-pair", inst), SchedulePair)
    # The adversary only handles single-switch rooms.
    assert isinstance(build_scheduler("s1-adversary", one_room_known(2, 5)), S1Adversary)
    with pytest.raises(UnsupportedParameterError):
        build_scheduler("s1-adversary", inst)
    with pytest.raises(UsageError, match="unknown scheduler"):
        build_scheduler("nope", inst)
