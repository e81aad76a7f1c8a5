"""Ownership table semantics, brute-force cross-check, and the two lemmas."""

import random

import pytest

from lockstep.core import Declare, Flip, PrisonerState, Program, Repeat, See
from lockstep.errors import HistoryCorruptionError, ResourceLimitError
from lockstep.ownership import (
    BRUTE_MAX_EVENTS,
    BRUTE_MAX_ROOMS,
    ObservedEvent,
    apply_event,
    check_ownership_lemma,
    initial_table,
    is_finished,
    provable_ownership_bruteforce,
    table_from_history,
)
from lockstep.protocols import (
    ProtocolInstance,
    AllRoomsAllPrisoners,
    two_config_prob_eps,
    two_switch_prisoner_at_a_time,
)

START5 = (0, 0, 0, 0, 0)


def test_empty_history_owns_only_empty_configs():
    table = initial_table(START5, n=3, m=2)
    assert table.room_counts == (5, 0)
    # Config 1 holds no rooms, so ownership of it is vacuous for everyone.
    assert table.owns == ((False, True),) * 3


def test_first_signal_grants_sole_ownership():
    table = initial_table(START5, n=3, m=2)
    table = apply_event(table, ObservedEvent(1, 0, 1))
    assert table.room_counts == (4, 1)
    assert table.owns == ((False, False), (False, True), (False, False))


def test_second_signal_destroys_ownership_without_transfer():
    history = [ObservedEvent(1, 0, 1), ObservedEvent(2, 0, 1)]
    table = table_from_history(START5, history, n=3, m=2)
    assert table.room_counts == (3, 2)
    # p1 cannot tell which of the two raised rooms it visited; p2 visited
    # only one of them. Nobody provably owns anything.
    assert table.owns == ((False, False),) * 3


def test_non_firing_visit_keeps_table():
    table = initial_table(START5, n=3, m=2)
    after = apply_event(table, ObservedEvent(0, 0, 0))
    assert after.owns == table.owns and after.room_counts == table.room_counts


def test_vacuous_ownership_returns_when_config_empties():
    start = (1, 0)
    history = [ObservedEvent(0, 1, 0)]
    table = table_from_history(start, history, n=2, m=2)
    assert table.room_counts == (2, 0)
    assert table.owns[0] == (False, True) and table.owns[1] == (False, True)


def test_reading_an_empty_config_is_corruption():
    table = initial_table(START5, n=2, m=2)
    with pytest.raises(HistoryCorruptionError):
        apply_event(table, ObservedEvent(0, 1, 0))


def test_bruteforce_matches_on_the_worked_examples():
    h1 = [ObservedEvent(1, 0, 1)]
    h2 = h1 + [ObservedEvent(2, 0, 1)]
    for history in (h1, h2):
        assert (
            provable_ownership_bruteforce(START5, history, n=3, r=5, m=2)
            == table_from_history(START5, history, n=3, m=2).owns
        )


def test_bruteforce_resource_guards():
    with pytest.raises(ResourceLimitError):
        provable_ownership_bruteforce((0,) * 6, [], n=2, r=6, m=2)
    too_long = [ObservedEvent(0, 0, 0)] * (BRUTE_MAX_EVENTS + 1)
    with pytest.raises(ResourceLimitError):
        provable_ownership_bruteforce((0, 0), too_long, n=2, r=2, m=2)
    with pytest.raises(HistoryCorruptionError):
        provable_ownership_bruteforce((0, 0, 0), [], n=2, r=2, m=2)
    with pytest.raises(HistoryCorruptionError):
        provable_ownership_bruteforce((0, 0), [ObservedEvent(0, 1, 0)], n=2, r=2, m=2)


def test_incremental_table_matches_bruteforce_on_random_histories():
    rng = random.Random(3)
    for _ in range(300):
        n = rng.choice((2, 3))
        r = rng.randint(2, BRUTE_MAX_ROOMS)
        rooms = [0] * r
        history = []
        for _ in range(rng.randint(0, BRUTE_MAX_EVENTS)):
            room = rng.randrange(r)
            c_in = rooms[room]
            c_out = rng.randrange(2)
            rooms[room] = c_out
            history.append(ObservedEvent(rng.randrange(n), c_in, c_out))
        fast = table_from_history((0,) * r, history, n=n, m=2).owns
        slow = provable_ownership_bruteforce((0,) * r, history, n=n, r=r, m=2)
        assert fast == slow


# -- finished-ness ------------------------------------------------------------


def test_is_finished_past_end_and_declared():
    prog = Program("x", (Flip(0, 1),))
    assert not is_finished(prog, PrisonerState(cursor=0), m=2)
    assert is_finished(prog, PrisonerState(cursor=1), m=2)
    assert is_finished(prog, PrisonerState(cursor=0, declared=True), m=2)


def test_is_finished_watcher_never_acts():
    prog = Program("w", (See(1), See(0)))
    assert is_finished(prog, PrisonerState(cursor=0), m=2)


def test_is_finished_respects_remaining_work():
    inst = two_switch_prisoner_at_a_time(2, 2)
    assert not is_finished(inst.programs[1], PrisonerState(cursor=0), inst.m)

    cool = two_config_prob_eps(2, 2).programs[0]  # ends in a silent cooldown
    assert not is_finished(cool, PrisonerState(cursor=8), m=2)
    assert is_finished(cool, PrisonerState(cursor=9), m=2)


# -- lemmas -------------------------------------------------------------------


def test_ownership_lemmas_hold_for_baton_protocol():
    inst = two_switch_prisoner_at_a_time(2, 2)
    for which in ("declare-ownership", "finish-ownership"):
        ok, detail = check_ownership_lemma(inst, which)
        assert ok and detail == {"lemma": which, "states": 49}


def _toy(programs):
    return ProtocolInstance(
        family="toy",
        n=len(programs),
        r=2,
        m=2,
        programs=tuple(Program(f"p{i}", body) for i, body in enumerate(programs)),
        start=(0, 0),
        config_names=("0", "1"),
        guarantee=None,
        default_win=AllRoomsAllPrisoners(),
    )


def test_declare_lemma_rejects_hasty_declaration():
    ok, detail = check_ownership_lemma(_toy([(Declare(),), (See(0),)]), "declare-ownership")
    assert not ok
    assert detail["prisoner"] == 0
    assert detail["detail"] == "declaration without universal ownership"


def test_finish_lemma_rejects_idle_watcher():
    ok, detail = check_ownership_lemma(
        _toy([(Repeat(5, (Flip(0, 1),)),), (See(1),)]), "finish-ownership"
    )
    assert not ok
    assert detail["prisoner"] == 1
    assert detail["detail"] == "finished before owning all configurations"


def test_lemma_checker_guards():
    inst = two_switch_prisoner_at_a_time(2, 2)
    with pytest.raises(ValueError):
        check_ownership_lemma(inst, "nonsense")
    with pytest.raises(ResourceLimitError) as exc:
        check_ownership_lemma(inst, "declare-ownership", node_cap=5)
    assert exc.value.partial["states"] > 5
