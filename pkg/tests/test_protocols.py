"""Protocol constructors: exact program shapes, metadata, and registry rules."""

import pytest

from lockstep.core import Declare, Flip, FlipNotIn, Oscillate, Program, Repeat, See
from lockstep.errors import ConstructionError, UnsupportedParameterError, UsageError
from lockstep.protocols import (
    AllMustDeclare,
    AllRoomsAllPrisoners,
    AtLeastOneRoom,
    Guarantee,
    PROTOCOLS,
    arbitrary_start_wrapper,
    at_least_one_room,
    build_instance,
    forced_flip_transform,
    one_room_known,
    one_room_unknown,
    room_at_a_time_six,
    sequential_chain,
    three_config_knowledge,
    three_config_prob1,
    two_config_prob_eps,
    two_rooms_three_configs,
    two_switch_prisoner_at_a_time,
    two_switch_room_at_a_time,
    with_multiple_declarations,
    with_repeated_entries,
)


def test_one_room_known_shapes():
    solo = one_room_known(1)
    assert solo.programs[0].steps == (See(0), Declare())

    inst = one_room_known(3)
    assert inst.programs[0].steps == (Flip(1, 0), Flip(1, 0), Declare())
    assert all(p.steps == (Flip(0, 1),) for p in inst.programs[1:])
    assert inst.guarantee is Guarantee.WINNING
    assert one_room_known(3, 4).guarantee is None  # replayed per-room: no claim


def test_one_room_unknown_double_counts():
    inst = one_room_unknown(3)
    assert inst.programs[0].steps == (Flip(1, 0),) * 4 + (Declare(),)
    assert all(p.steps == (Flip(0, 1),) * 2 for p in inst.programs[1:])
    assert inst.guarantee is Guarantee.WINNING
    assert one_room_unknown(2, 3).guarantee is None


def test_at_least_one_room_oversends():
    inst = at_least_one_room(3, 2)
    assert inst.programs[0].steps == (Flip(1, 0),) * 6 + (Declare(),)
    assert all(p.steps == (Flip(0, 1),) * 3 for p in inst.programs[1:])
    assert isinstance(inst.default_win, AtLeastOneRoom)


def test_sequential_chain_advances_configs():
    inst = sequential_chain(3, 2)
    assert inst.m == 4 and inst.leader == 2
    assert inst.programs[0].steps == (Flip(0, 1),) * 2
    assert inst.programs[1].steps == (Flip(1, 2),) * 2
    assert inst.programs[2].steps == (Flip(2, 3),) * 2 + (Declare(),)


def test_room_at_a_time_six_round_structure():
    inst = room_at_a_time_six(2, 2)
    assert inst.config_names == ("OFF", "DONE", "0", "1", "0'", "1'")
    round_ = (Flip(0, 2), Flip(3, 2), Flip(2, 4), Flip(5, 4), Flip(4, 1))
    assert inst.programs[0].steps == round_ * 2 + (Declare(),)
    assert inst.programs[1].steps == (Flip(2, 3), Flip(4, 5)) * 2


def test_two_switch_prisoner_flat_programs():
    inst = two_switch_prisoner_at_a_time(2, 2)
    up, down = Flip(0, 1), Flip(1, 0)
    assert inst.programs[0].steps == (
        up, up, down, down, Flip(0, 2), Flip(2, 3), Flip(2, 3), Declare(),
    )
    assert inst.programs[1].steps == (Flip(3, 0), up, up, down, down, Flip(0, 2))
    assert inst.config_names == ("0", "1", "NEXT", "READY")
    assert inst.meta["ell"] == 1


def test_two_switch_room_leader_tags():
    inst = two_switch_room_at_a_time(2, 5)
    leader = inst.programs[0]
    assert len(leader.steps) == 19
    expected = (
        ("idle", 1), ("p0", 1),
        ("t0", 1), ("t0", 1), ("t0", 1), ("t0", 1), ("t0", 1),
        ("p1", 1),
        ("t1", 1), ("t1", 1), ("t1", 1),
        ("idle", 2), ("p0", 2),
        ("t0", 2), ("t0", 2), ("t0", 2),
        ("p1", 2),
        ("t1", 2),
        ("end", 0),
    )
    assert inst.meta["leader_tags"] == expected
    # Each non-leader runs (r-1)/2 wait rounds of 2n sightings + 2 writes.
    assert len(inst.programs[1].steps) == 2 * (2 * 2 + 1) * 2


@pytest.mark.parametrize("n,r", [(2, 2), (2, 4), (3, 2), (1, 3)])
def test_two_switch_room_rejects_even_or_tiny_rooms(n, r):
    with pytest.raises(UnsupportedParameterError):
        two_switch_room_at_a_time(n, r)


def test_prob1_regions_and_handoffs():
    inst = three_config_prob1(2, 2)
    assert inst.leader == 1
    first, second = inst.programs
    assert len(first.steps) == 13 and len(second.steps) == 14
    assert isinstance(first.steps[9], Oscillate)
    assert isinstance(second.steps[3], See) and second.steps[3].target == 1
    assert isinstance(second.steps[13], Declare)
    assert inst.meta["regions"] == (
        {"phase_start": 0, "phase_len": 3, "osc_pos": 9, "declare_pos": None},
        {"phase_start": 4, "phase_len": 3, "osc_pos": None, "declare_pos": 13},
    )


def test_prob_eps_imbalance_tables():
    inst = two_config_prob_eps(2, 2)
    assert inst.meta["imbalance"] == (
        (0, 1, 2, 1, 0, 1, 2, 1, 0, -1),
        (0, 1, 2, 3, 2, 1, 2, 3, 3),
    )
    assert inst.meta["marks"] == (
        {"startup_end": 2, "check_end": 6, "cooldown_from": 6},
        {"startup_end": 3, "check_end": 7, "cooldown_from": 7},
    )


@pytest.mark.parametrize("n,r", [(2, 2), (2, 3), (3, 2), (3, 4)])
def test_prob_eps_peaks_at_full_raise(n, r):
    # Cursor r+k tops the raise phase; the re-check at 3r+k returns there.
    inst = two_config_prob_eps(n, r)
    for k, table in enumerate(inst.meta["imbalance"]):
        assert table[r + k] == r + k
        assert table[3 * r + k] == r + k


def test_two_rooms_pins_one_room():
    inst = two_rooms_three_configs(3)
    assert inst.r == 2
    assert inst.programs[0].steps == (
        Flip(0, 2), Flip(1, 0), Flip(1, 0), Declare(),
    )
    assert all(p.steps == (See(2), Flip(0, 1)) for p in inst.programs[1:])


def test_knowledge_protocol_shares_one_body():
    inst = three_config_knowledge(2, 2)
    assert inst.guarantee is Guarantee.KNOWLEDGE_ONLY
    common = (Flip(2, 0), Flip(0, 1), Flip(0, 1), Flip(1, 0), Flip(1, 0), Flip(0, 2))
    assert inst.programs[0].steps == (Flip(0, 2),) + common
    assert inst.programs[1].steps == common


# -- transforms ---------------------------------------------------------------


def test_repeated_entries_doubles_tours():
    base = two_switch_prisoner_at_a_time(2, 2)
    inst = with_repeated_entries(base, 2)
    assert inst.family == "two-switch-prisoner-repeated"
    assert inst.meta["ell"] == 2
    assert inst.default_win == AllRoomsAllPrisoners(min_visits=2)
    assert len(inst.programs[0].steps) == 2 * 4 + 1 + 2 + 1
    with pytest.raises(ConstructionError):
        with_repeated_entries(inst, 2)


def test_multiple_declarations_appends_sightings():
    base = two_switch_room_at_a_time(2, 3)
    inst = with_multiple_declarations(base)
    UP = 2
    assert isinstance(inst.default_win, AllMustDeclare)
    assert inst.programs[0].steps[-2:] == (Flip(3, UP), Declare())
    assert inst.programs[1].steps[-2:] == (See(UP), Declare())
    assert len(inst.meta["leader_tags"]) == len(inst.programs[0].steps)
    with pytest.raises(ConstructionError):
        with_multiple_declarations(two_switch_prisoner_at_a_time(2, 2))


def test_forced_flip_doubles_configurations():
    base = two_switch_prisoner_at_a_time(2, 2)
    inst = forced_flip_transform(base)
    assert inst.m == 8 and inst.forced_flip
    assert inst.start == (0, 0)
    assert inst.config_names[:4] == ("0a", "0b", "1a", "1b")
    assert inst.base_m == 4
    with pytest.raises(ConstructionError):
        forced_flip_transform(inst)


def test_arbitrary_start_wrapper_guards():
    base = two_switch_prisoner_at_a_time(2, 2)
    wrapped = arbitrary_start_wrapper(base, (2, 3))
    assert wrapped.family == "two-switch-prisoner-anystart"
    assert wrapped.start == (2, 3)
    assert wrapped.meta["cleanup_counts"] == (2, 3, 1)
    first = wrapped.programs[0].steps[0]
    assert isinstance(first, FlipNotIn) and first.excluded == frozenset({0, 1})

    with pytest.raises(ConstructionError):
        arbitrary_start_wrapper(forced_flip_transform(base), (0, 0))
    with pytest.raises(ConstructionError):
        arbitrary_start_wrapper(base.with_start((1, 0)), (0, 0))
    with pytest.raises(ConstructionError):
        # Non-leaders here open with Flip(0,1), which cleanup traffic would fire.
        arbitrary_start_wrapper(one_room_known(2, 2), (0, 0))
    with pytest.raises(ConstructionError):
        arbitrary_start_wrapper(base, (0,))
    with pytest.raises(ConstructionError):
        arbitrary_start_wrapper(base, (0, 9))


# -- registry -----------------------------------------------------------------


def test_registry_resolves_and_rejects():
    inst = build_instance("two-switch-prisoner", n=2, r=2)
    assert inst.family == "two-switch-prisoner"

    with pytest.raises(UsageError, match="unknown protocol"):
        build_instance("nope", n=2)
    with pytest.raises(UsageError, match="--r"):
        build_instance("two-switch-prisoner", n=2)
    with pytest.raises(UnsupportedParameterError):
        build_instance("two-switch-room-multi-declare", n=2, r=2)


def test_registry_anystart_accepts_config_names():
    inst = build_instance(
        "two-switch-prisoner-anystart", n=2, r=2, start=("NEXT", "READY")
    )
    assert inst.start == (2, 3)


def test_registry_ids_are_buildable():
    defaults = {"n": 2, "r": 3, "ell": 2, "start": (0, 0, 0)}
    for pid, entry in PROTOCOLS.items():
        kwargs = {name: defaults[name] for name in entry.params}
        inst = entry.build(**kwargs)
        assert inst.n == 2
        assert entry.description


def test_instance_validation():
    with pytest.raises(ConstructionError):
        two_switch_prisoner_at_a_time(2, 2).with_start((0,))
    with pytest.raises(ConstructionError):
        two_switch_prisoner_at_a_time(2, 2).with_start((0, 9))
    inst = two_switch_prisoner_at_a_time(2, 2)
    with pytest.raises(UsageError):
        inst.config_index("BOGUS")
    assert inst.config_index("READY") == 3
