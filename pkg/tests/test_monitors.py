"""Invariant monitors: registry wiring and exhaustive runs, clean and mutated."""

import pytest

from lockstep.acceptance import mutant_missing_gate, mutant_short_ready_count
from lockstep.errors import UsageError
from lockstep.monitors import (
    MONITORS,
    OWNERSHIP_MONITORS,
    DoneFrozenMonitor,
    monitors_for,
    run_monitor,
)
from lockstep.protocols import (
    build_instance,
    room_at_a_time_six,
    three_config_prob1,
    two_config_prob_eps,
    two_switch_prisoner_at_a_time,
    two_switch_room_at_a_time,
)


def test_registry_is_consistent():
    for ident, (families, cls) in MONITORS.items():
        mon = cls()
        assert mon.ident == ident
        assert mon.kind in ("state", "transition")
        assert families


def test_monitors_for_family_selection():
    def idents(inst):
        return sorted(mon.ident for mon in monitors_for(inst))

    assert idents(two_switch_prisoner_at_a_time(2, 2)) == [
        "exhausted-count",
        "single-active",
    ]
    assert idents(build_instance("two-switch-prisoner-repeated", n=2, r=2, ell=2)) == [
        "exhausted-count",
        "single-active",
    ]
    assert idents(two_switch_room_at_a_time(2, 3)) == ["done-frozen", "phase-rooms"]
    assert idents(build_instance("two-switch-room-multi-declare", n=2, r=3)) == [
        "phase-rooms"
    ]
    assert idents(room_at_a_time_six(2, 2)) == ["done-frozen"]
    assert idents(three_config_prob1(2, 2)) == ["active-claims", "phase-snapshots"]
    assert idents(two_config_prob_eps(2, 2)) == ["imbalance-ledger"]
    # Handwritten or transformed families without registrations run bare.
    assert monitors_for(build_instance("two-switch-prisoner-forced-flip", n=2, r=2)) == []


HOME_INSTANCES = [
    ("single-active", lambda: two_switch_prisoner_at_a_time(2, 2)),
    ("exhausted-count", lambda: two_switch_prisoner_at_a_time(2, 2)),
    ("phase-rooms", lambda: two_switch_room_at_a_time(2, 3)),
    ("done-frozen", lambda: room_at_a_time_six(2, 2)),
    ("active-claims", lambda: three_config_prob1(2, 2)),
    ("phase-snapshots", lambda: three_config_prob1(2, 2)),
    ("imbalance-ledger", lambda: two_config_prob_eps(2, 2)),
]


@pytest.mark.parametrize("ident,build", HOME_INSTANCES, ids=[i for i, _ in HOME_INSTANCES])
def test_registered_invariants_hold_exhaustively(ident, build):
    passed, result = run_monitor(build(), ident)
    assert passed
    assert result.monitor_ok and result.complete


def test_ownership_idents_route_to_lemma_checker():
    inst = two_switch_prisoner_at_a_time(2, 2)
    for ident in OWNERSHIP_MONITORS:
        passed, detail = run_monitor(inst, ident)
        assert passed
        assert detail == {"lemma": ident, "states": 49}


def test_run_monitor_rejects_unknown_or_misapplied():
    inst = two_switch_prisoner_at_a_time(2, 2)
    with pytest.raises(UsageError, match="unknown invariant"):
        run_monitor(inst, "bogus")
    with pytest.raises(UsageError, match="not registered"):
        run_monitor(inst, "imbalance-ledger")


def test_done_frozen_flags_a_reconfigured_room():
    inst = room_at_a_time_six(2, 2)
    done = inst.config_index("DONE")
    effect = (0, 0, done, 0, True, False)
    assert DoneFrozenMonitor().check(inst, None, effect, None) is not None
    assert DoneFrozenMonitor().check(inst, None, (0, 0, done, done, False, False), None) is None


# -- mutants ------------------------------------------------------------------


def test_short_ready_count_mutant_is_caught():
    passed, result = run_monitor(mutant_short_ready_count(), "single-active")
    assert not passed
    # The premature declaration trips plain safety before any shape claim.
    assert not result.safe
    assert result.violation == "prisoner 0 declares without the win condition"
    assert result.counterexample


def test_missing_gate_mutant_breaks_handover_snapshot():
    passed, result = run_monitor(mutant_missing_gate(), "phase-snapshots")
    assert not passed
    assert not result.monitor_ok
    assert result.violation == (
        "phase-snapshots: prisoner 1 off the reset/gate steps at handover"
    )
    assert len(result.counterexample) == 12
