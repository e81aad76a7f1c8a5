"""Per-family invariant monitors evaluated inside exhaustive exploration.

State monitors look at one reachable world; transition monitors look at one
edge (previous world, the visit effect, new world). All return None when the
invariant holds and a short description of the violation otherwise. The
registry maps stable invariant identifiers to the families they apply to.
"""

from __future__ import annotations

from .core import Declare, Flip, Oscillate, See
from .errors import UsageError
from .protocols import ProtocolInstance


class _Layout33:
    """Cursor landmarks of the prisoner-at-a-time programs."""

    def __init__(self, inst: ProtocolInstance):
        ell = inst.meta.get("ell", 1)
        self.tour = 2 * inst.r * ell  # flat steps spent touring
        self.n = inst.n

    def leader_active(self, ps) -> bool:
        return not ps.declared and ps.cursor <= self.tour

    def other_active(self, ps) -> bool:
        return 1 <= ps.cursor <= self.tour + 1

    def exhausted(self, i: int, ps) -> bool:
        if i == 0:
            return ps.declared or ps.cursor >= self.tour + 1
        return ps.cursor >= self.tour + 2


class SingleActiveMonitor:
    """Every reachable state is in exactly one of the two stable shapes:
    all rooms in {0, 1} with exactly one active prisoner, or a lone NEXT or
    READY baton among all-zero rooms with nobody active."""

    ident = "single-active"
    kind = "state"

    def check(self, inst: ProtocolInstance, world) -> str | None:
        lay = _Layout33(inst)
        actives = 0
        for i, ps in enumerate(world.prisoners):
            if i == 0:
                actives += lay.leader_active(ps)
            else:
                actives += lay.other_active(ps)
        batons = [c for c in world.rooms if c >= 2]
        if not batons:
            if actives != 1:
                return f"no baton but {actives} active prisoners"
            return None
        if len(batons) > 1:
            return f"{len(batons)} baton rooms at once"
        if any(c == 1 for c in world.rooms):
            return "baton coexists with a half-toured room"
        if actives != 0:
            return f"baton present but {actives} active prisoners"
        return None


class ExhaustedCountMonitor:
    """The k-th baton the leader converts to READY certifies exactly k
    exhausted prisoners."""

    ident = "exhausted-count"
    kind = "transition"

    def check(self, inst: ProtocolInstance, prev, effect, world) -> str | None:
        p, _room, _obs, _wr, fired, _dec = effect
        if p != 0 or not fired:
            return None
        lay = _Layout33(inst)
        before = prev.prisoners[0].cursor
        if not (lay.tour + 1 <= before < lay.tour + 1 + inst.n):
            return None
        k = before - lay.tour
        done = sum(lay.exhausted(i, ps) for i, ps in enumerate(world.prisoners))
        if done != k:
            return f"conversion {k} but {done} exhausted prisoners"
        return None


class PhaseRoomsMonitor:
    """Room partitioning of the leader-paced room-at-a-time protocol: each
    leader cursor position carries a tag describing which shapes the rooms
    may take and how many rooms are retired."""

    ident = "phase-rooms"
    kind = "state"

    Z, O, UP, DONE = 0, 1, 2, 3

    def check(self, inst: ProtocolInstance, world) -> str | None:
        tags = inst.meta["leader_tags"]
        leader = world.prisoners[inst.leader]
        if leader.declared or leader.cursor >= len(tags):
            return None
        tag, j = tags[leader.cursor]
        if tag == "end":
            return None
        rooms = world.rooms
        done = sum(1 for c in rooms if c == self.DONE)
        if tag == "idle":
            if any(c not in (self.Z, self.DONE) for c in rooms):
                return "idle leader but rooms not settled at 0/DONE"
            if done != 2 * (j - 1):
                return f"idle before round {j} but {done} rooms retired"
            return None
        if tag in ("p0", "p1"):
            counting = (self.O, self.UP) if tag == "p0" else (self.Z, self.UP)
            settled = self.Z if tag == "p0" else self.O
            if sum(1 for c in rooms if c in counting) != 1:
                return f"{tag}: not exactly one counting room"
            if any(c not in (settled, self.DONE) for c in rooms if c not in counting):
                return f"{tag}: spectator room outside settled shapes"
            want = 2 * j - 2 if tag == "p0" else 2 * j - 1
            if done != want:
                return f"{tag} round {j}: {done} retired rooms, expected {want}"
            forbidden = self.Z if tag == "p0" else self.O
            for i, ps in enumerate(world.prisoners):
                if i == inst.leader or ps.declared:
                    continue
                prog = inst.programs[i]
                if ps.cursor < len(prog.steps):
                    step = prog.steps[ps.cursor]
                    if isinstance(step, Flip) and step.src == self.UP and step.dst == forbidden:
                        return f"{tag}: prisoner {i} poised to revert the counting room"
            return None
        if tag in ("t0", "t1"):
            if any(c == self.UP for c in rooms):
                return f"{tag}: UP present during a transition"
            want = 2 * j - 1 if tag == "t0" else 2 * j
            if done != want:
                return f"{tag} round {j}: {done} retired rooms, expected {want}"
            return None
        return None


class DoneFrozenMonitor:
    """Retired rooms stay retired."""

    ident = "done-frozen"
    kind = "transition"

    def check(self, inst: ProtocolInstance, prev, effect, world) -> str | None:
        done = inst.config_names.index("DONE")
        _p, _room, observed, written, _fired, _dec = effect
        if observed == done and written != done:
            return "a retired room was reconfigured"
        return None


class ActiveClaimsMonitor:
    """Single-active and phase-shape claims of the three-config handover
    protocol, checked per state."""

    ident = "active-claims"
    kind = "state"

    PHASE_ROOMS = ({0, 1}, {1, 2}, {2, 0})

    def check(self, inst: ProtocolInstance, world) -> str | None:
        regions = inst.meta["regions"]
        active = []
        for i, ps in enumerate(world.prisoners):
            reg = regions[i]
            if ps.declared:
                continue
            start = reg["phase_start"]
            if start <= ps.cursor < start + 3 * reg["phase_len"]:
                active.append(i)
        if len(active) > 1:
            return f"{len(active)} active prisoners"
        if not active:
            allowed = {0, 1}
        else:
            i = active[0]
            reg = regions[i]
            phase = (world.prisoners[i].cursor - reg["phase_start"]) // reg["phase_len"]
            allowed = self.PHASE_ROOMS[phase]
        bad = [c for c in world.rooms if c not in allowed]
        if bad:
            return f"rooms {bad} outside phase shapes {sorted(allowed)}"
        return None


class PhaseSnapshotMonitor:
    """Phase-boundary snapshots of the three-config handover protocol: what
    every other prisoner must be executing the instant a phase begins, and
    that prisoners take their active turns in index order."""

    ident = "phase-snapshots"
    kind = "transition"

    def check(self, inst: ProtocolInstance, prev, effect, world) -> str | None:
        p, _room, _obs, _wr, fired, _dec = effect
        if not fired:
            return None
        regions = inst.meta["regions"]
        reg = regions[p]
        start, L = reg["phase_start"], reg["phase_len"]
        before = prev.prisoners[p].cursor
        after = world.prisoners[p].cursor
        if before == after:
            return None
        if after == start and before < start:
            # this prisoner just became active; turns must come in order
            for j, ps in enumerate(world.prisoners):
                jr = regions[j]
                if j < p and ps.cursor < jr["phase_start"] + 3 * jr["phase_len"]:
                    return f"prisoner {p} active before predecessor {j} finished"
                if j > p and ps.cursor >= jr["phase_start"]:
                    return f"successor {j} already active when {p} starts"
            return None
        if after == start + L:
            return self._snapshot(inst, world, p, want_rooms=1, step=(Flip, 2, 1))
        if after == start + 2 * L:
            return self._snapshot(inst, world, p, want_rooms=2, step=(Flip, 0, 2))
        if reg["osc_pos"] is not None and after == reg["osc_pos"] and before < after:
            return self._handover(inst, world, p)
        return None

    def _snapshot(self, inst, world, active, want_rooms, step):
        if any(c != want_rooms for c in world.rooms):
            return f"phase start: rooms not uniformly {want_rooms}"
        cls, src, dst = step
        for i, ps in enumerate(world.prisoners):
            if i == active or ps.declared:
                continue
            prog = inst.programs[i]
            if ps.cursor >= len(prog.steps):
                return f"prisoner {i} already finished at a phase start"
            cur = prog.steps[ps.cursor]
            if not (isinstance(cur, cls) and cur.src == src and cur.dst == dst):
                return f"prisoner {i} not on the expected {src}->{dst} flip"
        return None

    def _handover(self, inst, world, active):
        if any(c != 0 for c in world.rooms):
            return "handover: rooms not all reset"
        gate = 0
        for i, ps in enumerate(world.prisoners):
            if i == active or ps.declared:
                continue
            prog = inst.programs[i]
            if ps.cursor >= len(prog.steps):
                return f"prisoner {i} already finished at handover"
            cur = prog.steps[ps.cursor]
            if isinstance(cur, See) and cur.target == 1:
                gate += 1
            elif not (isinstance(cur, Flip) and cur.src == 1 and cur.dst == 0):
                return f"prisoner {i} off the reset/gate steps at handover"
        if gate > 1:
            return f"{gate} prisoners waiting on the activation gate"
        return None


class ImbalanceMonitor:
    """Flip ledger of the two-config protocol: the summed imbalance equals
    the number of raised rooms, and each prisoner's imbalance tracks the
    phase facts (positive mid-protocol, -1 exactly when finished)."""

    ident = "imbalance-ledger"
    kind = "state"

    def check(self, inst: ProtocolInstance, world) -> str | None:
        tables = inst.meta["imbalance"]
        marks = inst.meta["marks"]
        total = 0
        for i, ps in enumerate(world.prisoners):
            imb = tables[i][ps.cursor]
            total += imb
            last = i == inst.n - 1
            length = len(inst.programs[i].steps)
            if not last and ps.cursor == length:
                if imb != -1:
                    return f"prisoner {i} finished with imbalance {imb}"
                continue
            if imb < 0:
                return f"prisoner {i} imbalance {imb} before finishing"
            floor = 1 if i >= 1 else 0
            if 1 <= ps.cursor <= marks[i]["cooldown_from"] and imb < floor:
                return f"prisoner {i} imbalance {imb} during startup/check"
        raised = sum(1 for c in world.rooms if c == 1)
        if total != raised:
            return f"summed imbalance {total} != {raised} raised rooms"
        return None


MONITORS: dict[str, tuple[tuple[str, ...], type]] = {
    "single-active": (
        ("two-switch-prisoner", "two-switch-prisoner-repeated"),
        SingleActiveMonitor,
    ),
    "exhausted-count": (
        ("two-switch-prisoner", "two-switch-prisoner-repeated"),
        ExhaustedCountMonitor,
    ),
    "phase-rooms": (
        ("two-switch-room", "two-switch-room-multi-declare"),
        PhaseRoomsMonitor,
    ),
    "done-frozen": (
        ("room-at-a-time-six", "two-switch-room"),
        DoneFrozenMonitor,
    ),
    "active-claims": (("prob1-3config",), ActiveClaimsMonitor),
    "phase-snapshots": (("prob1-3config",), PhaseSnapshotMonitor),
    "imbalance-ledger": (("two-config-prob-eps",), ImbalanceMonitor),
}

OWNERSHIP_MONITORS = ("declare-ownership", "finish-ownership")


def monitors_for(instance: ProtocolInstance) -> list:
    """All registered monitors applicable to this instance's family."""
    return [
        cls()
        for families, cls in MONITORS.values()
        if instance.family in families
    ]


def run_monitor(instance: ProtocolInstance, invariant_id: str, *, node_cap=None):
    """Evaluate one registered invariant exhaustively.

    Returns (passed, detail) where detail is the exploration result or, for
    the ownership lemmas, the ownership exploration report.
    """
    if invariant_id in OWNERSHIP_MONITORS:
        from .ownership import check_ownership_lemma

        return check_ownership_lemma(instance, invariant_id, node_cap=node_cap)
    entry = MONITORS.get(invariant_id)
    if entry is None:
        known = ", ".join(sorted(list(MONITORS) + list(OWNERSHIP_MONITORS)))
        raise UsageError(f"unknown invariant {invariant_id!r}; known: {known}")
    families, cls = entry
    if instance.family not in families:
        raise UsageError(
            f"invariant {invariant_id!r} is not registered for family {instance.family!r}"
        )
    from .verifier import explore

    result = explore(instance, monitors=[cls()], node_cap=node_cap)
    return result.monitor_ok and result.safe, result
