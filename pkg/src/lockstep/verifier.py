"""Single-run simulation and exhaustive joint-state exploration.

The explorer packs one world state (room configurations, interned cursor
states, capped per-room visit counters) into a single integer and runs a
breadth-first closure over all n*r warden choices. Verdicts:

  safe      no reachable incorrect declaration
  prob_eps  safe and some correct declaration is reachable
  prob1     safe and every reachable state can still reach one
  live      safe and no fair schedule can avoid one forever

Liveness is certified on the finite graph: a fair infinite run that never
declares can exist iff some strongly connected component of the non-winning
subgraph has, for every (prisoner, room) pair, at least one edge with that
label staying inside the component (the scheduler parks each obligation on a
state where it is harmless). We search for such a component directly.
"""

from __future__ import annotations

import os
import time
from array import array
from dataclasses import dataclass, field

from .core import PrisonerState, Program, initial_state, visit
from .errors import ResourceLimitError, UsageError
from .protocols import (
    AllMustDeclare,
    AllRoomsAllPrisoners,
    AtLeastOneRoom,
    Guarantee,
    ProtocolInstance,
    WinCondition,
)

DEFAULT_NODE_CAP = 10_000_000


def _node_cap(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("LOCKSTEP_NODE_CAP")
    return int(env) if env else DEFAULT_NODE_CAP


# ---------------------------------------------------------------------------
# Run-level types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VisitRecord:
    step: int
    prisoner: int
    room: int
    observed: int
    written: int
    fired: bool
    declared: bool
    correct: bool | None = None


@dataclass(frozen=True)
class Outcome:
    kind: str  # DeclaredCorrect | DeclaredIncorrect | StepLimit
    step: int
    prisoner: int | None = None


@dataclass(frozen=True)
class World:
    """What an omniscient warden sees between visits."""

    rooms: tuple[int, ...]
    prisoners: tuple[PrisonerState, ...]
    visits: tuple[tuple[int, ...], ...]


@dataclass
class SimulationResult:
    outcome: Outcome
    records: list[VisitRecord]
    world: World

    @property
    def declarations(self) -> list[VisitRecord]:
        return [rec for rec in self.records if rec.declared]


def _win_holds(win: WinCondition, visits, n: int, r: int) -> bool:
    if isinstance(win, AllRoomsAllPrisoners):
        need = win.min_visits
        return all(visits[p][room] >= need for p in range(n) for room in range(r))
    if isinstance(win, AtLeastOneRoom):
        return all(any(visits[p][room] > 0 for room in range(r)) for p in range(n))
    if isinstance(win, AllMustDeclare):
        return all(visits[p][room] > 0 for p in range(n) for room in range(r))
    raise TypeError(f"unknown win condition {win!r}")


def step_world(
    instance: ProtocolInstance,
    rooms: list[int],
    pstates: list[PrisonerState],
    prisoner: int,
    room: int,
):
    """Apply one visit in place; returns (observed, written, fired, declared)."""
    observed = rooms[room]
    base_obs = observed >> 1 if instance.forced_flip else observed
    state2, out = visit(pstates[prisoner], instance.programs[prisoner], base_obs)
    if instance.forced_flip:
        written = (out.new_config << 1) | ((observed & 1) ^ 1)
    else:
        written = out.new_config
    rooms[room] = written
    pstates[prisoner] = state2
    return observed, written, out.fired, out.declared


def simulate(
    instance: ProtocolInstance,
    scheduler,
    *,
    win: WinCondition | None = None,
    max_steps: int = 100_000,
) -> SimulationResult:
    """Drive one run: the scheduler picks (prisoner, room) each step.

    Stops at the first declaration, or in AllMustDeclare mode once every
    prisoner has declared (an incorrect declaration stops immediately), or at
    max_steps, or when the scheduler returns None.
    """
    if max_steps < 1:
        raise UsageError("max_steps must be at least 1")
    win = win if win is not None else instance.default_win
    n, r = instance.n, instance.r
    rooms = list(instance.start)
    pstates = [initial_state(prog) for prog in instance.programs]
    visits = [[0] * r for _ in range(n)]
    records: list[VisitRecord] = []
    all_declare = isinstance(win, AllMustDeclare)

    def snapshot() -> World:
        return World(tuple(rooms), tuple(pstates), tuple(tuple(row) for row in visits))

    step = 0
    while step < max_steps:
        event = scheduler.next(snapshot(), step)
        if event is None:
            break
        prisoner, room = event
        if not (0 <= prisoner < n and 0 <= room < r):
            raise UsageError(f"scheduler produced out-of-range event {event}")
        observed, written, fired, declared = step_world(
            instance, rooms, pstates, prisoner, room
        )
        visits[prisoner][room] += 1
        correct = _win_holds(win, visits, n, r) if declared else None
        records.append(
            VisitRecord(step, prisoner, room, observed, written, fired, declared, correct)
        )
        step += 1
        if declared:
            if not correct:
                return SimulationResult(
                    Outcome("DeclaredIncorrect", step, prisoner), records, snapshot()
                )
            if not all_declare:
                return SimulationResult(
                    Outcome("DeclaredCorrect", step, prisoner), records, snapshot()
                )
            if all(ps.declared for ps in pstates):
                return SimulationResult(
                    Outcome("DeclaredCorrect", step, prisoner), records, snapshot()
                )
    return SimulationResult(Outcome("StepLimit", step), records, snapshot())


# ---------------------------------------------------------------------------
# Packed-state machinery shared by the explorer
# ---------------------------------------------------------------------------


class _Machine:
    """Interns PrisonerStates and memoizes visit() per (prisoner, code, obs).

    State layout, least significant first: r room fields, n prisoner-code
    fields, n visit fields (base cap+1 digits, one per room, saturating).
    """

    PCODE_BITS = 12

    def __init__(self, instance: ProtocolInstance, cap: int):
        self.inst = instance
        self.n, self.r, self.m = instance.n, instance.r, instance.m
        self.base_m = instance.base_m
        self.cap = cap
        self.room_bits = max((self.m - 1).bit_length(), 1)
        self.room_mask = (1 << self.room_bits) - 1
        self.pcode_mask = (1 << self.PCODE_BITS) - 1
        self.vis_bits = max((((cap + 1) ** self.r) - 1).bit_length(), 1)
        self.vis_mask = (1 << self.vis_bits) - 1
        self.room_shift = [i * self.room_bits for i in range(self.r)]
        base = self.r * self.room_bits
        self.p_shift = [base + i * self.PCODE_BITS for i in range(self.n)]
        base += self.n * self.PCODE_BITS
        self.v_shift = [base + i * self.vis_bits for i in range(self.n)]
        self.pow = [(cap + 1) ** i for i in range(self.r)]
        self.full_row = (cap + 1) ** self.r - 1  # every digit saturated
        self.decode_ps: list[list[PrisonerState]] = []
        self.encode_ps: list[dict[PrisonerState, int]] = []
        self.table: list[list] = []  # table[p][code][obs] -> (ncode, written, fired, declared) | None
        self.acting: list[list[bool | None]] = []
        for prog in instance.programs:
            init = initial_state(prog)
            self.decode_ps.append([init])
            self.encode_ps.append({init: 0})
            self.table.append([[None] * self.base_m])
            self.acting.append([None])

    def initial(self) -> int:
        st = 0
        for room, c in enumerate(self.inst.start):
            st |= c << self.room_shift[room]
        return st

    def step(self, p: int, code: int, obs: int):
        """Memoized base-config transition; returns (ncode, written, fired, declared)."""
        entry = self.table[p][code][obs]
        if entry is None:
            ps = self.decode_ps[p][code]
            ns, out = visit(ps, self.inst.programs[p], obs)
            ncode = self.encode_ps[p].get(ns)
            if ncode is None:
                ncode = len(self.decode_ps[p])
                if ncode > self.pcode_mask:
                    raise ResourceLimitError("prisoner state space exceeds packing width")
                self.encode_ps[p][ns] = ncode
                self.decode_ps[p].append(ns)
                self.table[p].append([None] * self.base_m)
                self.acting[p].append(None)
            entry = (ncode, out.new_config, out.fired, out.declared)
            self.table[p][code][obs] = entry
        return entry

    def can_act(self, p: int, code: int) -> bool:
        """Whether this prisoner could ever mutate a room or declare again."""
        cached = self.acting[p][code]
        if cached is None:
            graph = self.inst.programs[p].cursor_graph(self.base_m)
            cached = graph.can_ever_act(self.decode_ps[p][code])
            self.acting[p][code] = cached
        return cached

    # -- field access -------------------------------------------------------

    def room(self, st: int, room: int) -> int:
        return (st >> self.room_shift[room]) & self.room_mask

    def pcode(self, st: int, p: int) -> int:
        return (st >> self.p_shift[p]) & self.pcode_mask

    def vis(self, st: int, p: int) -> int:
        return (st >> self.v_shift[p]) & self.vis_mask

    def decode(self, st: int):
        rooms = tuple(self.room(st, i) for i in range(self.r))
        prisoners = tuple(self.decode_ps[p][self.pcode(st, p)] for p in range(self.n))
        visits = []
        for p in range(self.n):
            v = self.vis(st, p)
            row = []
            for _ in range(self.r):
                row.append(v % (self.cap + 1))
                v //= self.cap + 1
            visits.append(tuple(row))
        return World(rooms, prisoners, tuple(visits))

    def encode_world(self, world: World) -> int | None:
        """Pack a World (visit counts capped); None if a cursor state is unknown."""
        st = 0
        for room, c in enumerate(world.rooms):
            st |= c << self.room_shift[room]
        for p, ps in enumerate(world.prisoners):
            code = self.encode_ps[p].get(ps)
            if code is None:
                return None
            st |= code << self.p_shift[p]
        for p in range(self.n):
            v = 0
            for room in range(self.r):
                v += min(world.visits[p][room], self.cap) * self.pow[room]
            st |= v << self.v_shift[p]
        return st

    def win_holds(self, st: int, win: WinCondition) -> bool:
        if isinstance(win, AllRoomsAllPrisoners | AllMustDeclare):
            return all(self.vis(st, p) == self.full_row for p in range(self.n))
        if isinstance(win, AtLeastOneRoom):
            return all(self.vis(st, p) != 0 for p in range(self.n))
        raise TypeError(f"unknown win condition {win!r}")


def _cap_for(win: WinCondition) -> int:
    return win.min_visits if isinstance(win, AllRoomsAllPrisoners) else 1


# ---------------------------------------------------------------------------
# Exploration
# ---------------------------------------------------------------------------


@dataclass
class ExplorationResult:
    nodes: int
    edges: int
    max_depth: int
    complete: bool
    safe: bool
    live: bool
    prob_eps: bool
    prob1: bool
    monitor_ok: bool
    derived: Guarantee | None
    violation: str | None
    counterexample: list[VisitRecord] | None
    win_nodes: int
    elapsed: float
    goal: str
    _machine: _Machine = field(repr=False, default=None)
    _index: dict = field(repr=False, default=None)

    def contains(self, world: World) -> bool:
        """Whether a concrete run state appears in the explored graph."""
        st = self._machine.encode_world(world)
        return st is not None and st in self._index


def _room_symmetry_perms(start: tuple[int, ...]):
    """Permutations of room indices that fix the start configuration vector."""
    from itertools import permutations

    r = len(start)
    perms = [
        perm
        for perm in permutations(range(r))
        if all(start[perm[i]] == start[i] for i in range(r))
    ]
    return perms if len(perms) > 1 else None


def explore(
    instance: ProtocolInstance,
    win: WinCondition | None = None,
    depth_limit: int | None = None,
    *,
    node_cap: int | None = None,
    monitors=None,
    goal: str | None = None,
    symmetry: bool = False,
) -> ExplorationResult:
    """Breadth-first closure over every warden choice from the start state.

    goal "declaration" treats correctly-declared states as winning and stops
    at the first incorrect declaration; goal "all-finished" (used for
    knowledge-only protocols, which never declare) treats all-prisoners-
    finished states as winning and requires every finished prisoner to have a
    full visit row. monitors is a list of monitor objects (see monitors
    module); None selects the instance family's registered monitors.
    """
    t0 = time.monotonic()
    win = win if win is not None else instance.default_win
    if goal is None:
        goal = (
            "all-finished"
            if instance.guarantee is Guarantee.KNOWLEDGE_ONLY
            else "declaration"
        )
    if monitors is None:
        from .monitors import monitors_for

        monitors = monitors_for(instance)
    state_mons = [mon for mon in monitors if mon.kind == "state"]
    trans_mons = [mon for mon in monitors if mon.kind == "transition"]
    cap = _cap_for(win)
    mach = _Machine(instance, cap)
    n, r = instance.n, instance.r
    nlabels = n * r
    labels = [(p, room) for p in range(n) for room in range(r)]
    limit = _node_cap(node_cap)
    all_declare = isinstance(win, AllMustDeclare) and goal == "declaration"

    perms = _room_symmetry_perms(instance.start) if symmetry else None

    def canon(st: int) -> int:
        best = st
        for perm in perms[1:]:
            cand = 0
            for i in range(r):
                cand |= mach.room(st, perm[i]) << mach.room_shift[i]
            for p in range(n):
                cand |= mach.pcode(st, p) << mach.p_shift[p]
                v = mach.vis(st, p)
                nv = 0
                for i in range(r):
                    nv += ((v // mach.pow[perm[i]]) % (cap + 1)) * mach.pow[i]
                cand |= nv << mach.v_shift[p]
            if cand < best:
                best = cand
        return best

    def declared_set(st: int):
        return [p for p in range(n) if mach.decode_ps[p][mach.pcode(st, p)].declared]

    def all_finished(st: int) -> bool:
        return not any(mach.can_act(p, mach.pcode(st, p)) for p in range(n))

    def finished_rows_ok(st: int) -> int | None:
        """Prisoner index violating finished-implies-full-row, if any."""
        for p in range(n):
            if not mach.can_act(p, mach.pcode(st, p)) and mach.vis(st, p) != mach.full_row:
                return p
        return None

    init = mach.initial()
    if perms:
        init = canon(init)
    states: list[int] = [init]
    index: dict[int, int] = {init: 0}
    parent = array("l", [-1])
    via = array("h", [-1])
    depth = array("l", [0])
    succs = array("l")
    is_win = bytearray(1)
    win_count = 0
    edges = 0
    max_depth = 0
    complete = True
    safe = True
    monitor_ok = True
    violation: str | None = None
    cex_node: int | None = None
    cex_label: tuple[int, int] | None = None

    if goal == "all-finished":
        bad = finished_rows_ok(init)
        if bad is not None:
            safe = False
            violation = f"prisoner {bad} starts finished without full coverage"
            cex_node = 0
        if all_finished(init):
            is_win[0] = 1
            win_count += 1
    for mon in state_mons:
        msg = mon.check(instance, mach.decode(init))
        if msg:
            monitor_ok = False
            violation = f"{mon.ident}: {msg}"
            cex_node = 0
            break

    idx = 0
    aborted = safe is False or not monitor_ok
    while idx < len(states) and not aborted:
        st = states[idx]
        d = depth[idx]
        if d > max_depth:
            max_depth = d
        if is_win[idx]:
            succs.extend([-1] * nlabels)
            idx += 1
            continue
        if depth_limit is not None and d >= depth_limit:
            complete = False
            succs.extend([-1] * nlabels)
            idx += 1
            continue
        prev_world = mach.decode(st) if trans_mons else None
        for li in range(nlabels):
            p, room = labels[li]
            observed = (st >> mach.room_shift[room]) & mach.room_mask
            base_obs = observed >> 1 if instance.forced_flip else observed
            pcode = (st >> mach.p_shift[p]) & mach.pcode_mask
            ncode, written_base, fired, declared = mach.step(p, pcode, base_obs)
            if instance.forced_flip:
                written = (written_base << 1) | ((observed & 1) ^ 1)
            else:
                written = written_base
            nst = st + ((written - observed) << mach.room_shift[room])
            nst += (ncode - pcode) << mach.p_shift[p]
            v = (st >> mach.v_shift[p]) & mach.vis_mask
            if (v // mach.pow[room]) % (cap + 1) < cap:
                nst += mach.pow[room] << mach.v_shift[p]
            if perms:
                nst = canon(nst)
            edges += 1

            winning_edge = False
            if declared and goal == "declaration":
                correct = mach.win_holds(nst, win)
                if not correct:
                    safe = False
                    violation = f"prisoner {p} declares without the win condition"
                    cex_node = idx
                    cex_label = (p, room)
                    aborted = True
                    succs.append(-2)
                    break
                if not all_declare:
                    winning_edge = True
                else:
                    winning_edge = all(
                        mach.decode_ps[q][(nst >> mach.p_shift[q]) & mach.pcode_mask].declared
                        for q in range(n)
                    )

            ni = index.get(nst)
            if ni is None:
                if len(states) >= limit:
                    raise ResourceLimitError(
                        f"state space exceeds node cap {limit}",
                        partial={"nodes": len(states), "edges": edges},
                    )
                ni = len(states)
                index[nst] = ni
                states.append(nst)
                parent.append(idx)
                via.append(li)
                depth.append(d + 1)
                flag = 0
                if winning_edge:
                    flag = 1
                elif goal == "all-finished":
                    bad = finished_rows_ok(nst)
                    if bad is not None:
                        safe = False
                        violation = (
                            f"prisoner {bad} is finished without having visited every room"
                        )
                        cex_node = idx
                        cex_label = (p, room)
                        aborted = True
                        succs.append(ni)
                        break
                    if all_finished(nst):
                        flag = 1
                is_win.append(flag)
                if flag:
                    win_count += 1
                if state_mons and not flag:
                    view = mach.decode(nst)
                    for mon in state_mons:
                        msg = mon.check(instance, view)
                        if msg:
                            monitor_ok = False
                            violation = f"{mon.ident}: {msg}"
                            cex_node = idx
                            cex_label = (p, room)
                            aborted = True
                            break
                    if aborted:
                        succs.append(ni)
                        break
            succs.append(ni)
            if trans_mons:
                new_world = mach.decode(nst)
                effect = (p, room, observed, written, fired, declared)
                for mon in trans_mons:
                    msg = mon.check(instance, prev_world, effect, new_world)
                    if msg:
                        monitor_ok = False
                        violation = f"{mon.ident}: {msg}"
                        cex_node = idx
                        cex_label = (p, room)
                        aborted = True
                        break
                if aborted:
                    break
        if aborted:
            break
        idx += 1

    nodes = len(states)

    def replay(to_node: int, extra: tuple[int, int] | None) -> list[VisitRecord]:
        chain: list[int] = []
        cur = to_node
        while cur > 0:
            chain.append(via[cur])
            cur = parent[cur]
        chain.reverse()
        events = [labels[li] for li in chain]
        if extra is not None:
            events.append(extra)
        rooms = list(instance.start)
        pstates = [initial_state(prog) for prog in instance.programs]
        records = []
        for step, (p, room) in enumerate(events):
            observed, written, fired, declared = step_world(
                instance, rooms, pstates, p, room
            )
            records.append(
                VisitRecord(step, p, room, observed, written, fired, declared)
            )
        return records

    counterexample = None
    if cex_node is not None:
        counterexample = replay(cex_node, cex_label)

    live = False
    prob1 = False
    prob_eps = False
    trap_node = None
    if safe and monitor_ok and not aborted:
        prob_eps = win_count > 0
        if complete:
            trap_node = _find_fair_trap(succs, nlabels, nodes, is_win)
            live = trap_node is None
            if live:
                prob1 = True
            else:
                prob1 = prob_eps and _all_reach_win(succs, nlabels, nodes, is_win)
            if trap_node is not None and counterexample is None and goal == "all-finished":
                violation = "a fair schedule can stall before every prisoner finishes"
                counterexample = replay(trap_node, None)

    derived: Guarantee | None = None
    if safe and monitor_ok and complete and not aborted:
        if goal == "all-finished":
            derived = Guarantee.KNOWLEDGE_ONLY if live else None
        elif live:
            derived = Guarantee.WINNING
        elif prob1:
            derived = Guarantee.PROB1
        elif prob_eps:
            derived = Guarantee.PROB_EPS

    return ExplorationResult(
        nodes=nodes,
        edges=edges,
        max_depth=max_depth,
        complete=complete and not aborted,
        safe=safe,
        live=live,
        prob_eps=prob_eps,
        prob1=prob1,
        monitor_ok=monitor_ok,
        derived=derived,
        violation=violation,
        counterexample=counterexample,
        win_nodes=win_count,
        elapsed=time.monotonic() - t0,
        goal=goal,
        _machine=mach,
        _index=index,
    )


def _find_fair_trap(succs: array, nlabels: int, nodes: int, is_win: bytearray):
    """Index of a node inside a fair trap, or None.

    A fair trap is an SCC of the non-winning subgraph where every label has
    at least one edge staying inside; a fair scheduler can then discharge all
    its obligations without ever leaving.
    """
    sccid = _tarjan(succs, nlabels, nodes, is_win)
    members: dict[int, list[int]] = {}
    for v in range(nodes):
        if not is_win[v]:
            members.setdefault(sccid[v], []).append(v)
    for comp in members.values():
        comp_set = set(comp)
        covered = set()
        for v in comp:
            base = v * nlabels
            for li in range(nlabels):
                if li not in covered and succs[base + li] in comp_set:
                    covered.add(li)
            if len(covered) == nlabels:
                return comp[0]
    return None


def _tarjan(succs: array, nlabels: int, nodes: int, is_win: bytearray):
    """Iterative Tarjan over the non-winning subgraph; returns SCC ids."""
    UNSEEN = -1
    index = array("l", [UNSEEN]) * nodes
    low = array("l", [0]) * nodes
    on_stack = bytearray(nodes)
    sccid = array("l", [UNSEEN]) * nodes
    stack: list[int] = []
    counter = 0
    comp = 0
    for root in range(nodes):
        if index[root] != UNSEEN or is_win[root]:
            continue
        work = [(root, 0)]
        while work:
            v, ei = work.pop()
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            advanced = False
            base = v * nlabels
            while ei < nlabels:
                w = succs[base + ei]
                ei += 1
                if w < 0 or is_win[w]:
                    continue
                if index[w] == UNSEEN:
                    work.append((v, ei))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    sccid[w] = comp
                    if w == v:
                        break
                comp += 1
            if work:
                pv = work[-1][0]
                if low[v] < low[pv]:
                    low[pv] = low[v]
    return sccid


def _all_reach_win(succs: array, nlabels: int, nodes: int, is_win: bytearray) -> bool:
    preds: list[list[int]] = [[] for _ in range(nodes)]
    for v in range(nodes):
        base = v * nlabels
        for li in range(nlabels):
            w = succs[base + li]
            if w >= 0:
                preds[w].append(v)
    can = bytearray(is_win)
    frontier = [v for v in range(nodes) if is_win[v]]
    while frontier:
        nxt = []
        for w in frontier:
            for v in preds[w]:
                if not can[v]:
                    can[v] = 1
                    nxt.append(v)
        frontier = nxt
    return all(can)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class VerifyReport:
    protocol: str
    n: int
    r: int
    expected: Guarantee | None
    result: ExplorationResult

    @property
    def ok(self) -> bool:
        if self.expected is None:
            # Nothing claimed: report-only, success means the search finished.
            return self.result.complete and self.result.monitor_ok
        return (
            self.result.complete
            and self.result.safe
            and self.result.monitor_ok
            and self.result.derived is self.expected
        )

    def lines(self) -> list[str]:
        res = self.result
        rows = [
            ("safe", res.safe),
            ("live", res.live),
            ("prob1", res.prob1),
            ("prob-eps", res.prob_eps),
            ("monitors", res.monitor_ok),
        ]
        out = []
        for prop, verdict in rows:
            out.append(
                f"{self.protocol} n={self.n} r={self.r} {prop}="
                f"{'pass' if verdict else 'FAIL'} states={res.nodes} depth={res.max_depth}"
            )
        derived = res.derived.value if res.derived else "none"
        claimed = self.expected.value if self.expected else "none"
        status = "ok" if self.ok else "MISMATCH"
        out.append(
            f"{self.protocol} n={self.n} r={self.r} guarantee: claimed="
            f"{claimed} derived={derived} [{status}]"
        )
        return out


def verify_instance(
    instance: ProtocolInstance,
    *,
    protocol_id: str | None = None,
    node_cap: int | None = None,
    monitors=None,
    symmetry: bool = False,
) -> VerifyReport:
    """Re-derive the instance's guarantee class and compare with the claim."""
    result = explore(
        instance, node_cap=node_cap, monitors=monitors, symmetry=symmetry
    )
    return VerifyReport(
        protocol=protocol_id or instance.family,
        n=instance.n,
        r=instance.r,
        expected=instance.guarantee,
        result=result,
    )


def check_knowledge(
    instance: ProtocolInstance, *, node_cap: int | None = None
) -> ExplorationResult:
    """Certify finished-implies-full-coverage plus no fair stall.

    Safety alone would be vacuous for broken variants that deadlock before
    anyone finishes, so the fair-trap check is part of the claim.
    """
    return explore(instance, goal="all-finished", node_cap=node_cap, monitors=[])
