"""Guarded-command language for switch protocols and its single-visit interpreter.

A program is a finite sequence of instructions, each of which either waits for a
room configuration and rewrites it (``Flip``, ``FlipNotIn``), waits without
writing (``See``), toggles between two configurations until a net quota is met
(``Oscillate``), announces completion (``Declare``), or repeats a block a fixed
number of times (``Repeat``). Visits are the unit of execution: a prisoner is
shown one room configuration and at most one guarded instruction may fire.

Semantics pinned down here and relied on everywhere else:

* An unmatched guard waits; the visit changes nothing.
* When a guarded instruction fires and the next instruction is ``Declare``, the
  declaration happens in the same visit.
* A ``Declare`` that is itself the current instruction fires on the next visit,
  whatever the room shows.
* ``Repeat`` with count 0 is skipped silently.
* ``Oscillate(c1, c2, k)`` rewrites c1 to c2 (net +1) and c2 to c1 (net -1) and
  completes the moment net reaches k.
* Once a prisoner has declared or run off the end of its program, its state is
  absorbing: every further visit is inert.
"""

from __future__ import annotations

from dataclasses import dataclass


Config = int


@dataclass(frozen=True)
class Flip:
    src: Config
    dst: Config


@dataclass(frozen=True)
class FlipNotIn:
    """Wait for any configuration outside ``excluded`` and rewrite it to ``dst``."""

    excluded: frozenset[Config]
    dst: Config


@dataclass(frozen=True)
class See:
    target: Config


@dataclass(frozen=True)
class Oscillate:
    c1: Config
    c2: Config
    k: int = 1


@dataclass(frozen=True)
class Declare:
    pass


@dataclass(frozen=True)
class Repeat:
    count: int
    body: tuple["Instruction", ...]


Instruction = Flip | FlipNotIn | See | Oscillate | Declare | Repeat

# Primitive (non-Repeat) instructions, the only things a flattened program holds.
Step = Flip | FlipNotIn | See | Oscillate | Declare


def _flatten(body: tuple[Instruction, ...]) -> list[Step]:
    out: list[Step] = []
    for ins in body:
        if isinstance(ins, Repeat):
            inner = _flatten(ins.body)
            out.extend(inner * ins.count)
        else:
            out.append(ins)
    return out


def _validate_body(body: tuple[Instruction, ...], m: int) -> None:
    for ins in body:
        if isinstance(ins, Flip):
            configs = (ins.src, ins.dst)
        elif isinstance(ins, FlipNotIn):
            configs = tuple(ins.excluded) + (ins.dst,)
        elif isinstance(ins, See):
            configs = (ins.target,)
        elif isinstance(ins, Oscillate):
            configs = (ins.c1, ins.c2)
            if ins.k < 1:
                raise_construction(f"Oscillate quota must be >= 1, got {ins.k}")
            if ins.c1 == ins.c2:
                raise_construction("Oscillate needs two distinct configurations")
        elif isinstance(ins, Declare):
            configs = ()
        elif isinstance(ins, Repeat):
            if ins.count < 0:
                raise_construction(f"Repeat count must be >= 0, got {ins.count}")
            if not ins.body:
                raise_construction("Repeat body must be non-empty")
            _validate_body(ins.body, m)
            configs = ()
        else:
            raise_construction(f"unknown instruction {ins!r}")
        for c in configs:
            if not 0 <= c < m:
                raise_construction(f"configuration {c} out of range [0, {m})")


def raise_construction(msg: str):
    from .errors import ConstructionError

    raise ConstructionError(msg)


class Program:
    """An instruction sequence plus its loop-expanded step list.

    The tree form (``body``) is kept for display and for transforms that splice
    blocks; the interpreter runs on ``steps``, the flat expansion, so a cursor
    is just an index.
    """

    __slots__ = ("label", "body", "steps", "_graphs")

    def __init__(self, label: str, body: tuple[Instruction, ...] | list[Instruction]):
        self.label = label
        self.body = tuple(body)
        self.steps: tuple[Step, ...] = tuple(_flatten(self.body))
        self._graphs: dict[tuple[int, int], "CursorGraph"] = {}

    def validate(self, m: int) -> None:
        _validate_body(self.body, m)

    def cursor_graph(self, m: int, net_floor: int = -1) -> "CursorGraph":
        key = (m, net_floor)
        graph = self._graphs.get(key)
        if graph is None:
            graph = reachable_cursor_graph(self, m, net_floor=net_floor)
            self._graphs[key] = graph
        return graph

    def __repr__(self) -> str:
        return f"Program({self.label!r}, {len(self.steps)} steps)"


@dataclass(frozen=True, slots=True)
class PrisonerState:
    """Interpreter state: flat cursor, live Oscillate net (if any), declared flag."""

    cursor: int = 0
    osc_net: int | None = None
    declared: bool = False


@dataclass(frozen=True, slots=True)
class VisitOutcome:
    new_config: Config
    fired: bool
    declared: bool


def initial_state(program: Program) -> PrisonerState:
    net = 0 if program.steps and isinstance(program.steps[0], Oscillate) else None
    return PrisonerState(cursor=0, osc_net=net)


def _advance(program: Program, cursor: int) -> PrisonerState:
    """Move past a just-completed instruction, consuming a trailing Declare."""
    cursor += 1
    steps = program.steps
    if cursor < len(steps) and isinstance(steps[cursor], Declare):
        return PrisonerState(cursor=cursor + 1, osc_net=None, declared=True)
    net = 0 if cursor < len(steps) and isinstance(steps[cursor], Oscillate) else None
    return PrisonerState(cursor=cursor, osc_net=net)


def visit(
    state: PrisonerState, program: Program, observed: Config
) -> tuple[PrisonerState, VisitOutcome]:
    """Execute one visit: the prisoner sees ``observed`` and acts or waits.

    Returns the successor state and what happened to the room. Pure; absorbing
    once declared or past the end of the program.
    """
    steps = program.steps
    if state.declared or state.cursor >= len(steps):
        return state, VisitOutcome(observed, fired=False, declared=False)

    ins = steps[state.cursor]

    if isinstance(ins, Declare):
        new = PrisonerState(cursor=state.cursor + 1, osc_net=None, declared=True)
        return new, VisitOutcome(observed, fired=False, declared=True)

    if isinstance(ins, Flip):
        if observed != ins.src:
            return state, VisitOutcome(observed, fired=False, declared=False)
        new = _advance(program, state.cursor)
        return new, VisitOutcome(ins.dst, fired=True, declared=new.declared)

    if isinstance(ins, FlipNotIn):
        if observed in ins.excluded:
            return state, VisitOutcome(observed, fired=False, declared=False)
        new = _advance(program, state.cursor)
        return new, VisitOutcome(ins.dst, fired=True, declared=new.declared)

    if isinstance(ins, See):
        if observed != ins.target:
            return state, VisitOutcome(observed, fired=False, declared=False)
        new = _advance(program, state.cursor)
        return new, VisitOutcome(observed, fired=True, declared=new.declared)

    if isinstance(ins, Oscillate):
        net = state.osc_net if state.osc_net is not None else 0
        if observed == ins.c1:
            net += 1
            if net >= ins.k:
                new = _advance(program, state.cursor)
            else:
                new = PrisonerState(cursor=state.cursor, osc_net=net)
            return new, VisitOutcome(ins.c2, fired=True, declared=new.declared)
        if observed == ins.c2:
            new = PrisonerState(cursor=state.cursor, osc_net=net - 1)
            return new, VisitOutcome(ins.c1, fired=True, declared=False)
        return state, VisitOutcome(observed, fired=False, declared=False)

    raise AssertionError(f"unreachable instruction {ins!r}")


@dataclass(frozen=True)
class CursorEdge:
    observed: Config
    succ: PrisonerState
    fired: bool
    mutates: bool
    declares: bool


@dataclass
class CursorGraph:
    """All cursor states a single program can reach, with one edge per observable.

    Oscillate nets saturate at ``net_floor``: states below the floor fire and
    mutate identically and differ only in how far completion is, which none of
    the graph's consumers (can-ever-act reachability, forcing-word search) care
    about. The interpreter itself never clamps. Declare positions that are only
    passed through by same-visit piggybacking are still included as nodes.
    """

    initial: PrisonerState
    nodes: set[PrisonerState]
    edges: dict[PrisonerState, tuple[CursorEdge, ...]]
    net_floor: int

    def can_ever_act(self, node: PrisonerState) -> bool:
        """True if some visit sequence from ``node`` reconfigures a room or declares."""
        return self._clamp(node) in self._acting

    def _clamp(self, node: PrisonerState) -> PrisonerState:
        if node.osc_net is not None and node.osc_net < self.net_floor:
            return PrisonerState(node.cursor, self.net_floor, node.declared)
        return node

    def __post_init__(self):
        # Nodes from which a mutating or declaring edge is reachable.
        acting: set[PrisonerState] = set()
        changed = True
        while changed:
            changed = False
            for node, edges in self.edges.items():
                if node in acting:
                    continue
                for e in edges:
                    if e.mutates or e.declares or e.succ in acting:
                        acting.add(node)
                        changed = True
                        break
        self._acting = acting


def reachable_cursor_graph(program: Program, m: int, net_floor: int = -1) -> CursorGraph:
    start = initial_state(program)
    steps = program.steps

    def clamp(s: PrisonerState) -> PrisonerState:
        if s.osc_net is not None and s.osc_net < net_floor:
            return PrisonerState(s.cursor, net_floor, s.declared)
        return s

    start = clamp(start)
    nodes: set[PrisonerState] = {start}
    edges: dict[PrisonerState, tuple[CursorEdge, ...]] = {}
    queue = [start]
    while queue:
        node = queue.pop()
        outs = []
        for observed in range(m):
            succ, out = visit(node, program, observed)
            succ = clamp(succ)
            outs.append(
                CursorEdge(
                    observed=observed,
                    succ=succ,
                    fired=out.fired,
                    mutates=out.new_config != observed,
                    declares=out.declared,
                )
            )
            if succ not in nodes:
                nodes.add(succ)
                queue.append(succ)
            # A fire that piggybacked through a Declare skips the Declare
            # position; include that position as a node of its own.
            if out.declared and not isinstance(steps[node.cursor], Declare):
                mid = PrisonerState(cursor=node.cursor + 1)
                if mid not in nodes:
                    nodes.add(mid)
                    queue.append(mid)
        edges[node] = tuple(outs)
    return CursorGraph(initial=start, nodes=nodes, edges=edges, net_floor=net_floor)
