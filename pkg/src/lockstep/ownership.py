"""Provable-ownership bookkeeping for single-switch adversaries.

A prisoner owns a configuration when it has visited every room currently in
that configuration; it provably owns it when that holds in every assignment
of the observed events to rooms. The incremental table update is exact and
is cross-checked against a brute-force enumeration over assignments.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import PrisonerState, Program, initial_state, visit
from .errors import HistoryCorruptionError, ResourceLimitError
from .protocols import ProtocolInstance

BRUTE_MAX_ROOMS = 5
BRUTE_MAX_EVENTS = 12


@dataclass(frozen=True)
class ObservedEvent:
    """One prisoner entering one room: the configuration found and the
    configuration left behind (equal when nothing fired)."""

    prisoner: int
    config_in: int
    config_out: int


@dataclass(frozen=True)
class OwnershipTable:
    """Value-type snapshot: per-config room tallies, the provable-ownership
    matrix, and which prisoners can never act again."""

    room_counts: tuple[int, ...]
    owns: tuple[tuple[bool, ...], ...]  # [prisoner][config]
    finished: tuple[bool, ...]

    @property
    def n(self) -> int:
        return len(self.owns)

    @property
    def m(self) -> int:
        return len(self.room_counts)

    def owns_all(self, p: int) -> bool:
        return all(self.owns[p])


def initial_table(start: tuple[int, ...], n: int, m: int) -> OwnershipTable:
    counts = [0] * m
    for c in start:
        counts[c] += 1
    owns = tuple(tuple(counts[c] == 0 for c in range(m)) for _ in range(n))
    return OwnershipTable(tuple(counts), owns, (False,) * n)


def apply_event(table: OwnershipTable, event: ObservedEvent) -> OwnershipTable:
    """Exact ownership update for one event, losses before gains.

    Losses are judged against pre-event ownership: a bystander keeps its
    ownership of the target configuration only when it provably owned the
    source configuration the moved room came from.
    """
    c_in, c_out, actor = event.config_in, event.config_out, event.prisoner
    counts = list(table.room_counts)
    if counts[c_in] < 1:
        raise HistoryCorruptionError(
            f"event reads config {c_in} but no room is in it (counts {table.room_counts})"
        )
    if c_in != c_out:
        counts[c_in] -= 1
        counts[c_out] += 1
    owns = [list(row) for row in table.owns]
    if c_in != c_out:
        for p in range(table.n):
            if p != actor and not table.owns[p][c_in]:
                owns[p][c_out] = False
    if counts[c_out] == 1:
        owns[actor][c_out] = True
    for c in range(table.m):
        if counts[c] == 0:
            for p in range(table.n):
                owns[p][c] = True
    return OwnershipTable(
        tuple(counts), tuple(tuple(row) for row in owns), table.finished
    )


def is_finished(program: Program, state: PrisonerState, m: int) -> bool:
    """True when no continuation from this cursor can mutate a room or declare."""
    return not program.cursor_graph(m).can_ever_act(state)


def provable_ownership_bruteforce(
    start: tuple[int, ...], history: list[ObservedEvent], n: int, r: int, m: int
) -> tuple[tuple[bool, ...], ...]:
    """Ownership facts that hold in every room-assignment of the history.

    For a fixed prisoner p the only thing that matters about a room is the
    pair (current config, visited by p), so assignments are enumerated as
    multisets of those pairs; multiset reachability coincides with
    assignment existence.
    """
    if r > BRUTE_MAX_ROOMS or len(history) > BRUTE_MAX_EVENTS:
        raise ResourceLimitError(
            f"brute-force ownership limited to r <= {BRUTE_MAX_ROOMS} and "
            f"{BRUTE_MAX_EVENTS} events (got r={r}, {len(history)} events)"
        )
    if len(start) != r:
        raise HistoryCorruptionError("start vector length differs from r")
    result = []
    for p in range(n):
        # Multiset key: sorted tuple of (config, visited-by-p) per room.
        frontier = {tuple(sorted((c, False) for c in start))}
        for ev in history:
            nxt = set()
            for ms in frontier:
                for i, (cfg, seen) in enumerate(ms):
                    if cfg != ev.config_in:
                        continue
                    room = (ev.config_out, seen or ev.prisoner == p)
                    nxt.add(tuple(sorted(ms[:i] + (room,) + ms[i + 1 :])))
            if not nxt:
                raise HistoryCorruptionError(
                    f"event {ev} inconsistent with every assignment"
                )
            frontier = nxt
        owned = [True] * m
        for ms in frontier:
            for cfg, seen in ms:
                if not seen:
                    owned[cfg] = False
        result.append(tuple(owned))
    return tuple(result)


def table_from_history(
    start: tuple[int, ...], history: list[ObservedEvent], n: int, m: int
) -> OwnershipTable:
    table = initial_table(start, n, m)
    for ev in history:
        table = apply_event(table, ev)
    return table


def check_ownership_lemma(
    instance: ProtocolInstance, which: str, *, node_cap: int | None = None
) -> tuple[bool, dict]:
    """Exhaustively check one of the two ownership lemmas on a small instance.

    declare-ownership: a declaration happens only when every prisoner
    provably owns every configuration. finish-ownership: a prisoner never
    becomes unable to act before a moment where it provably owned all
    configurations at once. The ownership table is a function of the event
    history, so the search runs over joint (world, table, owned-all-yet)
    states rather than worlds alone.
    """
    if which not in ("declare-ownership", "finish-ownership"):
        raise ValueError(f"unknown ownership lemma {which!r}")
    cap = node_cap if node_cap is not None else 2_000_000
    n, r, m = instance.n, instance.r, instance.m
    programs = instance.programs
    base_table = initial_table(instance.start, n, m)

    def owned_now(table: OwnershipTable) -> tuple[bool, ...]:
        return tuple(table.owns_all(p) for p in range(n))

    init = (
        instance.start,
        tuple(initial_state(pr) for pr in programs),
        base_table.owns,
        owned_now(base_table),
    )
    seen = {init}
    queue = [init]
    explored = 0
    while queue:
        rooms, pstates, owns, ever = queue.pop()
        explored += 1
        if explored > cap:
            raise ResourceLimitError(
                f"ownership lemma search exceeded {cap} states",
                partial={"states": explored, "lemma": which},
            )
        table = OwnershipTable(_counts(rooms, m), owns, (False,) * n)
        for p in range(n):
            if pstates[p].declared:
                continue
            for room in range(r):
                nstate, out = visit(pstates[p], programs[p], rooms[room])
                ev = ObservedEvent(p, rooms[room], out.new_config)
                ntable = apply_event(table, ev)
                nrooms = rooms[:room] + (out.new_config,) + rooms[room + 1 :]
                nstates = pstates[:p] + (nstate,) + pstates[p + 1 :]
                never = tuple(
                    ever[q] or ntable.owns_all(q) for q in range(n)
                )
                if which == "declare-ownership" and out.declared:
                    if not all(ntable.owns_all(q) for q in range(n)):
                        return False, {
                            "lemma": which,
                            "prisoner": p,
                            "detail": "declaration without universal ownership",
                            "owns": ntable.owns,
                            "states": explored,
                        }
                if which == "finish-ownership":
                    for q in range(n):
                        if (
                            not never[q]
                            and not nstates[q].declared
                            and is_finished(programs[q], nstates[q], m)
                        ):
                            return False, {
                                "lemma": which,
                                "prisoner": q,
                                "detail": "finished before owning all configurations",
                                "owns": ntable.owns,
                                "states": explored,
                            }
                if out.declared:
                    continue  # declaration ends the run
                key = (nrooms, nstates, ntable.owns, never)
                if key not in seen:
                    seen.add(key)
                    queue.append(key)
    return True, {"lemma": which, "states": explored}


def _counts(rooms: tuple[int, ...], m: int) -> tuple[int, ...]:
    counts = [0] * m
    for c in rooms:
        counts[c] += 1
    return tuple(counts)
