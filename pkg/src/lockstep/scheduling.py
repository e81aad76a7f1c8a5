"""Warden strategies: fair schedules, an indistinguishable schedule pair,
and the ownership-driven adversary for single-switch rooms.

A scheduler is a stateful generator: next(world, step) returns the next
(prisoner, room) visit or None to stop. The world argument is the full
joint state; the warden is omniscient.
"""

from __future__ import annotations

import random

from .core import Program, initial_state, visit
from .errors import UnsupportedParameterError, UsageError
from .ownership import (
    ObservedEvent,
    OwnershipTable,
    apply_event,
    initial_table,
    is_finished,
)


class RoundRobin:
    """Prisoner 0 tours all rooms, then prisoner 1, and so on; every
    (prisoner, room) pair occurs exactly once per window of n*r events."""

    def __init__(self, n: int, r: int):
        self.n, self.r = n, r

    def next(self, world, step: int):
        return (step // self.r) % self.n, step % self.r


class SeededRandom:
    """Uniform i.i.d. (prisoner, room) choices from a seeded generator."""

    def __init__(self, n: int, r: int, seed: int = 0):
        self.n, self.r = n, r
        self.rng = random.Random(seed)

    def next(self, world, step: int):
        return self.rng.randrange(self.n), self.rng.randrange(self.r)


class WitnessSchedule:
    """A finite schedule that walks the staggered two-config protocol to its
    declaration: each prisoner in turn tours the rooms enough times to burn
    through its repeat blocks, with single-room handshakes in between to
    retire the predecessor's final down-flip."""

    def __init__(self, n: int, r: int):
        events: list[tuple[int, int]] = []

        def tour(p: int, times: int):
            for _ in range(times):
                events.extend((p, room) for room in range(r))

        tour(0, 4)
        for k in range(n - 1):
            for _ in range(k + 1):
                events.append((k + 1, 0))
                events.append((k, 0))
            tour(k + 1, 3 if k + 1 == n - 1 else 4)
        self.events = events

    def next(self, world, step: int):
        return self.events[step] if step < len(self.events) else None


class SingleRoomSchedule:
    """Everyone cycles through room 0 in fixed prisoner order, forever."""

    def __init__(self, n: int):
        self.n = n

    def next(self, world, step: int):
        return step % self.n, 0


class PointerRoomSchedule:
    """Valid counterpart of the single-room schedule: a current-room pointer
    that moves on (cyclically) whenever a full prisoner pass leaves the
    current room in the recurring configuration."""

    def __init__(self, n: int, r: int, recurring: int):
        self.n, self.r = n, r
        self.recurring = recurring
        self.cur = 0
        self.advances = 0

    def next(self, world, step: int):
        p = step % self.n
        if p == 0 and step > 0 and world.rooms[self.cur] == self.recurring:
            self.cur = (self.cur + 1) % self.r
            self.advances += 1
        return p, self.cur


class ExtendedSchedule:
    """Replays a prefix of another scheduler, then falls back to round-robin;
    turns a single-room prefix into a valid schedule."""

    def __init__(self, prefix, declare_step: int, n: int, r: int):
        self.prefix = prefix
        self.declare_step = declare_step
        self.tail = RoundRobin(n, r)

    def next(self, world, step: int):
        if step < self.declare_step:
            return self.prefix.next(world, step)
        return self.tail.next(world, step - self.declare_step)


def _find_recurrence(programs, C: int, n: int):
    pstates = tuple(initial_state(p) for p in programs)
    config = C
    seen = {(config, pstates): 0}
    passes = 0
    while True:
        states = list(pstates)
        for p in range(n):
            states[p], out = visit(states[p], programs[p], config)
            config = out.new_config
        pstates = tuple(states)
        passes += 1
        key = (config, pstates)
        if key in seen:
            return config, passes - seen[key], passes
        seen[key] = passes


def find_recurring_config(programs, C: int, n: int):
    """Config guaranteed to recur at pass boundaries when all prisoners file
    through one room in order, found by joint-state repetition (the joint
    state space is finite, so this terminates)."""
    config, cycle, _ = _find_recurrence(programs, C, n)
    return config, cycle


class SchedulePair:
    """A single-room schedule and a valid schedule no prisoner can tell
    apart: each prisoner sees identical observation sequences under both."""

    def __init__(self, start_configs, s1, s2, horizon_note):
        self.start_configs = start_configs
        self.s1 = s1
        self.s2 = s2
        self.horizon_note = horizon_note


def build_schedule_pair(programs, n: int, r: int, C: int = 0) -> SchedulePair:
    """Start one room at C and the rest at the recurring config D; schedule
    one is room 0 forever, schedule two chases a pointer that advances
    whenever a pass ends at D. Vacated rooms sit at D, exactly what the
    pointer finds when it arrives, so observations coincide."""
    if r < 2:
        raise UnsupportedParameterError("the schedule pair needs at least two rooms")
    D, cycle, detected = _find_recurrence(programs, C, n)
    start = (C,) + (D,) * (r - 1)
    note = {"recurring_config": D, "cycle_length": cycle, "detected_pass": detected}
    return SchedulePair(start, SingleRoomSchedule(n), PointerRoomSchedule(n, r, D), note)


def extend_to_valid(s1, declare_step: int, n: int, r: int):
    """Keep the first declare_step events of s1, then round-robin."""
    return ExtendedSchedule(s1, declare_step, n, r)


# ---------------------------------------------------------------------------
# The single-switch adversary
# ---------------------------------------------------------------------------


class S1Adversary:
    """Warden strategy that prevents correct declarations when every room has
    one binary switch and r >= 5.

    Keeps the provable-ownership table current and, after every event, one of
    four conditions holds: (1) one config has at most one room and nobody
    owns the big config, (2) both configs have two or more rooms and nobody
    owns anything, (3) exactly one prisoner owns exactly one two-room config
    and nothing else is owned, (4) some prisoner is finished. Under 1, 2, or
    4 it extends the visit sequence directly (least recently used pair,
    lowest index on ties); under 3 it forces a different prisoner through a
    shortest observation word ending in a mutation or declaration, which
    destroys the ownership.
    """

    def __init__(self, programs, n: int, r: int, m: int = 2):
        if m != 2:
            raise UnsupportedParameterError(
                f"the single-switch adversary needs m = 2 configurations, got {m}"
            )
        if n < 2 or r < 5:
            raise UnsupportedParameterError(
                f"the single-switch adversary needs n >= 2 and r >= 5, got n={n}, r={r}"
            )
        self.programs = programs
        self.n, self.r = n, r
        self.pairs = [(p, room) for p in range(n) for room in range(r)]
        self.last_seen = {pair: -1 for pair in self.pairs}
        self.direct_since = {pair: 0 for pair in self.pairs}
        self.table: OwnershipTable | None = None
        self.condition_log: list[int] = []
        self.audit_violations: list[str] = []
        self.direct_events = 0
        self.forced_words = 0
        self._queue: list[tuple[int, int]] = []
        self._pending: tuple[int, int, int] | None = None
        self._events = 0

    # -- table maintenance ---------------------------------------------------

    def _absorb(self, world):
        if self.table is None:
            self.table = initial_table(world.rooms, self.n, 2)
            self._refresh_finished(world)
            self._check_condition()
            return
        if self._pending is not None:
            p, room, before = self._pending
            self._pending = None
            ev = ObservedEvent(p, before, world.rooms[room])
            self.table = apply_event(self.table, ev)
            self._refresh_finished(world)
            self._check_condition()

    def _refresh_finished(self, world):
        fin = tuple(
            world.prisoners[p].declared
            or is_finished(self.programs[p], world.prisoners[p], 2)
            for p in range(self.n)
        )
        self.table = OwnershipTable(self.table.room_counts, self.table.owns, fin)

    def _owned_pairs(self):
        t = self.table
        return [
            (p, c)
            for p in range(self.n)
            for c in range(2)
            if t.room_counts[c] > 0 and t.owns[p][c]
        ]

    def _condition(self) -> int:
        t = self.table
        if any(t.finished):
            return 4
        c0, c1 = t.room_counts
        owned = self._owned_pairs()
        if min(c0, c1) <= 1:
            big = 0 if c0 >= c1 else 1
            if all(not t.owns[p][big] for p in range(self.n)):
                return 1
            return 0
        if not owned:
            return 2
        if len(owned) == 1:
            p, c = owned[0]
            if t.room_counts[c] == 2:
                return 3
        return 0

    def _check_condition(self):
        cond = self._condition()
        self.condition_log.append(cond)
        if cond == 0:
            raise RuntimeError(
                f"ownership invariant broken: counts={self.table.room_counts} "
                f"owns={self.table.owns} finished={self.table.finished}"
            )

    # -- event selection -------------------------------------------------------

    def next(self, world, step: int):
        self._absorb(world)
        direct = False
        if self._queue:
            event = self._queue.pop(0)
        elif self.condition_log[-1] == 3:
            self._queue = self._forcing_events(world)
            self.forced_words += 1
            event = self._queue.pop(0)
        else:
            event = self._pick_direct()
            direct = True
        self.last_seen[event] = self._events
        self._events += 1
        if not direct:
            self.direct_since[event] = 0
        self._pending = (event[0], event[1], world.rooms[event[1]])
        return event

    def _pick_direct(self):
        event = min(self.pairs, key=lambda pair: (self.last_seen[pair], pair))
        self.direct_events += 1
        for pair in self.pairs:
            if pair != event:
                self.direct_since[pair] += 1
                if self.direct_since[pair] >= self.n * self.r:
                    self.audit_violations.append(
                        f"pair {pair} starved for {self.direct_since[pair]} direct events"
                    )
        self.direct_since[event] = 0
        return event

    def _forcing_events(self, world):
        (owner, _cfg), = self._owned_pairs()
        target = min(p for p in range(self.n) if p != owner)
        word = self._forcing_word(target, world)
        events = []
        for obs in word:
            room = min(i for i in range(self.r) if world.rooms[i] == obs)
            events.append((target, room))
        return events

    def _forcing_word(self, target: int, world):
        """Shortest observation word that makes the target fire a mutation or
        declare. Both configs are present (condition 3), so any word can be
        realized; intermediate symbols only traverse non-mutating fires, so
        the rooms stay put while the word plays out."""
        program = self.programs[target]
        start = world.prisoners[target]
        frontier = [(start, ())]
        seen = {start}
        while frontier:
            state, word = frontier.pop(0)
            for obs in (0, 1):
                nstate, out = visit(state, program, obs)
                if out.declared or out.new_config != obs:
                    return list(word) + [obs]
                if out.fired and nstate not in seen:
                    seen.add(nstate)
                    frontier.append((nstate, word + (obs,)))
        raise RuntimeError(f"prisoner {target} cannot be forced to act")


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

SCHEDULERS = {
    "round-robin": {
        "kind": "scheduler",
        "build": lambda inst, seed: RoundRobin(inst.n, inst.r),
        "description": "fixed cycle over all (prisoner, room) pairs",
    },
    "random": {
        "kind": "scheduler",
        "build": lambda inst, seed: SeededRandom(inst.n, inst.r, seed or 0),
        "description": "uniform seeded choices",
    },
    "witness": {
        "kind": "scheduler",
        "build": lambda inst, seed: WitnessSchedule(inst.n, inst.r),
        "description": "finite schedule driving the two-config protocol to declare",
    },
    "lemma1-pair": {
        "kind": "pair",
        "build": lambda inst, seed: build_schedule_pair(inst.programs, inst.n, inst.r),
        "description": "indistinguishable single-room/valid schedule pair",
    },
    "s1-adversary": {
        "kind": "scheduler",
        "build": lambda inst, seed: S1Adversary(inst.programs, inst.n, inst.r, m=inst.m),
        "description": "ownership-tracking warden for single-switch rooms",
    },
}


def build_scheduler(scheduler_id: str, instance, seed: int | None = None):
    entry = SCHEDULERS.get(scheduler_id)
    if entry is None:
        known = ", ".join(sorted(SCHEDULERS))
        raise UsageError(f"unknown scheduler {scheduler_id!r}; known: {known}")
    return entry["build"](instance, seed)
