"""Append-only transcript strategy for rooms with unbounded state.

Each room holds a transcript: an arbitrary pre-existing prefix (possibly
forged) followed by genuine appends. A visiting prisoner appends
(its name, its visit counter) and remembers the resulting snapshot. It
declares once it holds r pairwise non-prefix snapshots each of which it later
saw extended by appends from all n prisoners.

Safety is structural: snapshots of one room are always prefix-comparable
(appends only), so r pairwise incomparable snapshots pin r distinct rooms,
and everything after a remembered snapshot is a genuine append, so the
name coverage cannot be forged by the prefix.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import UsageError

Entry = tuple[str, int]
Transcript = tuple[Entry, ...]


def prisoner_name(i: int) -> str:
    return f"p{i}"


def render_transcript(t: Transcript) -> str:
    return "/".join(f"{name}#{k}" for name, k in t)


@dataclass(frozen=True)
class TranscriptKnowledge:
    """One prisoner's memory: its visit counter and every snapshot it has
    produced, oldest first, plus which snapshots are already proven good."""

    crew: tuple[str, ...]
    rooms: int
    visits: int = 0
    seen: tuple[Transcript, ...] = ()
    goods: tuple[Transcript, ...] = ()

    def maximal_good_count(self) -> int:
        count = 0
        for g in self.goods:
            extended = any(
                g2 is not g and len(g2) > len(g) and g2[: len(g)] == g
                for g2 in self.goods
            )
            if not extended:
                count += 1
        return count


def make_knowledge(n: int, r: int) -> TranscriptKnowledge:
    if n < 1 or r < 1:
        raise UsageError("need at least one prisoner and one room")
    return TranscriptKnowledge(crew=tuple(prisoner_name(i) for i in range(n)), rooms=r)


def transcript_visit(
    knowledge: TranscriptKnowledge, room_transcript: Transcript, prisoner_id: int
) -> tuple[Transcript, TranscriptKnowledge, bool]:
    """Append this prisoner's entry, update its memory, decide declaration."""
    name = prisoner_name(prisoner_id)
    visits = knowledge.visits + 1
    new_transcript = room_transcript + ((name, visits),)
    crew = set(knowledge.crew)
    fresh_goods = []
    for t in knowledge.seen:
        if t in knowledge.goods or len(t) >= len(new_transcript):
            continue
        if new_transcript[: len(t)] != t:
            continue
        suffix_names = {e[0] for e in new_transcript[len(t) :]}
        if crew <= suffix_names:
            fresh_goods.append(t)
    updated = replace(
        knowledge,
        visits=visits,
        seen=knowledge.seen + (new_transcript,),
        goods=knowledge.goods + tuple(fresh_goods),
    )
    return new_transcript, updated, updated.maximal_good_count() >= knowledge.rooms


@dataclass(frozen=True)
class TranscriptRun:
    kind: str  # DeclaredCorrect | DeclaredIncorrect | StepLimit
    step: int
    prisoner: int | None
    visits: tuple[tuple[int, ...], ...]
    rooms: tuple[Transcript, ...]


def run_transcript_protocol(
    n: int,
    r: int,
    scheduler,
    *,
    max_steps: int = 1000,
    prefixes: tuple[Transcript, ...] | None = None,
) -> TranscriptRun:
    """Drive the transcript protocol under a scheduler; stops at the first
    declaration or at max_steps."""
    rooms = list(prefixes) if prefixes is not None else [()] * r
    if len(rooms) != r:
        raise UsageError("prefixes must supply one transcript per room")
    knowledge = [make_knowledge(n, r) for _ in range(n)]
    visits = [[0] * r for _ in range(n)]
    step = 0
    while step < max_steps:
        event = scheduler.next(None, step)
        if event is None:
            break
        p, room = event
        rooms[room], knowledge[p], declare = transcript_visit(
            knowledge[p], rooms[room], p
        )
        visits[p][room] += 1
        step += 1
        if declare:
            correct = all(visits[q][j] > 0 for q in range(n) for j in range(r))
            kind = "DeclaredCorrect" if correct else "DeclaredIncorrect"
            return TranscriptRun(
                kind, step, p, tuple(map(tuple, visits)), tuple(rooms)
            )
    return TranscriptRun("StepLimit", step, None, tuple(map(tuple, visits)), tuple(rooms))


def adversarial_prefixes(n: int, max_len: int) -> list[Transcript]:
    """All prefixes up to max_len over real prisoner entries plus a forged
    entry from an unknown name with a large index."""
    alphabet: list[Entry] = [(prisoner_name(i), 1) for i in range(n)]
    alphabet.append(("X", 9))
    layers: list[list[Transcript]] = [[()]]
    for _ in range(max_len):
        layers.append([t + (e,) for t in layers[-1] for e in alphabet])
    return [t for layer in layers for t in layer]


def prefix_safety_search(
    n: int = 2,
    r: int = 2,
    *,
    max_prefix_len: int = 3,
    depth: int = 7,
) -> dict:
    """Exhaust every schedule to the given depth against every combination of
    adversarial room prefixes; returns counts and any incorrect declaration.

    Room relabeling is a symmetry of the search (schedules range over all
    room choices), so prefix combinations are taken unordered.
    """
    from itertools import combinations_with_replacement

    prefixes = adversarial_prefixes(n, max_prefix_len)
    events = [(p, room) for p in range(n) for room in range(r)]
    stats = {"prefix_sets": 0, "visits": 0, "declarations": 0, "violation": None}

    def dfs(rooms, knowledge, visits, steps_left) -> bool:
        if steps_left == 0:
            return True
        for p, room in events:
            new_t, new_k, declare = transcript_visit(knowledge[p], rooms[room], p)
            stats["visits"] += 1
            if declare:
                stats["declarations"] += 1
                nv = [list(row) for row in visits]
                nv[p][room] += 1
                if any(nv[q][j] == 0 for q in range(n) for j in range(r)):
                    stats["violation"] = {
                        "rooms": tuple(rooms),
                        "visits": tuple(map(tuple, nv)),
                        "prisoner": p,
                    }
                    return False
                continue  # a correct declaration ends this branch
            nrooms = list(rooms)
            nrooms[room] = new_t
            nknow = list(knowledge)
            nknow[p] = new_k
            nvis = [list(row) for row in visits]
            nvis[p][room] += 1
            if not dfs(nrooms, nknow, nvis, steps_left - 1):
                return False
        return True

    for combo in combinations_with_replacement(prefixes, r):
        stats["prefix_sets"] += 1
        start_know = [make_knowledge(n, r) for _ in range(n)]
        zero = [[0] * r for _ in range(n)]
        if not dfs(list(combo), start_know, zero, depth):
            return stats
    return stats
