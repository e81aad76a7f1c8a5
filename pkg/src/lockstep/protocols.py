"""Protocol constructors, transforms, win conditions and the name registry.

Every constructor returns a :class:`ProtocolInstance`: one program per
prisoner (index 0 is the leader wherever a leader exists), the configuration
universe with display names, the starting configuration per room, the claimed
guarantee class, and whatever layout metadata the invariant monitors need.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable

from .core import Config, Declare, Flip, FlipNotIn, Oscillate, Program, Repeat, See
from .errors import ConstructionError, UnsupportedParameterError, UsageError


# ---------------------------------------------------------------------------
# Win conditions and guarantee classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AllRoomsAllPrisoners:
    """Declaration is correct once every prisoner has visited every room at
    least ``min_visits`` times."""

    min_visits: int = 1


@dataclass(frozen=True)
class AtLeastOneRoom:
    """Declaration is correct once every prisoner has visited at least one room."""


@dataclass(frozen=True)
class AllMustDeclare:
    """Every prisoner must declare, and each declaration must come after all
    prisoners have visited all rooms."""


WinCondition = AllRoomsAllPrisoners | AtLeastOneRoom | AllMustDeclare


class Guarantee(enum.Enum):
    WINNING = "winning"            # declares correctly under every valid schedule
    PROB1 = "prob1"                # a declaring continuation exists from every reachable state
    PROB_EPS = "prob-eps"          # some schedule reaches a correct declaration
    KNOWLEDGE_ONLY = "knowledge"   # never declares; finishing implies full coverage


# ---------------------------------------------------------------------------
# Protocol instances
# ---------------------------------------------------------------------------


@dataclass
class ProtocolInstance:
    family: str
    n: int
    r: int
    m: int
    programs: tuple[Program, ...]
    start: tuple[Config, ...]
    config_names: tuple[str, ...]
    guarantee: Guarantee | None  # None: no class claimed (adversary fodder)
    default_win: WinCondition
    leader: int = 0
    forced_flip: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def base_m(self) -> int:
        """Configuration count the programs are written against."""
        return self.m // 2 if self.forced_flip else self.m

    def __post_init__(self):
        if len(self.programs) != self.n:
            raise ConstructionError("need exactly one program per prisoner")
        if len(self.start) != self.r:
            raise ConstructionError("need one start configuration per room")
        if len(self.config_names) != self.m:
            raise ConstructionError("need one display name per configuration")
        for c in self.start:
            if not 0 <= c < self.m:
                raise ConstructionError(f"start configuration {c} out of range")
        for prog in self.programs:
            prog.validate(self.base_m)

    def with_start(self, start: tuple[Config, ...]) -> "ProtocolInstance":
        """Same programs, different starting configurations."""
        return replace(self, start=tuple(start))

    def config_index(self, name: str) -> Config:
        try:
            return self.config_names.index(name)
        except ValueError:
            raise UsageError(
                f"unknown configuration {name!r}; choose from {', '.join(self.config_names)}"
            ) from None


def _uniform(c: Config, r: int) -> tuple[Config, ...]:
    return (c,) * r


def _require(cond: bool, msg: str):
    if not cond:
        raise UnsupportedParameterError(msg)


# ---------------------------------------------------------------------------
# Single-room protocols
# ---------------------------------------------------------------------------


def one_room_known(n: int, r: int = 1) -> ProtocolInstance:
    """Classic single-switch count: the leader acknowledges n-1 ON signals.

    ``r`` other than 1 replays the same single-room programs across several
    rooms; that strategy no longer wins and exists for adversary experiments.
    """
    _require(n >= 1, "need at least one prisoner")
    _require(r >= 1, "need at least one room")
    OFF, ON = 0, 1
    if n == 1:
        programs = (Program("p0", (See(OFF), Declare())),)
    else:
        leader = Program("p0", (Repeat(n - 1, (Flip(ON, OFF),)), Declare()))
        others = tuple(Program(f"p{i}", (Flip(OFF, ON),)) for i in range(1, n))
        programs = (leader,) + others
    return ProtocolInstance(
        family="one-room-known",
        n=n,
        r=r,
        m=2,
        programs=programs,
        start=_uniform(OFF, r),
        config_names=("OFF", "ON"),
        # Replaying the single-room count over several rooms is exactly the
        # kind of strategy the adversary defeats; it claims no class there.
        guarantee=Guarantee.WINNING if r == 1 else None,
        default_win=AllRoomsAllPrisoners(),
    )


def one_room_unknown(n: int, r: int = 1) -> ProtocolInstance:
    """Single switch, unknown start: double counting absorbs the stray ON."""
    _require(n >= 1, "need at least one prisoner")
    _require(r >= 1, "need at least one room")
    OFF, ON = 0, 1
    leader = Program("p0", (Repeat(2 * n - 2, (Flip(ON, OFF),)), Declare()))
    others = tuple(
        Program(f"p{i}", (Repeat(2, (Flip(OFF, ON),)),)) for i in range(1, n)
    )
    return ProtocolInstance(
        family="one-room-unknown",
        n=n,
        r=r,
        m=2,
        programs=(leader,) + others,
        start=_uniform(OFF, r),
        config_names=("OFF", "ON"),
        guarantee=Guarantee.WINNING if r == 1 else None,
        default_win=AllRoomsAllPrisoners(),
    )


def at_least_one_room(n: int, r: int) -> ProtocolInstance:
    """Every prisoner proves presence somewhere: signals are sent r+1 times so
    at least one lands while the leader is still counting, whatever the start."""
    _require(n >= 1 and r >= 1, "need n >= 1 and r >= 1")
    OFF, ON = 0, 1
    leader = Program("p0", (Repeat((r + 1) * (n - 1), (Flip(ON, OFF),)), Declare()))
    others = tuple(
        Program(f"p{i}", (Repeat(r + 1, (Flip(OFF, ON),)),)) for i in range(1, n)
    )
    return ProtocolInstance(
        family="at-least-one-room",
        n=n,
        r=r,
        m=2,
        programs=(leader,) + others,
        start=_uniform(OFF, r),
        config_names=("OFF", "ON"),
        guarantee=Guarantee.WINNING,
        default_win=AtLeastOneRoom(),
    )


# ---------------------------------------------------------------------------
# Many-configuration tours
# ---------------------------------------------------------------------------


def sequential_chain(n: int, r: int) -> ProtocolInstance:
    """m = n+1 configurations; prisoner i advances rooms from i-1 to i, and the
    last prisoner declares after pushing all r rooms to the final value."""
    _require(n >= 1 and r >= 1, "need n >= 1 and r >= 1")
    programs = []
    for i in range(1, n + 1):
        body: tuple = (Repeat(r, (Flip(i - 1, i),)),)
        if i == n:
            body = body + (Declare(),)
        programs.append(Program(f"p{i - 1}", body))
    return ProtocolInstance(
        family="sequential-chain",
        n=n,
        r=r,
        m=n + 1,
        programs=tuple(programs),
        start=_uniform(0, r),
        config_names=tuple(str(i) for i in range(n + 1)),
        guarantee=Guarantee.WINNING,
        default_win=AllRoomsAllPrisoners(),
        leader=n - 1,
    )


def room_at_a_time_six(n: int, r: int) -> ProtocolInstance:
    """Six configurations; the leader drives one room at a time through a
    count-up on primed and unprimed digits, retiring it to DONE."""
    _require(n >= 1 and r >= 1, "need n >= 1 and r >= 1")
    OFF, DONE, Z, O, ZP, OP = 0, 1, 2, 3, 4, 5
    leader_round = (
        Flip(OFF, Z),
        Repeat(n - 1, (Flip(O, Z),)),
        Flip(Z, ZP),
        Repeat(n - 1, (Flip(OP, ZP),)),
        Flip(ZP, DONE),
    )
    leader = Program("p0", (Repeat(r, leader_round), Declare()))
    others = tuple(
        Program(f"p{i}", (Repeat(r, (Flip(Z, O), Flip(ZP, OP))),))
        for i in range(1, n)
    )
    return ProtocolInstance(
        family="room-at-a-time-six",
        n=n,
        r=r,
        m=6,
        programs=(leader,) + others,
        start=_uniform(OFF, r),
        config_names=("OFF", "DONE", "0", "1", "0'", "1'"),
        guarantee=Guarantee.WINNING,
        default_win=AllRoomsAllPrisoners(),
    )


# ---------------------------------------------------------------------------
# Two-switch (four-configuration) protocols
# ---------------------------------------------------------------------------


def two_switch_prisoner_at_a_time(n: int, r: int, ell: int = 1) -> ProtocolInstance:
    """One prisoner at a time tours all rooms up then down, hands the baton on
    via NEXT, and the leader counts batons as READY conversions.

    ``ell`` > 1 repeats each prisoner's up/down tour, which makes the prisoner
    enter every room at least ell times before the baton moves on.
    """
    _require(n >= 1 and r >= 1, "need n >= 1 and r >= 1")
    _require(ell >= 1, "tour multiplicity must be >= 1")
    Z, O, NEXT, READY = 0, 1, 2, 3
    tour = Repeat(ell, (Repeat(r, (Flip(Z, O),)), Repeat(r, (Flip(O, Z),))))
    leader = Program(
        "p0",
        (tour, Flip(Z, NEXT), Repeat(n, (Flip(NEXT, READY),)), Declare()),
    )
    others = tuple(
        Program(f"p{i}", (Flip(READY, Z), tour, Flip(Z, NEXT)))
        for i in range(1, n)
    )
    win = AllRoomsAllPrisoners(min_visits=ell)
    return ProtocolInstance(
        family="two-switch-prisoner",
        n=n,
        r=r,
        m=4,
        programs=(leader,) + others,
        start=_uniform(Z, r),
        config_names=("0", "1", "NEXT", "READY"),
        guarantee=Guarantee.WINNING,
        default_win=win,
        meta={"ell": ell},
    )


def two_switch_room_at_a_time(n: int, r: int) -> ProtocolInstance:
    """Four configurations, leader-driven phases that retire one room per
    half-phase to DONE. Needs an odd number of rooms, at least three: the outer
    loop runs (r-1)/2 whole phases and its interior repeat counts depend on how
    many rooms are already retired, so they are compiled to constants here.
    """
    _require(n >= 2, "needs a leader and at least one other prisoner")
    if r < 3 or r % 2 == 0:
        raise UnsupportedParameterError(
            "room-at-a-time with two switches needs an odd room count of at least 3"
        )
    Z, O, UP, DONE = 0, 1, 2, 3
    body: list = []
    tags: list[tuple[str, int]] = []

    def emit(ins, tag, width=1):
        body.append(ins)
        tags.extend([tag] * width)

    for j in range(1, (r - 1) // 2 + 1):
        emit(Flip(Z, UP), ("idle", j))
        emit(Repeat(n - 2, (Flip(O, UP),)), ("p0", j), n - 2)
        emit(Flip(O, DONE), ("p0", j))
        emit(Repeat(r - (2 * j - 1), (Flip(Z, O),)), ("t0", j), r - (2 * j - 1))
        emit(Flip(O, UP), ("t0", j))
        emit(Repeat(n - 2, (Flip(Z, UP),)), ("p1", j), n - 2)
        emit(Flip(Z, DONE), ("p1", j))
        emit(Repeat(r - 2 * j, (Flip(O, Z),)), ("t1", j), r - 2 * j)
    emit(Declare(), ("end", 0))
    leader = Program("p0", tuple(body))
    wait_round = (
        Repeat(n, (See(Z), See(UP))),
        Flip(UP, O),
        Repeat(n, (See(O), See(UP))),
        Flip(UP, Z),
    )
    others = tuple(
        Program(f"p{i}", (Repeat((r - 1) // 2, wait_round),)) for i in range(1, n)
    )
    assert len(tags) == len(leader.steps)
    return ProtocolInstance(
        family="two-switch-room",
        n=n,
        r=r,
        m=4,
        programs=(leader,) + others,
        start=_uniform(Z, r),
        config_names=("0", "1", "UP", "DONE"),
        guarantee=Guarantee.WINNING,
        default_win=AllRoomsAllPrisoners(),
        meta={"leader_tags": tuple(tags)},
    )


# ---------------------------------------------------------------------------
# Knowledge and probabilistic protocols
# ---------------------------------------------------------------------------


def three_config_knowledge(n: int, r: int) -> ProtocolInstance:
    """No declarations: prisoners tour one at a time via a NEXT baton; whoever
    finishes the common body knows everyone has toured."""
    _require(n >= 1 and r >= 1, "need n >= 1 and r >= 1")
    OFF, ON, NEXT = 0, 1, 2
    common = (
        Flip(NEXT, OFF),
        Repeat(r, (Flip(OFF, ON),)),
        Repeat(r, (Flip(ON, OFF),)),
        Flip(OFF, NEXT),
    )
    leader = Program("p0", (Flip(OFF, NEXT),) + common)
    others = tuple(Program(f"p{i}", common) for i in range(1, n))
    return ProtocolInstance(
        family="three-config-knowledge",
        n=n,
        r=r,
        m=3,
        programs=(leader,) + others,
        start=_uniform(OFF, r),
        config_names=("OFF", "ON", "NEXT"),
        guarantee=Guarantee.KNOWLEDGE_ONLY,
        default_win=AllRoomsAllPrisoners(),
    )


def three_config_prob1(n: int, r: int) -> ProtocolInstance:
    """Three configurations, no fixed leader: prisoners take turns driving all
    rooms through 0 -> 1 -> 2 -> 0, each handing over by oscillating 1/0 until
    the successor's first write lands. Declares with probability 1 under fair
    random scheduling but a hostile fair schedule can stall it forever."""
    _require(n >= 2 and r >= 1, "need n >= 2 and r >= 1")
    L = n + r - 1
    back = (Flip(1, 0), Flip(2, 1), Flip(0, 2))
    fwd_phases = (
        Repeat(L, (Flip(0, 1),)),
        Repeat(L, (Flip(1, 2),)),
        Repeat(L, (Flip(2, 0),)),
    )
    programs = []
    regions = []
    for k in range(1, n + 1):
        body: tuple = ()
        if k > 1:
            body += (Repeat(k - 1, back), See(1))
        body += fwd_phases
        if k < n:
            body += (Oscillate(1, 0, 1), Repeat(n - k, (Flip(2, 1), Flip(0, 2), Flip(1, 0))))
        else:
            body += (Declare(),)
        programs.append(Program(f"p{k - 1}", body))
        pre_len = 3 * (k - 1) if k > 1 else 0
        phase_start = pre_len + (1 if k > 1 else 0)
        regions.append(
            {
                "phase_start": phase_start,
                "phase_len": L,
                "osc_pos": phase_start + 3 * L if k < n else None,
                "declare_pos": phase_start + 3 * L if k == n else None,
            }
        )
    return ProtocolInstance(
        family="prob1-3config",
        n=n,
        r=r,
        m=3,
        programs=tuple(programs),
        start=_uniform(0, r),
        config_names=("0", "1", "2"),
        guarantee=Guarantee.PROB1,
        default_win=AllRoomsAllPrisoners(),
        leader=n - 1,
        meta={"regions": tuple(regions)},
    )


def two_config_prob_eps(n: int, r: int) -> ProtocolInstance:
    """A single switch per room and staggered repeat counts: prisoner k raises
    r+k rooms, double-checks, and lowers r+k+1; the last prisoner declares at
    the top of the re-check. Wins under some schedule, not almost surely."""
    _require(n >= 2 and r >= 1, "need n >= 2 and r >= 1")
    programs = []
    imbalance = []
    marks = []
    for k in range(n):
        if k < n - 1:
            body: tuple = (
                Repeat(r + k, (Flip(0, 1),)),
                Repeat(r, (Flip(1, 0),)),
                Repeat(r, (Flip(0, 1),)),
                Repeat(r + k + 1, (Flip(1, 0),)),
            )
        else:
            body = (
                Repeat(r + k, (Flip(0, 1),)),
                Repeat(r, (Flip(1, 0),)),
                Repeat(r, (Flip(0, 1),)),
                Declare(),
            )
        prog = Program(f"p{k}", body)
        programs.append(prog)
        # Imbalance of 0->1 over 1->0 fires is a function of the cursor alone.
        table = [0]
        for step in prog.steps:
            if isinstance(step, Flip):
                table.append(table[-1] + (1 if step.dst == 1 else -1))
            else:
                table.append(table[-1])
        imbalance.append(tuple(table))
        marks.append({"startup_end": r + k, "check_end": 3 * r + k, "cooldown_from": 3 * r + k})
    return ProtocolInstance(
        family="two-config-prob-eps",
        n=n,
        r=r,
        m=2,
        programs=tuple(programs),
        start=_uniform(0, r),
        config_names=("0", "1"),
        guarantee=Guarantee.PROB_EPS,
        default_win=AllRoomsAllPrisoners(),
        leader=n - 1,
        meta={"imbalance": tuple(imbalance), "marks": tuple(marks)},
    )


def two_rooms_three_configs(n: int) -> ProtocolInstance:
    """Exactly two rooms: the leader pins one room at UP forever, so the other
    room is the only writable one and single-room counting works."""
    _require(n >= 2, "needs a leader and at least one other prisoner")
    OFF, ON, UP = 0, 1, 2
    leader = Program("p0", (Flip(OFF, UP), Repeat(n - 1, (Flip(ON, OFF),)), Declare()))
    others = tuple(
        Program(f"p{i}", (See(UP), Flip(OFF, ON))) for i in range(1, n)
    )
    return ProtocolInstance(
        family="two-rooms-three-configs",
        n=n,
        r=2,
        m=3,
        programs=(leader,) + others,
        start=_uniform(OFF, 2),
        config_names=("OFF", "ON", "UP"),
        guarantee=Guarantee.WINNING,
        default_win=AllRoomsAllPrisoners(),
    )


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------


def arbitrary_start_wrapper(
    base: ProtocolInstance, start: tuple[Config, ...]
) -> ProtocolInstance:
    """Prepend a cleanup that funnels an arbitrary start into all-zeros.

    Requires the base to use configuration 0 as its uniform start and its
    non-leaders to open with a guard that cannot fire on configurations 0 or 1
    (checked syntactically), so they sleep through the cleanup.
    """
    if base.forced_flip:
        raise ConstructionError("cannot wrap a parity-transformed instance")
    if base.m < 2:
        raise ConstructionError("base must use at least configurations 0 and 1")
    if any(c != 0 for c in base.start):
        raise ConstructionError("base must start all rooms at configuration 0")
    start = tuple(start)
    if len(start) != base.r:
        raise ConstructionError("start must assign one configuration per room")
    for c in start:
        if not 0 <= c < base.m:
            raise ConstructionError(f"start configuration {c} out of range")
    for i, prog in enumerate(base.programs):
        if i == base.leader:
            continue
        if not prog.steps:
            continue
        first = prog.steps[0]
        if isinstance(first, Flip):
            fire_set = {first.src}
        elif isinstance(first, See):
            fire_set = {first.target}
        elif isinstance(first, FlipNotIn):
            fire_set = set(range(base.m)) - set(first.excluded)
        elif isinstance(first, Oscillate):
            fire_set = {first.c1, first.c2}
        else:  # Declare fires unconditionally
            fire_set = {0, 1}
        if fire_set & {0, 1}:
            raise ConstructionError(
                "base non-leaders must open with a guard inert on configurations 0 and 1"
            )
    n, r = base.n, base.r
    r0 = sum(1 for c in start if c == 0)
    r1 = sum(1 for c in start if c == 1)
    sweep = Repeat(r - r0 - r1, (FlipNotIn(frozenset({0, 1}), 1),))
    drain = Repeat(r - r0 + (n - 1) * (r0 + 1), (Flip(1, 0),))
    raise_count = Repeat(r0 + 1, (Flip(0, 1),))
    programs = []
    for i, prog in enumerate(base.programs):
        if i == base.leader:
            programs.append(Program(prog.label, (sweep, drain) + prog.body))
        else:
            programs.append(Program(prog.label, (raise_count,) + prog.body))
    return replace(
        base,
        family=base.family + "-anystart",
        programs=tuple(programs),
        start=start,
        meta=dict(base.meta, cleanup_counts=(sweep.count, drain.count, raise_count.count)),
    )


def with_repeated_entries(base: ProtocolInstance, ell: int) -> ProtocolInstance:
    """Repeat each prisoner's tour ell times; win requires ell visits per room."""
    if base.family != "two-switch-prisoner" or base.meta.get("ell", 1) != 1:
        raise ConstructionError("repeated entries applies to the prisoner-at-a-time base")
    inst = two_switch_prisoner_at_a_time(base.n, base.r, ell=ell)
    return replace(inst, family="two-switch-prisoner-repeated")


def with_multiple_declarations(base: ProtocolInstance) -> ProtocolInstance:
    """Everyone declares: the leader raises a retired room to UP right as he
    declares, and the others declare the moment they sight it."""
    if base.family != "two-switch-room":
        raise ConstructionError("multiple declarations applies to the room-at-a-time base")
    Z, O, UP, DONE = 0, 1, 2, 3
    leader_prog = base.programs[base.leader]
    if not isinstance(leader_prog.body[-1], Declare):
        raise ConstructionError("leader program must end in Declare")
    leader = Program(leader_prog.label, leader_prog.body[:-1] + (Flip(DONE, UP), Declare()))
    programs = [leader]
    for i, prog in enumerate(base.programs):
        if i == base.leader:
            continue
        programs.append(Program(prog.label, prog.body + (See(UP), Declare())))
    tags = base.meta["leader_tags"][:-1] + (("end", 0), ("end", 0))
    return replace(
        base,
        family="two-switch-room-multi-declare",
        programs=tuple(programs),
        default_win=AllMustDeclare(),
        meta=dict(base.meta, leader_tags=tags),
    )


def forced_flip_transform(base: ProtocolInstance) -> ProtocolInstance:
    """Add a parity switch that every visit must toggle.

    Each base configuration c splits into a pair (2c, 2c+1); guards read the
    pair as c, every visit flips the parity bit, and a firing write replaces
    the base part. The base protocol's behaviour is untouched because nobody's
    guards can tell the pair members apart.
    """
    if base.forced_flip:
        raise ConstructionError("instance already carries the parity switch")
    names = []
    for name in base.config_names:
        names.extend((f"{name}a", f"{name}b"))
    return replace(
        base,
        family=base.family + "-forced-flip",
        m=2 * base.m,
        start=tuple(2 * c for c in base.start),
        config_names=tuple(names),
        forced_flip=True,
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegistryEntry:
    build: Callable[..., ProtocolInstance]
    params: tuple[str, ...]
    description: str


def _build_anystart(n: int, r: int, start: tuple) -> ProtocolInstance:
    base = two_switch_prisoner_at_a_time(n, r)
    resolved = tuple(base.config_index(c) if isinstance(c, str) else c for c in start)
    return arbitrary_start_wrapper(base, resolved)


PROTOCOLS: dict[str, RegistryEntry] = {
    "one-room-known": RegistryEntry(
        lambda n: one_room_known(n), ("n",),
        "single room, known OFF start; leader counts n-1 signals"),
    "one-room-known-per-room": RegistryEntry(
        lambda n, r: one_room_known(n, r), ("n", "r"),
        "single-switch counting replayed across r rooms (loses for r > 1; adversary demo)"),
    "one-room-unknown": RegistryEntry(
        lambda n: one_room_unknown(n), ("n",),
        "single room, unknown start; everyone signals twice"),
    "one-room-unknown-per-room": RegistryEntry(
        lambda n, r: one_room_unknown(n, r), ("n", "r"),
        "double-signal counting replayed across r rooms (loses for r > 1; adversary demo)"),
    "at-least-one-room": RegistryEntry(
        lambda n, r: at_least_one_room(n, r), ("n", "r"),
        "every prisoner visits at least one room, unknown start tolerated"),
    "sequential-chain": RegistryEntry(
        lambda n, r: sequential_chain(n, r), ("n", "r"),
        "n+1 configurations, prisoner i advances rooms from i-1 to i"),
    "room-at-a-time-six": RegistryEntry(
        lambda n, r: room_at_a_time_six(n, r), ("n", "r"),
        "six configurations, leader retires rooms one at a time"),
    "two-switch-prisoner": RegistryEntry(
        lambda n, r: two_switch_prisoner_at_a_time(n, r), ("n", "r"),
        "four configurations, one prisoner tours at a time via a NEXT baton"),
    "two-switch-room": RegistryEntry(
        lambda n, r: two_switch_room_at_a_time(n, r), ("n", "r"),
        "four configurations, leader-paced phases; odd r >= 3 only"),
    "two-switch-prisoner-anystart": RegistryEntry(
        _build_anystart, ("n", "r", "start"),
        "prisoner-at-a-time behind an arbitrary-start cleanup prefix"),
    "three-config-knowledge": RegistryEntry(
        lambda n, r: three_config_knowledge(n, r), ("n", "r"),
        "no declarations; finishing the body certifies full coverage"),
    "prob1-3config": RegistryEntry(
        lambda n, r: three_config_prob1(n, r), ("n", "r"),
        "three configurations, declares with probability 1 under fair random play"),
    "two-config-prob-eps": RegistryEntry(
        lambda n, r: two_config_prob_eps(n, r), ("n", "r"),
        "two configurations, wins under some schedule only"),
    "two-rooms-three-configs": RegistryEntry(
        lambda n: two_rooms_three_configs(n), ("n",),
        "exactly two rooms; one is pinned UP, the other counts"),
    "two-switch-prisoner-repeated": RegistryEntry(
        lambda n, r, ell: with_repeated_entries(two_switch_prisoner_at_a_time(n, r), ell),
        ("n", "r", "ell"),
        "prisoner-at-a-time with each tour repeated ell times (win needs ell visits)"),
    "two-switch-room-multi-declare": RegistryEntry(
        lambda n, r: with_multiple_declarations(two_switch_room_at_a_time(n, r)), ("n", "r"),
        "room-at-a-time where every prisoner must declare"),
    "two-switch-prisoner-forced-flip": RegistryEntry(
        lambda n, r: forced_flip_transform(two_switch_prisoner_at_a_time(n, r)), ("n", "r"),
        "prisoner-at-a-time behind the every-visit parity switch"),
}


def build_instance(
    protocol_id: str,
    n: int | None = None,
    r: int | None = None,
    ell: int | None = None,
    start: tuple[Config, ...] | None = None,
) -> ProtocolInstance:
    """Resolve a registry id and parameter set into an instance.

    Raises :class:`UsageError` for unknown ids or missing parameters and lets
    constructor errors (unsupported n/r combinations) propagate.
    """
    entry = PROTOCOLS.get(protocol_id)
    if entry is None:
        known = ", ".join(sorted(PROTOCOLS))
        raise UsageError(f"unknown protocol {protocol_id!r}; known: {known}")
    supplied = {"n": n, "r": r, "ell": ell, "start": start}
    kwargs = {}
    for name in entry.params:
        if supplied[name] is None:
            raise UsageError(f"protocol {protocol_id!r} needs --{name}")
        kwargs[name] = supplied[name]
    return entry.build(**kwargs)
