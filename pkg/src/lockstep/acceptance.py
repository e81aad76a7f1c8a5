"""The acceptance suite: eleven checks covering every guarantee this package
makes about its protocol library.

Each criterion is a standalone function returning a :class:`CriterionResult`;
``run_suite`` executes them in order. The functions enforce their own wall
clock budgets, so a pathological regression shows up as a failure here rather
than as a hung test run. Tests and the ``verify --suite acceptance`` command
both call into this module so there is exactly one definition of "done".
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, replace
from itertools import product

from .core import Declare, Flip, Program, See, Repeat
from .errors import UnsupportedParameterError
from .ownership import (
    ObservedEvent,
    provable_ownership_bruteforce,
    table_from_history,
)
from .protocols import (
    AllRoomsAllPrisoners,
    ProtocolInstance,
    build_instance,
    one_room_known,
    one_room_unknown,
    room_at_a_time_six,
    three_config_knowledge,
    three_config_prob1,
    two_config_prob_eps,
    two_rooms_three_configs,
    two_switch_prisoner_at_a_time,
    two_switch_room_at_a_time,
)
from .scheduling import (
    PointerRoomSchedule,
    RoundRobin,
    S1Adversary,
    SingleRoomSchedule,
    WitnessSchedule,
    build_schedule_pair,
    extend_to_valid,
)
from .transcripts import prefix_safety_search, run_transcript_protocol
from .verifier import check_knowledge, explore, simulate, verify_instance


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    elapsed: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[acceptance] criterion {self.number}: {status} "
            f"({self.elapsed:.2f}s) {self.title}: {self.detail}"
        )


def _timed(fn):
    t0 = time.monotonic()
    passed, detail = fn()
    return passed, detail, time.monotonic() - t0


# ---------------------------------------------------------------------------
# Hand-written single-switch strategies (criterion 7 fodder)
# ---------------------------------------------------------------------------

STRATEGY_HORIZON = 10_000


def single_switch_strategies() -> dict[str, tuple[Program, ...]]:
    """Strategies for two prisoners over one binary switch per room.

    None of them wins: the first declares immediately (and wrongly), the
    second never writes or declares at all, the third and fourth write
    forever or count far beyond the horizon. Between them they drive the
    adversary through every one of its four cases, including the forcing
    branch.
    """
    K = STRATEGY_HORIZON
    return {
        "reckless-declarer": (
            Program("p0", (See(0), Declare())),
            Program("p1", (See(0), Declare())),
        ),
        "silent-watchers": (
            Program("p0", (See(1),)),
            Program("p1", (See(1),)),
        ),
        "perpetual-togglers": (
            Program("p0", (Repeat(K, (Flip(0, 1),)),)),
            Program("p1", (Repeat(K, (Flip(1, 0),)),)),
        ),
        "patient-counter": (
            Program("p0", (Repeat(K, (Flip(1, 0),)), Declare())),
            Program("p1", (Repeat(2 * K, (Flip(0, 1),)),)),
        ),
    }


def strategy_instance(name: str, programs: tuple[Program, ...], r: int = 5) -> ProtocolInstance:
    return ProtocolInstance(
        family=f"handwritten-{name}",
        n=len(programs),
        r=r,
        m=2,
        programs=programs,
        start=(0,) * r,
        config_names=("0", "1"),
        guarantee=None,
        default_win=AllRoomsAllPrisoners(),
    )


# ---------------------------------------------------------------------------
# Documented protocol mutations (criterion 11)
# ---------------------------------------------------------------------------


def _drop_step(program: Program, pred, which: str = "last") -> Program:
    idxs = [i for i, s in enumerate(program.steps) if pred(s)]
    if not idxs:
        raise ValueError("mutation target not present")
    i = idxs[-1] if which == "last" else idxs[0]
    return Program(program.label, program.steps[:i] + program.steps[i + 1 :])


def mutant_short_ready_count(n: int = 2, r: int = 2) -> ProtocolInstance:
    """Two-switch prisoner-at-a-time whose leader acknowledges one tour too
    few before declaring (n-1 baton conversions instead of n)."""
    base = two_switch_prisoner_at_a_time(n, r)
    nxt, ready = base.config_index("NEXT"), base.config_index("READY")
    leader = _drop_step(
        base.programs[base.leader],
        lambda s: isinstance(s, Flip) and s.src == nxt and s.dst == ready,
    )
    return replace(base, programs=(leader,) + base.programs[1:])


def mutant_missing_gate(n: int = 2, r: int = 2) -> ProtocolInstance:
    """Probability-one protocol where prisoner 2 skips the observation gate
    and starts its forward phases without waiting for the handoff."""
    base = three_config_prob1(n, r)
    second = _drop_step(base.programs[1], lambda s: isinstance(s, See), "first")
    return replace(base, programs=base.programs[:1] + (second,) + base.programs[2:])


def mutant_missing_baton(n: int = 2, r: int = 2) -> ProtocolInstance:
    """Knowledge protocol without the leader's opening baton write; nobody
    can ever start the shared body."""
    base = three_config_knowledge(n, r)
    leader = Program(base.programs[0].label, base.programs[0].steps[1:])
    return replace(base, programs=(leader,) + base.programs[1:])


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------


def criterion_1() -> CriterionResult:
    """Single-room counting verifies safe and live for n in {1, 2, 3, 5}."""

    def run():
        nodes = []
        for n in (1, 2, 3, 5):
            rep = verify_instance(one_room_known(n), protocol_id="one-room-known")
            if not (rep.ok and rep.result.live):
                return False, f"n={n}: {rep.result.violation or 'guarantee mismatch'}"
            nodes.append(f"n={n}:{rep.result.nodes}")
        return True, "states " + " ".join(nodes)

    passed, detail, dt = _timed(run)
    return CriterionResult(1, "one-room counting", passed and dt < 1.0, detail, dt)


def criterion_2() -> CriterionResult:
    """Unknown-start single room verifies from both starting configurations."""

    def run():
        for n in (2, 3):
            for start in ((0,), (1,)):
                inst = one_room_unknown(n).with_start(start)
                rep = verify_instance(inst, protocol_id="one-room-unknown")
                if not (rep.ok and rep.result.live):
                    return False, f"n={n} start={start}: {rep.result.violation}"
        return True, "safe+live for n in {2,3}, both starts"

    passed, detail, dt = _timed(run)
    return CriterionResult(2, "unknown-start one-room", passed and dt < 1.0, detail, dt)


def criterion_3() -> CriterionResult:
    """Prisoner-at-a-time over two switches, with its lifecycle monitors."""

    def run():
        nodes = []
        for n, r in product((2, 3), repeat=2):
            rep = verify_instance(two_switch_prisoner_at_a_time(n, r))
            res = rep.result
            ok = rep.ok and res.live and res.nodes <= 10_000_000 and res.elapsed < 60.0
            if not ok:
                return False, f"(n={n},r={r}): {res.violation or 'guarantee mismatch'}"
            nodes.append(f"({n},{r}):{res.nodes}")
        return True, "states " + " ".join(nodes)

    passed, detail, dt = _timed(run)
    return CriterionResult(3, "two-switch prisoner-at-a-time", passed, detail, dt)


def criterion_4() -> CriterionResult:
    """Room-at-a-time variants with their phase monitors."""

    def run():
        nodes = []
        for ctor, name in (
            (room_at_a_time_six, "six-config"),
            (two_switch_room_at_a_time, "two-switch"),
        ):
            for n in (2, 3):
                rep = verify_instance(ctor(n, 3))
                if not (rep.ok and rep.result.live):
                    return False, f"{name} (n={n},r=3): {rep.result.violation}"
                nodes.append(f"{name}({n},3):{rep.result.nodes}")
        return True, "states " + " ".join(nodes)

    passed, detail, dt = _timed(run)
    return CriterionResult(4, "room-at-a-time variants", passed and dt < 60.0, detail, dt)


def criterion_5() -> CriterionResult:
    """Arbitrary-start wrapping succeeds for every start assignment."""

    def run():
        for start in product(range(4), repeat=2):
            inst = build_instance("two-switch-prisoner-anystart", n=2, r=2, start=start)
            rep = verify_instance(inst)
            if not (rep.ok and rep.result.live):
                return False, f"start={start}: {rep.result.violation}"
        return True, "all 16 start assignments safe+live at n=2, r=2"

    passed, detail, dt = _timed(run)
    return CriterionResult(5, "arbitrary-start wrapper", passed and dt < 300.0, detail, dt)


def criterion_6() -> CriterionResult:
    """The indistinguishable schedule pair and its no-win dichotomy."""

    def run():
        base = two_switch_prisoner_at_a_time(2, 2)
        pair = build_schedule_pair(base.programs, 2, 2)
        inst = base.with_start(pair.start_configs)
        D = pair.horizon_note["recurring_config"]

        r1 = simulate(inst, SingleRoomSchedule(2), max_steps=500)
        r2 = simulate(inst, PointerRoomSchedule(2, 2, D), max_steps=500)
        if len(r1.records) < 500 or len(r2.records) < 500:
            return False, "schedule pair ended before 500 events"
        for p in range(2):
            obs1 = [rec.observed for rec in r1.records if rec.prisoner == p]
            obs2 = [rec.observed for rec in r2.records if rec.prisoner == p]
            if obs1 != obs2:
                return False, f"prisoner {p} can distinguish the schedules"

        probe = simulate(inst, SingleRoomSchedule(2), max_steps=10_000)
        if probe.outcome.kind != "StepLimit":
            ext = extend_to_valid(SingleRoomSchedule(2), probe.outcome.step, 2, 2)
            out = simulate(inst, ext, max_steps=2 * 10_000)
            if out.outcome.kind != "DeclaredIncorrect":
                return False, f"extended schedule gave {out.outcome.kind}"
            branch = f"incorrect declaration at event {out.outcome.step}"
        else:
            long2 = simulate(inst, PointerRoomSchedule(2, 2, D), max_steps=10_000)
            if long2.outcome.kind != "StepLimit":
                return False, f"valid-schedule twin declared: {long2.outcome}"
            branch = "no declaration within 10^4 events on either schedule"
        return True, f"logs identical for 500 events; {branch}"

    passed, detail, dt = _timed(run)
    return CriterionResult(6, "indistinguishable schedules", passed and dt < 10.0, detail, dt)


def criterion_7() -> CriterionResult:
    """The single-switch adversary starves every hand-written strategy, and
    the incremental ownership table matches the brute-force account."""

    def run():
        parts = []
        for name, programs in single_switch_strategies().items():
            inst = strategy_instance(name, programs)
            adv = S1Adversary(programs, inst.n, inst.r, m=2)
            t0 = time.monotonic()
            sim = simulate(inst, adv, max_steps=STRATEGY_HORIZON)
            dt = time.monotonic() - t0
            if dt >= 30.0:
                return False, f"{name}: adversary run took {dt:.1f}s"
            if sim.outcome.kind == "DeclaredCorrect":
                return False, f"{name}: adversary permitted a correct declaration"
            if not adv.condition_log or any(c not in (1, 2, 3, 4) for c in adv.condition_log):
                return False, f"{name}: four-case invariant broke"
            if adv.audit_violations:
                return False, f"{name}: fairness audit failed: {adv.audit_violations[0]}"
            parts.append(
                f"{name}:{sim.outcome.kind}@{sim.outcome.step}"
                f" cases={sorted(set(adv.condition_log))}"
            )

        rng = random.Random(7)
        for trial in range(1000):
            n = rng.choice((2, 3))
            r = rng.randint(2, 5)
            start = tuple(rng.randrange(2) for _ in range(r))
            counts = [start.count(c) for c in range(2)]
            history = []
            for _ in range(rng.randint(0, 12)):
                c_in = rng.choice([c for c in range(2) if counts[c] > 0])
                c_out = rng.randrange(2)
                counts[c_in] -= 1
                counts[c_out] += 1
                history.append(ObservedEvent(rng.randrange(n), c_in, c_out))
            fast = table_from_history(start, history, n, 2).owns
            slow = provable_ownership_bruteforce(start, history, n, r, 2)
            if fast != slow:
                return False, f"ownership mismatch on trial {trial}"
        parts.append("ownership oracle agreement 1000/1000")
        return True, "; ".join(parts)

    passed, detail, dt = _timed(run)
    return CriterionResult(7, "single-switch adversary", passed, detail, dt)


def criterion_8() -> CriterionResult:
    """Probability-one three-configuration protocol with phase monitors."""

    def run():
        rep = verify_instance(three_config_prob1(2, 2))
        res = rep.result
        if not (rep.ok and res.safe and res.prob1 and res.nodes <= 10_000_000):
            return False, res.violation or "guarantee mismatch"
        return True, f"safe+prob1, {res.nodes} states, monitors clean"

    passed, detail, dt = _timed(run)
    return CriterionResult(8, "probability-one protocol", passed and dt < 300.0, detail, dt)


def criterion_9() -> CriterionResult:
    """Epsilon protocol: wins on some schedule, not with probability one."""

    def run():
        rep = verify_instance(two_config_prob_eps(2, 2))
        res = rep.result
        if not (rep.ok and res.safe and res.prob_eps and not res.prob1):
            return False, res.violation or "guarantee mismatch"
        wit = simulate(two_config_prob_eps(2, 2), WitnessSchedule(2, 2))
        if wit.outcome.kind != "DeclaredCorrect":
            return False, f"witness schedule gave {wit.outcome.kind}"
        return True, (
            f"safe+prob-eps, not prob1; witness declares correctly at event "
            f"{wit.outcome.step}; imbalance ledger clean on {res.nodes} states"
        )

    passed, detail, dt = _timed(run)
    return CriterionResult(9, "some-schedule protocol", passed and dt < 300.0, detail, dt)


def criterion_10() -> CriterionResult:
    """Corner cases: the two-room protocol, the knowledge-only protocol, the
    transcript protocol, and the three win-condition transforms."""

    def run():
        parts = []
        for n in (2, 3):
            rep = verify_instance(two_rooms_three_configs(n))
            if not (rep.ok and rep.result.live):
                return False, f"two-rooms n={n}: {rep.result.violation}"
        parts.append("two-rooms n in {2,3}")

        res = check_knowledge(three_config_knowledge(2, 2))
        if not (res.complete and res.safe and res.live):
            return False, f"knowledge check: {res.violation}"
        parts.append("knowledge holds (2,2)")

        run_t = run_transcript_protocol(3, 3, RoundRobin(3, 3))
        if run_t.kind != "DeclaredCorrect":
            return False, f"transcript round-robin gave {run_t.kind}"
        parts.append(f"transcript declares@{run_t.step} (3,3)")

        stats = prefix_safety_search(2, 2, max_prefix_len=3, depth=7)
        if stats["violation"] is not None:
            return False, f"transcript prefix search: {stats['violation']}"
        if not stats["declarations"]:
            return False, "transcript prefix search never reached a declaration"
        parts.append(
            f"prefix search clean ({stats['prefix_sets']} prefix sets, "
            f"{stats['declarations']} declarations)"
        )

        rep = verify_instance(build_instance("two-switch-room-multi-declare", n=2, r=3))
        if not (rep.ok and rep.result.live):
            return False, f"multi-declare (2,3): {rep.result.violation}"
        try:
            build_instance("two-switch-room-multi-declare", n=2, r=2)
            return False, "multi-declare accepted an even room count"
        except UnsupportedParameterError:
            pass
        parts.append("multi-declare (2,3), even r rejected")

        for r in (2, 3):
            rep = verify_instance(
                build_instance("two-switch-prisoner-repeated", n=2, r=r, ell=2)
            )
            if not (rep.ok and rep.result.live):
                return False, f"repeated-entries (2,{r}): {rep.result.violation}"
            rep = verify_instance(
                build_instance("two-switch-prisoner-forced-flip", n=2, r=r)
            )
            if not (rep.ok and rep.result.live):
                return False, f"forced-flip (2,{r}): {rep.result.violation}"
        parts.append("repeated ell=2 and forced-flip at r in {2,3}")
        return True, "; ".join(parts)

    passed, detail, dt = _timed(run)
    return CriterionResult(10, "corner cases and transforms", passed and dt < 600.0, detail, dt)


def criterion_11() -> CriterionResult:
    """Each documented mutation is caught with a concrete counterexample."""

    def run():
        parts = []

        res = explore(mutant_short_ready_count())
        if res.safe or not res.counterexample:
            return False, "short ready count not caught"
        parts.append(f"short ready count: {res.violation} ({len(res.counterexample)} events)")

        res = explore(mutant_missing_gate())
        if (res.safe and res.monitor_ok) or not res.counterexample:
            return False, "missing observation gate not caught"
        parts.append(f"missing gate: {res.violation} ({len(res.counterexample)} events)")

        res = check_knowledge(mutant_missing_baton())
        if res.live or not res.counterexample:
            return False, "missing baton write not caught"
        parts.append(f"missing baton: {res.violation} ({len(res.counterexample)} events)")
        return True, "; ".join(parts)

    passed, detail, dt = _timed(run)
    return CriterionResult(11, "mutation sensitivity", passed and dt < 300.0, detail, dt)


ALL_CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
)


def run_suite(emit=None) -> list[CriterionResult]:
    """Run every criterion; emit (default: no output) sees one line each."""
    results = []
    for fn in ALL_CRITERIA:
        res = fn()
        results.append(res)
        if emit is not None:
            emit(res.line())
    return results
