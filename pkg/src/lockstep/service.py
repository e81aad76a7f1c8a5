"""Request/response models and the handlers behind both front ends.

The CLI calls these functions in-process; ``create_app`` wraps the same
functions in a FastAPI application, so the HTTP surface and the command line
cannot drift apart. Handlers raise the package's error types; only the HTTP
layer translates them into status codes.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .errors import ConstructionError, ResourceLimitError, UsageError
from .protocols import (
    AllMustDeclare,
    AllRoomsAllPrisoners,
    AtLeastOneRoom,
    PROTOCOLS,
    ProtocolInstance,
    build_instance,
)
from .scheduling import (
    PointerRoomSchedule,
    S1Adversary,
    SCHEDULERS,
    SingleRoomSchedule,
    build_schedule_pair,
    build_scheduler,
    extend_to_valid,
)
from .verifier import simulate, verify_instance

WIN_CONDITIONS = {
    "all-rooms": lambda inst: AllRoomsAllPrisoners(),
    "at-least-one": lambda inst: AtLeastOneRoom(),
    "all-declare": lambda inst: AllMustDeclare(),
}


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


class InstanceParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    protocol: str
    n: int | None = None
    r: int | None = None
    ell: int | None = None
    start: list[int | str] | None = None


class SimulateRequest(InstanceParams):
    scheduler: str = "round-robin"
    seed: int | None = None
    max_steps: int = Field(default=100_000, ge=1)
    win: Literal["all-rooms", "at-least-one", "all-declare"] | None = None


class TraceEvent(BaseModel):
    step: int
    prisoner: int
    room: int
    config_before: str
    config_after: str
    fired: bool
    declared: bool


class SimulateResponse(BaseModel):
    protocol: str
    scheduler: str
    outcome: str
    step: int
    prisoner: int | None
    trace: list[TraceEvent]


class VerifyRequest(InstanceParams):
    node_cap: int | None = Field(default=None, ge=1)
    symmetry: bool = False


class VerifyResponse(BaseModel):
    protocol: str
    n: int
    r: int
    claimed: str
    derived: str
    ok: bool
    safe: bool
    live: bool
    prob1: bool
    prob_eps: bool
    monitors_ok: bool
    states: int
    edges: int
    max_depth: int
    violation: str | None
    counterexample: list[TraceEvent] | None
    lines: list[str]


class AdversaryRequest(InstanceParams):
    construction: Literal["lemma1", "s1"]
    horizon: int = Field(default=500, ge=1)
    max_steps: int = Field(default=10_000, ge=1)


class AdversaryResponse(BaseModel):
    construction: str
    ok: bool
    summary: str
    # lemma1 fields
    logs_identical: bool | None = None
    compared_events: int | None = None
    dichotomy: str | None = None
    # s1 fields
    outcome: str | None = None
    step: int | None = None
    cases_seen: list[int] | None = None
    forced_words: int | None = None
    audit_ok: bool | None = None


class ProtocolInfo(BaseModel):
    id: str
    params: list[str]
    description: str


class SchedulerInfo(BaseModel):
    id: str
    kind: str
    description: str


class AcceptanceResponse(BaseModel):
    passed: bool
    lines: list[str]


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def resolve_instance(params: InstanceParams) -> ProtocolInstance:
    """Registry lookup plus optional start-configuration override."""
    entry = PROTOCOLS.get(params.protocol)
    if entry is None:
        known = ", ".join(sorted(PROTOCOLS))
        raise UsageError(f"unknown protocol {params.protocol!r}; known: {known}")
    start = tuple(params.start) if params.start is not None else None
    inst = build_instance(
        params.protocol,
        n=params.n,
        r=params.r,
        ell=params.ell,
        start=start if "start" in entry.params else None,
    )
    if start is not None and "start" not in entry.params:
        resolved = tuple(
            inst.config_index(c) if isinstance(c, str) else c for c in start
        )
        inst = inst.with_start(resolved)
    return inst


def _trace(instance: ProtocolInstance, records) -> list[TraceEvent]:
    names = instance.config_names
    return [
        TraceEvent(
            step=rec.step,
            prisoner=rec.prisoner,
            room=rec.room,
            config_before=names[rec.observed],
            config_after=names[rec.written],
            fired=rec.fired,
            declared=rec.declared,
        )
        for rec in records
    ]


def run_simulation(req: SimulateRequest) -> SimulateResponse:
    instance = resolve_instance(req)
    scheduler = build_scheduler(req.scheduler, instance, seed=req.seed)
    win = WIN_CONDITIONS[req.win](instance) if req.win else None
    result = simulate(instance, scheduler, win=win, max_steps=req.max_steps)
    return SimulateResponse(
        protocol=req.protocol,
        scheduler=req.scheduler,
        outcome=result.outcome.kind,
        step=result.outcome.step,
        prisoner=result.outcome.prisoner,
        trace=_trace(instance, result.records),
    )


def run_verification(req: VerifyRequest) -> VerifyResponse:
    instance = resolve_instance(req)
    report = verify_instance(
        instance,
        protocol_id=req.protocol,
        node_cap=req.node_cap,
        symmetry=req.symmetry,
    )
    res = report.result
    return VerifyResponse(
        protocol=report.protocol,
        n=report.n,
        r=report.r,
        claimed=report.expected.value if report.expected else "none",
        derived=res.derived.value if res.derived else "none",
        ok=report.ok,
        safe=res.safe,
        live=res.live,
        prob1=res.prob1,
        prob_eps=res.prob_eps,
        monitors_ok=res.monitor_ok,
        states=res.nodes,
        edges=res.edges,
        max_depth=res.max_depth,
        violation=res.violation,
        counterexample=(
            _trace(instance, res.counterexample) if res.counterexample else None
        ),
        lines=report.lines(),
    )


def _run_lemma1(req: AdversaryRequest) -> AdversaryResponse:
    base = resolve_instance(req)
    pair = build_schedule_pair(base.programs, base.n, base.r)
    inst = base.with_start(pair.start_configs)
    D = pair.horizon_note["recurring_config"]
    n, r = base.n, base.r

    run1 = simulate(inst, SingleRoomSchedule(n), max_steps=req.horizon)
    run2 = simulate(inst, PointerRoomSchedule(n, r, D), max_steps=req.horizon)
    identical = all(
        [rec.observed for rec in run1.records if rec.prisoner == p]
        == [rec.observed for rec in run2.records if rec.prisoner == p]
        for p in range(n)
    )

    probe = simulate(inst, SingleRoomSchedule(n), max_steps=req.max_steps)
    if probe.outcome.kind != "StepLimit":
        ext = extend_to_valid(SingleRoomSchedule(n), probe.outcome.step, n, r)
        out = simulate(inst, ext, max_steps=2 * req.max_steps)
        dichotomy = (
            f"single-room declaration at event {probe.outcome.step}; under the "
            f"valid extension it is {out.outcome.kind} at event {out.outcome.step}"
        )
    else:
        twin = simulate(inst, PointerRoomSchedule(n, r, D), max_steps=req.max_steps)
        dichotomy = (
            f"no declaration within {req.max_steps} events "
            f"(single-room: {probe.outcome.kind}, pointer: {twin.outcome.kind})"
        )
    summary = (
        f"per-prisoner observation logs {'identical' if identical else 'DIFFER'} "
        f"over {req.horizon} events; {dichotomy}"
    )
    return AdversaryResponse(
        construction="lemma1",
        ok=identical,
        summary=summary,
        logs_identical=identical,
        compared_events=req.horizon,
        dichotomy=dichotomy,
    )


def _run_s1(req: AdversaryRequest) -> AdversaryResponse:
    instance = resolve_instance(req)
    adversary = S1Adversary(instance.programs, instance.n, instance.r, m=instance.m)
    result = simulate(instance, adversary, max_steps=req.max_steps)
    ok = result.outcome.kind != "DeclaredCorrect"
    summary = (
        f"{result.outcome.kind} at event {result.outcome.step}; "
        f"cases seen {sorted(set(adversary.condition_log))}, "
        f"{adversary.forced_words} forced words, "
        f"fairness audit {'clean' if not adversary.audit_violations else 'FAILED'}"
    )
    return AdversaryResponse(
        construction="s1",
        ok=ok and not adversary.audit_violations,
        summary=summary,
        outcome=result.outcome.kind,
        step=result.outcome.step,
        cases_seen=sorted(set(adversary.condition_log)),
        forced_words=adversary.forced_words,
        audit_ok=not adversary.audit_violations,
    )


def run_adversary(req: AdversaryRequest) -> AdversaryResponse:
    if req.construction == "lemma1":
        return _run_lemma1(req)
    return _run_s1(req)


def list_protocols() -> list[ProtocolInfo]:
    return [
        ProtocolInfo(id=pid, params=list(entry.params), description=entry.description)
        for pid, entry in sorted(PROTOCOLS.items())
    ]


def list_schedulers() -> list[SchedulerInfo]:
    return [
        SchedulerInfo(id=sid, kind=entry["kind"], description=entry["description"])
        for sid, entry in sorted(SCHEDULERS.items())
    ]


def run_acceptance() -> AcceptanceResponse:
    from .acceptance import run_suite

    results = run_suite()
    return AcceptanceResponse(
        passed=all(res.passed for res in results),
        lines=[res.line() for res in results],
    )


# ---------------------------------------------------------------------------
# HTTP facade
# ---------------------------------------------------------------------------


def create_app():
    from fastapi import FastAPI, HTTPException

    app = FastAPI(title="lockstep", version=__version__)

    def guarded(fn, *args):
        try:
            return fn(*args)
        except (UsageError, ConstructionError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except ResourceLimitError as exc:
            raise HTTPException(status_code=503, detail=str(exc)) from exc

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/protocols", response_model=list[ProtocolInfo])
    def protocols():
        return list_protocols()

    @app.get("/schedulers", response_model=list[SchedulerInfo])
    def schedulers():
        return list_schedulers()

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate_endpoint(req: SimulateRequest):
        return guarded(run_simulation, req)

    @app.post("/verify", response_model=VerifyResponse)
    def verify_endpoint(req: VerifyRequest):
        return guarded(run_verification, req)

    @app.post("/adversary", response_model=AdversaryResponse)
    def adversary_endpoint(req: AdversaryRequest):
        return guarded(run_adversary, req)

    @app.post("/acceptance", response_model=AcceptanceResponse)
    def acceptance_endpoint():
        return run_acceptance()

    return app
