"""Command line front end.

Deliberately thin: arguments become service-layer requests, responses become
text or JSONL on stdout, and error types become exit codes. Everything the
subcommands can do is also reachable over HTTP via ``lockstep serve``.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from . import service
from .errors import ConstructionError, ResourceLimitError, UsageError

EX_OK = 0
EX_DECLARED_INCORRECT = 2
EX_STEP_LIMIT = 3
EX_USAGE = 64
EX_MISMATCH = 65
EX_RESOURCE = 70

_OUTCOME_CODES = {
    "DeclaredCorrect": EX_OK,
    "DeclaredIncorrect": EX_DECLARED_INCORRECT,
    "StepLimit": EX_STEP_LIMIT,
}

EPILOG = """exit codes:
  0   success (simulate: correct declaration; verify: all claims hold)
  2   simulation ended in an incorrect declaration
  3   simulation hit the step limit without a declaration
  64  usage error (unknown id, missing or unsupported parameter)
  65  a claimed guarantee failed to verify / an adversary demo did not hold
  70  state-space or history budget exhausted (see --node-cap, LOCKSTEP_NODE_CAP)
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def trace_line(event: service.TraceEvent) -> str:
    return json.dumps(event.model_dump(), separators=(",", ":"))


def parse_trace_line(line: str) -> service.TraceEvent:
    return service.TraceEvent.model_validate_json(line)


def _parse_start(text: str | None):
    if text is None:
        return None
    out: list[int | str] = []
    for tok in text.split(","):
        tok = tok.strip()
        out.append(int(tok) if tok.lstrip("-").isdigit() else tok)
    return out


def _instance_args(sub):
    sub.add_argument("--protocol", help="protocol id (see `lockstep verify --list`)")
    sub.add_argument("--n", type=int, help="number of prisoners")
    sub.add_argument("--r", type=int, help="number of rooms")
    sub.add_argument("--ell", type=int, help="required visits per (prisoner, room)")
    sub.add_argument(
        "--start",
        help="comma-separated starting configurations, indices or names (e.g. 0,1 or OFF,ON)",
    )


def build_parser() -> _Parser:
    parser = _Parser(
        prog="lockstep",
        description="Simulate, verify, and attack lights-and-rooms protocols.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one protocol under one scheduler")
    _instance_args(sim)
    sim.add_argument("--scheduler", default="round-robin")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--max-steps", type=int, default=100_000)
    sim.add_argument("--win", choices=sorted(service.WIN_CONDITIONS))
    sim.add_argument("--format", choices=("text", "jsonl"), default="text")
    sim.set_defaults(func=_cmd_simulate)

    ver = sub.add_parser("verify", help="exhaustively re-derive a protocol's guarantee")
    _instance_args(ver)
    ver.add_argument("--suite", choices=("acceptance",), help="run a named check suite")
    ver.add_argument("--list", action="store_true", help="list protocols and schedulers")
    ver.add_argument("--node-cap", type=int, help="explored-state budget")
    ver.add_argument(
        "--symmetry",
        action="store_true",
        help="quotient by permutations of rooms with equal start configurations",
    )
    ver.add_argument("--format", choices=("text", "jsonl"), default="text")
    ver.set_defaults(func=_cmd_verify)

    adv = sub.add_parser("adversary", help="run one of the no-win demonstrations")
    adv.add_argument("construction", choices=("lemma1", "s1"))
    _instance_args(adv)
    adv.add_argument("--horizon", type=int, default=500, help="events compared pairwise")
    adv.add_argument("--max-steps", type=int, default=10_000)
    adv.add_argument("--format", choices=("text", "jsonl"), default="text")
    adv.set_defaults(func=_cmd_adversary)

    srv = sub.add_parser("serve", help="expose the same handlers over HTTP")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.set_defaults(func=_cmd_serve)

    return parser


def _require_protocol(args):
    if not args.protocol:
        raise UsageError("--protocol is required")


def _cmd_simulate(args) -> int:
    _require_protocol(args)
    resp = service.run_simulation(
        service.SimulateRequest(
            protocol=args.protocol,
            n=args.n,
            r=args.r,
            ell=args.ell,
            start=_parse_start(args.start),
            scheduler=args.scheduler,
            seed=args.seed,
            max_steps=args.max_steps,
            win=args.win,
        )
    )
    if args.format == "jsonl":
        for ev in resp.trace:
            print(trace_line(ev))
        print(
            json.dumps(
                {"outcome": resp.outcome, "step": resp.step, "prisoner": resp.prisoner},
                separators=(",", ":"),
            )
        )
    else:
        for ev in resp.trace:
            tail = " declares" if ev.declared else ("" if ev.fired else " (waits)")
            print(
                f"event {ev.step}: p{ev.prisoner} room {ev.room} "
                f"{ev.config_before} -> {ev.config_after}{tail}"
            )
        who = "" if resp.prisoner is None else f" by p{resp.prisoner}"
        print(f"outcome: {resp.outcome} after {resp.step} events{who}")
    return _OUTCOME_CODES[resp.outcome]


def _print_listing():
    print("protocols:")
    for info in service.list_protocols():
        params = ", ".join(info.params)
        print(f"  {info.id} ({params}): {info.description}")
    print("schedulers:")
    for info in service.list_schedulers():
        print(f"  {info.id} [{info.kind}]: {info.description}")


def _cmd_verify(args) -> int:
    if args.list:
        _print_listing()
        return EX_OK
    if args.suite:
        resp = service.run_acceptance()
        for line in resp.lines:
            print(line)
        return EX_OK if resp.passed else EX_MISMATCH
    _require_protocol(args)
    resp = service.run_verification(
        service.VerifyRequest(
            protocol=args.protocol,
            n=args.n,
            r=args.r,
            ell=args.ell,
            start=_parse_start(args.start),
            node_cap=args.node_cap,
            symmetry=args.symmetry,
        )
    )
    if args.format == "jsonl":
        for prop in ("safe", "live", "prob1", "prob_eps", "monitors_ok"):
            print(
                json.dumps(
                    {
                        "protocol": resp.protocol,
                        "n": resp.n,
                        "r": resp.r,
                        "property": prop,
                        "verdict": getattr(resp, prop),
                        "states": resp.states,
                        "max_depth": resp.max_depth,
                    },
                    separators=(",", ":"),
                )
            )
        print(
            json.dumps(
                {
                    "protocol": resp.protocol,
                    "n": resp.n,
                    "r": resp.r,
                    "claimed": resp.claimed,
                    "derived": resp.derived,
                    "ok": resp.ok,
                    "violation": resp.violation,
                    "counterexample": (
                        [ev.model_dump() for ev in resp.counterexample]
                        if resp.counterexample
                        else None
                    ),
                },
                separators=(",", ":"),
            )
        )
    else:
        for line in resp.lines:
            print(line)
        if resp.violation:
            print(f"violation: {resp.violation}")
        if resp.counterexample:
            print("counterexample:")
            for ev in resp.counterexample:
                tail = " declares" if ev.declared else ("" if ev.fired else " (waits)")
                print(
                    f"  event {ev.step}: p{ev.prisoner} room {ev.room} "
                    f"{ev.config_before} -> {ev.config_after}{tail}"
                )
    return EX_OK if resp.ok else EX_MISMATCH


def _cmd_adversary(args) -> int:
    _require_protocol(args)
    resp = service.run_adversary(
        service.AdversaryRequest(
            construction=args.construction,
            protocol=args.protocol,
            n=args.n,
            r=args.r,
            ell=args.ell,
            start=_parse_start(args.start),
            horizon=args.horizon,
            max_steps=args.max_steps,
        )
    )
    if args.format == "jsonl":
        print(json.dumps(resp.model_dump(exclude_none=True), separators=(",", ":")))
    else:
        print(f"{resp.construction}: {resp.summary}")
    return EX_OK if resp.ok else EX_MISMATCH


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(service.create_app(), host=args.host, port=args.port)
    return EX_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code or EX_OK
    try:
        return args.func(args)
    except (UsageError, ConstructionError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
