"""Command-line interface.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or parse
errors (argparse uses 2 on its own for bad flags).
"""

from __future__ import annotations

import argparse
import json
import sys

from .bd1 import BD1ParseError, parse_bd1, write_bd1
from .completion import complete
from .diagram import BratteliDiagram, InvalidDiagramError, VertexId, validate
from .dot import to_dot
from .paths import hereditary_saturated_closure
from .pipeline import VerifyOptions, verify_all
from .representation import DEFAULT_PAIR_BUDGET


def _load(path: str) -> BratteliDiagram:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_bd1(fh.read())


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_seed_set(spec: str) -> list[VertexId]:
    vertices = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        level, sep, index = chunk.partition(":")
        if not sep:
            raise ValueError(f"bad vertex '{chunk}', expected 'level:index'")
        vertices.append(VertexId(int(level), int(index)))
    if not vertices:
        raise ValueError("empty seed set")
    return vertices


def _cmd_validate(args: argparse.Namespace) -> int:
    report = validate(_load(args.file), relax_emission=args.relax_emission)
    for f in report.findings:
        print(f"{f.severity}: {f.location}: {f.message}")
    print("ok" if report.ok else "invalid")
    return 0 if report.ok else 1


def _cmd_complete(args: argparse.Namespace) -> int:
    d = _load(args.file)
    try:
        c = complete(d)
    except InvalidDiagramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.report is not None:
            for f in exc.report.errors():
                print(f"error: {f.location}: {f.message}", file=sys.stderr)
        return 1
    _write_output(write_bd1(c.diagram), args.output)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    d = _load(args.file)
    options = VerifyOptions(
        level_cap=args.level, pair_budget=args.pair_budget, seed=args.seed
    )
    report = verify_all(d, options, source=args.file)
    for check in report["checks"]:
        print(f"{'ok  ' if check['ok'] else 'FAIL'} {check['name']}")
    ok = report["summary"]["ok"]
    print(f"summary: {'ok' if ok else 'FAIL'}")
    if args.json is not None:
        _write_output(json.dumps(report, indent=2) + "\n", args.json)
    return 0 if ok else 1


def _cmd_dot(args: argparse.Namespace) -> int:
    _write_output(to_dot(_load(args.file)), args.output)
    return 0


def _cmd_closure(args: argparse.Namespace) -> int:
    d = _load(args.file)
    try:
        seed = _parse_seed_set(args.seed_set)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for v in seed:
        if not d.in_range(v):
            print(f"error: vertex out of range: {v}", file=sys.stderr)
            return 2
    result = hereditary_saturated_closure(d, seed)
    print("closure:", " ".join(str(v) for v in sorted(result.closure)))
    for step in result.trace:
        witness = " ".join(f"{a}->{b}" for a, b in step.witness)
        print(f"added {step.vertex} by {step.rule} via {witness}")
    covers = result.covers(d)
    print(f"covers all vertices: {'yes' if covers else 'no'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bratteli",
        description="Complete labelled Bratteli diagrams and verify the "
        "construction with exact integer arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check diagram invariants")
    p.add_argument("file")
    p.add_argument("--relax-emission", action="store_true", help="allow mid-level sinks")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("complete", help="complete a diagram and write BD1")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_complete)

    p = sub.add_parser("verify", help="run the full verification pipeline")
    p.add_argument("file")
    p.add_argument("--level", type=int, default=None, help="truncate matrix checks to this completion level")
    p.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", default=None, help="write the JSON report here")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("dot", help="export Graphviz DOT")
    p.add_argument("file")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_dot)

    p = sub.add_parser("closure", help="hereditary + saturated closure of a vertex set")
    p.add_argument("file")
    p.add_argument("--seed-set", required=True, help="comma-separated level:index pairs")
    p.set_defaults(func=_cmd_closure)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BD1ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidDiagramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
