"""Command-line entry point.

Exit codes: 0 every check passed, 1 a check failed, 2 bad usage or input,
3 a file could not be read or written.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .analysis import ALL_CHECKS, analyze
from .core import (
    InvalidInstance,
    InvalidOrdering,
    check_ordering,
    identity_ordering,
    order_by_decreasing_size,
    order_by_decreasing_width,
    parse_rational,
)
from .engine import InstanceTooLarge, distinct_extremes, exhaustive_extremes, pack, sampled_extremes
from .generators import CONSTRUCTIONS, InvalidParameter, build
from .localsearch import Strategy, countdown_schedule, run, run_schedule
from .render import render_svg
from .repro import SUITES, run_suite

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(doc, out: str | None) -> None:
    text = io.dumps(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_params(name: str, pairs: list[str]) -> dict:
    if name not in CONSTRUCTIONS:
        raise UsageError(f"unknown construction {name!r}; choose from {', '.join(CONSTRUCTIONS)}")
    schema = CONSTRUCTIONS[name][1]
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise UsageError(f"parameter {pair!r} is not key=value")
        if key not in schema:
            raise UsageError(f"{name} has no parameter {key!r}; it takes {', '.join(sorted(schema))}")
        try:
            params[key] = int(value) if schema[key] is int else parse_rational(value)
        except ValueError:
            raise UsageError(f"parameter {key}: cannot read {value!r}") from None
    return params


def cmd_generate(args) -> int:
    params = _parse_params(args.name, args.params)
    case = build(args.name, **params)
    doc = io.instance_to_dict(case.instance, {"construction": case.name, "params": case.params}, case.orderings)
    io.write_json(args.out, doc)
    out = Path(args.out)
    written = [str(out)]
    # hand-placed layouts go next to the instance
    for ref_name, packing in case.reference_packings.items():
        ref_path = out.with_name(f"{out.stem}.{ref_name}.packing.json")
        io.write_json(ref_path, io.packing_to_dict(packing, {"construction": case.name, "reference": ref_name}))
        written.append(str(ref_path))
    print(f"{case.name}: {case.instance.n} items, width {io.format_rational(case.instance.width)}")
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def resolve_ordering(spec: str, instance, stored: dict) -> tuple[int, ...]:
    """Turn an --ordering argument into a permutation."""
    if spec == "given":
        if not stored:
            raise UsageError("the instance file stores no ordering")
        return next(iter(stored.values()))
    named = {
        "identity": identity_ordering,
        "by-decreasing-size": order_by_decreasing_size,
        "by-decreasing-width": order_by_decreasing_width,
    }
    if spec in named:
        return named[spec](instance)
    if spec in stored:
        return stored[spec]
    if Path(spec).is_file():
        raw = io.read_ordering(spec)
    elif all(part.strip().isdigit() for part in spec.split(",")):
        raw = [int(part) for part in spec.split(",")]
    else:
        known = ", ".join(["given", *named, *stored])
        raise UsageError(f"ordering {spec!r} is not a file, an id list or one of: {known}")
    return check_ordering(instance, raw)


def cmd_pack(args) -> int:
    instance, stored, _ = io.read_instance(args.instance)
    order = resolve_ordering(args.ordering, instance, stored)
    trace = pack(instance, order)
    io.write_json(args.out, io.packing_to_dict(trace.packing))
    if args.trace:
        io.write_json(args.trace, io.trace_to_dict(trace))
    print(f"height {io.format_rational(trace.height)}")
    return EXIT_OK


def _schedule_k(instance, metadata: dict) -> int:
    params = metadata.get("params") or {}
    if metadata.get("construction") == "expsteps" and "k" in params:
        return int(params["k"])
    return instance.n // 2


def cmd_search(args) -> int:
    instance, stored, metadata = io.read_instance(args.instance)
    doc: dict = {"mode": args.mode}
    if args.mode in ("exhaustive", "distinct", "sample"):
        if args.mode == "exhaustive":
            best, worst = exhaustive_extremes(instance)
        elif args.mode == "distinct":
            best, worst = distinct_extremes(instance)
        else:
            best, worst = sampled_extremes(instance, args.samples, args.seed)
            doc.update(samples=args.samples, seed=args.seed)
        doc.update(
            examined=best.orderings_examined,
            best={"ordering": list(best.ordering), "height": best.height},
            worst={"ordering": list(worst.ordering), "height": worst.height},
        )
        summary = f"best {io.format_rational(best.height)} worst {io.format_rational(worst.height)} " \
                  f"over {best.orderings_examined} orderings"
    else:
        if args.schedule == "countdown":
            sk = _schedule_k(instance, metadata)
            k = args.k if args.k is not None else sk
            trace = run_schedule(instance, countdown_schedule(sk), k)
            doc["schedule"] = "countdown"
        else:
            k = args.k if args.k is not None else 2
            start = resolve_ordering(args.ordering, instance, stored)
            trace = run(instance, start, k, args.strategy, args.max_steps)
            doc["strategy"] = trace.strategy.value
        doc.update(
            k=k,
            step_count=trace.step_count,
            steps=[{"ordering": list(o), "height": h} for o, h in trace.steps],
            final={"ordering": list(trace.final[0]), "height": trace.final[1]},
        )
        summary = f"{trace.step_count} steps, final height {io.format_rational(trace.final[1])}"
    _emit(doc, args.out)
    print(summary, file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def _report_dict(report) -> dict:
    pieces = []
    for res in report.pieces:
        g = res.graph
        entry = {
            "id": res.piece.id,
            "birth_step": res.piece.birth_step,
            "area": res.piece.area,
            "circuit": list(g.circuit),
            "start": g.at(g.start),
            "top": g.at(g.top),
            "checks": [c.as_dict() for c in res.checks],
        }
        if res.cover is not None:
            entry["cover"] = [{"label": s.label, "square": s.square, "width": s.width, "height": s.height}
                              for s in res.cover.subpieces]
        pieces.append(entry)
    return {
        "ok": report.ok,
        "checks": [c.as_dict() for c in report.checks],
        "pieces": pieces,
        "trenches": [{"id": t.id, "area": t.area, "right": t.is_right} for t in report.trenches],
    }


def _parse_checks(text: str) -> tuple[str, ...]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    if "all" in names:
        return ALL_CHECKS
    # feasibility always runs first, so naming it is allowed but adds nothing
    names = [n for n in names if n != "feasible"]
    unknown = sorted(set(names) - set(ALL_CHECKS))
    if unknown:
        raise UsageError(f"unknown checks {unknown}; choose from feasible, {', '.join(ALL_CHECKS)}, all")
    return tuple(names)


def cmd_analyze(args) -> int:
    checks = _parse_checks(args.checks)
    trace = io.read_trace(args.packing)
    report = analyze(trace, checks)
    _emit(_report_dict(report), args.out)
    stream = sys.stdout if args.out else sys.stderr
    for chk in report.checks:
        print(f"{chk.name}: {chk.status}", file=stream)
    if report.pieces:
        bad = sum(not p.ok for p in report.pieces)
        print(f"pieces: {len(report.pieces)} ({bad} with failed checks)", file=stream)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_render(args) -> int:
    packing = io.read_packing(args.packing)
    Path(args.out).write_text(render_svg(packing), encoding="utf-8")
    print(f"wrote {args.out} ({len(packing.placements)} rectangles)")
    return EXIT_OK


def cmd_repro(args) -> int:
    results = run_suite(args.suite)
    doc = {"passed": all(r.passed for r in results), "suites": [r.as_dict() for r in results]}
    if args.out:
        io.write_json(args.out, doc)
    for res in results:
        print(f"{res.suite}: {'PASS' if res.passed else 'FAIL'} ({res.seconds:.1f}s)")
        for chk in res.failed():
            print(f"  failed: {chk.name}: measured {io.to_jsonable(chk.measured)}, "
                  f"expected {io.to_jsonable(chk.expected)}")
    return EXIT_OK if doc["passed"] else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blpack", description="Exact bottom-left strip packing.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("generate", help="write an instance of a named construction")
    p.add_argument("name", help=", ".join(CONSTRUCTIONS))
    p.add_argument("params", nargs="*", metavar="key=value")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    ordering_help = ("given, identity, by-decreasing-size, by-decreasing-width, "
                     "a stored ordering name, an ordering file, or a comma list of ids")
    p = sub.add_parser("pack", help="pack an instance bottom-left in a given order")
    p.add_argument("--instance", required=True)
    p.add_argument("--ordering", default="given", help=ordering_help)
    p.add_argument("--out", required=True)
    p.add_argument("--trace", help="also write the per-step trace here")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("search", help="search over orderings")
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=("exhaustive", "distinct", "sample", "klocal"), required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.FIRST.value)
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--ordering", default="given", help="start ordering for klocal; " + ordering_help)
    p.add_argument("--schedule", choices=("countdown",), help="follow a prescribed step schedule instead")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("analyze", help="check properties of a packing or trace")
    p.add_argument("--packing", required=True)
    p.add_argument("--checks", default="all", help="comma list of feasible, " + ", ".join(ALL_CHECKS) + " or all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("render", help="draw a packing as SVG")
    p.add_argument("--packing", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("repro", help="run a reproduction suite")
    p.add_argument("--suite", required=True, choices=[*SUITES, "all"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidParameter, InvalidInstance, InvalidOrdering, InstanceTooLarge,
            io.FormatError, ValueError) as exc:
        print(f"blpack {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"blpack {args.verb}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
