"""One-shot reproduction suites: each builds a construction, packs it and
compares the measured values with the expected ones exactly."""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable

from .analysis import analyze, check_global_bound, verify_bottom_left
from .core import Instance, Packing, area_lower_bound, feasible
from .corpus import square_corpus
from .engine import PackingTrace, bl_height, exhaustive_extremes, pack, sampled_extremes
from .generators import GeneratedCase, build
from .localsearch import countdown_schedule, improve_step, run_schedule, support

CORPUS_SIZE = 500
CORPUS_SEED = 2024


@dataclass
class SubCheck:
    name: str
    passed: bool
    measured: Any = None
    expected: Any = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "measured": self.measured, "expected": self.expected}
        if self.details:
            out["details"] = self.details
        return out


@dataclass
class SuiteResult:
    suite: str
    checks: list[SubCheck]
    params: dict = field(default_factory=dict)
    seconds: float = 0.0  # wall time; kept out of as_dict so reports stay reproducible

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[SubCheck]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "params": self.params,
            "checks": [c.as_dict() for c in self.checks],
        }


def line_waste_certificate(instance: Instance, height: Fraction, item_id: int) -> dict:
    """Lower bound on empty area forced by one item in any packing of the given height.

    Every vertical line through the item crosses other items whose heights sum
    to at most ``height - h``; the gap left by the best such sum, times the item
    width, must be empty. When that exceeds the total slack ``W*height - area``
    no packing of that height exists.
    """
    item = instance.items[item_id]
    room = height - item.h
    sums = {Fraction(0)}
    for other in instance.items:
        if other.id != item_id:
            sums |= {s + other.h for s in sums if s + other.h <= room}
    best = max(sums) if room >= 0 else None
    slack = instance.width * height - instance.total_area
    waste = item.w * (room - best) if best is not None else None
    return {
        "height": height,
        "slack": slack,
        "forced_waste": waste,
        "infeasible": best is None or waste > slack,
    }


def _height_check(name: str, measured: Fraction, expected: Fraction, **details) -> SubCheck:
    return SubCheck(name, measured == expected, measured, expected, details)


def _reference_check(name: str, packing: Packing, expected: Fraction) -> SubCheck:
    ok, problems = feasible(packing)
    return SubCheck(name, ok and packing.height == expected, packing.height, expected,
                    {"feasible": ok, **({"problems": problems[:5]} if problems else {})})


def _exhaustive_suite(suite: str, case: GeneratedCase, opt_key: str):
    best, worst = exhaustive_extremes(case.instance)
    opt = case.reference_packings[opt_key]
    checks = [
        _height_check("best bottom-left height", best.height, case.expected["bl_best_height"],
                      ordering=list(best.ordering), worst=worst.height),
        SubCheck("orderings examined", best.orderings_examined == math.factorial(case.instance.n),
                 best.orderings_examined, math.factorial(case.instance.n)),
        _reference_check("optimal reference packing", opt, case.expected["opt_height"]),
    ]
    return SuiteResult(suite, checks, dict(case.params)), best, opt


def rect43_suite(eps: Fraction = Fraction(1, 100)) -> SuiteResult:
    case = build("rect43", eps=eps)
    result, best, opt = _exhaustive_suite("thm-rect43", case, "opt")
    ratio = best.height / opt.height
    result.checks.append(SubCheck("ratio beats 5/4", ratio > Fraction(5, 4), ratio, "> 5/4"))
    return result


def square65_suite(eps: Fraction = Fraction(1, 100)) -> SuiteResult:
    case = build("square65", eps=eps)
    result, best, opt = _exhaustive_suite("cor-square65", case, "opt_a")
    result.checks.append(SubCheck("ratio", True, best.height / opt.height))
    return result


def square43_suite(h: int = 2, eps: Fraction = Fraction(1, 10), samples: int = 100_000,
                 seed: int = CORPUS_SEED) -> SuiteResult:
    case = build("square43", h=h, eps=eps)
    inst = case.instance
    target = case.expected["bl_best_height"]
    figure = case.reference_packings["bl_layout"]
    checks = []
    for name in ("decreasing", "layout"):
        trace = pack(inst, case.orderings[name])
        checks.append(_height_check(f"{name} ordering height", trace.height, target))
        same = set(trace.packing.placements) == set(figure.placements)
        checks.append(SubCheck(f"{name} ordering reproduces the row layout", same,
                               "match" if same else "differs", "match"))
    claimed = case.expected["opt_height_claimed"]
    cert = line_waste_certificate(inst, claimed, case.groups["middle"][0])
    opt = case.reference_packings["opt"]
    opt_ok, _ = feasible(opt)
    checks.append(SubCheck("optimal reference packing", opt_ok and opt.height == claimed, opt.height, claimed,
                           {"feasible": opt_ok, "certificate_for_claimed_height": cert}))
    best, worst = sampled_extremes(inst, samples, seed)
    checks.append(SubCheck("no sampled ordering below the best height", best.height >= target, best.height,
                           f">= {target}", {"samples": samples, "seed": seed, "worst": worst.height}))
    return SuiteResult("thm-square43", checks, {**case.params, "samples": samples, "seed": seed})


def unit_rows(packing: Packing, unit_ids) -> list[int]:
    """Counts of unit squares per row, bottom row first. Units in one row sit on
    a staircase, so rows are told apart by the integer their top face rounds up to."""
    ids = set(unit_ids)
    rows = Counter(math.ceil(p.tf) for p in packing.placements if p.id in ids)
    return [rows[r] for r in sorted(rows)]


def checkerboard_suite(m: int = 4) -> SuiteResult:
    """The checkerboard alone, then with the reset row on top."""
    case = build("checkerboard", m=m)
    trace = pack(case.instance, case.orderings["decreasing"])
    rows = unit_rows(trace.packing, case.groups["unit"])
    want = [m * m + i - 1 for i in range(1, m + 1)]
    checks = [
        _height_check("decreasing ordering height", trace.height, case.expected["bl_height_decreasing"]),
        SubCheck("unit squares per row", rows == want, rows, want),
    ]
    case = build("resetrow", m=m)
    trace = pack(case.instance, case.orderings["decreasing"])
    ids = set(case.groups["reset"])
    tops = sorted({p.tf for p in trace.packing.placements if p.id in ids})
    want_top = case.expected["reset_top"]
    checks.append(SubCheck("reset row top faces", tops == [want_top], tops, [want_top],
                           {"reset_squares": len(ids)}))
    return SuiteResult("checkerboard", checks, dict(case.params))


@lru_cache(maxsize=None)
def tenthirds_trace(n: int) -> tuple[GeneratedCase, PackingTrace]:
    case = build("tenthirds", n=n)
    return case, pack(case.instance, case.orderings["adversarial"])


def tenthirds_suite(ns: tuple[int, ...] = (2, 3, 4)) -> SuiteResult:
    checks = []
    ratios = []
    for n in ns:
        case, trace = tenthirds_trace(n)
        bound = case.expected["bl_height_lower_bound"]
        ratio = trace.height / area_lower_bound(case.instance)
        ratios.append(ratio)
        checks.append(SubCheck(f"n={n} height reaches m + 2 + ... + 2^n", trace.height >= bound, trace.height,
                               f">= {bound}", {"items": case.instance.n, "ratio": ratio}))
    monotone = all(a <= b for a, b in zip(ratios, ratios[1:]))
    checks.append(SubCheck("ratio to the area bound is nondecreasing", monotone, ratios))
    return SuiteResult("tenthirds", checks, {"n": list(ns)})


def localsearch_suite(ks: tuple[int, ...] = (1, 2, 3)) -> SuiteResult:
    checks = []
    for k in ks:
        case = build("localsearch", k=k)
        adv = case.orderings["adversarial"]
        hgt = bl_height(case.instance, adv)
        checks.append(_height_check(f"k={k} adversarial height", hgt, Fraction(2 * (k + 2))))
        move = improve_step(case.instance, adv, k)
        checks.append(SubCheck(f"k={k} adversarial ordering is {k}-locally optimal", move is None,
                               None if move is None else list(move), None))
        opt = case.reference_packings["opt"]
        checks.append(_reference_check(f"k={k} optimal reference packing", opt, Fraction(k + 2)))
        checks.append(SubCheck(f"k={k} ratio", hgt / opt.height == 2, hgt / opt.height, Fraction(2)))
    return SuiteResult("localsearch", checks, {"k": list(ks)})


def expsteps_suite(ks: tuple[int, ...] = (3, 4, 5)) -> SuiteResult:
    checks = []
    for k in ks:
        case = build("expsteps", k=k)
        schedule = countdown_schedule(k)
        heights = [bl_height(case.instance, o) for o in schedule]
        want = [Fraction(2 ** k - p) for p in range(2 ** (k - 1))]
        supports = [support(a, b) for a, b in zip(schedule, schedule[1:])]
        checks.append(SubCheck(f"k={k} schedule length", len(schedule) == 2 ** (k - 1), len(schedule), 2 ** (k - 1)))
        checks.append(SubCheck(f"k={k} heights", heights == want, heights, want))
        checks.append(SubCheck(f"k={k} moves change at most k positions", max(supports, default=0) <= k,
                               supports, f"<= {k}"))
        try:
            trace = run_schedule(case.instance, schedule, k)
            checks.append(SubCheck(f"k={k} every step improves", True, trace.step_count))
        except ValueError as exc:
            checks.append(SubCheck(f"k={k} every step improves", False, str(exc)))
    return SuiteResult("expsteps", checks, {"k": list(ks)})


@lru_cache(maxsize=None)
def corpus_traces(count: int = CORPUS_SIZE, seed: int = CORPUS_SEED) -> tuple[PackingTrace, ...]:
    return tuple(pack(c.instance, c.ordering) for c in square_corpus(count, seed))


STRUCTURE_CHECKS = ("sides", "structure", "peaks", "cover", "wide_squares")


def structure_suite(count: int = CORPUS_SIZE, seed: int = CORPUS_SEED, examples: int = 3) -> SuiteResult:
    counts = Counter()
    failing_pieces = Counter()
    found: dict[str, list[str]] = {}
    pieces = 0
    for index, trace in enumerate(corpus_traces(count, seed)):
        report = analyze(trace, ("pieces", "structure", "peaks", "cover", "wide"), bl_oracle=True)
        pieces += len(report.pieces)
        for res in report.pieces:
            for chk in res.checks:
                if chk.status == "fail":
                    counts[chk.name] += len(chk.violations)
                    failing_pieces[chk.name] += 1
                    if len(found.setdefault(chk.name, [])) < examples:
                        found[chk.name].append(f"case {index} piece {res.piece.id}: {chk.violations[0]}")
    checks = [SubCheck("pieces extracted", pieces > 0, pieces)]
    for name in STRUCTURE_CHECKS:
        details = {"pieces_failing": failing_pieces[name], "examples": found[name]} if counts[name] else {}
        checks.append(SubCheck(f"{name} violations", counts[name] == 0, counts[name], 0, details))
    return SuiteResult("structure-suite", checks, {"count": count, "seed": seed})


def oracle_suite(count: int = CORPUS_SIZE, seed: int = CORPUS_SEED) -> SuiteResult:
    bl_bad, flood_bad = [], []
    for index, trace in enumerate(corpus_traces(count, seed)):
        ok, problems = verify_bottom_left(trace, oracle=True)
        if not ok:
            bl_bad.append(f"case {index}: {problems[0]}")
        report = analyze(trace, ("oracle",))
        chk = next(c for c in report.checks if c.name == "oracle")
        if chk.status != "pass":
            flood_bad.append(f"case {index}: {chk.violations[0]}")
    checks = [
        SubCheck("placements agree with the candidate-grid oracle", not bl_bad, len(bl_bad), 0,
                 {"examples": bl_bad[:3]} if bl_bad else {}),
        SubCheck("piece areas agree with the flood fill", not flood_bad, len(flood_bad), 0,
                 {"examples": flood_bad[:3]} if flood_bad else {}),
    ]
    return SuiteResult("oracle-suite", checks, {"count": count, "seed": seed})


def bound_packings(count: int = CORPUS_SIZE, seed: int = CORPUS_SEED, tenthirds_ns=(2, 3, 4)):
    """(label, packing) for every square packing the other suites produce."""
    case = build("square43", h=2, eps=Fraction(1, 10))
    for name, order in case.orderings.items():
        yield f"square43 {name}", pack(case.instance, order).packing
    for name, ref in case.reference_packings.items():
        yield f"square43 {name} reference", ref
    for name in ("checkerboard", "resetrow"):
        case = build(name, m=4)
        yield f"{name} decreasing", pack(case.instance, case.orderings["decreasing"]).packing
    for n in tenthirds_ns:
        yield f"tenthirds n={n}", tenthirds_trace(n)[1].packing
    for index, trace in enumerate(corpus_traces(count, seed)):
        yield f"corpus case {index}", trace.packing


def bound_suite(count: int = CORPUS_SIZE, seed: int = CORPUS_SEED, tenthirds_ns=(2, 3, 4)) -> SuiteResult:
    bad = []
    total = 0
    worst = (Fraction(0), "")
    for label, packing in bound_packings(count, seed, tenthirds_ns):
        rep = check_global_bound(packing)
        total += 1
        worst = max(worst, (rep.ratio, label))
        if not rep.passed:
            bad.append(f"{label}: height {rep.bl_height} > {rep.factor} x {rep.lower_bound}")
    checks = [SubCheck("height within 16 x area bound", not bad, len(bad), 0,
                       {"packings": total, "largest_ratio": worst[0], "largest_ratio_at": worst[1],
                        **({"examples": bad[:3]} if bad else {})})]
    return SuiteResult("bound-suite", checks, {"count": count, "seed": seed, "tenthirds_n": list(tenthirds_ns)})


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "thm-rect43": rect43_suite,
    "cor-square65": square65_suite,
    "thm-square43": square43_suite,
    "checkerboard": checkerboard_suite,
    "tenthirds": tenthirds_suite,
    "localsearch": localsearch_suite,
    "expsteps": expsteps_suite,
    "structure-suite": structure_suite,
    "oracle-suite": oracle_suite,
    "bound-suite": bound_suite,
}


def run_suite(name: str) -> list[SuiteResult]:
    """Run one suite, or every suite for "all"."""
    if name != "all" and name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    names = list(SUITES) if name == "all" else [name]
    out = []
    for nm in names:
        t0 = time.perf_counter()
        res = SUITES[nm]()
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out
