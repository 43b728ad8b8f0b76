"""Command-line entry point: classify, scan, verify, plot and columns.

Every command builds a :class:`Report`; its text form goes to stdout, the
runtime to stderr, and ``--report PATH`` writes the JSON-lines stream.
Exit codes: 0 all checks passed, 1 a check failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import plotting
from .cells import BOUNDARY_TOL, CellLabel, QuarticNormalForm, classify, critical_roots, normalize, sample_cell
from .discriminant import KnotMap, canonicalize_s1, degree_linking, orbit_sphere, rotate_s1
from .polyring import Poly, PolyError
from .report import Check, Report
from .scanner import (BOUNDARY_MARGIN, D_THRESHOLDS, MIN_RESOLUTION, FiberType, ScannerError, breakpoints,
                      d_cell_fiber, d_cell_oracle, lines_through_summary)
from .suites import (SUITES, FiberComparison, compare_fibers, d_cell_thresholds, fiber_grid, run_suite)
from .symcurve import Circle, Irreducible, Segment, decompose_quartic

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CELL_NAMES = {label.value: label for label in CellLabel}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers

def _quartic(args) -> tuple[Poly, QuarticNormalForm]:
    if args.coeffs is not None:
        try:
            c = [float(x) for x in args.coeffs.split(",")]
        except ValueError:
            raise UsageError(f"--coeffs must be comma-separated numbers, got {args.coeffs!r}")
        if len(c) != 3:
            raise UsageError("--coeffs takes a1,a2,a3 for t^4 + a1 t^3 + a2 t^2 + a3 t")
        f = Poly(tuple(c))
        return f, normalize(f)
    if args.a is None or args.b is None:
        raise UsageError("give --a and --b, or --coeffs")
    nf = QuarticNormalForm(0.0, float(args.a), float(args.b))
    return nf.poly, nf


def _finite(*xs) -> None:
    if not all(math.isfinite(x) for x in xs):
        raise UsageError("coefficients must be finite")


def _num(x: float) -> float:
    return round(x, 12) + 0.0


def _shift(x: float) -> str:
    """' + x' or ' - |x|' for inline formulas."""
    return f" - {-x:g}" if x < 0 else f" + {x + 0.0:g}"


def _describe(component) -> str:
    if isinstance(component, Segment):
        return f"segment t + s = {component.p:g}"
    if isinstance(component, Circle):
        kind = "imaginary circle" if component.imaginary else "circle"
        c = _shift(-component.t0)
        return f"{kind} (t{c})^2 + (s{c})^2{_shift(component.lam)} = 0"
    if isinstance(component, Irreducible):
        return "irreducible cubic curve"
    return str(component)


def _mirrored(nf: QuarticNormalForm) -> tuple[QuarticNormalForm, int]:
    """B' forms are handled through t -> -t, which also flips nabla."""
    if nf.b < 0:
        return QuarticNormalForm(0.0, nf.a, -nf.b), -1
    return nf, 1


def _write_tsv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([f"{x:.12g}" if isinstance(x, float) else x for x in row])


# ---------------------------------------------------------------------------
# classify

def cmd_classify(args) -> Report:
    f, nf = _quartic(args)
    _finite(nf.a, nf.b)
    tol = args.tolerance if args.tolerance is not None else BOUNDARY_TOL
    label = classify(nf.a, nf.b, tol)
    roots = critical_roots(nf)
    rep = Report("classify", {"f": str(f), "tolerance": tol})
    rep.results["normal_form"] = f"t^4{_shift(nf.a)} t^2{_shift(nf.b)} t"
    rep.results["shift"] = f"t -> t{_shift(nf.t0)}"
    rep.results["cell"] = label.value
    rep.results["critical_roots"] = [_num(x) for x in roots.values]
    rep.results["critical_multiplicities"] = roots.multiplicities
    rep.results["components"] = [_describe(c) for c in decompose_quartic(f)]

    n_roots = sum(roots.multiplicities)
    expected_distinct = {CellLabel.A: 1, CellLabel.A_prime: 1, CellLabel.B: 3, CellLabel.B_prime: 3,
                         CellLabel.C: 1, CellLabel.D: 3, CellLabel.E: 2, CellLabel.E_prime: 2, CellLabel.O: 1}
    rep.checks.append(Check("cells.critical_root_count", len(roots) == expected_distinct[label],
                            float(len(roots) - expected_distinct[label]),
                            {"cell": label.value}, f"{len(roots)} distinct, {n_roots} with multiplicity"))
    if label in (CellLabel.B, CellLabel.B_prime):
        base, sign = _mirrored(nf)
        bp = breakpoints(base)
        table = [(name, sign * getattr(bp, name)) for name in
                 ("omega1", "omega2", "omega3", "tau", "mu", "xi", "c", "kappa", "nu", "m23")]
        rep.results["breakpoints"] = [(name, _num(v)) for name, v in table]
        if sign < 0:
            rep.results["breakpoints_note"] = "mirrored from b > 0 through t -> -t (nabla -> -nabla)"
        x2 = sorted(critical_roots(base).values)[1]
        margins = bp.orderings(x2)
        worst = min(margins.values())
        rep.checks.append(Check("lemma13.orderings", worst > 0, worst, {},
                                f"smallest gap at {min(margins, key=margins.get)}"))
    return rep


# ---------------------------------------------------------------------------
# scan

def _agreement_matrix(rows) -> list[tuple]:
    counts = Counter()
    for _a, _b, _x, ha, ho, da, do in rows:
        counts[("heart", ha, ho)] += 1
        counts[("diamond", da, do)] += 1
    return [(t, an, orc, n) for (t, an, orc), n in sorted(counts.items())]


def _scan_b(args, out: Path, rep: Report, rng, fixed: QuarticNormalForm | None) -> None:
    if fixed is not None:
        nfs = [fixed]
    else:
        nfs = [sample_cell(CellLabel.B, rng) for _ in range(args.samples or 5)]
    margin = args.tolerance if args.tolerance is not None else BOUNDARY_MARGIN
    cmp = FiberComparison()
    for nf in nfs:
        base, sign = _mirrored(nf)
        sub = compare_fibers(base, fiber_grid(base, 40), args.resolution, margin=margin)
        cmp.compared += sub.compared
        cmp.agreed += sub.agreed
        cmp.flagged += sub.flagged
        cmp.rows += [(nf.a, nf.b, sign * x, *rest) for _a, _b, x, *rest in sub.rows]
    _write_tsv(out / "fibers.tsv", ["a", "b", "nabla", "heart", "heart_oracle", "diamond", "diamond_oracle"],
               cmp.rows)
    matrix = _agreement_matrix(cmp.rows)
    _write_tsv(out / "agreement.tsv", ["target", "analytic", "oracle", "count"], matrix)
    rep.results["polynomials"] = len(nfs)
    rep.results["agreement"] = f"{cmp.agreed}/{cmp.compared}"
    rep.results["boundary_flags"] = cmp.flagged
    rep.results["agreement_matrix"] = matrix
    rep.checks.append(Check("thm4.oracle_agreement", cmp.agreed == cmp.compared, cmp.rate,
                            {"polynomials": len(nfs), "resolution": args.resolution, "margin": margin},
                            f"{cmp.agreed}/{cmp.compared} agree, {cmp.flagged} boundary flags"))
    first = nfs[0]
    plotting.render("fibers", out / "fibers.svg", a=first.a, b=first.b)


def _scan_d(args, out: Path, rep: Report) -> None:
    tol = args.tolerance if args.tolerance is not None else 1e-6
    found = d_cell_thresholds(resolution=args.resolution)
    names = ("1/3", "sqrt2/3", "1/2", "2/3")
    table = [(k, found[k], v, abs(found[k] - v)) for k, v in zip(names, D_THRESHOLDS)]
    rep.results["thresholds"] = [(k, round(x, 10), round(v, 10)) for k, x, v, _ in table]
    for k, x, v, err in table:
        rep.checks.append(Check(f"lemma20.threshold[{k}]", err <= tol, err, {"expected": v}))
    grid = np.linspace(-0.8, 0.8, args.samples or 41)
    rows = []
    bad = compared = 0
    for x in grid:
        a, o = d_cell_fiber(float(x)), d_cell_oracle(float(x), args.resolution)
        rows.append((float(x), a.value, o.value))
        if FiberType.Boundary not in (a, o):
            compared += 1
            bad += a is not o
    _write_tsv(out / "fibers.tsv", ["nabla", "analytic", "oracle"], rows)
    rep.results["fiber_grid"] = f"{compared - bad}/{compared} agree"
    rep.checks.append(Check("lemma20.d_fiber_grid", bad == 0, float(bad), {"nablas": len(grid)}))
    plotting.render("dcell", out / "fibers.svg")


def _scan_lines(args, out: Path, rep: Report, label: CellLabel, rng, fixed: QuarticNormalForm | None) -> None:
    nfs = [fixed] if fixed is not None else [sample_cell(label, rng, box=10.0) for _ in range(args.samples or 4)]
    rows = []
    ok = 0
    for nf in nfs:
        s = lines_through_summary(nf, resolution=max(MIN_RESOLUTION, args.resolution // 16))
        rows.append((nf.a, nf.b, s.cell.value, s.expected, "" if s.components is None else s.components,
                     float(s.max_count), "" if s.infinite_witness is None else s.infinite_witness))
        if label in (CellLabel.A, CellLabel.A_prime):
            ok += s.components == 0 and s.max_count <= 2
        elif label in (CellLabel.C, CellLabel.O):
            ok += bool(s.infinite_witness)
        elif label in (CellLabel.B, CellLabel.B_prime):
            ok += s.components == 2
        elif label is CellLabel.D:
            ok += s.components == 3
        else:
            ok += s.components is not None and s.components >= 1
    _write_tsv(out / "fibers.tsv", ["a", "b", "cell", "expected", "components", "max_count", "infinite"], rows)
    cid = {CellLabel.A: "lemma9.no_three_condition_lines", CellLabel.A_prime: "lemma9.no_three_condition_lines",
           CellLabel.C: "lemma3.infinite_witness", CellLabel.O: "lemma3.infinite_witness",
           CellLabel.B: "prop10.two_components", CellLabel.B_prime: "prop10.two_components",
           CellLabel.D: "prop12.three_components"}.get(label, "prop11.half_open_interval")
    rep.results["summaries"] = rows
    rep.checks.append(Check(f"{cid}[{label.value}]", ok == len(nfs), float(len(nfs) - ok),
                            {"samples": len(nfs)}))
    plotting.render("cells", out / "fibers.svg")


def cmd_scan(args) -> Report:
    if args.resolution < MIN_RESOLUTION:
        raise UsageError(f"--resolution must be at least {MIN_RESOLUTION}")
    fixed = None
    if args.cell is not None:
        if args.cell not in CELL_NAMES:
            raise UsageError(f"unknown cell {args.cell!r}; choose from {', '.join(CELL_NAMES)}")
        label = CELL_NAMES[args.cell]
    elif args.a is not None and args.b is not None:
        _finite(args.a, args.b)
        fixed = QuarticNormalForm(0.0, float(args.a), float(args.b))
        label = classify(fixed.a, fixed.b)
    else:
        raise UsageError("give --cell or both --a and --b")
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    rep = Report("scan", {"cell": label.value, "resolution": args.resolution, "seed": args.seed,
                          "samples": args.samples, "output": str(out)})
    if label in (CellLabel.B, CellLabel.B_prime):
        _scan_b(args, out, rep, rng, fixed if fixed is not None else None)
    elif label is CellLabel.D and fixed is None:
        _scan_d(args, out, rep)
    else:
        _scan_lines(args, out, rep, label, rng, fixed)
    (out / "report.jsonl").write_text(rep.to_jsonl())
    return rep


# ---------------------------------------------------------------------------
# verify

def _run_named(job: tuple[str, int, int | None]) -> list[Check]:
    name, seed, samples = job
    return run_suite(name, seed, samples)


def _run_suites(names: list[str], seed: int, samples: dict[str, int | None], jobs: int) -> list[Check]:
    work = [(n, seed, samples.get(n)) for n in names]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(_run_named, work))
    else:
        batches = [_run_named(w) for w in work]
    return [c for batch in batches for c in batch]


def cmd_verify(args) -> Report:
    if args.suite == "all":
        names = list(SUITES)
    elif args.suite in SUITES:
        names = [args.suite]
    else:
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    rep = Report("verify", {"suite": args.suite, "seed": args.seed, "samples": args.samples})
    rep.checks = _run_suites(names, args.seed, {n: args.samples for n in names}, args.jobs)
    rep.results["suites"] = names
    return rep


# ---------------------------------------------------------------------------
# plot

def cmd_plot(args) -> Report:
    kwargs = {}
    if args.figure in ("rcurves", "fibers"):
        for key in ("a", "b"):
            if getattr(args, key) is not None:
                kwargs[key] = float(getattr(args, key))
    if args.figure == "rcurves" and args.nabla is not None:
        kwargs["nabla"] = float(args.nabla)
    if args.figure in ("fibers", "dcell") and args.resolution is not None:
        if args.resolution < MIN_RESOLUTION:
            raise UsageError(f"--resolution must be at least {MIN_RESOLUTION}")
        kwargs["resolution"] = args.resolution
    path = Path(args.output or f"{args.figure}.svg")
    plotting.render(args.figure, path, **kwargs)
    return Report("plot", {"figure": args.figure, **kwargs}, {"output": str(path)})


# ---------------------------------------------------------------------------
# columns

PROVENANCE = "paper-proved, machine-supported-not-machine-proved"


@dataclass
class ColumnEntry:
    column: str
    claim: str
    supports: list[str] = field(default_factory=list)
    status: str = "unsupported"


@dataclass
class ColumnLedger:
    n: int
    entries: list[ColumnEntry] = field(default_factory=list)

    @property
    def supported(self) -> bool:
        return all(e.status == "supported" for e in self.entries)

    def rows(self) -> list[tuple]:
        return [(e.column, e.claim, e.status, ",".join(e.supports)) for e in self.entries]


# support suites per column, with the reduced sample sizes used by the ledger
COLUMN_SUPPORT = {
    "E1^{-1,*}": ("linking",),
    "E1^{-2,*}": ("lemma7", "fibers", "infinite"),
    "E1^{-3,*}": ("cells", "dcell"),
}
LEDGER_SAMPLES = {"lemma7": 200, "fibers": 3, "infinite": 200, "cells": 2, "dcell": 40, "linking": None}


def build_ledger(n: int, checks_by_suite: dict[str, list[Check]]) -> ColumnLedger:
    claims = {
        "E1^{-1,*}": f"free cyclic at q = {n - 1}, zero for other q",
        "E1^{-2,*}": "zero",
        "E1^{-3,*}": "zero",
    }
    ledger = ColumnLedger(n)
    for column, suites in COLUMN_SUPPORT.items():
        checks = [c for s in suites for c in checks_by_suite.get(s, [])]
        entry = ColumnEntry(column, claims[column], [c.id for c in checks])
        entry.status = "supported" if checks and all(c.passed for c in checks) else "unsupported"
        ledger.entries.append(entry)
    return ledger


def _orbit_checks(n: int, rng: np.random.Generator, samples: int = 20) -> list[Check]:
    """Degree of the SO(n-1) orbit sphere for this n; for n = 3 also the circle-orbit slice."""
    deg = degree_linking(orbit_sphere(n, 4))
    checks = [Check(f"prop3b.orbit_sphere[n={n}]", abs(deg) == 1, float(deg), {"n": n, "d": 4})]
    if n == 3:
        worst = math.inf
        for _ in range(samples):
            m = KnotMap.from_matrix(rng.uniform(-3, 3, size=(3, 3)))
            theta, c = canonicalize_s1(m)
            a = c.a1_vector()
            again, _ = canonicalize_s1(rotate_s1(c, float(rng.uniform(0, 2 * math.pi))))
            back = rotate_s1(c, -theta).coefficient_matrix()
            ok = (abs(a[0] - a[1]) < 1e-9 and a[0] + a[1] - 2 * a[2] > 0
                  and np.allclose(back, m.coefficient_matrix(), atol=1e-9))
            worst = min(worst, (a[0] + a[1] - 2 * a[2]) if ok else -1.0)
        checks.append(Check("prop3a.unique_orbit_representative", worst > 0, worst, {"maps": samples}))
    return checks


def cmd_columns(args) -> Report:
    if args.n < 3:
        raise UsageError("--n must be at least 3")
    names = [s for suites in COLUMN_SUPPORT.values() for s in suites]
    samples = {k: (args.samples if args.samples is not None and v is not None else v)
               for k, v in LEDGER_SAMPLES.items()}
    checks_by_suite = {name: _run_suites([name], args.seed, samples, 1) for name in names}
    checks_by_suite["linking"] += _orbit_checks(args.n, np.random.default_rng(args.seed))
    ledger = build_ledger(args.n, checks_by_suite)
    rep = Report("columns", {"n": args.n, "seed": args.seed})
    rep.results["provenance"] = PROVENANCE
    rep.results["ledger"] = ledger.rows()
    if args.n == 3:
        rep.results["note"] = ("n = 3: the complement of the discriminant is a product with the circle of "
                               "rotations about (1, 1, 1); the generator links a single orbit")
    for entry in ledger.entries:
        rep.checks.append(Check(f"columns.{entry.column}", entry.status == "supported", None,
                                {"supports": len(entry.supports)}, entry.status))
    rep.checks += [c for name in names for c in checks_by_suite[name]]
    return rep


# ---------------------------------------------------------------------------
# argument parsing

def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=default(0), help="seed for random suites (default 0)")
    parser.add_argument("--tolerance", type=float, default=default(None),
                        help="boundary tolerance for classify and scan")
    parser.add_argument("--samples", type=int, default=default(None), help="override sample counts")
    parser.add_argument("--report", default=default(None), help="write the JSON-lines report here")
    parser.add_argument("--jobs", type=int, default=default(1), help="worker processes for verify")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quarticknots",
                                     description="Conditions, cells and fibers of quartic polynomial knots.")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_):
        p = sub.add_parser(name, help=help_)
        _globals(p, suppress=True)
        return p

    p = command("classify", "cell, critical roots and relation curve of a quartic")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--coeffs", help="a1,a2,a3 of t^4 + a1 t^3 + a2 t^2 + a3 t")
    p.set_defaults(func=cmd_classify)

    p = command("scan", "fiber tables and agreement with the oracle")
    p.add_argument("--cell", help="cell name: " + ", ".join(CELL_NAMES))
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--output", default="scan_out", help="output directory")
    p.set_defaults(func=cmd_scan)

    p = command("verify", "run verification suites")
    p.add_argument("--suite", default="all", help="all, " + ", ".join(SUITES))
    p.set_defaults(func=cmd_verify)

    p = command("plot", "render a figure as SVG")
    p.add_argument("--figure", required=True, choices=plotting.FIGURES)
    p.add_argument("--output", help="SVG path (default FIGURE.svg)")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--nabla", type=float)
    p.add_argument("--resolution", type=int)
    p.set_defaults(func=cmd_plot)

    p = command("columns", "spectral-column ledger with supporting scans")
    p.add_argument("--n", type=int, default=4)
    p.set_defaults(func=cmd_columns)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rep = args.func(args)
        if args.report:
            Path(args.report).parent.mkdir(parents=True, exist_ok=True)
            Path(args.report).write_text(rep.to_jsonl())
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PolyError, ScannerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep.runtime = time.perf_counter() - start
    sys.stdout.write(rep.to_text())
    print(f"runtime {rep.runtime:.2f} s", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
