"""Families of cubics L^nabla = {t^3 - 3 nabla t^2 + beta t} against a fixed quartic.

The relation curve of a member of L^nabla is the ellipse-like level set
{F_nabla = -beta} with F_nabla(t, s) = t^2 + t s + s^2 - 3 nabla (t + s).  For a
quartic f = t^4 + a t^2 + b t in cell B (b > 0) the curve r(f) is the graph
q = (p^3 + a p + b) / (2 p) over two intervals of p = t + s: the infinite
branch [2 x1, 0) and the finite branch [2 x2, 2 x3], where x1 < 0 < x2 < x3
are the critical points of f.  Along r(f)

    F_nabla = p^2/2 - a/2 - b/(2p) - 3 nabla p,

whose critical points solve p^3 - 3 nabla p^2 + b/2 = 0.

Two kinds of computation live here: closed-form breakpoints and fiber
types, and a brute-force oracle that sweeps beta and counts shared
conditions line by line.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import bisect

from .cells import CellLabel, QuarticNormalForm, classify, critical_roots, normalize
from .conditions import (CriticalPoint, PencilLine, _eliminate, canonical_line,
                         REALITY_TOL, common_conditions)
from .polyring import BiPoly, Poly, PolyError, degree, pderiv, peval, real_roots
from .symcurve import relation_curve

BISECT_XTOL = 1e-12
BOUNDARY_MARGIN = 1e-6
EVENT_MERGE = 1e-9
EXACT_TOL = 1e-12
MIN_RESOLUTION = 16


class ScannerError(ValueError):
    pass


class FiberType(enum.Enum):
    Empty = "Empty"
    Point = "Point"
    ClosedSegment = "ClosedSegment"
    HalfOpenInterval = "HalfOpenInterval"
    OpenInterval = "OpenInterval"
    HalfOpenMinusPoint = "HalfOpenMinusPoint"
    # not a type: the parameter sits too close to a breakpoint to decide
    Boundary = "Boundary"


class Target(enum.Enum):
    Heart = "Heart"
    Diamond = "Diamond"
    DCell = "DCell"


# ---------------------------------------------------------------------------
# F along r(f)

def _require_b(nf: QuarticNormalForm) -> tuple[float, float, float]:
    if classify(nf.a, nf.b) is not CellLabel.B:
        raise ScannerError(f"expected a quartic in cell B, got a={nf.a}, b={nf.b}")
    x1, x2, x3 = critical_roots(nf).values
    return x1, x2, x3


def F_along(nf: QuarticNormalForm, nabla: float, p: float) -> float:
    """F_nabla at the point of r(f) with t + s = p (p != 0)."""
    return p * p / 2 - nf.a / 2 - nf.b / (2 * p) - 3 * nabla * p


def dF_along(nf: QuarticNormalForm, nabla: float, p: float) -> float:
    return p + nf.b / (2 * p * p) - 3 * nabla


def _critical_p(nf: QuarticNormalForm, nabla: float) -> list[float]:
    """Real roots of p^3 - 3 nabla p^2 + b/2, repeated by multiplicity."""
    out = []
    for r in real_roots([nf.b / 2, 0.0, -3.0 * nabla, 1.0]):
        out.extend([r.value] * r.multiplicity)
    return out


def focal_values(nf: QuarticNormalForm) -> tuple[float, float, float]:
    """omega_i = (6 x_i^2 - a) / (12 x_i)."""
    xs = _require_b(nf)
    return tuple((6 * x * x - nf.a) / (12 * x) for x in xs)


def infinite_branch_critical_point(nf: QuarticNormalForm, nabla: float) -> float | None:
    """The minimum of F_nabla inside the infinite branch, if there is one."""
    x1 = critical_roots(nf).values[0]
    for p in _critical_p(nf, nabla):
        if 2 * x1 < p < 0:
            return p
    return None


def finite_branch_critical_points(nf: QuarticNormalForm, nabla: float) -> list[float]:
    """Critical points of F_nabla in the interior of the finite branch.

    When two are present the smaller is a maximum M and the larger a minimum m.
    """
    _, x2, x3 = critical_roots(nf).values
    return [p for p in _critical_p(nf, nabla) if 2 * x2 < p < 2 * x3]


@dataclass(frozen=True)
class MetamorphosisRecord:
    beta1: float
    beta2: float
    beta3: float
    beta4: float | None = None
    betaSup1: float | None = None
    betaSup2: float | None = None
    betaSup3: float | None = None
    betaSup4: float | None = None


def metamorphoses(nf: QuarticNormalForm, nabla: float) -> MetamorphosisRecord:
    """Values of beta at which the disposition of r(g) against r(f) changes.

    beta1..beta3: r(g) passes through the diagonal point (x_i, x_i).
    beta4: r(g) touches the infinite branch.
    betaSup1..4: minus F at x2, m, x3, M when the finite branch carries the
    interior pair M < m.
    """
    xs = _require_b(nf)
    b1, b2, b3 = (6 * nabla * x - 3 * x * x for x in xs)
    p_inf = infinite_branch_critical_point(nf, nabla)
    b4 = -F_along(nf, nabla, p_inf) if p_inf is not None else None
    pair = finite_branch_critical_points(nf, nabla)
    sup = (None, None, None, None)
    if len(pair) == 2:
        big_m, small_m = pair
        sup = (-F_along(nf, nabla, 2 * xs[1]), -F_along(nf, nabla, small_m),
               -F_along(nf, nabla, 2 * xs[2]), -F_along(nf, nabla, big_m))
    return MetamorphosisRecord(b1, b2, b3, b4, *sup)


# ---------------------------------------------------------------------------
# breakpoints

@dataclass(frozen=True)
class Breakpoints:
    omega1: float
    omega2: float
    omega3: float
    tau: float
    mu: float
    xi: float
    kappa: float
    nu: float
    c: float
    m23: float

    def orderings(self, x2: float) -> dict[str, float]:
        """Margins of the strict inequalities; every value should be positive."""
        return {
            "omega1<tau": self.tau - self.omega1,
            "tau<mu": self.mu - self.tau,
            "mu<xi": self.xi - self.mu,
            "m23<omega2": self.omega2 - self.m23,
            "m23<omega3": self.omega3 - self.m23,
            "x2<c": self.c - x2,
            "c<m23": self.m23 - self.c,
            "c<kappa": self.kappa - self.c,
            "kappa<m23": self.m23 - self.kappa,
            "c<nu": self.nu - self.c,
            "nu<m23": self.m23 - self.nu,
        }


class BreakpointError(ScannerError):
    pass


def _infinite_gap(nf: QuarticNormalForm, x: float, nabla: float) -> float:
    """min of F_nabla over the infinite branch minus F_nabla at (x, x).

    Nonpositive exactly when the ellipse of L^nabla through (x, x) meets
    the infinite branch; increasing in nabla.
    """
    x1 = critical_roots(nf).values[0]
    p_inf = infinite_branch_critical_point(nf, nabla)
    p_min = p_inf if p_inf is not None else 2 * x1
    return F_along(nf, nabla, p_min) - F_along(nf, nabla, 2 * x)


def _bracketed_bisect(fn, lo: float, hi: float, what: str) -> float:
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BreakpointError(f"{what}: no sign change on [{lo}, {hi}]")
    try:
        return bisect(fn, lo, hi, xtol=BISECT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=400)
    except RuntimeError as exc:
        raise BreakpointError(f"{what}: bisection did not converge") from exc


def _monotone_root(fn, start: float, what: str) -> float:
    """Root of an increasing function, bracketing outward from ``start``."""
    lo, hi = start - 1.0, start + 1.0
    for _ in range(200):
        if fn(lo) <= 0:
            break
        lo -= 2 * (hi - lo)
    for _ in range(200):
        if fn(hi) >= 0:
            break
        hi += 2 * (hi - lo)
    return _bracketed_bisect(fn, lo, hi, what)


def _sup_difference(nf: QuarticNormalForm, i: int, j: int):
    def fn(nabla: float) -> float:
        rec = metamorphoses(nf, nabla)
        vals = (None, rec.betaSup1, rec.betaSup2, rec.betaSup3, rec.betaSup4)
        if vals[i] is None:
            raise BreakpointError(f"no finite-branch critical pair at nabla={nabla}")
        return vals[i] - vals[j]
    return fn


@functools.lru_cache(maxsize=4096)
def breakpoints(nf: QuarticNormalForm, check: bool = True) -> Breakpoints:
    x1, x2, x3 = _require_b(nf)
    w1, w2, w3 = focal_values(nf)
    tau = (x1 + x2) / 2
    c = nf.b ** (1 / 3) / 2
    m23 = (x2 + x3) / 2
    mu = _monotone_root(functools.partial(_infinite_gap, nf, x2), tau, "mu")
    xi = _monotone_root(functools.partial(_infinite_gap, nf, x3), tau, "xi")
    # just above c the pair M < m is born; stay clear of the double root
    lo = c + 1e-9 * max(1.0, c)
    kappa = _bracketed_bisect(_sup_difference(nf, 3, 4), lo, m23, "kappa")
    nu = _bracketed_bisect(_sup_difference(nf, 1, 2), lo, m23, "nu")
    bp = Breakpoints(w1, w2, w3, tau, mu, xi, kappa, nu, c, m23)
    if check:
        bad = [k for k, v in bp.orderings(x2).items() if not v > 0]
        if bad:
            raise BreakpointError(f"ordering violated: {', '.join(bad)}")
    return bp


# ---------------------------------------------------------------------------
# analytic fibers

def _near(x: float, marks, margin: float) -> bool:
    return any(abs(x - m) <= margin for m in marks)


def _exactly(x: float, mark: float) -> bool:
    return abs(x - mark) <= EXACT_TOL * (1 + abs(mark))


def heart_fiber(nf: QuarticNormalForm, nabla: float, margin: float = BOUNDARY_MARGIN) -> FiberType:
    bp = breakpoints(nf)
    if _exactly(nabla, bp.tau):
        return FiberType.Point
    if _near(nabla, (bp.tau, bp.mu, bp.xi), margin):
        return FiberType.Boundary
    if bp.tau < nabla < bp.mu:
        return FiberType.ClosedSegment
    if bp.mu <= nabla < bp.xi:
        return FiberType.HalfOpenInterval
    return FiberType.Empty


def diamond_fiber(nf: QuarticNormalForm, nabla: float, margin: float = BOUNDARY_MARGIN) -> FiberType:
    bp = breakpoints(nf)
    if _exactly(nabla, bp.m23):
        return FiberType.Point
    if _near(nabla, (bp.c, bp.kappa, bp.nu, bp.m23), margin):
        return FiberType.Boundary
    lo, hi = sorted((bp.kappa, bp.nu))
    if hi < nabla < bp.m23:
        return FiberType.ClosedSegment
    if lo < nabla <= hi:
        return FiberType.HalfOpenInterval
    if bp.c < nabla <= lo:
        return FiberType.OpenInterval
    return FiberType.Empty


D_THRESHOLDS = (1 / 3, math.sqrt(2) / 3, 1 / 2, 2 / 3)


def d_cell_fiber(nabla: float) -> FiberType:
    """Fiber of the three-condition set over L^nabla for f = t^4 - 2 t^2.

    For nabla > 0 the fiber is beta in [6 nabla - 3, min(9 nabla^2 / 2 - 1, 0)]
    with the upper end open when the tangency value wins, minus the value
    beta = -1 of the ellipse through the crossing point (-1, 1).  At
    |nabla| = 1/3 the lower end coincides with that removed value, which
    leaves an open interval.  nabla = 0 is reported as Boundary.
    """
    x = abs(nabla)
    third, root2, half, _ = D_THRESHOLDS
    if x <= EXACT_TOL:
        return FiberType.Boundary
    if _exactly(x, half):
        return FiberType.Point
    if x > half:
        return FiberType.Empty
    if _exactly(x, third):
        return FiberType.OpenInterval
    if x < third:
        return FiberType.HalfOpenMinusPoint
    if x <= root2 or _exactly(x, root2):
        return FiberType.HalfOpenInterval
    return FiberType.ClosedSegment


# ---------------------------------------------------------------------------
# the oracle

def family_member(nabla, beta) -> Poly:
    """t^3 - 3 nabla t^2 + beta t."""
    return Poly((-3 * nabla, beta))


@dataclass(frozen=True)
class Disposition:
    """Shared conditions of the line (f, t^3 - 3 nabla t^2 + beta t) at one beta."""

    beta: float
    count: float
    sides: tuple[int, ...]  # -1 for points on the p < 0 side, +1 otherwise
    simple: bool
    circle_hits: int = 0

    @property
    def three(self) -> bool:
        return self.count == 3 and self.simple

    def member(self, target: Target, mirror: bool = False) -> bool:
        if not self.three:
            return False
        if target is Target.DCell:
            return True
        sides = tuple(-s for s in self.sides) if mirror else self.sides
        neg = sides.count(-1)
        return neg == 2 if target is Target.Heart else neg == 0


def disposition(f: Poly, nabla, beta) -> Disposition:
    res = common_conditions(PencilLine(f, family_member(nabla, beta)))
    pts = res.geometric
    sides = tuple(-1 if w.pq[0] < 0 else 1 for w in pts)
    simple = all(w.multiplicity == 1 for w in pts)
    circle = 0
    a = f.coefficient(2)
    if f.coefficient(1) == 0 and a < 0:
        # symmetric quartic: points on the circle t^2 + s^2 = -a
        for w in pts:
            p, q = w.pq
            if abs(p * p - 2 * q + a) <= 1e-9 * (1 + abs(a)):
                circle += 1
    return Disposition(float(beta), res.k, sides, simple, circle)


def grid_dispositions(f: Poly, nabla: float, betas: np.ndarray) -> list[Disposition]:
    """Vectorized dispositions for many beta at once (a float cross-check).

    Substituting q = p^2 - 3 nabla p + beta from r(g) into r(f) leaves the
    cubic -p^3 + 6 nabla p^2 + (a_2 + 3 a_1 nabla - 2 beta) p + a_3 - a_1 beta,
    whose roots are taken as companion-matrix eigenvalues.
    """
    a1, a2, a3 = (float(f.coefficient(k)) for k in (3, 2, 1))
    nabla = float(nabla)
    betas = np.asarray(betas, dtype=float)
    m = len(betas)
    # monic form p^3 + c2 p^2 + c1 p + c0
    c2 = np.full(m, -6 * nabla)
    c1 = -(a2 + 3 * a1 * nabla - 2 * betas)
    c0 = -(a3 - a1 * betas)
    comp = np.zeros((m, 3, 3))
    comp[:, 0, :] = np.stack([-c2, -c1, -c0], axis=1)
    comp[:, 1, 0] = 1.0
    comp[:, 2, 1] = 1.0
    roots = np.linalg.eigvals(comp)
    circle_a = a2 if a3 == 0 and a1 == 0 and a2 < 0 else None
    out = []
    for beta, rs in zip(betas, roots):
        ps = sorted(float(r.real) for r in rs if abs(r.imag) <= 1e-7 * (1 + abs(r.real)))
        merged: list[list[float]] = []
        for p in ps:
            if merged and abs(p - merged[-1][-1]) <= 1e-7 * (1 + abs(p)):
                merged[-1].append(p)
            else:
                merged.append([p])
        sides, simple, circle = [], True, 0
        for group in merged:
            p = sum(group) / len(group)
            q = p * p - 3 * nabla * p + beta
            if p * p - 4 * q < -REALITY_TOL * (1 + p * p):
                continue
            sides.append(-1 if p < 0 else 1)
            simple = simple and len(group) == 1
            if circle_a is not None and abs(p * p - 2 * q + circle_a) <= 1e-9 * (1 + abs(circle_a)):
                circle += 1
        out.append(Disposition(float(beta), len(sides), tuple(sides), simple, circle))
    return out


def _exact_number(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def family_events(f: Poly, nabla: float) -> list[float]:
    """beta values at which the count along L^nabla can change.

    These are the diagonal passages through critical points of f and the
    tangencies, i.e. the real roots of the discriminant in p of the
    eliminant R(p; beta) of the two relation curves.
    """
    xs = real_roots(f.derivative()).values
    events = [6 * nabla * x - 3 * x * x for x in xs]
    # exact arithmetic keeps nearly coincident tangencies apart
    fx = Poly(tuple(_exact_number(c) for c in f.coeffs))
    nx = _exact_number(nabla)
    phi_f = relation_curve(fx).phi
    r0 = _eliminate(phi_f, relation_curve(family_member(nx, 0)).phi, "q")
    r1 = _eliminate(phi_f, relation_curve(family_member(nx, 1)).phi, "q")
    n = max(len(r0), len(r1))
    r0 = r0 + [0] * (n - len(r0))
    r1 = r1 + [0] * (n - len(r1))
    # R is affine in beta; here q plays the role of beta
    R = BiPoly({(i, 0): r0[i] for i in range(n)}) + BiPoly({(i, 1): r1[i] - r0[i] for i in range(n)})
    if R.degree("p") >= 2:
        dR = R.partial("p")
        disc = _eliminate(R, dR, "p")
        if degree(disc) >= 1:
            events.extend(real_roots(disc).values)
    return sorted(events)


@dataclass
class Run:
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool
    punctures: list = field(default_factory=list)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def fiber_type(self) -> FiberType:
        if self.is_point:
            return FiberType.Point
        ends = (self.lo_closed, self.hi_closed)
        if self.punctures:
            return FiberType.HalfOpenMinusPoint if sum(ends) == 1 and len(self.punctures) == 1 else FiberType.Boundary
        if all(ends):
            return FiberType.ClosedSegment
        if any(ends):
            return FiberType.HalfOpenInterval
        return FiberType.OpenInterval


@dataclass
class FamilySweep:
    """Dispositions along one family: event points, gaps between them, grid."""

    f: Poly
    nabla: float
    events: list[float]
    event_disp: list[Disposition]
    gap_disp: list[Disposition]  # len(events) + 1, the outer two sit outside the range
    grid: list[Disposition]
    ambiguous_events: bool

    def _member_pieces(self, target: Target, mirror: bool):
        ev = [d.member(target, mirror) for d in self.event_disp]
        gp = [d.member(target, mirror) for d in self.gap_disp]
        return ev, gp

    def runs(self, target: Target, mirror: bool = False, merge_punctures: bool = True) -> list[Run]:
        """Maximal member pieces, with isolated non-member events kept as punctures."""
        ev, gp = self._member_pieces(target, mirror)
        e = self.events
        runs: list[Run] = []
        cur: Run | None = None
        # pieces alternate: gap 0, event 0, gap 1, event 1, ..., gap n
        for k in range(2 * len(e) + 1):
            if k % 2 == 0:
                i = k // 2
                member = gp[i]
                if member and cur is None:
                    lo = e[i - 1] if i > 0 else -math.inf
                    cur = Run(lo, lo, False, False)
                if member:
                    cur.hi = e[i] if i < len(e) else math.inf
                    cur.hi_closed = False
                elif cur is not None:
                    runs.append(cur)
                    cur = None
            else:
                i = k // 2
                member = ev[i]
                if member:
                    if cur is None:
                        cur = Run(e[i], e[i], True, True)
                    else:
                        cur.hi, cur.hi_closed = e[i], True
                elif cur is not None:
                    if merge_punctures and not cur.is_point and gp[i] and gp[i + 1]:
                        cur.punctures.append(e[i])
                        continue
                    runs.append(cur)
                    cur = None
        if cur is not None:
            runs.append(cur)
        return runs

    def grid_conflicts(self, target: Target, mirror: bool = False) -> int:
        """Grid samples whose membership disagrees with their event gap."""
        _, gp = self._member_pieces(target, mirror)
        bad = 0
        for d in self.grid:
            i = int(np.searchsorted(self.events, d.beta))
            if i < len(self.events) and abs(self.events[i] - d.beta) <= EVENT_MERGE:
                continue
            if i > 0 and abs(self.events[i - 1] - d.beta) <= EVENT_MERGE:
                continue
            if d.member(target, mirror) != gp[i]:
                bad += 1
        return bad

    def fiber(self, target: Target, mirror: bool = False) -> FiberType:
        if self.ambiguous_events or self.grid_conflicts(target, mirror):
            return FiberType.Boundary
        runs = self.runs(target, mirror)
        if not runs:
            return FiberType.Empty
        if len(runs) > 1 or math.isinf(runs[0].lo) or math.isinf(runs[0].hi):
            return FiberType.Boundary
        return runs[0].fiber_type()

    def max_circle_hits(self) -> int:
        return max(d.circle_hits for d in self.event_disp + self.gap_disp + self.grid)


def _merge_events(events: list[float], tol: float = EVENT_MERGE) -> tuple[list[float], bool]:
    out: list[list[float]] = []
    for x in sorted(events):
        if out and abs(x - out[-1][-1]) <= tol * (1 + abs(x)):
            out[-1].append(x)
        else:
            out.append([x])
    ambiguous = any(len(set(g)) > 1 for g in out)
    return [sum(g) / len(g) for g in out], ambiguous


def sweep_family(f: Poly, nabla: float, resolution: int = 512, exact_gaps: bool = True,
                 merge_tol: float = EVENT_MERGE) -> FamilySweep:
    """Evaluate the shared-condition count along L^nabla.

    Between consecutive events the disposition is constant, so one sample
    per gap decides it; gap samples are evaluated in exact rational
    arithmetic.  The uniform grid of ``resolution`` points is an independent
    cross-check.
    """
    if resolution < MIN_RESOLUTION:
        raise ScannerError(f"resolution must be at least {MIN_RESOLUTION}")
    events, ambiguous = _merge_events(family_events(f, nabla), merge_tol)
    span = events[-1] - events[0]
    pad = 0.25 * span + 1.0
    lo, hi = events[0] - pad, events[-1] + pad
    fx = Poly(tuple(_exact_number(c) for c in f.coeffs)) if exact_gaps else f
    nx = _exact_number(nabla) if exact_gaps else nabla
    event_disp = [disposition(f, nabla, e) for e in events]
    gap_points = [lo] + [(u + v) / 2 for u, v in zip(events, events[1:])] + [hi]
    gap_disp = []
    for g in gap_points:
        if exact_gaps:
            gap_disp.append(disposition(fx, nx, _exact_number(g)))
        else:
            gap_disp.append(disposition(f, nabla, g))
    grid = grid_dispositions(f, nabla, np.linspace(lo, hi, resolution))
    return FamilySweep(f, nabla, events, event_disp, gap_disp, grid, ambiguous)


def fiber_oracle(nf: QuarticNormalForm, nabla: float, target: Target | str,
                 resolution: int = 512) -> FiberType:
    """Fiber type from a brute-force sweep over beta (see ``sweep_family``)."""
    target = Target(target) if isinstance(target, str) else target
    sweep = sweep_family(nf.poly, nabla, resolution)
    return sweep.fiber(target, mirror=nf.b < 0)


def fiber_oracle_pair(nf: QuarticNormalForm, nabla: float, resolution: int = 512) -> tuple[FiberType, FiberType]:
    """Heart and diamond fibers from one shared sweep."""
    sweep = sweep_family(nf.poly, nabla, resolution)
    mirror = nf.b < 0
    return sweep.fiber(Target.Heart, mirror), sweep.fiber(Target.Diamond, mirror)


D_POLY = Poly((0, -2, 0))


def d_cell_oracle(nabla: float, resolution: int = 64) -> FiberType:
    return sweep_family(D_POLY, nabla, resolution).fiber(Target.DCell)


def d_cell_circle_twice(nabla: float, resolution: int = 64) -> bool:
    """Does some ellipse of L^nabla meet the half-circle t^2 + s^2 = 2 twice?

    The beta-window where this happens has width (2 - 3 nabla)^2 / 2, so the
    events (all exact for this polynomial) are merged only at 1e-14.
    """
    return sweep_family(D_POLY, nabla, resolution, merge_tol=1e-14).max_circle_hits() >= 2


def threshold_by_bisection(predicate, lo: float, hi: float, xtol: float = 1e-8) -> float:
    """Bisect on a boolean predicate that differs at the two ends."""
    plo = predicate(lo)
    if predicate(hi) == plo:
        raise ScannerError(f"predicate does not change on [{lo}, {hi}]")
    while hi - lo > xtol:
        mid = (lo + hi) / 2
        if predicate(mid) == plo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# ---------------------------------------------------------------------------
# per-cell summaries

@dataclass
class LinesSummary:
    cell: CellLabel
    expected: str
    components: int | None = None
    nabla_range: tuple[float, float] | None = None
    slices: int = 0
    max_count: float = 0
    infinite_witness: bool | None = None
    notes: list[str] = field(default_factory=list)


def _runs_overlap(r: Run, s: Run) -> bool:
    lo = max(r.lo, s.lo)
    hi = min(r.hi, s.hi)
    if lo < hi:
        return True
    if lo == hi:
        closed_r = (r.lo_closed if lo == r.lo else True) and (r.hi_closed if lo == r.hi else True)
        closed_s = (s.lo_closed if lo == s.lo else True) and (s.hi_closed if lo == s.hi else True)
        return closed_r and closed_s
    return False


def _run_centre(r: Run) -> float:
    if math.isinf(r.lo) and math.isinf(r.hi):
        return 0.0
    if math.isinf(r.lo):
        return r.hi - 1.0
    if math.isinf(r.hi):
        return r.lo + 1.0
    return 0.5 * (r.lo + r.hi)


def segment_events(f: Poly, start: tuple[float, float],
                   end: tuple[float, float]) -> list[tuple[float, bool]]:
    """Events along the segment (nabla, beta) = start + w (end - start).

    Returns pairs (w, degenerate) for w in (0, 1): diagonal passages, and
    roots of the discriminant of the eliminant R(p; w).  ``degenerate`` marks
    discriminant roots where R(.; w) has a real double root inside p^2 >= 4q,
    i.e. a non-transversal common point.
    """
    (n0, b0), (n1, b1) = [tuple(_exact_number(v) for v in pt) for pt in (start, end)]
    dn, db = n1 - n0, b1 - b0
    fx = Poly(tuple(_exact_number(c) for c in f.coeffs))
    events = []
    for x in real_roots(f.derivative()).values:
        x = _exact_number(x)
        den = db - 6 * x * dn
        if den != 0:
            events.append(((6 * x * n0 - 3 * x * x - b0) / den, False))
    phi_f = relation_curve(fx).phi
    r0 = _eliminate(phi_f, relation_curve(family_member(n0, b0)).phi, "q")
    r1 = _eliminate(phi_f, relation_curve(family_member(n1, b1)).phi, "q")
    n = max(len(r0), len(r1))
    r0 = r0 + [0] * (n - len(r0))
    r1 = r1 + [0] * (n - len(r1))
    R = BiPoly({(i, 0): r0[i] for i in range(n)}) + BiPoly({(i, 1): r1[i] - r0[i] for i in range(n)})
    if R.degree("p") >= 2:
        disc = _eliminate(R, R.partial("p"), "p")
        if degree(disc) >= 1:
            for w in real_roots(disc).values:
                events.append((w, _double_point(R, w, float(n0 + w * dn), float(b0 + w * db))))
    return sorted((float(w), deg) for w, deg in events if 0 < w < 1)


def _double_point(R: BiPoly, w: float, nabla: float, beta: float, tol: float = 1e-6) -> bool:
    c = [float(v) for v in R.specialize("q", w)]
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 3:
        return False
    scale = max(abs(v) for v in c)
    for r in real_roots(pderiv(c)).values:
        mag = sum(abs(v) * abs(r) ** i for i, v in enumerate(c))
        if abs(peval(c, r)) > tol * max(scale, mag):
            continue
        q = r * r - 3 * nabla * r + beta
        if r * r - 4 * q >= -tol * (1 + r * r):
            return True
    return False


def _path_linked(f: Poly, x: float, r: Run, y: float, s: Run) -> bool:
    """The straight segment between the run centres lies in the set.

    Membership is constant between the events along the segment, so it is
    checked at each event and in each gap.
    """
    a, b = _run_centre(r), _run_centre(s)
    events = segment_events(f, (x, a), (y, b))
    if any(deg for _, deg in events):
        return False
    ws = [w for w, _ in events]
    marks = [0.0] + ws + [1.0]
    probes = ws + [(u + v) / 2 for u, v in zip(marks, marks[1:])]
    for w in probes:
        if not disposition(f, x + w * (y - x), a + w * (b - a)).member(Target.DCell):
            return False
    return True


def _components(slices: list[tuple[float, list[Run]]], linked=None) -> int:
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, (_, runs) in enumerate(slices):
        for j in range(len(runs)):
            parent[(i, j)] = (i, j)
    for i in range(len(slices) - 1):
        x, rx = slices[i]
        y, ry = slices[i + 1]
        for j, r in enumerate(rx):
            for k, s in enumerate(ry):
                if _runs_overlap(r, s) or (linked is not None and linked(x, r, y, s)):
                    parent[find((i, j))] = find((i + 1, k))
    return len({find(x) for x in parent})


def _three_runs(f: Poly, nabla: float, resolution: int) -> tuple[list[Run], float]:
    sweep = sweep_family(f, nabla, resolution)
    runs = sweep.runs(Target.DCell, merge_punctures=False)
    count = max(d.count for d in sweep.event_disp + sweep.gap_disp + sweep.grid)
    return runs, count


def three_condition_components(f: Poly, nablas, resolution: int = 32, refine_depth: int = 8):
    """Connected components of the set of lines with exactly three conditions.

    Every such line through a quartic has a cubic direction, so the set is
    swept by the families L^nabla.  Runs of neighbouring slices are joined
    when they overlap or when the segment between their centres stays in
    the set; gaps with unmatched runs are bisected up to ``refine_depth``
    times.
    """
    cache: dict[float, tuple[list[Run], float]] = {}

    def slice_at(x: float):
        if x not in cache:
            cache[x] = _three_runs(f, x, resolution)
        return cache[x]

    def joined(x: float, r: Run, y: float, s: Run) -> bool:
        return _runs_overlap(r, s) or _path_linked(f, x, r, y, s)

    def unmatched(x: float, y: float) -> bool:
        rx, ry = slice_at(x)[0], slice_at(y)[0]
        left = all(any(joined(x, r, y, s) for s in ry) for r in rx)
        right = all(any(joined(x, r, y, s) for r in rx) for s in ry)
        return not (left and right)

    xs = sorted(set(float(x) for x in nablas))
    todo = [(x, y, 0) for x, y in zip(xs, xs[1:])]
    points = set(xs)
    while todo:
        x, y, depth = todo.pop()
        if depth >= refine_depth or not unmatched(x, y):
            continue
        mid = (x + y) / 2
        points.add(mid)
        todo.append((x, mid, depth + 1))
        todo.append((mid, y, depth + 1))
    ordered = sorted(points)
    slices = [(x, slice_at(x)[0]) for x in ordered]
    max_count = max(slice_at(x)[1] for x in ordered)
    return _components(slices, lambda x, r, y, s: _path_linked(f, x, r, y, s)), len(ordered), max_count


def lines_through_summary(nf: QuarticNormalForm, slices: int = 41, resolution: int = 32) -> LinesSummary:
    """Expected and sampled structure of the three-condition lines through f."""
    label = classify(nf.a, nf.b)
    expected = {
        CellLabel.A: "empty", CellLabel.A_prime: "empty",
        CellLabel.B: "two components", CellLabel.B_prime: "two components",
        CellLabel.E: "one half-open interval", CellLabel.E_prime: "one half-open interval",
        CellLabel.D: "three components",
        CellLabel.C: "infinite pencil (f, t^2)", CellLabel.O: "infinite pencil (f, t^2)",
    }[label]
    out = LinesSummary(label, expected)
    f = nf.poly
    if label in (CellLabel.C, CellLabel.O):
        g = Poly((0 * nf.a,))
        line = canonical_line(f, PencilLine(f, g).member(1.0))
        out.infinite_witness = common_conditions(line).infinite
        return out
    xs = critical_roots(nf).values
    spread = max(xs) - min(xs)
    lo, hi = min(xs) - 0.5 * spread - 1.0, max(xs) + 0.5 * spread + 1.0
    grid = list(np.linspace(lo, hi, slices))
    if lo < 0 < hi:
        grid.append(0.0)
    # circles of L^nabla through two diagonal points are centred at their midpoint
    grid += [(u + v) / 2 for i, u in enumerate(xs) for v in xs[i + 1:]]
    comps, n, max_count = three_condition_components(f, grid, resolution)
    out.components = comps
    out.nabla_range = (lo, hi)
    out.slices = n
    out.max_count = max_count
    return out
