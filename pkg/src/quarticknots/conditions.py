"""Elementary conditions, canonical pencil lines and shared-condition counts.

A line in P_d is written canonically as ``f + lambda g`` with ``g`` monic of
lower degree and the t^{deg g} coefficient of ``f`` equal to zero.  The
elementary conditions satisfied by every member of the line are the common
points of the relation curves r(f) and r(g), plus the exceptional condition
when a_1 stays constant along the line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .polyring import (BiPoly, Poly, PolyError, ResultantDegenerateError, degree, is_exact,
                       real_roots, resultant_eliminate, to_exact, trim)
from .symcurve import _translated, pair_from_pq, relation_curve

CANONICAL_TOL = 1e-12
NEAR_ZERO_RESULTANT = 1e-10
REALITY_TOL = 1e-9


class ConditionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# conditions

@dataclass(frozen=True)
class PairPoint:
    t: float
    s: float
    multiplicity: int = 1

    @property
    def pq(self) -> tuple[float, float]:
        return self.t + self.s, self.t * self.s


@dataclass(frozen=True)
class CriticalPoint:
    t: float
    multiplicity: int = 1

    @property
    def pq(self) -> tuple[float, float]:
        return 2 * self.t, self.t * self.t


@dataclass(frozen=True)
class Exceptional:
    alpha: float


def condition_from_pq(p: float, q: float, multiplicity: int = 1, tol: float = REALITY_TOL):
    """PairPoint or CriticalPoint at (p, q); None when the pair is not real."""
    disc = p * p - 4 * q
    if disc < -tol * (1 + p * p):
        return None
    if abs(disc) <= tol * (1 + p * p):
        return CriticalPoint(p / 2, multiplicity)
    t, s = pair_from_pq(p, q)
    return PairPoint(t, s, multiplicity)


# ---------------------------------------------------------------------------
# counts

@dataclass(frozen=True)
class ConditionCount:
    witnesses: tuple = ()
    infinite: bool = False

    @property
    def k(self) -> float:
        return math.inf if self.infinite else len(self.witnesses)

    @property
    def geometric(self) -> tuple:
        """PairPoint and CriticalPoint witnesses (the points of r(f) and r(g))."""
        return tuple(w for w in self.witnesses if not isinstance(w, Exceptional))

    def __str__(self) -> str:
        return "Infinite" if self.infinite else f"Finite({len(self.witnesses)})"


def Finite(witnesses=()) -> ConditionCount:
    return ConditionCount(tuple(witnesses), False)


def Infinite(witnesses=()) -> ConditionCount:
    return ConditionCount(tuple(witnesses), True)


# ---------------------------------------------------------------------------
# lines

@dataclass(frozen=True)
class PencilLine:
    f: Poly
    g: Poly

    def __post_init__(self):
        if not 1 <= self.g.degree < self.f.degree:
            raise ConditionError("direction must have degree between 1 and deg f - 1")

    def is_canonical(self, tol: float = CANONICAL_TOL) -> bool:
        scale = 1 + max((abs(c) for c in self.f.coeffs), default=0)
        return abs(self.f.coefficient(self.g.degree)) <= tol * scale

    def member(self, lam: float) -> Poly:
        c = self.f.ascending()
        for k, gk in enumerate(self.g.ascending()):
            c[k] = c[k] + lam * gk
        return Poly.from_ascending(c)


def _poly_from_list(c: list) -> Poly:
    return Poly.from_ascending([0] + list(c[1:]))


def canonical_line(f1: Poly, f2: Poly) -> PencilLine:
    """Unique canonical (f, g) for the affine line through f1 and f2."""
    if f1.degree != f2.degree:
        raise ConditionError("endpoints of a line must have equal degree")
    a = f1.ascending()
    diff = [y - x for x, y in zip(a, f2.ascending())]
    k = degree(diff)
    if k < 1:
        raise ConditionError("f1 = f2 does not span a line")
    lead = diff[k]
    if is_exact(diff):
        lead = Fraction(lead)
    g = [x / lead for x in diff[: k + 1]]
    g[k] = 1
    shift = a[k]
    f = [x - shift * (g[i] if i < len(g) else 0) for i, x in enumerate(a)]
    f[k] = 0
    f[-1] = 1
    return PencilLine(_poly_from_list(_tidy(f)), _poly_from_list(_tidy(g)))


def _tidy(c: list) -> list:
    """Integral rationals back to int and negative zeros to zero."""
    out = []
    for x in c:
        if isinstance(x, Fraction) and x.denominator == 1:
            x = int(x)
        elif x == 0:
            x = 0 * abs(x)
        out.append(x)
    return out


def _phi(poly: Poly) -> BiPoly:
    return relation_curve(poly).phi


def _eliminate(A: BiPoly, B: BiPoly, var: str) -> list:
    """Resultant with an exact rerun when the float result is numerically zero."""
    res = resultant_eliminate(A, B, var)
    scale = max(A.norm(), B.norm(), 1.0) ** 2
    if all(abs(float(c)) <= NEAR_ZERO_RESULTANT * scale for c in res):
        res = resultant_eliminate(to_exact(A), to_exact(B), var)
        if all(abs(float(c)) <= NEAR_ZERO_RESULTANT * scale for c in res):
            return []
    return trim(res)


def _float_coeffs(c: list) -> list:
    return [float(x) for x in c]


def curve_intersections(A: BiPoly, B: BiPoly, tol: float = REALITY_TOL):
    """Real points of {A = 0} and {B = 0} in the domain p^2 >= 4q.

    Returns a list of (condition, (p, q)) or None when the curves share a
    component.  ``B`` must be of degree at most one in q; when it does not
    involve q at all it must be linear in p.
    """
    out = []
    if B.degree("q") >= 1:
        res = _eliminate(A, B, "q")
        if not res:
            return None
        if degree(res) < 1:
            return out
        for root in real_roots(res):
            p = root.value
            qs = _roots_in_q(B, p)
            for q in qs:
                cond = condition_from_pq(p, q, root.multiplicity, tol)
                if cond is not None:
                    out.append((cond, (p, q)))
    else:
        # B = b1 p + b0: p is fixed, solve for q on A
        if B.degree("p") != 1:
            raise ResultantDegenerateError("direction curve must be linear")
        res = _eliminate(A, B, "p")
        if not res:
            return None
        cb = B.coeffs_in("p")
        p = -float(cb[0][0] if cb[0] else 0) / float(cb[1][0])
        if degree(res) < 1:
            return out
        for root in real_roots(res):
            cond = condition_from_pq(p, root.value, root.multiplicity, tol)
            if cond is not None:
                out.append((cond, (p, root.value)))
    return out


def _roots_in_q(B: BiPoly, p: float) -> list[float]:
    c = _float_coeffs(B.specialize("p", p))
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 2:
        return []
    if len(c) == 2:
        return [-c[0] / c[1]]
    return real_roots(c).values


def common_conditions(line: PencilLine) -> ConditionCount:
    """Elementary conditions shared by all polynomials of a line in P_4."""
    if line.f.degree != 4:
        raise ConditionError("common_conditions is implemented for quartics")
    if not line.is_canonical():
        raise ConditionError("line is not in canonical form")
    f, g = line.f, line.g
    extra = [Exceptional(f.a1)] if g.degree <= f.degree - 2 else []
    if g.degree == 1:
        return Finite(extra)
    hits = curve_intersections(_phi(f), _phi(g))
    if hits is None:
        return Infinite(extra)
    return Finite([c for c, _ in hits] + extra)


def lemma7_region_test(a: float, b: float, tol: float = 1e-12) -> bool:
    """Three distinct real roots of p^3 - p(a + 2) - b inside p^2 <= 4/3."""
    roots = real_roots([-b, -(a + 2), 0.0, 1.0])
    inside = [r for r in roots if r.value * r.value <= 4 / 3 + tol]
    return len(inside) == 3 and all(r.multiplicity == 1 for r in inside)


# ---------------------------------------------------------------------------
# group actions

def scale_poly(f: Poly, lam: float) -> Poly:
    """lam^{-d} f(lam t)."""
    d = f.degree
    c = [x * lam ** (k - d) if x != 0 else x for k, x in enumerate(f.ascending())]
    c[-1] = 1
    return Poly.from_ascending(c)


def scale_line(line: PencilLine, lam: float) -> PencilLine:
    if not lam > 0:
        raise ConditionError("scaling factor must be positive")
    return PencilLine(scale_poly(line.f, lam), scale_poly(line.g, lam))


def translate(f: Poly, t0: float) -> Poly:
    """f(t + t0) with the constant term dropped."""
    c = _translated(f, t0)
    c[0] = 0
    c[-1] = 1
    return Poly.from_ascending(c)


def translate_line(line: PencilLine, t0: float) -> PencilLine:
    """The same line after the substitution t -> t + t0, made canonical again."""
    f = translate(line.f, t0)
    g = translate(line.g, t0)
    c = f.ascending()
    for k, gk in enumerate(g.ascending()):
        c[k] += gk
    return canonical_line(f, Poly.from_ascending(c))


def scale_witness(w, lam: float):
    if isinstance(w, PairPoint):
        return PairPoint(w.t / lam, w.s / lam, w.multiplicity)
    if isinstance(w, CriticalPoint):
        return CriticalPoint(w.t / lam, w.multiplicity)
    return Exceptional(w.alpha / lam)


def translate_witness(w, t0: float, d: int = 4):
    if isinstance(w, PairPoint):
        return PairPoint(w.t - t0, w.s - t0, w.multiplicity)
    if isinstance(w, CriticalPoint):
        return CriticalPoint(w.t - t0, w.multiplicity)
    return Exceptional(w.alpha + d * t0)
