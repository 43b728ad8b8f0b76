"""Relation curves of polynomials in the symmetric coordinates p = t + s, q = t s.

The relation curve of ``f`` is the set of pairs t <= s with f(t) = f(s)
(for t < s) or f'(t) = 0 (for t = s).  Dividing f(t) - f(s) by t - s gives a
symmetric polynomial, so the curve is the zero set of a polynomial
``phi(p, q)`` intersected with the reality domain p**2 - 4 q >= 0.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

from .polyring import BiPoly, Poly, PolyError, real_roots

ON_CURVE_TOL = 1e-9
DIAGONAL_TOL = 1e-9


@functools.lru_cache(maxsize=64)
def complete_symmetric(m: int) -> BiPoly:
    """h_m(t, s) = sum_{i+j=m} t^i s^j written in p, q."""
    if m < 0:
        raise ValueError("negative index")
    p = BiPoly.var("p")
    q = BiPoly.var("q")
    prev, cur = BiPoly.constant(1), p
    if m == 0:
        return prev
    for _ in range(m - 1):
        prev, cur = cur, p * cur - q * prev
    return cur


def divided_difference(coeffs) -> BiPoly:
    """(f(t) - f(s)) / (t - s) in p, q for ascending coefficients of f."""
    terms: dict = {}
    for k in range(1, len(coeffs)):
        ck = coeffs[k]
        if ck == 0:
            continue
        for m, c in complete_symmetric(k - 1)._terms.items():
            terms[m] = terms.get(m, 0) + ck * c
    return BiPoly(terms)


@dataclass(frozen=True)
class RelationCurve:
    source: Poly
    phi: BiPoly
    exceptional: float | None = None

    def value(self, p: float, q: float) -> float:
        return self.phi(p, q)

    def on_curve(self, p: float, q: float, tol: float = ON_CURVE_TOL) -> bool:
        return abs(self.phi(p, q)) <= tol * (1 + abs(p) ** (self.source.degree - 1))

    def is_real(self, p: float, q: float, tol: float = DIAGONAL_TOL) -> bool:
        return p * p - 4 * q >= -tol

    def contains(self, p: float, q: float) -> bool:
        return self.on_curve(p, q) and self.is_real(p, q)

    def diagonal_points(self) -> list[float]:
        """Parameters x with (2x, x**2) on the curve, i.e. real roots of f'."""
        return real_roots(self.source.derivative()).values

    def q_of(self, p: float) -> list[float]:
        """Solutions q of phi(p, q) = 0 for fixed p (no reality filter)."""
        c = self.phi.specialize("p", p)
        if len(c) <= 1:
            return []
        return real_roots(c).values


def relation_curve(f: Poly) -> RelationCurve:
    if f.degree < 2:
        raise PolyError("relation curves need degree at least 2")
    # the key carries coefficient types so exact and float inputs stay apart
    return _relation_curve(f, tuple(type(c) for c in f.coeffs))


@functools.lru_cache(maxsize=4096)
def _relation_curve(f: Poly, _types: tuple) -> RelationCurve:
    phi = divided_difference(f.ascending())
    exceptional = f.a1 if f.degree % 2 == 0 else None
    return RelationCurve(f, phi, exceptional)


def pair_from_pq(p: float, q: float) -> tuple[float, float]:
    """The pair t <= s with t + s = p and t s = q (the discriminant clipped at 0)."""
    r = math.sqrt(max(p * p - 4 * q, 0.0))
    return (p - r) / 2, (p + r) / 2


# ---------------------------------------------------------------------------
# cubics

class CubicCurveClass(enum.Enum):
    Empty = "Empty"
    SinglePoint = "SinglePoint"
    HalfEllipse = "HalfEllipse"


def classify_cubic_curve(alpha: float, beta: float, tol: float = 1e-12) -> CubicCurveClass:
    """Shape of the relation curve of t^3 + alpha t^2 + beta t."""
    gap = alpha * alpha - 3 * beta
    if abs(gap) <= tol * (1 + alpha * alpha + abs(beta)):
        return CubicCurveClass.SinglePoint
    return CubicCurveClass.HalfEllipse if gap > 0 else CubicCurveClass.Empty


def half_ellipse_endpoints(alpha: float, beta: float) -> list[tuple[float, float]]:
    """Diagonal endpoints (2x, x^2) at the real critical points x."""
    roots = real_roots([beta, 2 * alpha, 3.0]).values
    return [(2 * x, x * x) for x in roots]


# ---------------------------------------------------------------------------
# quartics

@dataclass(frozen=True)
class Irreducible:
    curve: RelationCurve


@dataclass(frozen=True)
class Segment:
    """The line t + s = 2 t0 (a segment inside the reality domain)."""

    t0: float

    @property
    def p(self) -> float:
        return 2 * self.t0

    def contains(self, p: float, q: float, tol: float = ON_CURVE_TOL) -> bool:
        return abs(p - self.p) <= tol * (1 + abs(p))


@dataclass(frozen=True)
class Circle:
    """(t - t0)^2 + (s - t0)^2 + lam = 0; imaginary when lam > 0."""

    t0: float
    lam: float

    @property
    def imaginary(self) -> bool:
        return self.lam > 0

    def value(self, p: float, q: float) -> float:
        u_plus_v = p - 2 * self.t0
        uv = q - self.t0 * p + self.t0 ** 2
        return u_plus_v ** 2 - 2 * uv + self.lam

    def contains(self, p: float, q: float, tol: float = ON_CURVE_TOL) -> bool:
        return abs(self.value(p, q)) <= tol * (1 + p * p + abs(q))


def _translated(f: Poly, t0: float) -> list:
    """Ascending coefficients of f(t + t0)."""
    c = f.ascending()
    out = [0.0] * len(c)
    for k, ck in enumerate(c):
        if ck == 0:
            continue
        binom = 1
        for j in range(k + 1):
            out[j] += ck * binom * t0 ** (k - j)
            binom = binom * (k - j) // (j + 1)
    return out


def decompose_quartic(f: Poly, tol: float = 1e-12) -> list:
    """Components of r(f): one irreducible curve, or a segment plus a circle.

    The curve splits exactly when f is symmetric about some t0, i.e. f(t + t0)
    has no odd part.
    """
    if f.degree != 4:
        raise PolyError("decompose_quartic needs a quartic")
    t0 = -f.a1 / 4
    c = _translated(f, t0)
    scale = 1 + sum(abs(x) for x in c[1:])
    if abs(c[1]) <= tol * scale and abs(c[3]) <= tol * scale:
        return [Segment(t0), Circle(t0, c[2])]
    return [Irreducible(relation_curve(f))]


# ---------------------------------------------------------------------------
# branches

class BranchTag(enum.Enum):
    Finite = "Finite"
    Infinite = "Infinite"
    Endpoint = "Endpoint"


def branch_of(f: Poly, point: tuple[float, float], tol: float = DIAGONAL_TOL) -> BranchTag:
    """Branch of r(f) through ``point`` for a normalized quartic in cell B or B'.

    In B the asymptote t + s = 0 separates the infinite branch (p < 0) from
    the finite one (p > 0); B' is the mirror image p -> -p.
    """
    if f.degree != 4 or f.a1 != 0:
        raise PolyError("branch_of expects a normalized quartic t^4 + a t^2 + b t")
    b = f.coefficient(1)
    a = f.coefficient(2)
    if not 27 * b * b + 8 * a ** 3 < 0:
        raise PolyError("branch_of is defined on cells B and B' only")
    p, q = point
    curve = relation_curve(f)
    if not curve.on_curve(p, q) or p * p - 4 * q < -tol:
        raise PolyError(f"point {point!r} is not on the relation curve")
    if abs(p * p - 4 * q) <= tol * (1 + p * p):
        return BranchTag.Endpoint
    if b < 0:
        p = -p
    return BranchTag.Infinite if p < 0 else BranchTag.Finite


def asymptote(f: Poly) -> float:
    """The exceptional value a_1 attached to the asymptotic direction of r(f).

    Only even degrees have one; in odd degree the whole curve is bounded
    away from infinity in t + s.  Note that the limit of t + s along the
    unbounded branch itself is -2 a_1 / d (see ``asymptotic_limit``).
    """
    if f.degree % 2:
        raise PolyError("odd degree: the relation curve lies in the finite domain")
    return f.a1


def asymptotic_limit(f: Poly) -> float:
    """lim t + s along the unbounded part of r(f) for even degree."""
    if f.degree % 2:
        raise PolyError("odd degree: no asymptote")
    return -2 * f.a1 / f.degree
