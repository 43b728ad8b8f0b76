"""Polynomial arithmetic, real-root isolation and resultant elimination.

Univariate polynomials are plain sequences of coefficients in ascending
order, ``c[0] + c[1] t + ... + c[n] t**n``.  Every routine is generic over
the coefficient type: floats give the fast path, while ``int`` and
``fractions.Fraction`` coefficients switch on exact arithmetic (squarefree
decomposition, Sturm counting and sign evaluation are then exact; root
values are still reported as floats).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Iterator, Mapping, Sequence

DEFAULT_TOL = 1e-12
# a critical point c of f is declared a multiple root when |f(c)| is below
# this fraction of the evaluation magnitude sum(|c_i| |c|^i)
MULTIPLICITY_RTOL = 1e-12


class PolyError(ValueError):
    """Base class for failures in this module."""


class RootIsolationError(PolyError):
    """Refinement did not reach the requested enclosure width."""

    def __init__(self, message: str, interval: tuple[float, float]):
        super().__init__(f"{message} on [{interval[0]!r}, {interval[1]!r}]")
        self.interval = interval


class ResultantDegenerateError(PolyError):
    """An argument does not involve the variable being eliminated."""


# ---------------------------------------------------------------------------
# monic polynomials without constant term

@dataclass(frozen=True)
class Poly:
    """``t**d + a_1 t**(d-1) + ... + a_{d-1} t``; ``coeffs`` holds a_1..a_{d-1}."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) + 1

    @classmethod
    def monomial(cls, d: int) -> "Poly":
        if d < 1:
            raise PolyError("degree must be positive")
        return cls((0,) * (d - 1))

    @classmethod
    def from_ascending(cls, c: Sequence, tol: float = 0.0) -> "Poly":
        """Build from ascending coefficients; the constant term is dropped."""
        c = list(c)
        while len(c) > 1 and abs(c[-1]) <= tol and c[-1] != 1:
            c.pop()
        if len(c) < 2 or c[-1] != 1:
            raise PolyError(f"not a monic polynomial of positive degree: {c!r}")
        return cls(tuple(reversed(c[1:-1])))

    def ascending(self) -> list:
        return [0] + list(reversed(self.coeffs)) + [1]

    def coefficient(self, k: int):
        """Coefficient of t**k."""
        d = self.degree
        if k == d:
            return 1
        if 1 <= k < d:
            return self.coeffs[d - 1 - k]
        return 0

    @property
    def a1(self):
        return self.coefficient(self.degree - 1)

    def derivative(self) -> list:
        return pderiv(self.ascending())

    def __call__(self, t):
        return peval(self.ascending(), t)

    def __str__(self) -> str:
        parts = []
        for k in range(self.degree, 0, -1):
            c = self.coefficient(k)
            if c == 0:
                continue
            mono = "t" if k == 1 else f"t^{k}"
            if c == 1:
                term = mono
            elif c == -1:
                term = "-" + mono
            else:
                term = f"{c:g}{mono}" if isinstance(c, float) else f"{c}{mono}"
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# univariate helpers

def is_exact(coeffs: Iterable) -> bool:
    return all(isinstance(c, Rational) for c in coeffs)


def trim(c: Sequence) -> list:
    """Drop trailing zero coefficients (exact zeros only)."""
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def degree(c: Sequence) -> int:
    """Degree of ``c``; -1 for the zero polynomial."""
    return len(trim(c)) - 1


def padd(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def psub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def pscale(a: Sequence, k) -> list:
    return trim([k * x for x in a])


def pmul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def pderiv(c: Sequence) -> list:
    return trim([i * c[i] for i in range(1, len(c))])


def peval(c: Sequence, x):
    acc = 0
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _eval_with_scale(c: Sequence, x: float) -> tuple[float, float]:
    """Value of ``c`` at ``x`` together with sum(|c_i| |x|^i)."""
    acc = 0.0
    mag = 0.0
    ax = abs(x)
    for coef in reversed(c):
        acc = acc * x + coef
        mag = mag * ax + abs(coef)
    return acc, mag


def pdivmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = trim(a)
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    exact = is_exact(a) and is_exact(b)
    lead = b[-1]
    quot = [0] * (len(a) - len(b) + 1)
    rem = list(a)
    for k in range(len(a) - len(b), -1, -1):
        coef = rem[k + len(b) - 1]
        coef = Fraction(coef) / lead if exact else coef / lead
        quot[k] = coef
        if coef != 0:
            for j, y in enumerate(b):
                rem[k + j] -= coef * y
        rem[k + len(b) - 1] = 0
    return trim(quot), trim(rem[: len(b) - 1])


def monic(c: Sequence) -> list:
    c = trim(c)
    if not c:
        return []
    lead = c[-1]
    if is_exact(c):
        return [Fraction(x) / lead for x in c]
    return [x / lead for x in c]


def _norm(c: Sequence) -> float:
    return max((abs(float(x)) for x in c), default=0.0)


def pgcd(a: Sequence, b: Sequence, tol: float = 1e-9) -> list:
    """Monic gcd by Euclid; float remainders below ``tol`` (relative) vanish."""
    a = trim(a)
    b = trim(b)
    exact = is_exact(a) and is_exact(b)
    scale = max(_norm(a), _norm(b), 1e-300)
    while b:
        _, r = pdivmod(a, b)
        if not exact:
            r = list(r)
            # relative to the divisor: remainders of an exact common factor
            # are pure rounding noise
            cutoff = tol * max(_norm(b), scale * 1e-3)
            while r and abs(r[-1]) <= cutoff:
                r.pop()
            if all(abs(x) <= cutoff for x in r):
                r = []
        a, b = b, r
    return monic(a)


def squarefree_part(f: Sequence, tol: float = 1e-9) -> list:
    """Product of the distinct irreducible factors of ``f``, made monic."""
    f = trim(_coeffs(f))
    if not f:
        raise PolyError("squarefree_part of the zero polynomial")
    if len(f) == 1:
        return [Fraction(1) if is_exact(f) else 1.0]
    g = pgcd(f, pderiv(f), tol)
    q, _ = pdivmod(f, g)
    return monic(q)


def squarefree_decomposition(f: Sequence) -> list[tuple[list, int]]:
    """Yun's algorithm: ``f = lead * prod(a_i ** i)``; returns [(a_i, i)].

    Exact coefficients only; trivial factors are omitted.
    """
    f = [Fraction(x) for x in trim(f)]
    if not f:
        raise PolyError("squarefree decomposition of the zero polynomial")
    out = []
    df = pderiv(f)
    a0 = pgcd(f, df)
    b, _ = pdivmod(f, a0)
    c, _ = pdivmod(df, a0)
    d = psub(c, pderiv(b))
    i = 1
    while len(b) > 1:
        a = pgcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b, _ = pdivmod(b, a)
        c, _ = pdivmod(d, a)
        d = psub(c, pderiv(b))
        i += 1
    return out


def _coeffs(f) -> list:
    """Accept an ascending sequence or anything exposing ``ascending()``."""
    if hasattr(f, "ascending"):
        return list(f.ascending())
    return list(f)


# ---------------------------------------------------------------------------
# real roots

@dataclass(frozen=True)
class Root:
    value: float
    multiplicity: int
    enclosure: tuple[float, float]
    # set when a near-multiple root was merged at the multiplicity tolerance
    merged: bool = False


@dataclass(frozen=True)
class RootList:
    roots: tuple[Root, ...] = ()

    def __iter__(self) -> Iterator[Root]:
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __getitem__(self, i) -> Root:
        return self.roots[i]

    @property
    def values(self) -> list[float]:
        return [r.value for r in self.roots]

    @property
    def multiplicities(self) -> list[int]:
        return [r.multiplicity for r in self.roots]

    def count(self, with_multiplicity: bool = False) -> int:
        if with_multiplicity:
            return sum(r.multiplicity for r in self.roots)
        return len(self.roots)


NOISE_RTOL = 64 * 2.0 ** -52


def cauchy_bound(c: Sequence) -> float:
    c = trim(c)
    lead = abs(float(c[-1]))
    return 1.0 + max((abs(float(x)) / lead for x in c[:-1]), default=0.0)


def _width_ok(lo: float, hi: float, tol: float) -> bool:
    return hi - lo <= tol * max(1.0, abs(lo), abs(hi))


def _polish(c: Sequence, dc: Sequence, x: float, enc: tuple[float, float]) -> float:
    """A few Newton steps from ``x`` that never leave the enclosure."""
    lo, hi = enc
    best, fbest = x, abs(peval(c, x))
    for _ in range(3):
        d = peval(dc, x)
        if d == 0 or fbest == 0:
            break
        x = x - peval(c, x) / d
        if not lo <= x <= hi:
            break
        fx = abs(peval(c, x))
        if fx >= fbest:
            break
        best, fbest = x, fx
    return best


def _refine(c: Sequence, dc: Sequence, lo: float, hi: float, flo: float, fhi: float,
            tol: float, max_iter: int, seed: float | None = None) -> tuple[float, tuple[float, float]]:
    """Safeguarded Newton/bisection on a bracket with a strict sign change.

    ``flo``, ``fhi`` are the end values.  Once Newton steps fall below the
    tolerance the root is certified by the signs at x -/+ w, which becomes
    the enclosure.
    """
    slo = flo > 0
    x = seed if seed is not None else lo - flo * (hi - lo) / (fhi - flo)
    if not lo < x < hi:
        x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        if hi - lo <= tol * max(1.0, abs(lo), abs(hi)):
            return 0.5 * (lo + hi), (lo, hi)
        fx = peval(c, x)
        if fx == 0:
            return x, (x, x)
        if (fx > 0) == slo:
            lo = x
        else:
            hi = x
        dfx = peval(dc, x)
        nx = x - fx / dfx if dfx != 0 else 0.5 * (lo + hi)
        if abs(nx - x) < 0.25 * tol * max(1.0, abs(nx)):
            w = 0.4 * tol * max(1.0, abs(nx))
            a, b = max(lo, nx - w), min(hi, nx + w)
            fa, fb = peval(c, a), peval(c, b)
            if fa == 0:
                return a, (a, a)
            if fb == 0:
                return b, (b, b)
            if (fa > 0) == slo and (fb > 0) != slo:
                return nx, (a, b)
        if not lo < nx < hi:
            nx = 0.5 * (lo + hi)
        x = nx
    if _width_ok(lo, hi, tol):
        return 0.5 * (lo + hi), (lo, hi)
    raise RootIsolationError("root refinement did not converge", (lo, hi))


def _quadratic_roots(c: Sequence) -> list[float]:
    """Numerically stable closed form, used only to seed the refinement."""
    c0, c1, c2 = c
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    s = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1))
    out = [s / c2]
    if s != 0:
        out.append(c0 / s)
    return out


def _cubic_roots(c: Sequence) -> list[float]:
    """Closed-form real roots of a cubic, used only to seed the refinement."""
    c0, c1, c2, c3 = (x / c[3] for x in c)
    shift = c2 / 3
    p = c1 - c2 * shift
    q = 2 * shift ** 3 - c1 * shift + c0
    if p == 0:
        return [-math.copysign(abs(q) ** (1 / 3), q) - shift]
    disc = (q / 2) ** 2 + (p / 3) ** 3
    if disc > 0:
        r = math.sqrt(disc)
        u = -q / 2 + math.copysign(r, -q)
        u = math.copysign(abs(u) ** (1 / 3), u)
        return [u - p / (3 * u) - shift]
    m = 2 * math.sqrt(-p / 3)
    arg = max(-1.0, min(1.0, 3 * q / (p * m)))
    th = math.acos(arg) / 3
    return [m * math.cos(th - 2 * math.pi * k / 3) - shift for k in range(3)]


def _float_roots(c: list[float], tol: float, max_iter: int) -> list[Root]:
    """Roots of a float polynomial by recursion on critical points.

    Between consecutive critical points the polynomial is monotone, so a
    strict sign change brackets exactly one simple root.  A critical point
    where the polynomial vanishes (to the multiplicity tolerance) is a
    multiple root; its multiplicity is one more than its order as a critical
    point.
    """
    n = len(c) - 1
    if n <= 0:
        return []
    if n == 1:
        x = -c[0] / c[1]
        return [Root(x, 1, (x, x))]
    dc = pderiv(c)
    crit = _float_roots(dc, tol, max_iter)
    bound = cauchy_bound(c)
    # breakpoints: (x, f(x), critical Root or None); f(x) == 0 marks a root
    points: list[tuple[float, float, Root | None]] = []
    roots: list[Root] = []
    for r in crit:
        fx, mag = _eval_with_scale(c, r.value)
        if abs(fx) <= MULTIPLICITY_RTOL * mag:
            roots.append(Root(r.value, r.multiplicity + 1, r.enclosure,
                              merged=fx != 0 or r.merged))
            fx = 0.0
        points.append((r.value, fx, r))
    lo_x = -bound
    hi_x = bound
    if points:
        lo_x = min(lo_x, points[0][0] - 1.0)
        hi_x = max(hi_x, points[-1][0] + 1.0)
    points = [(lo_x, peval(c, lo_x), None)] + points + [(hi_x, peval(c, hi_x), None)]
    seeds = _quadratic_roots(c) if n == 2 else _cubic_roots(c) if n == 3 else []
    for (xa, fa, _), (xb, fb, _) in zip(points, points[1:]):
        if fa == 0 or fb == 0 or (fa > 0) == (fb > 0):
            continue
        seed = next((x for x in seeds if xa < x < xb), None)
        x, enc = _refine(c, dc, xa, xb, fa, fb, tol, max_iter, seed)
        roots.append(Root(_polish(c, dc, x, enc), 1, enc))
    roots.sort(key=lambda r: r.value)
    return roots


def sturm_sequence(c: Sequence) -> list[list]:
    c = [Fraction(x) for x in trim(c)]
    seq = [c, pderiv(c)]
    while seq[-1] and len(seq[-1]) > 1:
        _, r = pdivmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append(pscale(r, -1))
    return [s for s in seq if s]


def _sign_changes(seq: list[list], x) -> int:
    signs = []
    for s in seq:
        v = peval(s, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _exact_sqf_roots(c: list, tol: float, max_iter: int) -> list[tuple[float, tuple[float, float]]]:
    """Isolate the roots of an exact squarefree polynomial with Sturm counts."""
    c = [Fraction(x) for x in c]
    if len(c) <= 1:
        return []
    if len(c) == 2:
        x = -c[0] / c[1]
        return [(float(x), (float(x), float(x)))]
    seq = sturm_sequence(c)
    bound = Fraction(math.ceil(cauchy_bound(c)) + 1)
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        k = _sign_changes(seq, lo) - _sign_changes(seq, hi)
        if k == 0:
            continue
        if k == 1:
            out.append(_exact_refine(c, lo, hi, tol, max_iter))
            continue
        mid = (lo + hi) / 2
        if peval(c, mid) == 0:
            out.append((float(mid), (float(mid), float(mid))))
            # exclude a window around the midpoint root that holds no other root
            eps = (hi - lo) / 1024
            while (_sign_changes(seq, lo) - _sign_changes(seq, mid - eps)
                   + _sign_changes(seq, mid + eps) - _sign_changes(seq, hi)) != k - 1:
                eps /= 2
            stack.append((lo, mid - eps))
            stack.append((mid + eps, hi))
            continue
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort()
    return out


def _exact_refine(c: list, lo: Fraction, hi: Fraction, tol: float, max_iter: int):
    """Refine a Sturm-isolated root in (lo, hi]: float Newton, exact signs."""
    if peval(c, hi) == 0:
        return float(hi), (float(hi), float(hi))
    slo = peval(c, lo) > 0
    fc = [float(x) for x in c]
    dfc = pderiv(fc)
    # fast path: float refinement on the isolating interval, then an exact
    # sign check at both ends of a tight enclosure
    flo, fhi = peval(fc, float(lo)), peval(fc, float(hi))
    if flo != 0 and fhi != 0 and (flo > 0) != (fhi > 0):
        try:
            x, _ = _refine(fc, dfc, float(lo), float(hi), flo, fhi, tol / 4, max_iter)
        except RootIsolationError:
            x = None
        if x is not None:
            w = 0.4 * tol * max(1.0, abs(x))
            a, b = Fraction(x - w), Fraction(x + w)
            if lo <= a < b <= hi:
                va, vb = peval(c, a), peval(c, b)
                if va != 0 and vb != 0 and (va > 0) == slo and (vb > 0) != slo:
                    return x, (float(a), float(b))
    x = float((lo + hi) / 2)
    for _ in range(max_iter):
        if _width_ok(float(lo), float(hi), tol):
            break
        dfx = peval(dfc, x)
        nx = x - peval(fc, x) / dfx if dfx != 0 else math.nan
        if not (float(lo) < nx < float(hi)):
            nx = float((lo + hi) / 2)
        w = tol * max(1.0, abs(nx)) * 0.25
        moved = False
        for cand in (nx - w, nx + w, nx):
            fcand = Fraction(cand)
            if not (lo < fcand < hi):
                continue
            v = peval(c, fcand)
            if v == 0:
                return cand, (cand, cand)
            if (v > 0) == slo:
                lo = fcand
            else:
                hi = fcand
            moved = True
        if not moved:
            mid = (lo + hi) / 2
            v = peval(c, mid)
            if v == 0:
                return float(mid), (float(mid), float(mid))
            if (v > 0) == slo:
                lo = mid
            else:
                hi = mid
        x = float((lo + hi) / 2)
    if not _width_ok(float(lo), float(hi), tol):
        raise RootIsolationError("exact refinement did not converge", (float(lo), float(hi)))
    enc = (float(lo), float(hi))
    return _polish(fc, dfc, float((lo + hi) / 2), enc), enc


def real_roots(f, window: tuple[float, float] | None = None, tol: float = DEFAULT_TOL,
               max_iter: int = 400) -> RootList:
    """All real roots of ``f`` with certified enclosures and multiplicities.

    Float input: roots are bracketed between consecutive critical points and
    refined by safeguarded Newton; a critical point at which ``f`` vanishes to
    ``MULTIPLICITY_RTOL`` is reported once as a multiple root (``merged`` is
    set when the value was not exactly zero).  Exact input: multiplicities
    come from Yun's squarefree decomposition and roots of each factor are
    isolated with Sturm sequences.
    """
    c = trim(_coeffs(f))
    if not c:
        raise PolyError("real_roots of the zero polynomial")
    if is_exact(c):
        roots = []
        for factor, mult in squarefree_decomposition(c):
            for x, enc in _exact_sqf_roots(factor, tol, max_iter):
                roots.append(Root(x, mult, enc))
        roots.sort(key=lambda r: r.value)
    else:
        fc = [float(x) for x in c]
        if not all(math.isfinite(x) for x in fc):
            raise PolyError("non-finite coefficient")
        # a leading coefficient at rounding level is cancellation noise
        big = max(abs(x) for x in fc)
        while len(fc) > 1 and abs(fc[-1]) <= NOISE_RTOL * big:
            fc.pop()
        roots = _float_roots(fc, tol, max_iter)
    if window is not None:
        lo, hi = window
        roots = [r for r in roots if lo <= r.value <= hi]
    return RootList(tuple(roots))


def cubic_real_root_count(p: float, q: float) -> int:
    """Number of distinct real roots of ``t**3 + p t + q``."""
    if p == 0 and q == 0:
        return 1
    disc = -4 * p ** 3 - 27 * q ** 2
    if disc > 0:
        return 3
    if disc < 0:
        return 1
    return 2


# ---------------------------------------------------------------------------
# bivariate polynomials

VARS = ("p", "q")


class BiPoly:
    """Polynomial in two variables, stored sparsely as {(i, j): coeff} for p^i q^j.

    The variables are called ``p`` and ``q`` after the symmetric coordinates
    p = t + s, q = t s, but nothing else assumes that meaning.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            if v != 0:
                clean[(int(k[0]), int(k[1]))] = v
        self._terms = clean

    @classmethod
    def constant(cls, c) -> "BiPoly":
        return cls({(0, 0): c})

    @classmethod
    def var(cls, name: str) -> "BiPoly":
        return cls({(1, 0): 1}) if name == "p" else cls({(0, 1): 1})

    @classmethod
    def from_univariate(cls, c: Sequence, var: str = "p") -> "BiPoly":
        if var == "p":
            return cls({(i, 0): x for i, x in enumerate(c)})
        return cls({(0, i): x for i, x in enumerate(c)})

    @property
    def terms(self) -> dict[tuple[int, int], object]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self, var: str) -> int:
        k = VARS.index(var)
        return max((m[k] for m in self._terms), default=-1)

    @property
    def weighted_degree(self) -> int:
        """Degree with p of weight 1 and q of weight 2 (the (t, s) degree)."""
        return max((i + 2 * j for i, j in self._terms), default=-1)

    def __call__(self, p, q):
        total = 0
        for (i, j), c in self._terms.items():
            total += c * p ** i * q ** j
        return total

    def coeffs_in(self, var: str) -> list[list]:
        """Coefficients as a polynomial in ``var``; each is univariate in the other."""
        k = VARS.index(var)
        n = self.degree(var)
        out: list[list] = [[] for _ in range(n + 1)]
        for m, c in self._terms.items():
            e, o = m[k], m[1 - k]
            row = out[e]
            if len(row) <= o:
                row.extend([0] * (o + 1 - len(row)))
            row[o] += c
        return [trim(r) for r in out]

    def partial(self, var: str) -> "BiPoly":
        k = VARS.index(var)
        out = {}
        for m, c in self._terms.items():
            if m[k] > 0:
                nm = (m[0] - 1, m[1]) if k == 0 else (m[0], m[1] - 1)
                out[nm] = c * m[k]
        return BiPoly(out)

    def specialize(self, var: str, value) -> list:
        """Substitute ``var = value``; returns a univariate poly in the other variable."""
        k = VARS.index(var)
        n = max((m[1 - k] for m in self._terms), default=-1)
        out = [0] * (n + 1)
        for m, c in self._terms.items():
            out[m[1 - k]] += c * value ** m[k]
        return trim(out)

    def map_coeffs(self, fn: Callable) -> "BiPoly":
        return BiPoly({m: fn(c) for m, c in self._terms.items()})

    def norm(self) -> float:
        return max((abs(float(c)) for c in self._terms.values()), default=0.0)

    def __add__(self, other) -> "BiPoly":
        other = _as_bipoly(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "BiPoly":
        return self + (-_as_bipoly(other))

    def __rsub__(self, other) -> "BiPoly":
        return _as_bipoly(other) - self

    def __mul__(self, other) -> "BiPoly":
        other = _as_bipoly(other)
        out: dict = {}
        for (i, j), a in self._terms.items():
            for (k, l), b in other._terms.items():
                key = (i + k, j + l)
                out[key] = out.get(key, 0) + a * b
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        out = BiPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "BiPoly(0)"
        parts = []
        for (i, j), c in sorted(self._terms.items(), key=lambda kv: (-(kv[0][0] + 2 * kv[0][1]), kv[0])):
            mono = "*".join(x for x in (
                f"p^{i}" if i > 1 else ("p" if i == 1 else ""),
                f"q^{j}" if j > 1 else ("q" if j == 1 else "")) if x)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return "BiPoly(" + " + ".join(parts) + ")"


def _as_bipoly(x) -> BiPoly:
    return x if isinstance(x, BiPoly) else BiPoly.constant(x)


def _poly_det(matrix: list[list[list]]) -> list:
    """Determinant of a square matrix with univariate polynomial entries.

    Laplace expansion along columns with memoisation over row subsets; the
    matrices here are Sylvester matrices of size at most about 8.
    """
    n = len(matrix)
    memo: dict[tuple[int, int], list] = {}

    def det(col: int, rows_mask: int) -> list:
        if col == n:
            return [1]
        key = (col, rows_mask)
        if key in memo:
            return memo[key]
        total: list = []
        sign_pos = 0
        for r in range(n):
            if rows_mask & (1 << r):
                continue
            entry = matrix[r][col]
            if entry:
                sub = det(col + 1, rows_mask | (1 << r))
                term = pmul(entry, sub)
                total = padd(total, term) if sign_pos % 2 == 0 else psub(total, term)
            sign_pos += 1
        memo[key] = total
        return total

    return det(0, 0)


def sylvester_resultant(a: list[list], b: list[list]) -> list:
    """Resultant of two polynomials whose coefficients (ascending) are polynomials."""
    m = len(a) - 1
    n = len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [[] for _ in range(size)]
        for k, coef in enumerate(reversed(a)):
            row[i + k] = coef
        rows.append(row)
    for i in range(m):
        row = [[] for _ in range(size)]
        for k, coef in enumerate(reversed(b)):
            row[i + k] = coef
        rows.append(row)
    return _poly_det(rows)


def resultant_eliminate(A: BiPoly, B: BiPoly, var: str) -> list:
    """Resultant of ``A`` and ``B`` with respect to ``var``.

    Returns an ascending univariate polynomial in the remaining variable;
    the empty list (identically zero) signals a common component.
    """
    if var not in VARS:
        raise ValueError(f"unknown variable {var!r}")
    if A.is_zero() or B.is_zero():
        raise ResultantDegenerateError("zero argument")
    if A.degree(var) < 1 or B.degree(var) < 1:
        raise ResultantDegenerateError(f"argument constant in {var}")
    ca = A.coeffs_in(var)
    cb = B.coeffs_in(var)
    if len(cb) == 2:
        return _resultant_linear(ca, cb)
    if len(ca) == 2:
        sign = -1 if (len(cb) - 1) % 2 else 1
        return pscale(_resultant_linear(cb, ca), sign)
    return sylvester_resultant(ca, cb)


def _resultant_linear(a: list[list], b: list[list]) -> list:
    """Res(A, B) for B = b1 x + b0: (-1)**m sum_k a_k (-b0)**k b1**(m-k)."""
    m = len(a) - 1
    b0, b1 = b
    nb0 = pscale(b0, -1)
    total: list = []
    pow_b0 = [1]
    for k in range(m + 1):
        term = pmul(pmul(a[k], pow_b0), _ppow(b1, m - k)) if a[k] else []
        total = padd(total, term)
        pow_b0 = pmul(pow_b0, nb0)
    return pscale(total, -1) if m % 2 else total


def _ppow(c: list, n: int) -> list:
    out = [1]
    for _ in range(n):
        out = pmul(out, c)
    return out


def to_exact(c):
    """Exact rational copy of a coefficient, polynomial or BiPoly."""
    if isinstance(c, BiPoly):
        return c.map_coeffs(Fraction)
    if isinstance(c, (list, tuple)):
        return [Fraction(x) for x in c]
    return Fraction(c)
