"""Discriminant membership of polynomial maps R -> R^n and linking numbers.

A map is an n-tuple of monic degree-d polynomials without constant term.
It lies in the discriminant when it has a multiple point (all components
agree at some t < s) or a singular point (all derivatives vanish at t); for
even d the stratum where every component has the same a_1 belongs to it as
well.  For n = 3 the circle of rotations about the axis (1, 1, 1) acts on
coefficient triples, and loops and spheres of maps link that stratum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .polyring import Poly, PolyError, ResultantDegenerateError, degree, peval, real_roots
from .conditions import _eliminate
from .symcurve import pair_from_pq, relation_curve

VERIFY_TOL = 1e-7
SPREAD_MARGIN = 1e-6
A1_TOL = 1e-10

AXIS = np.ones(3) / math.sqrt(3)
E1 = np.array([1.0, -1.0, 0.0]) / math.sqrt(2)
E2 = np.array([1.0, 1.0, -2.0]) / math.sqrt(6)


class DiscriminantError(ValueError):
    pass


@dataclass(frozen=True)
class KnotMap:
    components: tuple[Poly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len({c.degree for c in comps}) > 1:
            raise DiscriminantError("components must share one degree")

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> int:
        return self.components[0].degree

    def a1(self, i: int) -> float:
        return self.components[i].a1

    def a1_vector(self) -> np.ndarray:
        return np.array([float(c.a1) for c in self.components])

    def coefficient_matrix(self) -> np.ndarray:
        """Row i holds a_1..a_{d-1} of component i."""
        return np.array([[float(x) for x in c.coeffs] for c in self.components])

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "KnotMap":
        return cls(tuple(Poly(tuple(float(x) for x in row)) for row in m))

    def __call__(self, t: float) -> np.ndarray:
        return np.array([float(c(t)) for c in self.components])


@dataclass(frozen=True)
class Multiple:
    t: float
    s: float


@dataclass(frozen=True)
class Singular:
    t: float


@dataclass(frozen=True)
class ExceptionalStratum:
    alpha: float


# ---------------------------------------------------------------------------
# membership

def _scale(m: KnotMap) -> float:
    return 1.0 + max(abs(float(x)) for c in m.components for x in c.coeffs) if m.degree > 1 else 1.0


def _singular_points(m: KnotMap, tol: float) -> list[float]:
    derivs = [c.derivative() for c in m.components]
    out = []
    for r in real_roots(derivs[0]):
        t = r.value
        mag = sum(abs(float(x)) * abs(t) ** k for k, x in enumerate(derivs[0]))
        if all(abs(peval(d, t)) <= tol * max(1.0, mag) for d in derivs[1:]):
            out.append(t)
    return out


def _verify(phis, p: float, q: float, tol: float) -> bool:
    for phi in phis:
        mag = sum(abs(float(c)) * abs(p) ** i * abs(q) ** j for (i, j), c in phi._terms.items())
        if abs(phi(p, q)) > tol * max(1.0, mag):
            return False
    return True


def _pairs_from_resultant(phis, i: int, j: int, tol: float) -> list[tuple[float, float]] | None:
    """Real off-diagonal common points found through the pair (i, j); None if
    the two curves share a component."""
    var = "q" if all(phi.degree("q") >= 1 for phi in (phis[i], phis[j])) else "p"
    try:
        res = _eliminate(phis[i], phis[j], var)
    except ResultantDegenerateError:
        return []
    if not res:
        return None
    if degree(res) < 1:
        return []
    other = "p" if var == "q" else "q"
    out = []
    for root in real_roots(res):
        x = root.value
        for phi in (phis[i], phis[j]):
            c = [float(v) for v in phi.specialize(other, x)]
            while c and c[-1] == 0:
                c.pop()
            if len(c) >= 2:
                ys = real_roots(c).values
                break
        else:
            continue
        for y in ys:
            p, q = (x, y) if var == "q" else (y, x)
            out.append((p, q))
    return out


def _pairs_by_sampling(phis, scale: float, steps: int = 2001) -> list[tuple[float, float]]:
    """Common points when every pair of curves shares a component: walk along
    the first curve and keep the real points satisfying all equations."""
    phi = phis[0]
    lead = phi.coeffs_in("q")[-1] if phi.degree("q") >= 1 else []
    ps = list(np.linspace(-2 * scale, 2 * scale, steps))
    if len(lead) >= 2:
        ps += real_roots([float(c) for c in lead]).values
    out = []
    for p0 in ps:
        c = [float(v) for v in phi.specialize("p", p0)]
        if all(abs(v) <= 1e-12 * scale for v in c):
            qs = [p0 * p0 / 4 - 1.0]
        else:
            while c and c[-1] == 0:
                c.pop()
            qs = real_roots(c).values if len(c) >= 2 else []
        for q0 in qs:
            out.append((p0, q0))
    return out


def sigma_witnesses(m: KnotMap, tol: float = VERIFY_TOL) -> list:
    """Every discriminant witness found for ``m`` (singular points first)."""
    if m.degree < 2:
        return []
    out: list = [Singular(t) for t in _singular_points(m, tol)]
    phis = [relation_curve(c).phi for c in m.components]
    scale = _scale(m)
    candidates: list[tuple[float, float]] | None = None
    for i, j in itertools.combinations(range(m.n), 2):
        found = _pairs_from_resultant(phis, i, j, tol)
        if found is not None:
            candidates = found
            break
    if candidates is None:
        candidates = _pairs_by_sampling(phis, scale)
    seen: list[tuple[float, float]] = []
    for p, q in candidates:
        if p * p - 4 * q <= tol * (1 + p * p):
            continue
        if not _verify(phis, p, q, tol):
            continue
        t, s = pair_from_pq(p, q)
        if any(abs(t - u) + abs(s - v) <= 1e-9 * (1 + abs(t) + abs(s)) for u, v in seen):
            continue
        seen.append((t, s))
        out.append(Multiple(float(t), float(s)))
    if m.degree % 2 == 0:
        a1 = m.a1_vector()
        if np.ptp(a1) <= A1_TOL * (1 + np.max(np.abs(a1))):
            out.append(ExceptionalStratum(float(np.mean(a1))))
    return out


def sigma_test(m: KnotMap, tol: float = VERIFY_TOL):
    """One witness that ``m`` lies in the discriminant, or None."""
    w = sigma_witnesses(m, tol)
    return w[0] if w else None


# ---------------------------------------------------------------------------
# the circle action for n = 3

def rotation_matrix(theta: float) -> np.ndarray:
    """Rotation by ``theta`` about the unit vector along (1, 1, 1)."""
    u = AXIS
    k = np.array([[0, -u[2], u[1]], [u[2], 0, -u[0]], [-u[1], u[0], 0]])
    return math.cos(theta) * np.eye(3) + math.sin(theta) * k + (1 - math.cos(theta)) * np.outer(u, u)


def _require_three(m: KnotMap) -> None:
    if m.n != 3:
        raise DiscriminantError("the circle action is defined for three components")


def rotate_s1(m: KnotMap, theta: float) -> KnotMap:
    _require_three(m)
    return KnotMap.from_matrix(rotation_matrix(theta) @ m.coefficient_matrix())


def canonicalize_s1(m: KnotMap) -> tuple[float, KnotMap]:
    """The rotation making a_1^1 = a_1^2 and a_1^1 + a_1^2 - 2 a_1^3 > 0."""
    _require_three(m)
    a1 = m.a1_vector()
    x, y = float(a1 @ E1), float(a1 @ E2)
    if math.hypot(x, y) <= A1_TOL * (1 + np.max(np.abs(a1))):
        raise DiscriminantError("all a_1 equal: the orbit is a fixed point")
    theta = (math.pi / 2 - math.atan2(y, x)) % (2 * math.pi)
    return theta, rotate_s1(m, theta)


# ---------------------------------------------------------------------------
# loops and spheres

@dataclass
class LoopSample:
    maps: list[KnotMap]

    def __post_init__(self):
        if len(self.maps) < 3:
            raise DiscriminantError("a loop needs at least three samples")
        first, last = self.maps[0].coefficient_matrix(), self.maps[-1].coefficient_matrix()
        if not np.allclose(first, last, atol=1e-9):
            self.maps = list(self.maps) + [self.maps[0]]


@dataclass
class SphereSample:
    """A triangulated (n-2)-sphere of maps; simplices are positively oriented."""

    vertices: list[KnotMap]
    simplices: list[tuple[int, ...]]
    dim: int = field(default=0)

    def as_loop(self) -> LoopSample:
        if self.dim != 1:
            raise DiscriminantError("only a one-dimensional sphere is a loop")
        order = [self.simplices[0][0]]
        nxt = {a: b for a, b in self.simplices}
        while len(order) <= len(self.simplices):
            order.append(nxt[order[-1]])
        return LoopSample([self.vertices[i] for i in order])


def _a1_spread(m: KnotMap) -> float:
    return float(np.ptp(m.a1_vector()))


def _check_margin(maps: Sequence[KnotMap]) -> None:
    worst = min(_a1_spread(m) for m in maps)
    if worst < SPREAD_MARGIN:
        raise DiscriminantError(f"sample within {worst:.3g} of the stratum of equal a_1")


def winding_linking(loop: LoopSample, d_even: bool = True) -> int:
    """Winding of (a_1^1 - a_1^2, a_1^2 - a_1^3) around the origin."""
    if not d_even or loop.maps[0].degree % 2:
        raise DiscriminantError("linking with the a_1 stratum needs even degree")
    if loop.maps[0].n != 3:
        raise DiscriminantError("winding_linking expects three components")
    _check_margin(loop.maps)
    a1 = np.array([m.a1_vector() for m in loop.maps])
    ang = np.arctan2(a1[:, 1] - a1[:, 2], a1[:, 0] - a1[:, 1])
    steps = np.diff(ang)
    steps = (steps + np.pi) % (2 * np.pi) - np.pi
    total = steps.sum() / (2 * np.pi)
    k = round(total)
    if abs(total - k) >= 0.1:
        raise DiscriminantError(f"winding sum {total:.3f} is not close to an integer")
    return int(k)


def complement_basis(n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of (1, ..., 1) in R^n."""
    if n == 3:
        return np.stack([E1, E2], axis=1)
    m = np.eye(n)[:, : n - 1] - 1.0 / n
    q, _ = np.linalg.qr(m)
    return q[:, : n - 1]


def base_map(n: int, d: int) -> KnotMap:
    """x_1 = ... = x_{n-1} = t^d and x_n = t^d + t^{d-1} + t."""
    plain = Poly.monomial(d)
    c = [0.0] * (d - 1)
    c[0] += 1.0
    c[-1] += 1.0
    return KnotMap(tuple([plain] * (n - 1) + [Poly(tuple(c))]))


def _cross_polytope(k: int, subdivide: int = 0) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """Boundary of the cross-polytope in R^k as a triangulated (k-1)-sphere,
    simplices ordered so that det[v_0, ..., v_{k-1}] > 0."""
    verts = [s * np.eye(k)[i] for i in range(k) for s in (1.0, -1.0)]
    simplices = []
    for signs in itertools.product((0, 1), repeat=k):
        simplex = [2 * i + signs[i] for i in range(k)]
        simplices.append(simplex)
    verts = [v for v in verts]
    for _ in range(subdivide if k == 3 else 0):
        cache: dict = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                v = verts[a] + verts[b]
                verts.append(v / np.linalg.norm(v))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in simplices:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
        simplices = new
    vs = np.array(verts)
    out = []
    for s in simplices:
        if np.linalg.det(vs[s]) < 0:
            s = [s[1], s[0]] + list(s[2:])
        out.append(tuple(s))
    return vs, out


def orbit_sphere(n: int, d: int, samples: int = 64, subdivide: int = 1) -> SphereSample:
    """The orbit of ``base_map(n, d)`` under rotations fixing the diagonal.

    For n = 3 the vertices are ``samples`` equally spaced points of the circle
    action; otherwise a (subdivided) cross-polytope of directions.
    """
    if n < 3:
        raise DiscriminantError("need at least three components")
    base = base_map(n, d).coefficient_matrix()
    centre = base.mean(axis=0)
    basis = complement_basis(n)
    offset = base - centre  # each column lies in the complement
    radius = basis.T @ offset  # (n-1) x (d-1) coordinates
    if n == 3:
        verts = [rotate_s1(KnotMap.from_matrix(base), 2 * math.pi * k / samples) for k in range(samples)]
        simplices = [(k, (k + 1) % samples) for k in range(samples)]
        return SphereSample(verts, simplices, 1)
    # a_1 and a_{d-1} carry the same offset in the base map; sweep its direction
    r = float(np.linalg.norm(radius[:, 0]))
    mask = (np.abs(offset).max(axis=0) > 0).astype(float)
    dirs, simplices = _cross_polytope(n - 1, subdivide)
    verts = []
    for u in dirs:
        col = basis @ (r * u)
        verts.append(KnotMap.from_matrix(np.outer(np.ones(n), centre) + np.outer(col, mask)))
    return SphereSample(verts, simplices, n - 2)


def _difference_coords(m: KnotMap) -> np.ndarray:
    a1 = m.a1_vector()
    return a1[:-1] - a1[1:]


def degree_linking(sphere: SphereSample, seed: int = 0, retries: int = 32) -> int:
    """Degree of the normalized a_1 projection by counting preimages of a ray.

    Each simplex maps to a cone spanned by its vertex images; the ray along
    a random direction r crosses it when r has positive barycentric weights,
    and contributes the sign of the image determinant.
    """
    _check_margin(sphere.vertices)
    ys = np.array([_difference_coords(v) for v in sphere.vertices])
    rng = np.random.default_rng(seed)
    k = ys.shape[1]
    for _ in range(retries):
        r = rng.normal(size=k)
        r /= np.linalg.norm(r)
        total = 0
        clean = True
        for s in sphere.simplices:
            Y = ys[list(s)].T
            det = np.linalg.det(Y)
            if abs(det) <= 1e-12 * max(1.0, np.abs(Y).max() ** k):
                continue
            lam = np.linalg.solve(Y, r)
            if np.all(lam > 1e-9):
                total += 1 if det > 0 else -1
            elif np.any(np.abs(lam) <= 1e-9) and np.all(lam > -1e-9):
                clean = False
                break
        if clean:
            return total
    raise DiscriminantError("no regular direction found; refine the triangulation or raise retries")


# ---------------------------------------------------------------------------
# disks and singular crossings

@dataclass
class DiskFamily:
    """Maps parametrized by the closed unit disk; ``coeffs(u, v)`` returns the
    3 x (d - 1) coefficient matrix."""

    name: str
    coeffs: Callable[[float, float], np.ndarray]
    degree: int = 4

    def map(self, u: float, v: float) -> KnotMap:
        return KnotMap.from_matrix(self.coeffs(u, v))

    def boundary_loop(self, samples: int = 64) -> LoopSample:
        angles = np.linspace(0, 2 * np.pi, samples + 1)
        return LoopSample([self.map(math.cos(a), math.sin(a)) for a in angles])


def complex_disk(name: str, w: Callable[[complex], complex], scale: float | None = None) -> DiskFamily:
    """Maps h(t) + Re(c w(z)) (t^3 + t) with h = t^4 + (t^3 + t)/3.

    The offset of the a_1 triple from the diagonal is w(z), read in the basis
    E1, E2; with the default scale w(z) = z spans the circle orbit of
    ``base_map(3, 4)``.  Singular maps occur exactly at zeros of w.
    """
    base = base_map(3, 4).coefficient_matrix()
    centre = base.mean(axis=0)
    r0 = float(np.linalg.norm(base[:, 0] - centre[0]))
    c = -1j * r0 if scale is None else scale

    def coeffs(u: float, v: float) -> np.ndarray:
        zeta = c * w(complex(u, v))
        off = zeta.real * E1 + zeta.imag * E2
        m = np.tile(centre, (3, 1))
        m[:, 0] += off
        m[:, 2] += off
        return m

    return DiskFamily(name, coeffs)


def disk_families() -> list[DiskFamily]:
    return [
        complex_disk("orbit", lambda z: z),
        complex_disk("shifted", lambda z: z + 2),
        complex_disk("double", lambda z: (z - 0.3) * (z + 0.3j)),
        complex_disk("conjugate", lambda z: z.conjugate()),
        complex_disk("dipole", lambda z: (z - 0.4) * (z + 0.4).conjugate()),
    ]


def _derivative_values(mat: np.ndarray, t: np.ndarray) -> np.ndarray:
    """x_i'(t) for coefficient rows a_1..a_{d-1}; shape (3, len(t))."""
    d = mat.shape[1] + 1
    out = d * t ** (d - 1) * np.ones((mat.shape[0], 1))
    for j in range(d - 1):
        k = d - 1 - j  # power of a_{j+1}
        out = out + mat[:, j:j + 1] * k * t ** (k - 1)
    return out


def singular_crossing_count(disk: DiskFamily, grid: int = 41, t_grid: int = 81,
                            boundary_margin: float = 1e-6) -> int:
    """Signed count of singular maps inside the disk.

    Solutions (u, v, t) of x_1' = x_2' = x_3' = 0 are located by sign scans on
    a grid of the cube [-1, 1]^2 x [-T, T], refined by Newton, and each
    counted with the sign of the Jacobian determinant in (u, v, t).
    """
    us = np.linspace(-1, 1, grid)
    mats = np.array([[disk.coeffs(u, v) for v in us] for u in us])
    bound = 1 + np.abs(mats).max() * disk.degree
    ts = np.linspace(-bound, bound, t_grid)
    vals = np.empty((grid, grid, t_grid, 3))
    for i in range(grid):
        for j in range(grid):
            vals[i, j] = _derivative_values(mats[i, j], ts).T

    def changes(k: int) -> np.ndarray:
        s = np.sign(vals[..., k])
        corners = [s[a:grid - 1 + a, b:grid - 1 + b, c:t_grid - 1 + c]
                   for a in (0, 1) for b in (0, 1) for c in (0, 1)]
        stack = np.stack(corners)
        return (stack.max(axis=0) > 0) & (stack.min(axis=0) < 0) | (stack == 0).any(axis=0)

    cand = changes(0) & changes(1) & changes(2)
    cells = np.argwhere(cand)

    def system(x: np.ndarray) -> np.ndarray:
        u, v, t = x
        return _derivative_values(disk.coeffs(u, v), np.array([t]))[:, 0]

    def jacobian(x: np.ndarray) -> np.ndarray:
        h = 1e-6
        J = np.empty((3, 3))
        for k in range(3):
            e = np.zeros(3)
            e[k] = h
            J[:, k] = (system(x + e) - system(x - e)) / (2 * h)
        return J

    sols: list[np.ndarray] = []
    for i, j, k in cells:
        x = np.array([(us[i] + us[i + 1]) / 2, (us[j] + us[j + 1]) / 2, (ts[k] + ts[k + 1]) / 2])
        for _ in range(50):
            J = jacobian(x)
            try:
                step = np.linalg.solve(J, system(x))
            except np.linalg.LinAlgError:
                break
            x = x - step
            if np.linalg.norm(step) < 1e-13:
                break
        if np.linalg.norm(system(x)) > 1e-9 or not np.all(np.isfinite(x)):
            continue
        if math.hypot(x[0], x[1]) > 1 + boundary_margin:
            continue
        if any(np.linalg.norm(x - y) < 1e-7 for y in sols):
            continue
        sols.append(x)
    total = 0
    for x in sols:
        if abs(math.hypot(x[0], x[1]) - 1) <= boundary_margin:
            raise DiscriminantError(f"singular map on the disk boundary at {x}")
        det = np.linalg.det(jacobian(x))
        if abs(det) <= 1e-9:
            raise DiscriminantError(f"degenerate singular crossing at {x}")
        total += 1 if det > 0 else -1
    return total
