"""Normal form of quartics and the nine-cell atlas of the (a, b)-plane.

After a translation every quartic is t^4 + a t^2 + b t.  The cells are cut
out by the semicubical parabola 27 b^2 + 8 a^3 = 0 and the line b = 0.  By
convention the unprimed cells A, B, E have b > 0 and the primed ones b < 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .polyring import Poly, PolyError, RootList, real_roots
from .symcurve import _translated

BOUNDARY_TOL = 1e-12


class CellLabel(enum.Enum):
    A = "A"
    A_prime = "A'"
    B = "B"
    B_prime = "B'"
    C = "C"
    D = "D"
    E = "E"
    E_prime = "E'"
    O = "O"

    @classmethod
    def parse(cls, name: str) -> "CellLabel":
        for label in cls:
            if name in (label.value, label.name):
                return label
        raise ValueError(f"unknown cell {name!r}")


@dataclass(frozen=True)
class QuarticNormalForm:
    t0: float
    a: float
    b: float

    @property
    def poly(self) -> Poly:
        """t^4 + a t^2 + b t."""
        return Poly((0, self.a, self.b))

    @property
    def discriminant(self) -> float:
        """27 b^2 + 8 a^3; negative exactly when f' has three real roots."""
        return 27 * self.b ** 2 + 8 * self.a ** 3

    def original(self) -> Poly:
        """The quartic this form came from, up to its dropped constant term."""
        c = _translated(self.poly, -self.t0)
        c[0] = 0
        c[-1] = 1
        return Poly.from_ascending(c)


def normalize(f: Poly) -> QuarticNormalForm:
    if f.degree != 4:
        raise PolyError("normalize expects a quartic")
    t0 = -f.a1 / 4
    c = _translated(f, t0)
    return QuarticNormalForm(t0, c[2], c[1])


def boundary_scale(a: float, b: float) -> float:
    return 1 + abs(a) ** 3 + b * b


def classify(a: float, b: float, tol: float = BOUNDARY_TOL) -> CellLabel:
    scale = boundary_scale(a, b)
    on_line = abs(b) <= tol * scale
    disc = 27 * b * b + 8 * a ** 3
    on_parabola = abs(disc) <= tol * scale
    if on_line:
        if abs(a) <= tol * scale:
            return CellLabel.O
        return CellLabel.C if a > 0 else CellLabel.D
    if on_parabola:
        return CellLabel.E if b > 0 else CellLabel.E_prime
    if disc < 0:
        return CellLabel.B if b > 0 else CellLabel.B_prime
    return CellLabel.A if b > 0 else CellLabel.A_prime


def distance_to_boundary(a: float, b: float) -> float:
    """Scaled distance of (a, b) from the curves b = 0 and 27 b^2 + 8 a^3 = 0."""
    scale = boundary_scale(a, b)
    return min(abs(b), abs(27 * b * b + 8 * a ** 3)) / scale


@dataclass(frozen=True)
class CriticalRoots:
    roots: RootList

    @property
    def values(self) -> list[float]:
        return self.roots.values

    @property
    def multiplicities(self) -> list[int]:
        return self.roots.multiplicities

    def __len__(self) -> int:
        return len(self.roots)


def critical_roots(nf: QuarticNormalForm) -> CriticalRoots:
    """Real roots of f' = 4 t^3 + 2 a t + b."""
    return CriticalRoots(real_roots([nf.b, 2 * nf.a, 0 * nf.a, 4]))


def sample_cell(label: CellLabel, rng: np.random.Generator, box: float = 20.0,
                margin: float = 1e-3) -> QuarticNormalForm:
    """Rejection sample of a normal form strictly inside an open cell.

    Boundary cells (C, D, E, E', O) are sampled along their curve.
    """
    if label is CellLabel.O:
        return QuarticNormalForm(0.0, 0.0, 0.0)
    if label in (CellLabel.C, CellLabel.D):
        a = rng.uniform(margin, box)
        return QuarticNormalForm(0.0, a if label is CellLabel.C else -a, 0.0)
    if label in (CellLabel.E, CellLabel.E_prime):
        a = -rng.uniform(margin, box)
        b = math.sqrt(-8 * a ** 3 / 27)
        return QuarticNormalForm(0.0, a, b if label is CellLabel.E else -b)
    for _ in range(100000):
        a = rng.uniform(-box, box)
        b = rng.uniform(-box, box)
        if min(abs(b), abs(27 * b * b + 8 * a ** 3)) <= margin:
            continue
        if classify(a, b) is label:
            return QuarticNormalForm(0.0, a, b)
    raise RuntimeError(f"rejection sampling failed for cell {label.value}")
