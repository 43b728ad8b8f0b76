import math

import numpy as np
import pytest

from quarticknots.cells import CellLabel, QuarticNormalForm, critical_roots, sample_cell
from quarticknots.scanner import (D_POLY, D_THRESHOLDS, FiberType, ScannerError, Target, _critical_p, breakpoints,
                                  d_cell_fiber, d_cell_oracle, diamond_fiber, family_member, fiber_oracle,
                                  finite_branch_critical_points, focal_values, heart_fiber,
                                  lines_through_summary, metamorphoses, sweep_family)
from quarticknots.symcurve import relation_curve

F_B = QuarticNormalForm(0.0, -14.0, 24.0)
C_B = 24 ** (1 / 3) / 2

# bisection oracles for f_B, frozen from breakpoints() and rechecked below against the predicates
MU_B = -0.821367205045
XI_B = -0.149829914261
KAPPA_B = 1.483163247594
NU_B = 1.488033871712


def _F_on_curve(nf, nabla, p):
    """F_nabla = (t^2 + ts + s^2) - 3 nabla (t + s) at the point of r(f) over p."""
    qs = relation_curve(nf.poly).q_of(p)
    (q,) = qs
    return p * p - q - 3 * nabla * p, p * p - 4 * q


def test_focal_values_reference():
    w1, w2, w3 = focal_values(F_B)
    assert (w1, w2, w3) == pytest.approx((-17 / 9, 5 / 3, 19 / 12), abs=1e-12)
    assert w3 < 2


@pytest.mark.parametrize("i", [0, 1, 2])
def test_focal_value_switches_extremum_type(i):
    """One-sided slope of F along r(f) at the diagonal point flips sign across omega_i."""
    x = critical_roots(F_B).values[i]
    omega = focal_values(F_B)[i]
    h = 1e-4
    slopes = []
    for nabla in (omega - 0.05, omega + 0.05):
        # step off the diagonal to whichever side of p = 2x is real
        for side in (-1, 1):
            val, disc = _F_on_curve(F_B, nabla, 2 * x + side * h)
            if disc > 0:
                base, _ = _F_on_curve(F_B, nabla, 2 * x)
                slopes.append((val - base) / h)
                break
    assert len(slopes) == 2
    assert slopes[0] * slopes[1] < 0


def test_metamorphosis_diagonal_values():
    xs = critical_roots(F_B).values
    for x in xs:
        rec = metamorphoses(F_B, x)
        betas = (rec.beta1, rec.beta2, rec.beta3)
        assert betas[xs.index(x)] == pytest.approx(3 * x * x)


def test_diagonal_passage_beta_puts_point_on_ellipse():
    for nabla in (-0.7, 0.4, 1.45):
        rec = metamorphoses(F_B, nabla)
        for x, beta in zip(critical_roots(F_B).values, (rec.beta1, rec.beta2, rec.beta3)):
            g = family_member(nabla, beta)
            assert relation_curve(g).value(2 * x, x * x) == pytest.approx(0, abs=1e-9)


def test_lemma16_reference():
    assert len(finite_branch_critical_points(F_B, 1.5)) == 2
    assert len(finite_branch_critical_points(F_B, 1.0)) == 0


def test_lemma16_random():
    rng = np.random.default_rng(0)
    for _ in range(20):
        nf = sample_cell(CellLabel.B, rng)
        bp = breakpoints(nf)
        for x in np.linspace(bp.c, bp.m23, 12)[1:]:
            assert len(finite_branch_critical_points(nf, float(x))) == 2
        for x in np.linspace(bp.c - 3, bp.c, 12)[:-1]:
            assert len(finite_branch_critical_points(nf, float(x))) == 0


def test_lemma10_critical_point_bound():
    rng = np.random.default_rng(1)
    for _ in range(50):
        nf = sample_cell(CellLabel.B, rng)
        for nabla in rng.uniform(-5, 5, size=10):
            crit = _critical_p(nf, float(nabla))
            assert len(crit) <= 3
            assert len(finite_branch_critical_points(nf, float(nabla))) <= 2


def test_breakpoints_reference():
    bp = breakpoints(F_B)
    assert bp.tau == pytest.approx(-1, abs=1e-12)
    assert bp.m23 == pytest.approx(1.5, abs=1e-12)
    assert bp.c == pytest.approx(C_B, abs=1e-12)
    assert bp.omega1 < bp.tau < bp.mu < bp.xi
    assert bp.c < bp.kappa < bp.m23 and bp.c < bp.nu < bp.m23
    assert (bp.mu, bp.xi, bp.kappa, bp.nu) == pytest.approx((MU_B, XI_B, KAPPA_B, NU_B), abs=1e-9)


def test_kappa_nu_are_sign_changes():
    bp = breakpoints(F_B)
    for value, (i, j) in ((bp.kappa, (3, 4)), (bp.nu, (1, 2))):
        def diff(x):
            rec = metamorphoses(F_B, x)
            sup = (None, rec.betaSup1, rec.betaSup2, rec.betaSup3, rec.betaSup4)
            return sup[i] - sup[j]
        assert diff(value - 1e-6) * diff(value + 1e-6) < 0


def test_sup_differences_change_sign_once():
    rng = np.random.default_rng(2)
    for _ in range(10):
        nf = sample_cell(CellLabel.B, rng)
        bp = breakpoints(nf)
        grid = np.linspace(bp.c, bp.m23, 400)[1:-1]
        for i, j in ((3, 4), (1, 2)):
            vals = []
            for x in grid:
                rec = metamorphoses(nf, float(x))
                sup = (None, rec.betaSup1, rec.betaSup2, rec.betaSup3, rec.betaSup4)
                vals.append(sup[i] - sup[j])
            signs = np.sign(vals)
            assert np.count_nonzero(signs[1:] != signs[:-1]) == 1


def test_maxima_critical_values_exceed_minima():
    rng = np.random.default_rng(3)
    for _ in range(20):
        nf = sample_cell(CellLabel.B, rng)
        bp = breakpoints(nf)
        for nabla in np.linspace(bp.c, bp.m23, 20)[1:-1]:
            rec = metamorphoses(nf, float(nabla))
            assert min(rec.betaSup1, rec.betaSup2) > max(rec.betaSup3, rec.betaSup4)


def test_breakpoints_rejects_other_cells():
    with pytest.raises(ScannerError):
        breakpoints(QuarticNormalForm(0.0, 1.0, 1.0))


def test_heart_fiber_examples():
    assert heart_fiber(F_B, -1.0) is FiberType.Point
    assert heart_fiber(F_B, -10.0) is FiberType.Empty
    mid = (-1.0 + MU_B) / 2
    assert heart_fiber(F_B, mid) is FiberType.ClosedSegment
    assert fiber_oracle(F_B, mid, Target.Heart) is FiberType.ClosedSegment
    assert heart_fiber(F_B, MU_B + 1e-7) is FiberType.Boundary


def test_diamond_fiber_examples():
    assert diamond_fiber(F_B, 1.5) is FiberType.Point
    assert diamond_fiber(F_B, 1.0) is FiberType.Empty
    between = (KAPPA_B + NU_B) / 2
    assert diamond_fiber(F_B, between) is FiberType.HalfOpenInterval
    assert fiber_oracle(F_B, between, Target.Diamond) is FiberType.HalfOpenInterval


def test_heart_fiber_matches_oracle_on_grid():
    for x in np.linspace(-1.5, 0.3, 50):
        a = heart_fiber(F_B, float(x))
        if a is FiberType.Boundary:
            continue
        assert fiber_oracle(F_B, float(x), Target.Heart) is a


def test_fiber_oracle_examples():
    assert fiber_oracle(F_B, -10.0, Target.Heart) is FiberType.Empty
    assert fiber_oracle(F_B, -10.0, "Heart") is FiberType.Empty
    assert d_cell_oracle(0.7) is FiberType.Empty


def test_fiber_oracle_mirror_cell():
    mirror = QuarticNormalForm(0.0, -14.0, -24.0)
    for x in (0.9, 0.5):
        assert fiber_oracle(mirror, -x, Target.Heart) is heart_fiber(F_B, x)
    assert fiber_oracle(mirror, -1.47, Target.Diamond) is diamond_fiber(F_B, 1.47)


def test_d_cell_fiber_examples():
    assert d_cell_fiber(0.5) is FiberType.Point
    assert d_cell_fiber(0.49) is FiberType.ClosedSegment
    assert d_cell_fiber(0.3) is FiberType.HalfOpenMinusPoint
    assert d_cell_fiber(0.7) is FiberType.Empty
    assert d_cell_fiber(0.0) is FiberType.Boundary


def test_d_cell_point_polynomial():
    # at nabla = 1/2 the single line is t^3 - (3/2) t^2: beta = 0
    sweep = sweep_family(D_POLY, 0.5, 64)
    runs = sweep.runs(Target.DCell)
    assert len(runs) == 1 and runs[0].lo == pytest.approx(0.0) and runs[0].hi == pytest.approx(0.0)


def test_d_cell_fiber_matches_oracle():
    for x in np.linspace(-0.8, 0.8, 41):
        a = d_cell_fiber(float(x))
        if a is FiberType.Boundary:
            continue
        assert d_cell_oracle(float(x)) is a


def test_d_thresholds_constants():
    assert D_THRESHOLDS == (1 / 3, math.sqrt(2) / 3, 1 / 2, 2 / 3)


def test_lines_through_summary_examples():
    a = lines_through_summary(QuarticNormalForm(0.0, 1.0, 1.0))
    assert a.cell is CellLabel.A and a.components == 0 and a.max_count <= 2
    b = lines_through_summary(F_B)
    assert b.cell is CellLabel.B and b.components == 2
    c = lines_through_summary(QuarticNormalForm(0.0, 1.0, 0.0))
    assert c.cell is CellLabel.C and c.infinite_witness is True
    d = lines_through_summary(QuarticNormalForm(0.0, -2.0, 0.0))
    assert d.cell is CellLabel.D and d.components == 3
