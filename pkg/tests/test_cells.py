import math

import numpy as np
import pytest

from quarticknots.cells import (CellLabel, QuarticNormalForm, classify, critical_roots, distance_to_boundary,
                                normalize, sample_cell)
from quarticknots.conditions import translate
from quarticknots.polyring import Poly, PolyError


def test_normalize_examples():
    assert normalize(Poly((0, -2, 0))) == QuarticNormalForm(0.0, -2.0, 0.0)
    nf = normalize(Poly((4, 0, 0)))
    assert (nf.t0, nf.a, nf.b) == pytest.approx((-1, -6, 8))


def test_normalize_rejects_other_degrees():
    with pytest.raises(PolyError):
        normalize(Poly((1, 2)))


def test_normal_form_recovers_original():
    rng = np.random.default_rng(0)
    for _ in range(100):
        f = Poly(tuple(rng.uniform(-4, 4, size=3)))
        back = normalize(f).original()
        assert back.coeffs == pytest.approx(f.coeffs, abs=1e-9)


def test_normalize_translation_equivariance():
    f = Poly((1.0, -3.0, 2.0))
    nf = normalize(f)
    for c in (-1.5, 0.5, 2.0):
        g = normalize(translate(f, c))
        assert g.t0 == pytest.approx(nf.t0 - c)
        assert (g.a, g.b) == pytest.approx((nf.a, nf.b))


@pytest.mark.parametrize("a,b,label", [
    (-14, 24, CellLabel.B), (-14, -24, CellLabel.B_prime),
    (-2, 0, CellLabel.D), (2, 0, CellLabel.C), (0, 0, CellLabel.O),
    (1, 1, CellLabel.A), (1, -1, CellLabel.A_prime),
    (-6, math.sqrt(64), CellLabel.E), (-6, -8, CellLabel.E_prime),
])
def test_classify_examples(a, b, label):
    assert classify(a, b) is label


def test_reference_discriminant():
    nf = QuarticNormalForm(0.0, -14.0, 24.0)
    assert nf.discriminant == 27 * 576 + 8 * (-2744) == -6400


@pytest.mark.parametrize("a,b,roots", [
    (-14, 24, [-3, 1, 2]), (-2, 0, [-1, 0, 1]), (1, 0, [0]),
])
def test_critical_roots_examples(a, b, roots):
    assert critical_roots(QuarticNormalForm(0.0, a, b)).values == pytest.approx(roots, abs=1e-12)


def test_classification_matches_root_pattern():
    rng = np.random.default_rng(1)
    for i in range(10_000):
        a, b = rng.uniform(-10, 10, size=2)
        if i % 50 == 0:
            b = 0.0
        label = classify(a, b)
        roots = critical_roots(QuarticNormalForm(0.0, a, b))
        if distance_to_boundary(a, b) < 1e-9 and b != 0:
            continue
        if label in (CellLabel.B, CellLabel.B_prime, CellLabel.D):
            assert len(roots) == 3 and roots.multiplicities == [1, 1, 1]
        elif label in (CellLabel.E, CellLabel.E_prime):
            assert len(roots) == 2
        else:
            assert len(roots) == 1
            if label in (CellLabel.C, CellLabel.O):
                assert b == 0


def test_cell_b_root_pattern_and_vieta():
    rng = np.random.default_rng(2)
    for _ in range(300):
        nf = sample_cell(CellLabel.B, rng)
        x1, x2, x3 = critical_roots(nf).values
        assert x1 < 0 < x2 < x3 and nf.b > 0
        assert x1 + x2 + x3 == pytest.approx(0, abs=1e-9)
        assert x1 * x2 * x3 == pytest.approx(-nf.b / 4, rel=1e-9)
        assert x1 * x2 + x1 * x3 + x2 * x3 == pytest.approx(nf.a / 2, rel=1e-9)


def test_sample_cell_lands_in_cell():
    rng = np.random.default_rng(3)
    for label in CellLabel:
        for _ in range(20):
            nf = sample_cell(label, rng)
            assert classify(nf.a, nf.b) is label


def test_partition_is_exhaustive():
    xs = np.linspace(-3, 3, 61)
    seen = {classify(a, b) for a in xs for b in xs}
    assert seen >= {CellLabel.A, CellLabel.A_prime, CellLabel.B, CellLabel.B_prime,
                    CellLabel.C, CellLabel.D, CellLabel.O}
