from fractions import Fraction

import numpy as np
import pytest

from quarticknots.polyring import (BiPoly, Poly, PolyError, cubic_real_root_count, peval, real_roots,
                                   resultant_eliminate, squarefree_part)

p, q = BiPoly.var("p"), BiPoly.var("q")


def _monic_equal(a, b, tol=1e-12):
    a = np.array([float(x) for x in a]) / float(a[-1])
    b = np.array([float(x) for x in b]) / float(b[-1])
    return a.shape == b.shape and np.allclose(a, b, atol=tol)


def test_poly_storage_and_evaluation():
    f = Poly((0, -14, 24))
    assert f.degree == 4
    assert f.ascending() == [0, 24, -14, 0, 1]
    assert f(0) == 0
    assert f(1) == 11
    assert Poly((0,)).degree == 2
    assert Poly(()).degree == 1


def test_poly_rejects_non_monic():
    with pytest.raises(PolyError):
        Poly.from_ascending([0, 1, 2])


def test_real_roots_distinct():
    roots = real_roots([24, -28, 0, 4])
    assert roots.values == pytest.approx([-3, 1, 2], abs=1e-12)
    assert roots.multiplicities == [1, 1, 1]
    for r in roots.roots:
        lo, hi = r.enclosure
        assert lo <= r.value <= hi


def test_real_roots_triple_and_empty():
    roots = real_roots([0, 0, 0, 1])
    assert roots.values == pytest.approx([0.0])
    assert roots.multiplicities == [3]
    assert len(real_roots([1, 0, 1])) == 0


def test_real_roots_exact_input():
    # 4 t^3 - 28 t + 24 with Fraction coefficients takes the Sturm path
    roots = real_roots([Fraction(24), Fraction(-28), Fraction(0), Fraction(4)])
    assert roots.values == pytest.approx([-3, 1, 2], abs=1e-12)


def test_real_roots_window():
    roots = real_roots([24, -28, 0, 4], window=(0, 1.5))
    assert roots.values == pytest.approx([1.0])


def test_real_roots_against_numpy():
    rng = np.random.default_rng(3)
    for _ in range(300):
        c = list(rng.uniform(-5, 5, size=int(rng.integers(2, 6))))
        c[-1] = 1.0
        ref = sorted(z.real for z in np.roots(c[::-1]) if abs(z.imag) < 1e-7)
        got = real_roots(c).values
        assert len(got) == len(ref)
        assert np.allclose(got, ref, atol=1e-6)


def test_real_roots_drops_noise_leading_coefficient():
    # a leading coefficient at rounding level must not swallow the real roots
    got = real_roots([24, -28, 0, 4, 1e-17]).values
    assert got == pytest.approx([-3, 1, 2], abs=1e-9)


def test_squarefree_part():
    assert _monic_equal(squarefree_part([2, -3, 0, 1]), [-2, 1, 1])  # (t-1)^2 (t+2)
    assert _monic_equal(squarefree_part([0, 0, 0, 1]), [0, 1])
    sq = [-2, 1, 1]
    assert _monic_equal(squarefree_part(sq), sq)


def test_squarefree_then_roots_all_simple():
    f = [2, -3, 0, 1]
    a = real_roots(squarefree_part(f))
    b = real_roots(f)
    assert a.values == pytest.approx(b.values, abs=1e-9)
    assert a.multiplicities == [1, 1]
    assert b.multiplicities == [1, 2]


@pytest.mark.parametrize("pp,qq,expected", [(-7, 6, 3), (1, 0, 1), (-3, 2, 2)])
def test_cubic_real_root_count(pp, qq, expected):
    assert cubic_real_root_count(pp, qq) == expected


def test_cubic_count_matches_real_roots():
    rng = np.random.default_rng(5)
    for _ in range(500):
        pp, qq = rng.uniform(-6, 6, size=2)
        assert cubic_real_root_count(pp, qq) == len(real_roots([qq, pp, 0.0, 1.0]))


def test_resultant_lemma7_system():
    a, b = 1.5, -0.7
    A = p * (p * p - 2 * q) + a * p + b
    B = p * p - q - 1
    res = resultant_eliminate(A, B, "q")
    assert real_roots(res).values == pytest.approx(real_roots([-b, -(a + 2), 0, 1]).values, abs=1e-9)


def test_resultant_of_equal_curves_vanishes():
    A = p * (p * p - 2 * q) + 2 * p + 1
    res = resultant_eliminate(A, A, "q")
    assert all(abs(float(c)) < 1e-12 for c in res)


def _grid_solutions(F, G, box=8.0, n=1000):
    """(p, q) solutions of F = G = 0 by sign changes of F along q = q(p) from G linear in q."""
    ps = np.linspace(-box, box, n)
    # G = p^2 - q + beta is solved for q directly; F is then scanned for sign changes in p
    vals = np.array([F(x, G(x)) for x in ps])
    out = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        lo, hi = ps[i], ps[i + 1]
        for _ in range(60):
            mid = (lo + hi) / 2
            if np.sign(F(lo, G(lo))) * np.sign(F(mid, G(mid))) <= 0:
                hi = mid
            else:
                lo = mid
        out.append((lo + hi) / 2)
    return out


def test_resultant_against_grid():
    a, b, beta = -14.0, 24.0, -3.0
    A = p * p - q + beta
    B = p * (p * p - 2 * q) + a * p + b
    res = resultant_eliminate(A, B, "q")
    ref = _grid_solutions(lambda x, y: x * (x * x - 2 * y) + a * x + b, lambda x: x * x + beta)
    assert real_roots(res).values == pytest.approx(ref, abs=1e-8)
    # frozen: the eliminant is -p^3 - 8p + 24, with the single real root p = 2
    assert ref == pytest.approx([2.0], abs=1e-9)


def test_resultant_random_instances_vanish_at_common_roots():
    rng = np.random.default_rng(11)
    for _ in range(50):
        a, b, beta = rng.uniform(-5, 5, size=3)
        A = p * p - q + float(beta)
        B = p * (p * p - 2 * q) + float(a) * p + float(b)
        res = resultant_eliminate(A, B, "q")
        for x in real_roots(res).values:
            y = x * x + beta
            assert abs(x * (x * x - 2 * y) + a * x + b) < 1e-7 * (1 + abs(x) ** 3)


def test_bipoly_specialize_and_partial():
    F = p * p * q + 3 * q - p
    assert F.specialize("p", 2) == [-2, 7]
    assert F.partial("q") == p * p + 3
    assert F.degree("p") == 2 and F.degree("q") == 1
    assert peval(F.specialize("q", 1), 2) == 5
