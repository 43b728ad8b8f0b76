import math

import numpy as np
import pytest

from quarticknots.conditions import translate
from quarticknots.discriminant import (DiscriminantError, ExceptionalStratum, KnotMap, LoopSample, Multiple,
                                       Singular, SphereSample, base_map, canonicalize_s1, degree_linking,
                                       disk_families, orbit_sphere, rotate_s1, sigma_test, sigma_witnesses,
                                       singular_crossing_count, winding_linking)
from quarticknots.polyring import Poly, peval

CUBIC = Poly((0.0, 1.0))  # t^3 + t
QUARTIC = Poly((0.0, 0.0, 0.0))  # t^4


def _grid_min_gap(m: KnotMap, box: float = 4.0, n: int = 401) -> float:
    """min over t < s of max_i |x_i(t) - x_i(s)| / |t - s| on a grid (referee for multiple points)."""
    ts = np.linspace(-box, box, n)
    T, S = np.meshgrid(ts, ts, indexing="ij")
    mask = T < S
    worst = np.zeros_like(T)
    for c in m.components:
        coeffs = c.ascending()[::-1]
        diff = np.abs(np.polyval(coeffs, T) - np.polyval(coeffs, S)) / np.where(mask, S - T, 1.0)
        worst = np.maximum(worst, diff)
    return float(worst[mask].min())


def _random_map(rng, d=4, n=3):
    return KnotMap.from_matrix(rng.uniform(-2, 2, size=(n, d - 1)))


def test_contraction_target_is_outside():
    assert sigma_test(KnotMap((CUBIC, CUBIC, CUBIC))) is None


def test_even_function_is_inside_three_ways():
    ws = sigma_witnesses(KnotMap((QUARTIC, QUARTIC, QUARTIC)))
    assert Singular(0.0) in ws
    assert ExceptionalStratum(0.0) in ws
    multiples = [w for w in ws if isinstance(w, Multiple)]
    assert multiples and all(abs(w.t + w.s) < 1e-7 for w in multiples)


def test_prop3_base_point_is_outside():
    m = base_map(3, 4)
    assert m.components[2] == Poly((1.0, 0.0, 1.0))
    assert sigma_test(m) is None
    # referee: no near-coincidence on a dense (t, s) grid, derivatives never vanish together
    assert _grid_min_gap(m) > 0.1
    ts = np.linspace(-5, 5, 2001)
    der = np.array([[peval(c.derivative(), t) for t in ts] for c in m.components])
    assert np.abs(der).max(axis=0).min() > 0.1


def test_planted_witnesses_verify():
    rng = np.random.default_rng(0)
    for _ in range(100):
        m = _random_map(rng, d=int(rng.integers(3, 6)))
        for w in sigma_witnesses(m):
            if isinstance(w, Multiple):
                assert np.allclose(m(w.t), m(w.s), atol=1e-6 * (1 + np.abs(m(w.t)).max()))
            elif isinstance(w, Singular):
                assert all(abs(peval(c.derivative(), w.t)) < 1e-6 for c in m.components)


def test_exceptional_stratum_without_geometric_witness():
    rng = np.random.default_rng(1)
    found = 0
    for _ in range(20):
        base = [0.0] + list(rng.uniform(-3, 3, size=3)) + [1.0]
        x1 = Poly.from_ascending(base)
        x2 = Poly.from_ascending([0.0, base[1] - 1.0] + base[2:])
        x3 = Poly.from_ascending([0.0, base[1], base[2] + 1.0] + base[3:])
        ws = sigma_witnesses(KnotMap((x1, x2, x3)))
        if (len(ws) == 1 and isinstance(ws[0], ExceptionalStratum)
                and ws[0].alpha == pytest.approx(base[3], abs=1e-12)):
            found += 1
    assert found == 20


def test_odd_degree_has_no_exceptional_stratum():
    ws = sigma_witnesses(KnotMap((Poly((0.0, 1.0)),) * 3))
    assert not any(isinstance(w, ExceptionalStratum) for w in ws)


def test_sigma_invariant_under_rotation():
    rng = np.random.default_rng(2)
    for _ in range(50):
        m = _random_map(rng)
        theta = float(rng.uniform(0, 2 * math.pi))
        a = [w for w in sigma_witnesses(m) if not isinstance(w, ExceptionalStratum)]
        b = [w for w in sigma_witnesses(rotate_s1(m, theta)) if not isinstance(w, ExceptionalStratum)]
        assert len(a) == len(b)
        for wa, wb in zip(sorted(a, key=repr), sorted(b, key=repr)):
            assert type(wa) is type(wb)
            assert wa.t == pytest.approx(wb.t, abs=1e-6)


def test_sigma_covariant_under_translation():
    rng = np.random.default_rng(3)
    for _ in range(50):
        m = _random_map(rng)
        t0 = float(rng.choice([-1.0, 1.0]))
        moved = KnotMap(tuple(translate(c, t0) for c in m.components))
        a = sorted((w.t for w in sigma_witnesses(m) if isinstance(w, (Multiple, Singular))))
        b = sorted((w.t for w in sigma_witnesses(moved) if isinstance(w, (Multiple, Singular))))
        # translate is t -> t + t0, so witnesses move by -t0
        assert np.allclose(np.array(b) + t0, a, atol=1e-6)


def test_rotation_identities():
    m = _random_map(np.random.default_rng(4))
    assert np.allclose(rotate_s1(m, 0.0).coefficient_matrix(), m.coefficient_matrix())
    assert np.allclose(rotate_s1(m, 2 * math.pi).coefficient_matrix(), m.coefficient_matrix(), atol=1e-12)


def test_rotation_requires_three_components():
    with pytest.raises(DiscriminantError):
        rotate_s1(KnotMap((QUARTIC, QUARTIC)), 1.0)


def test_canonicalize():
    rng = np.random.default_rng(5)
    m = _random_map(rng)
    theta, c = canonicalize_s1(m)
    a = c.a1_vector()
    assert a[0] == pytest.approx(a[1]) and a[0] + a[1] - 2 * a[2] > 0
    theta2, c2 = canonicalize_s1(c)
    assert min(theta2, 2 * math.pi - theta2) == pytest.approx(0.0, abs=1e-12)
    for theta0 in rng.uniform(0, 2 * math.pi, size=5):
        _, again = canonicalize_s1(rotate_s1(m, float(theta0)))
        assert np.allclose(again.coefficient_matrix(), c.coefficient_matrix(), atol=1e-9)


def test_canonical_rotation_is_unique_on_grid():
    m = KnotMap((Poly((1.0, 0.0, 0.0)), QUARTIC, QUARTIC))
    theta, _ = canonicalize_s1(m)
    thetas = np.linspace(0, 2 * math.pi, 20001)[:-1]
    vals = []
    for th in thetas:
        a = rotate_s1(m, float(th)).a1_vector()
        vals.append((a[0] - a[1], a[0] + a[1] - 2 * a[2]))
    vals = np.array(vals)
    crossings = [i for i in range(len(thetas) - 1)
                 if vals[i, 0] * vals[i + 1, 0] <= 0 and vals[i, 1] > 0]
    assert len(crossings) == 1
    assert thetas[crossings[0]] == pytest.approx(theta, abs=2e-3)


def test_canonicalize_rejects_fixed_point():
    with pytest.raises(DiscriminantError):
        canonicalize_s1(KnotMap((QUARTIC, QUARTIC, QUARTIC)))


def test_winding_examples():
    m = base_map(3, 4)
    assert winding_linking(LoopSample([m] * 4)) == 0
    orbit = orbit_sphere(3, 4, 64).as_loop()
    assert abs(winding_linking(orbit)) == 1
    twice = LoopSample(orbit.maps[:-1] * 2)
    assert winding_linking(twice) == 2 * winding_linking(orbit)
    dense = orbit_sphere(3, 4, 128).as_loop()
    assert winding_linking(dense) == winding_linking(orbit)


def test_winding_rejects_odd_degree_and_stratum():
    with pytest.raises(DiscriminantError):
        winding_linking(LoopSample([KnotMap((CUBIC, CUBIC, Poly((1.0, 1.0))))] * 3))
    with pytest.raises(DiscriminantError):
        winding_linking(LoopSample([KnotMap((QUARTIC, QUARTIC, QUARTIC))] * 3))


def test_orbit_sphere_avoids_stratum():
    for n in (3, 4, 5):
        sphere = orbit_sphere(n, 4)
        spread = min(float(np.ptp(v.a1_vector())) for v in sphere.vertices)
        assert spread > 0.5
        assert sphere.dim == n - 2


def test_degree_linking_examples():
    assert degree_linking(orbit_sphere(3, 4)) == winding_linking(orbit_sphere(3, 4).as_loop())
    assert abs(degree_linking(orbit_sphere(4, 4))) == 1
    sphere = orbit_sphere(4, 4)
    const = SphereSample([sphere.vertices[0]] * len(sphere.vertices), sphere.simplices, sphere.dim)
    assert degree_linking(const) == 0


def test_degree_linking_higher_n():
    for n in (5, 6):
        assert abs(degree_linking(orbit_sphere(n, 4))) == 1


def test_singular_crossings_match_winding():
    expected = {"orbit": 1, "shifted": 0, "double": 2, "conjugate": 1, "dipole": 0}
    for disk in disk_families():
        s = singular_crossing_count(disk)
        w = winding_linking(disk.boundary_loop(64))
        assert abs(s) == abs(w) == expected[disk.name], disk.name


def test_orbit_disk_boundary_is_the_orbit():
    disk = next(d for d in disk_families() if d.name == "orbit")
    base = base_map(3, 4).coefficient_matrix()
    assert any(np.allclose(disk.coeffs(math.cos(a), math.sin(a)), base, atol=1e-9)
               for a in np.linspace(0, 2 * math.pi, 721))
