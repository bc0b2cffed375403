import numpy as np
import pytest

from hypcycles import decompose as dc
from hypcycles import lorentz as lz


def test_nak_of_boost_is_trivial():
    f = dc.nak(lz.make_boost(1.3, 3))
    assert np.max(np.abs(f.w)) < 1e-14
    assert f.x == pytest.approx(1.3, abs=1e-14)
    assert np.max(np.abs(f.k - np.eye(4))) < 1e-13


def test_nak_recovers_composed_factors():
    rng = np.random.default_rng(2)
    for _ in range(100):
        d = int(rng.integers(2, 6))
        u = rng.uniform(-2, 2, d - 1)
        r = float(np.exp(rng.uniform(-1.5, 1.5)))
        k0 = lz.embed_rotation(lz.random_rotation(rng, d))
        g = lz.make_unipotent(u) @ lz.make_scale(r, d) @ k0
        f = dc.nak(g)
        assert np.max(np.abs(f.w - u)) < 1e-10
        assert f.s == pytest.approx(r, rel=1e-10)
        assert np.max(np.abs(f.product() - g)) < 1e-10


def test_nak_rejects_non_lorentz():
    with pytest.raises(ValueError):
        dc.nak(np.diag([2.0, 1.0, 1.0, 1.0]))


def test_ank_relation_to_nak():
    rng = np.random.default_rng(4)
    for _ in range(100):
        g = lz.random_lorentz(rng, int(rng.integers(2, 6)))
        f_nak = dc.nak(g)
        f_ank = dc.ank(g)
        assert f_ank.r0 == pytest.approx(f_nak.s, rel=1e-12)
        assert np.max(np.abs(f_ank.w0 - f_nak.w / f_nak.s)) < 1e-10
        assert np.max(np.abs(f_ank.product() - g)) < 1e-9


def test_ank_of_unipotent_and_compact():
    f = dc.ank(lz.make_unipotent([0.7, -0.2]))
    assert f.r0 == pytest.approx(1.0, abs=1e-14)
    assert np.max(np.abs(f.w0 - [0.7, -0.2])) < 1e-14
    k = lz.embed_rotation(lz.random_rotation(np.random.default_rng(0), 3))
    f = dc.ank(k)
    assert f.r0 == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(f.w0)) < 1e-12
    assert np.max(np.abs(f.k - k)) < 1e-12


def test_kak_pure_boost_and_compact():
    f = dc.kak(lz.make_boost(2.0, 3))
    assert f.t == pytest.approx(2.0, abs=1e-12)
    assert np.max(np.abs(f.product() - lz.make_boost(2.0, 3))) < 1e-12
    k = lz.embed_rotation(lz.random_rotation(np.random.default_rng(9), 3))
    f = dc.kak(k)
    assert f.t == 0.0
    assert np.max(np.abs(f.k2 - k)) < 1e-14


def test_kak_reconstruction_and_t_is_distance():
    rng = np.random.default_rng(6)
    for _ in range(200):
        d = int(rng.integers(2, 6))
        g = lz.random_lorentz(rng, d)
        f = dc.kak(g)
        assert f.t >= 0.0
        assert np.max(np.abs(f.product() - g)) < 1e-9
        assert lz.check_membership(f.k1, "K", tol=1e-8)
        assert lz.check_membership(f.k2, "K", tol=1e-8)
        # cosh t = g00 by construction, t = dist(g.o, o)
        assert np.cosh(f.t) == pytest.approx(g[0, 0], rel=1e-12)
        assert f.t == pytest.approx(dc.dist(g[:, 0], lz.basepoint(d)), abs=1e-10)


def test_dist_examples():
    xi = lz.basepoint(3)
    assert dc.dist(xi, xi) == 0.0
    # heights (e, 1) at the same horospherical position sit at distance 1
    assert dc.dist_horospherical([0.0, 0.0], np.e, [0.0, 0.0], 1.0) == pytest.approx(1.0, abs=1e-14)


def test_dist_duality_1000_pairs():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(2, 6))
        u, r = 2 * rng.uniform(-1, 1, d - 1), float(np.exp(rng.uniform(-1, 1)))
        v, t = 2 * rng.uniform(-1, 1, d - 1), float(np.exp(rng.uniform(-1, 1)))
        a = dc.dist(dc.from_horospherical(u, r), dc.from_horospherical(v, t))
        b = dc.dist_horospherical(u, r, v, t)
        worst = max(worst, abs(a - b))
    assert worst < 1e-10


def test_dist_properties():
    rng = np.random.default_rng(10)
    for _ in range(200):
        d = 3
        p, q = dc.random_point(rng, d), dc.random_point(rng, d)
        assert dc.dist(p, q) == pytest.approx(dc.dist(q, p), abs=1e-12)
        assert dc.dist(p, q) >= 0.0
        if np.max(np.abs(p - q)) > 1e-6:
            assert dc.dist(p, q) > 1e-6
        # arccosh near 1 turns pairing roundoff eps into sqrt(eps),
        # scaled by the size of the point
        assert dc.dist(p, p) < 1e-6 * max(1.0, p[0])
        g = lz.random_lorentz(rng, d)
        assert abs(dc.dist(g @ p, g @ q) - dc.dist(p, q)) < 1e-10
    # triangle inequality with rounding slack
    for _ in range(200):
        p, q, w = (dc.random_point(rng, 4) for _ in range(3))
        assert dc.dist(p, q) <= dc.dist(p, w) + dc.dist(w, q) + 1e-9


def test_horospherical_roundtrip():
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(2, 6))
        u, r = 2 * rng.uniform(-1, 1, d - 1), float(np.exp(rng.uniform(-1, 1)))
        uu, rr = dc.to_horospherical(dc.from_horospherical(u, r))
        worst = max(worst, abs(rr - r), float(np.max(np.abs(uu - u))))
    assert worst < 1e-12


def test_horospherical_basepoint_and_height():
    u, r = dc.to_horospherical(lz.basepoint(3))
    assert np.max(np.abs(u)) == 0.0 and r == pytest.approx(1.0)
    p = dc.from_horospherical([1.0, 0.0], 2.0)
    assert p[0] - p[1] == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError):
        dc.from_horospherical([0.0, 0.0], -1.0)
