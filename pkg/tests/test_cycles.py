import numpy as np
import pytest

from hypcycles import cycles as cy
from hypcycles import decompose as dc
from hypcycles import lorentz as lz
from hypcycles.orbits import picard_generators

CFG = lz.CycleConfig(3, 2)


def _picard():
    mats = dict(zip(picard_generators().labels, picard_generators().matrices))
    return mats["T"], mats["U"], mats["S"]


def test_block_elements_have_trivial_invariants():
    T, U, S = _picard()
    for g0 in (T, S, T @ S @ T, lz.make_boost(0.9, 3)):
        inv = cy.cycle_invariants(g0, [0.7], CFG)
        assert inv.M == pytest.approx(0.0, abs=1e-14)
        assert inv.N_u == pytest.approx(0.0, abs=1e-13)
        assert inv.Q_u == pytest.approx(1.0, abs=1e-13)
        assert inv.delta == pytest.approx(1.0, abs=1e-13)


def test_parabolic_generator_invariants():
    # the generator translating off the cycle: M = 0, N = 1, delta = 1
    _, U, _ = _picard()
    inv = cy.cycle_invariants(U, [0.0], CFG)
    assert inv.M == pytest.approx(0.0, abs=1e-14)
    assert inv.N_u == pytest.approx(1.0, abs=1e-13)
    assert inv.Q_u == pytest.approx(1.0, abs=1e-13)
    assert inv.r_star == np.inf


def test_f_gamma_shape_and_minimum():
    T, U, S = _picard()
    inv = cy.cycle_invariants(T @ U @ S @ U, [0.4], CFG)
    assert inv.M > 0 and inv.N_u > 0
    r_star = inv.r_star
    assert cy.f_gamma(inv, r_star) == pytest.approx(inv.delta, rel=1e-12)
    grid = np.geomspace(r_star / 3, 3 * r_star, 301)
    assert np.all(cy.f_gamma(inv, grid) >= inv.delta - 1e-12)
    with pytest.raises(ValueError):
        cy.f_gamma(inv, 0.0)


def test_degenerate_cases_give_unit_q():
    # M N_u = 0 forces Q_u = 1 (and so delta = 1)
    T, U, S = _picard()
    for g, u in [(U, [0.0]), (U @ S, [0.0]), (S @ U, [0.3])]:
        inv = cy.cycle_invariants(g, u, CFG)
        if inv.M * inv.N_u < 1e-20:
            assert inv.Q_u == pytest.approx(1.0, abs=1e-12)
            assert inv.delta == pytest.approx(1.0, abs=1e-12)


def test_verify_f_geometric_matches_brute_force():
    T, U, S = _picard()
    rng = np.random.default_rng(31)
    worst = 0.0
    for g in (U, S @ U, U @ T, S @ U @ T, T @ U @ S @ U):
        for _ in range(6):
            u = rng.uniform(-2, 2, size=1)
            r = float(np.exp(rng.uniform(-1.2, 1.2)))
            closed, brute, gap = cy.verify_f_geometric(g, u, r, CFG)
            worst = max(worst, gap)
    assert worst < 1e-8


def test_verify_f_geometric_block_element_is_zero():
    T, _, S = _picard()
    closed, brute, gap = cy.verify_f_geometric(T @ S, [0.5], 1.2, CFG, tol=1e-8)
    assert closed == pytest.approx(0.0, abs=1e-12)
    assert brute < 1e-6


def test_distance_inequality_chain():
    # cosh d(gamma w, z) >= sqrt(f) for arbitrary z on the cycle
    T, U, S = _picard()
    g = U @ T
    rng = np.random.default_rng(5)
    u, r = np.array([0.3]), 1.4
    inv = cy.cycle_invariants(g, u, CFG)
    point = g @ dc.from_horospherical(cy.pad_direction(u, CFG), r)
    target = np.sqrt(inv.f(r))
    for _ in range(100):
        z = cy.cycle_point(rng.uniform(-4, 4, size=1), float(np.exp(rng.uniform(-2, 2))), CFG)
        assert np.cosh(dc.dist(point, z)) >= target - 1e-10


def test_delta_u_left_invariance():
    T, U, S = _picard()
    g0s = [T, S, T @ S, lz.make_boost(0.7, 3), lz.make_unipotent([0.3, 0.0])]
    for g in (S @ U, U @ T, T @ U @ S @ U):
        for u in ([0.0], [0.8]):
            base = cy.delta_u(g, u, CFG)
            for g0 in g0s:
                assert cy.delta_u(g0 @ g, u, CFG) == pytest.approx(base, abs=1e-9)


def test_delta_u_equals_nested_minimization():
    T, U, S = _picard()
    for g, u in [(U @ S @ T, [0.5]), (T @ U @ S @ U, [0.0])]:
        inv = cy.cycle_invariants(g, u, CFG)
        assert inv.M * inv.N_u > 1e-10  # nondegenerate: interior minimum
        closed = np.arccosh(max(np.sqrt(inv.delta), 1.0))
        brute = cy.min_dist_geodesic_to_cycle(g, u, CFG)
        assert abs(closed - brute) < 1e-6


def test_delta_lower_bound_and_cauchy_schwarz():
    rng = np.random.default_rng(41)
    for _ in range(300):
        d = int(rng.integers(3, 6))
        n = int(rng.integers(2, d))
        cfg = lz.CycleConfig(d, n)
        g = lz.random_lorentz(rng, d)
        u = rng.uniform(-2, 2, size=n - 1)
        inv = cy.cycle_invariants(g, u, cfg)
        assert inv.delta >= 1.0 - 1e-12
        assert np.sqrt(inv.M * inv.N_u) >= float(inv.m @ inv.n_coeffs) - 1e-10
        assert 0.5 * (1.0 + inv.u11) + inv.beta >= -1e-12
        assert abs(inv.u11) <= 1.0 + 1e-12


def test_compact_factor_ambiguity_does_not_move_f():
    # multiplying gamma on the right by a block rotation of the cycle
    # directions relabels u but cannot change the minimal distance
    T, U, S = _picard()
    g = U @ T
    u, r = np.array([0.4]), 1.3
    inv = cy.cycle_invariants(g, u, CFG)
    flip = np.diag([1.0, 1.0, -1.0, 1.0]) @ np.diag([1.0, 1.0, 1.0, -1.0])
    g2 = g @ flip  # rotation by pi inside the spatial block
    inv2 = cy.cycle_invariants(g2, -u, CFG)
    assert inv2.f(r) == pytest.approx(inv.f(r), rel=1e-12)


def test_check_u11_gap_reports():
    T, U, S = _picard()
    # vacuous over a block-only ball
    mx, viol = cy.check_u11_gap([("T", T), ("S", S)], CFG)
    assert mx is None and viol == []
    # the parabolic generator fixing the boundary direction hits u11 = 1;
    # this is the documented failure mode of non-cocompact stand-ins
    mx, viol = cy.check_u11_gap([("U", U), ("SU", S @ U), ("UT", U @ T)], CFG)
    assert mx == pytest.approx(1.0, abs=1e-12)
    assert ("U", pytest.approx(1.0, abs=1e-12)) in [(w, v) for w, v in viol]
    # loxodromic-type elements stay strictly inside
    mx, viol = cy.check_u11_gap([("SU", S @ U), ("SUS", S @ U @ S)], CFG)
    assert mx is not None and mx < 1.0 - 1e-9


def test_invariants_validation():
    with pytest.raises(ValueError):
        cy.cycle_invariants(np.diag([2.0, 1, 1, 1]), [0.0], CFG)
    T, U, S = _picard()
    with pytest.raises(ValueError):
        cy.cycle_invariants(U, [0.0, 0.0], CFG)
