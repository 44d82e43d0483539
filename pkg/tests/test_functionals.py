"""Mixed volumes, surface areas, volume products, curvature images."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geominima import (
    DomainError,
    Ellipsoid,
    HPolytope,
    InputError,
    ShiftedBall,
    StarBody,
    affine_surface_area_p,
    affine_surface_area_p_variational,
    ball,
    curvature_image,
    default_grid,
    holder_cyclic_check,
    in_vp,
    mahler,
    mixed_volume_p,
    mixed_volume_p_star,
    p_surface_area,
    random_body,
    star_body_is_convex,
    unit_ball_volume,
)

P_GRID = (-3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0)


def square():
    return HPolytope([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 1, 1, 1])


# ---------------------------------------------------------------------------
# p-mixed volumes
# ---------------------------------------------------------------------------

def test_vp_ball_ball_is_omega():
    B = ball(2)
    for p in P_GRID:
        assert mixed_volume_p(B, B, p) == pytest.approx(math.pi, rel=1e-9)


def test_vp_square_ball_is_four():
    # every facet of the square has unit support and unit ball support
    K = square()
    for p in P_GRID:
        assert mixed_volume_p(K, ball(2), p) == pytest.approx(4.0, rel=1e-14)


@pytest.mark.parametrize("dim", [2, 3])
def test_vp_self_is_volume(dim):
    for seed in range(4):
        K = random_body("polytope-hull", dim, seed=seed)
        vol = K.volume()
        for p in P_GRID:
            assert mixed_volume_p(K, K, p) == pytest.approx(vol, rel=1e-12)


@pytest.mark.parametrize("dim", [2, 3])
def test_v0_is_volume_of_first_body(dim):
    for seed in range(3):
        K = random_body("polytope-hull", dim, seed=seed)
        Q = random_body("polytope-hull", dim, seed=seed + 50)
        assert mixed_volume_p(K, Q, 0.0) == pytest.approx(K.volume(), rel=1e-12)


@pytest.mark.parametrize("dim", [2, 3])
def test_vp_linear_transform_rule(dim):
    rng = np.random.default_rng(31)
    K = random_body("polytope-hull", dim, seed=9)
    Q = random_body("polytope-hull", dim, seed=59)
    T = rng.standard_normal((dim, dim)) + 2 * np.eye(dim)
    det = abs(np.linalg.det(T))
    for p in (-1.0, 0.5, 2.0):
        lhs = dim * mixed_volume_p(K.linear_map(T), Q.linear_map(T), p)
        rhs = det * dim * mixed_volume_p(K, Q, p)
        assert lhs == pytest.approx(rhs, rel=1e-9)


def test_vp_smooth_body_path():
    E = Ellipsoid(np.diag([2.0, 1.0]))
    assert mixed_volume_p(E, E, 1.5) == pytest.approx(E.volume(), rel=1e-9)


# ---------------------------------------------------------------------------
# star-body mixed volumes
# ---------------------------------------------------------------------------

def test_star_unit_radial_matches_ball():
    g = default_grid(2)
    L = StarBody(g, np.ones(g.n_nodes))
    K = square()
    for p in (-1.0, 0.5, 2.0):
        assert mixed_volume_p_star(K, L, p) == pytest.approx(
            mixed_volume_p(K, ball(2), p), rel=1e-12)


def test_star_p_zero_collapses_to_volume():
    g = default_grid(2)
    F = random_body("fourier2d", 2, seed=2)
    L = StarBody(g, 1.0 + 0.3 * np.cos(3 * g.thetas))
    assert mixed_volume_p_star(F, L, 0.0, g) == pytest.approx(F.volume(), rel=1e-9)


def test_star_dual_evaluation_consistency():
    # sampling the radial function of a convex body E makes the star form
    # agree with the body form evaluated at the polar of E
    g = default_grid(2)
    E = Ellipsoid([[1.4, 0.2], [0.0, 0.9]])
    F = random_body("fourier2d", 2, seed=6)
    L = StarBody(g, E.radial(g.nodes))
    for p in (-1.0, 0.75, 2.0):
        star = mixed_volume_p_star(F, L, p, g)
        body = mixed_volume_p(F, E.polar(), p, g)
        assert star == pytest.approx(body, rel=1e-9)
    # polytope path goes through planar interpolation of the radial samples
    K = square()
    assert mixed_volume_p_star(K, L, 1.0) == pytest.approx(
        mixed_volume_p(K, E.polar(), 1.0), rel=1e-5)


def test_star_grid_mismatch_rejected():
    g = default_grid(2)
    other = default_grid(2, 512)
    L = StarBody(other, np.ones(other.n_nodes))
    F = random_body("fourier2d", 2, seed=2)
    with pytest.raises(InputError):
        mixed_volume_p_star(F, L, 1.0, g)


# ---------------------------------------------------------------------------
# p-surface area, volume product
# ---------------------------------------------------------------------------

def test_p_surface_area_values():
    assert p_surface_area(square(), 1.0) == pytest.approx(8.0, rel=1e-13)
    for p in (-1.0, 0.5, 3.0):
        assert p_surface_area(ball(2), p) == pytest.approx(2 * math.pi, rel=1e-9)
    assert p_surface_area(ball(3), 1.0) == pytest.approx(4 * math.pi, rel=1e-9)


def test_mahler_values():
    assert mahler(square()) == pytest.approx(8.0, rel=1e-13)
    assert mahler(ball(2)) == pytest.approx(math.pi ** 2, rel=1e-12)
    assert mahler(ball(3)) == pytest.approx(unit_ball_volume(3) ** 2, rel=1e-12)


def test_mahler_linear_invariance():
    rng = np.random.default_rng(12)
    K = random_body("polytope-hull", 2, seed=21)
    g = rng.standard_normal((2, 2)) + 2 * np.eye(2)
    T = g / abs(np.linalg.det(g)) ** 0.5    # unit determinant
    assert mahler(K.linear_map(T)) == pytest.approx(mahler(K), rel=1e-8)


# ---------------------------------------------------------------------------
# affine surface area
# ---------------------------------------------------------------------------

def test_asp_ball_all_orders():
    for p in P_GRID:
        if abs(p + 2) < 0.25:
            continue
        assert affine_surface_area_p(ball(2), p) == pytest.approx(2 * math.pi, rel=1e-10)
    assert affine_surface_area_p(ball(3), 1.0) == pytest.approx(4 * math.pi, rel=1e-9)


@pytest.mark.parametrize("dim", [2, 3])
def test_asp_ellipsoid_closed_form(dim):
    for seed in (1, 2):
        E = random_body("ellipsoid", dim, seed=seed)
        det = abs(np.linalg.det(E.matrix))
        omega = unit_ball_volume(dim)
        for p in (-1.0, 0.5, 2.0):
            expected = dim * omega * det ** ((dim - p) / (dim + p))
            assert affine_surface_area_p(E, p) == pytest.approx(expected, rel=1e-9)


def test_asp_zero_is_n_volume():
    for seed in (3, 4):
        F = random_body("fourier2d", 2, seed=seed)
        assert affine_surface_area_p(F, 0.0) == pytest.approx(2 * F.volume(), rel=1e-10)


def test_asp_guards():
    with pytest.raises(DomainError):
        affine_surface_area_p(ball(2), -2.0)
    with pytest.raises(DomainError):
        affine_surface_area_p(square(), 1.0)


def test_variational_form_matches_integral_and_is_optimal():
    g = default_grid(2)
    F = random_body("fourier2d", 2, seed=8)
    for p in (-3.0, -1.0, 0.5, 1.0, 2.0):
        integral = affine_surface_area_p(F, p, g)
        res = affine_surface_area_p_variational(F, p, g, trials=100, seed=5)
        assert res.value == pytest.approx(integral, rel=1e-7)
        if p > 0:
            assert np.all(res.trial_values >= res.value * (1 - 1e-12))
        else:
            assert np.all(res.trial_values <= res.value * (1 + 1e-12))


def test_variational_ball_optimizer_is_ball():
    g = default_grid(2)
    res = affine_surface_area_p_variational(ball(2), 1.0, g)
    np.testing.assert_allclose(res.optimizer.rho, 1.0, atol=1e-12)
    assert res.value == pytest.approx(2 * math.pi, rel=1e-10)


# ---------------------------------------------------------------------------
# curvature image
# ---------------------------------------------------------------------------

def test_curvature_image_ball_fixed_point():
    g = default_grid(2)
    for p in (-3.0, -1.0, 0.5, 1.0, 2.0):
        lam = curvature_image(ball(2), p, g)
        np.testing.assert_allclose(lam.rho, 1.0, atol=1e-12)


def test_curvature_image_scaling_fixed_point():
    g = default_grid(2)
    omega = unit_ball_volume(2)
    for seed in (2, 6):
        F = random_body("fourier2d", 2, seed=seed)
        for p in (-1.0, 1.0, 2.0):
            lam = curvature_image(F, p, g)
            # the defining relation: f_p = (omega / |image|) rho^{n+p}
            from geominima import lp_curvature
            fp = lp_curvature(F, p, g.nodes)
            np.testing.assert_allclose(
                fp, omega / lam.volume() * lam.rho ** (2 + p), rtol=1e-8)


def test_curvature_image_power_identity_on_ellipsoids():
    g = default_grid(2)
    omega = unit_ball_volume(2)
    E = Ellipsoid([[2.0, 0.0], [0.3, 1.0]])
    for p in (-1.0, 0.5, 1.0, 2.0):
        lam = curvature_image(E, p, g)
        lhs = affine_surface_area_p(E, p, g) ** (2 + p)
        rhs = 2 ** (2 + p) * omega ** 2 * lam.volume() ** p
        assert lhs == pytest.approx(rhs, rel=1e-6)


def test_curvature_image_rejects_p_zero():
    with pytest.raises(DomainError):
        curvature_image(ball(2), 0.0)


# ---------------------------------------------------------------------------
# membership test
# ---------------------------------------------------------------------------

def test_in_vp_ball_and_ellipsoid():
    g = default_grid(2)
    res = in_vp(ball(2), 1.0, g)
    assert res.member
    np.testing.assert_allclose(res.witness_support, 1.0, atol=1e-12)
    for p in (-1.0, 0.5, 3.0):
        assert in_vp(Ellipsoid([[3.0, 0.1], [0.0, 1.0]]), p, g).member


def test_in_vp_mild_fourier_body_is_member():
    from geominima import FourierBody2D
    g = default_grid(2)
    F = FourierBody2D([1.0, 0.0, 0.05])
    assert in_vp(F, 1.0, g).member


def test_in_vp_matches_curvature_image_convexity():
    g = default_grid(2)
    for seed in (1, 5, 9):
        F = random_body("fourier2d", 2, seed=seed)
        for p in (-1.0, 1.0, 2.0):
            member = in_vp(F, p, g).member
            assert member == star_body_is_convex(curvature_image(F, p, g))


def test_in_vp_typical_random_bodies_fail():
    # strongly oscillating curvature is not a reciprocal support power
    g = default_grid(2)
    F = random_body("fourier2d", 2, seed=1)
    assert not in_vp(F, 1.0, g).member


# ---------------------------------------------------------------------------
# cyclic interpolation bound
# ---------------------------------------------------------------------------

def test_holder_equality_on_ball():
    res = holder_cyclic_check(ball(2), ball(2), 1.0, 0.0, 2.0)
    assert abs(res.margin) <= 1e-12 * res.rhs


def test_holder_frozen_square_vs_ellipse():
    # atoms: +-e1 (support 2), +-e2 (support 1), each mass 2
    # nV_r = 4 * 2^r + 4; at (r,s,t) = (1,0,2): rhs = sqrt(8 * 20)
    K = square()
    Q = Ellipsoid(np.diag([2.0, 1.0]))
    res = holder_cyclic_check(K, Q, 1.0, 0.0, 2.0)
    assert res.lhs == pytest.approx(12.0, rel=1e-14)
    assert res.rhs == pytest.approx(math.sqrt(160.0), rel=1e-14)
    assert res.margin == pytest.approx(math.sqrt(160.0) - 12.0, rel=1e-12)


def test_holder_exponent_constraint():
    with pytest.raises(InputError):
        holder_cyclic_check(square(), ball(2), 3.0, 0.0, 2.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(-3.5, 5.5), st.floats(-3.5, 5.5), st.floats(-3.5, 5.5))
def test_holder_margin_nonnegative_random_orders(r, s, t):
    if not (abs(t - s) > 1e-6 and 0.01 < (t - r) / (t - s) < 0.99):
        return
    K = random_body("polytope-hull", 2, seed=33)
    Q = random_body("polytope-hull", 2, seed=77)
    res = holder_cyclic_check(K, Q, r, s, t)
    assert res.margin >= -1e-9 * res.rhs


def test_extreme_support_span_rejected():
    # support values spanning more than 12 decades are refused outright
    Q = Ellipsoid(np.diag([1e7, 1e-6]))
    with pytest.raises(DomainError):
        mixed_volume_p(square(), Q, 2.0)


def test_jensen_direction_for_shifted_balls():
    omega = math.pi
    for mag in (0.2, 0.6):
        K = ShiftedBall([mag, 0.0], 1.0)
        for p in (0.25, 0.5, 0.75):
            assert mixed_volume_p(K, ball(2), p) < omega
        for p in (-0.5, -1.0, -1.5):
            assert mixed_volume_p(K, ball(2), p) > omega
