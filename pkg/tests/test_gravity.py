import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import dblquad

from snewton.fields import RealField, UniformGrid, gaussian
from snewton.gravity import (
    CELL_MEAN_INV_R,
    NEWTONIAN,
    NO_GRAVITY,
    ORIGIN_WEIGHT,
    Kernel,
    RadialProfile,
    cell_mean_inverse_distance,
    clear_kernel_cache,
    lattice_origin_weight,
    radial_potential,
    solve_potential,
    sphere_kernel_value,
)


def ball_potential(r, R):
    r = np.abs(r)
    return np.where(r < R, -(3 * R * R - r * r) / (2 * R**3), -1 / np.maximum(r, 1e-300))


def two_ball_energy(s, R):
    """Interaction of two unit-mass uniform balls by double quadrature.

    Ball B enters through its shell-theorem potential; ball A is integrated
    over radius and polar angle about its own centre.
    """

    def integrand(mu, r):
        d = math.sqrt(max(r * r + s * s + 2 * r * s * mu, 0.0))
        return 1.5 * r * r / R**3 * float(ball_potential(d, R))

    val, _ = dblquad(integrand, 0.0, R, -1.0, 1.0, epsabs=1e-13, epsrel=1e-12)
    return val


# --------------------------------------------------------------------------
# kernel values
# --------------------------------------------------------------------------


def test_kernel_validation():
    with pytest.raises(ValueError):
        Kernel("yukawa")
    with pytest.raises(ValueError):
        Kernel("sphere")
    with pytest.raises(ValueError):
        Kernel("harmonic_sphere", R=-1.0)
    assert NEWTONIAN.attractive and not NO_GRAVITY.attractive


@pytest.mark.parametrize("R", [0.5, 1.0, 3.0])
def test_sphere_kernel_centre_and_seam(R):
    assert sphere_kernel_value(0.0, R) == -1.2 / R
    assert sphere_kernel_value(2 * R, R) == -1 / (2 * R)
    assert sphere_kernel_value(3 * R, R) == -1 / (3 * R)
    left = sphere_kernel_value(np.nextafter(2 * R, 0.0), R)
    assert left == pytest.approx(-1 / (2 * R), rel=1e-15, abs=0)


def test_sphere_kernel_rejects_negative_separation():
    with pytest.raises(ValueError):
        sphere_kernel_value(-0.1, 1.0)


@pytest.mark.parametrize("xi", [0.5, 1.0, 1.5])
def test_sphere_kernel_matches_double_quadrature(xi):
    assert sphere_kernel_value(xi, 1.0) == pytest.approx(two_ball_energy(xi, 1.0), abs=1e-6)


def test_sphere_kernel_centre_by_quadrature():
    assert two_ball_energy(0.0, 1.0) == pytest.approx(-1.2, abs=1e-3)


@pytest.mark.parametrize("R", [1.0, 2.5])
def test_sphere_kernel_curvature(R):
    # the kernel is even in s, so V(h) - V(0) is half a central difference
    h = 1e-4 * R
    d2 = 2 * (sphere_kernel_value(h, R) - sphere_kernel_value(0.0, R)) / h**2
    assert d2 * R**3 == pytest.approx(1.0, abs=1e-3)


def test_sphere_kernel_smooth_at_seam():
    R, e = 1.0, 1e-7
    left = (sphere_kernel_value(2 - e, R) - sphere_kernel_value(2 - 2 * e, R)) / e
    right = (sphere_kernel_value(2 + 2 * e, R) - sphere_kernel_value(2 + e, R)) / e
    assert left == pytest.approx(right, rel=1e-5)
    assert left == pytest.approx(0.25, rel=1e-5)


@given(st.floats(min_value=0.01, max_value=100.0))
@settings(max_examples=30, deadline=None)
def test_sphere_kernel_point_limit(s):
    assert sphere_kernel_value(s, 1e-3 * s) == pytest.approx(-1 / s, rel=1e-8)


def test_harmonic_kernel_form():
    k = Kernel("harmonic_sphere", R=2.0, strength=1.5)
    s = np.array([0.0, 1.0, 10.0])
    np.testing.assert_allclose(k.value(s), 1.5 / 2.0 * (-1.2 + 0.5 * (s / 2.0) ** 2))


def test_cell_constant_closed_form():
    closed = 3 * math.log(2 + math.sqrt(3)) - math.pi / 2
    assert cell_mean_inverse_distance() == pytest.approx(closed, rel=1e-12)
    assert CELL_MEAN_INV_R == pytest.approx(2.3800774, rel=1e-7)


def test_lattice_origin_weight_value():
    assert lattice_origin_weight() == pytest.approx(2.837297479480619, rel=1e-12)
    assert ORIGIN_WEIGHT == pytest.approx(2.837297479480619, rel=1e-12)
    # independent Ewald split parameter gives the same constant
    assert lattice_origin_weight(alpha=1.3, cutoff=8) == pytest.approx(2.837297479480619, rel=1e-11)


# --------------------------------------------------------------------------
# grid potentials
# --------------------------------------------------------------------------


def test_point_mass_far_field():
    g = UniformGrid(64, 0.5)
    rho = gaussian(g, 2 * g.h).density()
    V = solve_potential(rho, NEWTONIAN).values
    x = g.axis
    r = np.sqrt(g.r2)
    mask = (r > 10 * 2 * g.h) & (r <= 0.4 * g.extent / 2 * 2)
    rel = np.abs(V[mask] * r[mask] + 1.0)
    assert rel.max() < 1e-2
    assert x.size == 64


def test_free_space_tail_without_images():
    g = UniformGrid(64, 0.5)
    rho = gaussian(g, 1.0).density()
    V = solve_potential(rho, NEWTONIAN).values
    c = g.n // 2
    # from well outside the source out to the box face
    for i in range(c + 12, g.n):
        r = g.axis[i]
        assert V[i, c, c] * r == pytest.approx(-1.0, rel=1e-2)


def test_gaussian_potential_at_origin():
    g = UniformGrid(64, 0.5)
    sigma = 2.0
    V = solve_potential(gaussian(g, sigma).density(), NEWTONIAN).values
    c = g.n // 2
    assert V[c, c, c] == pytest.approx(-math.sqrt(2 / math.pi) / sigma, rel=5e-3)
    assert V.max() <= 0.0


def test_uniform_ball_centre():
    g = UniformGrid(64, 0.5)
    a = 6.0
    rho = (g.r2 <= a * a).astype(float)
    rho /= rho.sum() * g.cell_volume
    V = solve_potential(RealField(g, rho), NEWTONIAN).values
    c = g.n // 2
    assert V[c, c, c] == pytest.approx(-1.5 / a, rel=1e-2)


def test_linearity_and_strength():
    g = UniformGrid(32, 1.0)
    a = gaussian(g, 2.0, center=(2.0, 0, 0)).density().values * 0.3
    b = gaussian(g, 1.5, center=(-3.0, 1, 0)).density().values * 0.5
    Va = solve_potential(RealField(g, a), NEWTONIAN).values
    Vb = solve_potential(RealField(g, b), NEWTONIAN).values
    Vab = solve_potential(RealField(g, a + b), NEWTONIAN).values
    np.testing.assert_allclose(Vab, Va + Vb, atol=1e-14)
    V2 = solve_potential(RealField(g, a), Kernel("newtonian", strength=2.5)).values
    np.testing.assert_allclose(V2, 2.5 * Va, rtol=1e-12)


def test_no_gravity_potential_is_zero():
    g = UniformGrid(16, 1.0)
    V = solve_potential(gaussian(g, 1.5).density(), NO_GRAVITY).values
    assert not V.any()


def test_solve_potential_validation():
    g = UniformGrid(16, 1.0)
    rho = gaussian(g, 1.5).density()
    with pytest.raises(ValueError):
        solve_potential(rho, NEWTONIAN, grid=UniformGrid(16, 0.5))
    with pytest.raises(ValueError):
        solve_potential(RealField(g, -rho.values), NEWTONIAN)
    with pytest.raises(ValueError):
        solve_potential(RealField(g, 2 * rho.values), NEWTONIAN)


def test_grid_and_radial_solvers_agree():
    g = UniformGrid(64, 0.5)
    sigma = 2.0
    V3 = solve_potential(gaussian(g, sigma).density(), NEWTONIAN).values
    r = np.linspace(1e-3, 40, 40001)
    rho = (2 * np.pi * sigma**2) ** -1.5 * np.exp(-r * r / (2 * sigma**2))
    Vr = radial_potential(RadialProfile(r, rho))
    c = g.n // 2
    for i in range(c, c + g.n // 8 + 1):
        x = g.axis[i]
        assert V3[i, c, c] == pytest.approx(np.interp(x, Vr.r, Vr.values), rel=5e-3)


def test_concurrent_solves_are_identical():
    clear_kernel_cache()
    grids = [UniformGrid(16, 1.0), UniformGrid(16, 0.8), UniformGrid(32, 1.0), UniformGrid(16, 0.6)]
    dens = [gaussian(g, 1.6).density() for g in grids]
    serial = [solve_potential(d, NEWTONIAN).values for d in dens]
    with ThreadPoolExecutor(4) as ex:
        parallel = list(ex.map(lambda d: solve_potential(d, NEWTONIAN).values, dens * 3))
    for i, v in enumerate(parallel):
        np.testing.assert_array_equal(v, serial[i % 4])


# --------------------------------------------------------------------------
# radial potential
# --------------------------------------------------------------------------


def test_radial_uniform_ball():
    a = 2.0
    r = np.linspace(1e-4, 20, 200001)
    rho = np.where(r <= a, 3 / (4 * np.pi * a**3), 0.0)
    V = radial_potential(RadialProfile(r, rho)).values
    inside = r < 0.95 * a
    np.testing.assert_allclose(V[inside], -(3 * a * a - r[inside] ** 2) / (2 * a**3), rtol=1e-4)
    outside = r > 1.05 * a
    np.testing.assert_allclose(V[outside], -1 / r[outside], rtol=1e-4)


def test_radial_point_like_and_gauss_law():
    r = np.linspace(1e-3, 50, 50001)
    s = 0.05
    rho = (2 * np.pi * s * s) ** -1.5 * np.exp(-r * r / (2 * s * s))
    V = radial_potential(RadialProfile(r, rho), strength=0.7).values
    far = r > 1.0
    np.testing.assert_allclose(V[far] * r[far], -0.7, rtol=1e-4)


def test_radial_profile_validation():
    with pytest.raises(ValueError):
        RadialProfile(np.array([1.0, 0.5, 2.0]), np.ones(3))
    with pytest.raises(ValueError):
        RadialProfile(np.array([0.0, 0.5, 2.0]), np.ones(3))
    with pytest.raises(ValueError):
        radial_potential(RadialProfile(np.array([0.1, 0.5, 2.0]), np.array([1.0, -1.0, 0.0])))
