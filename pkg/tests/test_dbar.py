import numpy as np
import pytest

import chargedgauss as cg
from chargedgauss.dbar import (assemble_Y, asymptotic_normalization,
                               dbar_residual, fd_order, uniqueness_crosscheck,
                               wirtinger_dbar)
from chargedgauss.equilibrium import outer_radius
from chargedgauss.orthopoly import build_orthopolys
from chargedgauss.planarquad import build_grid


@pytest.fixture(scope="module")
def cavity_Y(cavity_potential, cavity_grid, cavity_ops):
    return assemble_Y(cavity_ops, cavity_potential, cavity_grid, 3)


def test_wirtinger_on_antiholomorphic():
    # d/d(conj z) of conj(z)^2 at z0 is 2*conj(z0)
    z0 = 0.4 + 0.9j
    d = wirtinger_dbar(lambda z: np.conj(z) ** 2, z0, 1e-5)
    assert abs(d - 2 * np.conj(z0)) < 1e-8


def test_gaussian_Y21_is_minus_one(radial_potential, radial_grid):
    # N*alpha = 1: h_0 = pi, so Y21 = -pi/h_0 * P_0 = -1
    ops = build_orthopolys(radial_potential, radial_grid, 2)
    Y = assemble_Y(ops, radial_potential, radial_grid, 1)
    assert abs(complex(Y.Y21(0.7 + 0.2j)) + 1.0) < 1e-12
    assert abs(complex(Y.Y11(0.7 + 0.2j)) - (0.7 + 0.2j)) < 1e-12


def test_entries_finite_at_random_points(cavity_Y):
    rng = np.random.default_rng(0)
    zs = rng.uniform(-2, 2, 20) + 1j * rng.uniform(-2, 2, 20)
    for z in zs:
        assert np.all(np.isfinite(cavity_Y.entries(z).view(float)))


def test_column_one_entire(cavity_Y, cavity_potential):
    # column 1 is polynomial, so the residual is pure FD truncation
    # error, h^2 |f'''| / 6
    r1 = dbar_residual(cavity_Y, cavity_potential, 0.8 - 0.3j, 1e-3)
    assert r1[0, 0] < 5e-6 and r1[1, 0] < 5e-6
    r2 = dbar_residual(cavity_Y, cavity_potential, 0.8 - 0.3j, 5e-4)
    assert r2[0, 0] < 0.3 * r1[0, 0] + 1e-12


def test_fd_order_column_two(cavity_Y, cavity_potential):
    rep = fd_order(cavity_Y, cavity_potential, 0.5 + 0.5j)
    assert rep["order_12"] >= 1.8
    assert rep["order_22"] >= 1.8
    assert rep["monotone"]


def test_residual_negligible_far_out(cavity_Y, cavity_potential):
    # weight ~ 0 there, so column 2 vanishes identically; column 1 is
    # polynomial, leaving only FD truncation/roundoff relative to |z|^k
    z = 1e3 + 0j
    r = dbar_residual(cavity_Y, cavity_potential, z, 1e-2)
    assert r[0, 1] < 1e-12 and r[1, 1] < 1e-12
    assert r[0, 0] / abs(z) ** 3 < 1e-10
    assert r[1, 0] / abs(z) ** 2 < 1e-10


def test_asymptotic_slopes(cavity_Y, cavity_potential):
    R = outer_radius(cavity_potential)
    rep = asymptotic_normalization(cavity_Y, np.geomspace(2.5 * R, 20 * R, 8))
    assert abs(rep.slope_Y12 + 4) < 0.2
    assert abs(rep.slope_Y22_dev + 1) < 0.2
    assert abs(rep.slope_Y21_ratio + 1) < 0.2
    assert rep.max_Y11_ratio_dev < 0.05


def test_uniqueness_trivial_gaussian(radial_potential, radial_grid):
    ops = build_orthopolys(radial_potential, radial_grid, 2)
    rep = uniqueness_crosscheck(ops, radial_potential, radial_grid, 1)
    assert rep["max_orthogonality_residual"] < 1e-12
    assert rep["normalization_deviation"] < 1e-12


def test_uniqueness_cavity(cavity_potential, cavity_grid, cavity_ops):
    rep = uniqueness_crosscheck(cavity_ops, cavity_potential, cavity_grid, 2)
    assert rep["max_orthogonality_residual"] < 1e-8
    assert rep["normalization_deviation"] < 1e-8


def test_assemble_validation(cavity_ops, cavity_potential, cavity_grid):
    with pytest.raises(ValueError):
        assemble_Y(cavity_ops, cavity_potential, cavity_grid, 0)
