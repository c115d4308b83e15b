import math

import numpy as np
import pytest

import chargedgauss as cg
from chargedgauss.measures import (POS_INF, PerturbedPotential,
                                   PointChargeMeasure, is_pos_inf)
from chargedgauss.orthopoly import (build_orthopolys, compute_zeros,
                                    one_point_function, radial_norm_oracle,
                                    reconstruct_coeffs, zero_potential,
                                    zero_potential_grid)
from chargedgauss.planarquad import build_grid, inner_product


def test_radial_norms_match_oracle(radial_potential, radial_grid):
    ops = build_orthopolys(radial_potential, radial_grid, 10)
    for k in range(11):
        assert np.isclose(float(ops.norms[k]),
                          radial_norm_oracle(radial_potential, k), rtol=1e-10)


def test_charge_at_origin_norms():
    p = PerturbedPotential(alpha=0.5, nu=PointChargeMeasure(((0.0, 0.5),)),
                           N=2.0)
    g = build_grid(p, orders=(24, 64), max_degree=20)
    ops = build_orthopolys(p, g, 8)
    for k in range(9):
        assert np.isclose(float(ops.norms[k]), radial_norm_oracle(p, k),
                          rtol=1e-8)


def test_monic_leading_coefficient(cavity_ops):
    for c in cavity_ops.monic_coeffs:
        assert complex(c[-1]) == 1.0 + 0.0j


def test_gram_residual_small(cavity_ops):
    assert cavity_ops.gram_residual < 1e-8


def test_norm_positivity(cavity_ops):
    assert np.all(np.asarray(cavity_ops.norms, dtype=float) > 0)


def test_orthogonality_between_monic_polys(cavity_grid, cavity_ops):
    vals = [cavity_ops.evaluate(k, cavity_grid.nodes) for k in range(6)]
    for j in range(6):
        for k in range(j):
            ip = inner_product(cavity_grid, vals[j], vals[k])
            scale = math.sqrt(float(cavity_ops.norms[j])
                              * float(cavity_ops.norms[k]))
            assert abs(ip) / scale < 1e-10


def test_angular_order_precondition(radial_potential, radial_grid):
    with pytest.raises(ValueError):
        build_orthopolys(radial_potential, radial_grid, 100)


def test_monomial_zeros(radial_potential, radial_grid):
    ops = build_orthopolys(radial_potential, radial_grid, 6)
    zs = compute_zeros(ops, 5)
    assert np.all(zs.zeros == 0)
    assert zs.max_residual == 0.0


def test_zero_residual_and_product_form(cavity_ops):
    zs = compute_zeros(cavity_ops, 8)
    assert zs.max_residual < 1e-10
    rec = reconstruct_coeffs(zs)
    ref = np.asarray(cavity_ops.monic_coeffs[8], dtype=complex)
    assert np.max(np.abs(rec - ref)) / np.max(np.abs(ref)) < 1e-8


def test_zero_conjugation_symmetry(cavity_ops):
    # real charge locations force a conjugation-symmetric zero set;
    # match each conjugated zero to its nearest partner (sorting is
    # unstable under the ~1e-15 imaginary noise of near-real parts)
    zs = compute_zeros(cavity_ops, 8).zeros
    d = np.min(np.abs(np.conj(zs)[:, None] - zs[None, :]), axis=1)
    assert np.max(d) < 1e-9


def test_zero_rotation_equivariance():
    phi = 0.7
    res = {}
    for rot in [1.0, np.exp(1j * phi)]:
        p = PerturbedPotential(alpha=0.5,
                               nu=PointChargeMeasure(((0.3 * rot, 0.5),)),
                               N=8.0, gamma=2.0)
        g = build_grid(p, orders=(24, 96), max_degree=12)
        ops = build_orthopolys(p, g, 6)
        res[rot] = compute_zeros(ops, 6).zeros
    base = np.sort_complex(res[1.0] * np.exp(1j * phi))
    rotated = np.sort_complex(res[np.exp(1j * phi)])
    assert np.max(np.abs(base - rotated)) < 1e-8


def test_one_point_function_normalized(cavity_potential, cavity_grid,
                                       cavity_ops):
    rho = one_point_function(cavity_ops, 5,
                             cavity_grid.nodes.astype(complex))
    mass = float(np.sum(cavity_grid.areas.astype(float) * rho))
    assert np.isclose(mass, 1.0, atol=1e-10)
    assert np.all(rho >= 0)


def test_one_point_function_decays(cavity_ops):
    assert one_point_function(cavity_ops, 5, np.array([6.0 + 0j]))[0] < 1e-10


def test_zero_potential_trivial(radial_potential, radial_grid):
    ops = build_orthopolys(radial_potential, radial_grid, 4)
    zs = compute_zeros(ops, 4)
    z = 2.0 + 1.0j
    assert np.isclose(zero_potential(zs, z), math.log(1 / abs(z)))
    assert is_pos_inf(zero_potential(zs, 0.0))
    grid_val = zero_potential_grid(zs, np.array([z]))[0]
    assert np.isclose(grid_val, math.log(1 / abs(z)))


def test_compute_zeros_degree_validation(cavity_ops):
    with pytest.raises(ValueError):
        compute_zeros(cavity_ops, 99)
