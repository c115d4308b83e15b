import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import chargedgauss as cg
from chargedgauss.equilibrium import classify_support
from chargedgauss.fekete import (_circle_lens_area, discrepancy, energy,
                                 gradient, gradient_fd_check, minimize)
from chargedgauss.measures import (POS_INF, PerturbedPotential, is_pos_inf)


def test_energy_single_point(cavity_potential):
    z = np.array([1.0 + 0.2j])
    q = cavity_potential.gamma / 2 * float(cavity_potential.value(z[0]))
    assert np.isclose(energy(z, cavity_potential), q)


def test_energy_pair_term(cavity_potential):
    # the interaction part of the antipodal pair is -log 2
    z = np.array([-1.0 + 0j, 1.0 + 0j])
    qs = 2 * sum(cavity_potential.gamma / 2 * float(cavity_potential.value(w))
                 for w in z)
    assert np.isclose(energy(z, cavity_potential) - qs, -math.log(2))


def test_energy_coincident_points(cavity_potential):
    assert is_pos_inf(energy(np.array([1.0 + 0j, 1.0 + 0j]),
                             cavity_potential))
    assert is_pos_inf(energy(np.array([0.3 + 0j]), cavity_potential))


def test_energy_brute_force_oracle(cavity_potential):
    rng = np.random.default_rng(7)
    z = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    e = 0.0
    for i in range(5):
        for j in range(5):
            if i != j:
                e += 0.5 * math.log(1 / abs(z[i] - z[j]))
        e += 5 * cavity_potential.gamma / 2 * float(cavity_potential.value(z[i]))
    assert np.isclose(energy(z, cavity_potential), e)


def test_gradient_matches_finite_differences(cavity_potential):
    rng = np.random.default_rng(3)
    z = 2 * rng.standard_normal(8) + 2j * rng.standard_normal(8)
    assert gradient_fd_check(z, cavity_potential) < 1e-6


@given(phi=st.floats(0.0, 2 * math.pi))
@settings(max_examples=25, deadline=None)
def test_energy_rotation_invariant_radial(phi):
    p = PerturbedPotential(alpha=0.5, nu=cg.EMPTY_MEASURE)
    rng = np.random.default_rng(11)
    z = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    assert np.isclose(energy(z, p), energy(z * np.exp(1j * phi), p),
                      atol=1e-12)


def test_minimize_single_point_gaussian():
    p = PerturbedPotential(alpha=0.5, nu=cg.EMPTY_MEASURE)
    res = minimize(1, p, seed=0, n_starts=2)
    assert abs(res.points[0]) < 1e-6
    assert res.converged


def test_minimize_pair_radial_oracle():
    # two points: antipodal at radius where pair repulsion balances the
    # field, -1/r + 2*n*gamma*alpha*r = 0 with n=2 -> r = 0.5
    p = PerturbedPotential(alpha=0.5, nu=cg.EMPTY_MEASURE, gamma=2.0)
    res = minimize(2, p, seed=1, n_starts=3)
    assert np.allclose(np.abs(res.points), 0.5, atol=1e-5)
    assert abs(res.points[0] + res.points[1]) < 1e-5


def test_minimize_energy_not_above_start(cavity_potential):
    rng = np.random.default_rng(0)
    z0 = 0.5 * (rng.standard_normal(20) + 1j * rng.standard_normal(20))
    res = minimize(20, cavity_potential, seed=0, n_starts=1, max_iter=500)
    assert res.energy <= float(energy(z0, cavity_potential)) + 1e-9


def test_lens_area_cases():
    assert _circle_lens_area(3.0, 1.0, 1.0) == 0.0
    assert np.isclose(_circle_lens_area(0.1, 2.0, 0.5), math.pi * 0.25)
    # Monte Carlo cross-check of a proper intersection
    d, r1, r2 = 1.0, 0.8, 0.9
    rng = np.random.default_rng(5)
    pts = rng.uniform(-1, 2, (200000, 2))
    inside = ((pts**2).sum(1) < r1**2) \
        & (((pts - [d, 0])**2).sum(1) < r2**2)
    mc = inside.mean() * 9.0
    assert abs(_circle_lens_area(d, r1, r2) - mc) < 0.01


def test_discrepancy_counts(cavity_potential):
    geom = classify_support(cavity_potential)
    res = minimize(60, cavity_potential, seed=0, n_starts=1, max_iter=1500)
    rep = discrepancy(res, geom)
    assert rep["points_in_cavities"] == 0
    assert rep["fraction_inside"] > 0.9
