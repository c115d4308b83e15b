import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import chargedgauss as cg
from chargedgauss.measures import (POS_INF, DiskMeasure, PerturbedPotential,
                                   PointChargeMeasure, is_pos_inf,
                                   weight_upper_bound)

finite = st.floats(-3.0, 3.0, allow_nan=False)


def test_pos_inf_ordering():
    assert POS_INF > 1e300
    assert not (POS_INF < 1e300)
    assert POS_INF >= POS_INF
    assert POS_INF <= POS_INF
    assert not (POS_INF > POS_INF)
    assert is_pos_inf(POS_INF) and not is_pos_inf(float("inf"))


def test_point_charge_validation():
    with pytest.raises(ValueError):
        PointChargeMeasure(((0.3, -0.5),))
    with pytest.raises(ValueError):
        PointChargeMeasure(((0.3, 0.5), (0.3, 0.2)))


def test_point_charge_potential_at_charge():
    nu = PointChargeMeasure(((0.3, 0.5),))
    assert is_pos_inf(nu.log_potential(0.3))
    grid = nu.log_potential_grid(np.array([0.3 + 0j, 1.0 + 0j]))
    assert np.isposinf(grid[0])
    assert np.isclose(grid[1], 0.5 * math.log(1 / 0.7))


def test_point_charge_total_mass():
    nu = PointChargeMeasure(((0.3, 0.5), (1j, 0.25)))
    assert nu.total_mass == 0.75
    assert np.allclose(nu.locations, [0.3, 1j])


@given(x=finite, y=finite, cr=st.floats(0.2, 2.0), R=st.floats(0.3, 2.0))
@settings(max_examples=50, deadline=None)
def test_disk_potential_continuous_across_boundary(x, y, cr, R):
    d = DiskMeasure(complex(x, y), R)
    direction = np.exp(1j * cr)
    zb = complex(x, y) + R * direction
    inner = d.log_potential(zb - 1e-9 * direction)
    outer = d.log_potential(zb + 1e-9 * direction)
    assert abs(inner - outer) < 1e-6


@given(t=st.floats(0.0, 2 * math.pi), s=st.floats(1.3, 4.0))
@settings(max_examples=30, deadline=None)
def test_disk_potential_harmonic_outside(t, s):
    d = DiskMeasure(0.0, 1.0)
    z = s * np.exp(1j * t)
    h = 1e-4
    lap = (d.log_potential(z + h) + d.log_potential(z - h)
           + d.log_potential(z + 1j * h) + d.log_potential(z - 1j * h)
           - 4 * d.log_potential(z)) / h**2
    assert abs(lap) < 1e-4


def test_disk_potential_matches_point_mass_far_away():
    d = DiskMeasure(0.2 + 0.1j, 0.7)
    z = 50.0 + 3.0j
    assert abs(d.log_potential(z)
               - d.total_mass * math.log(1 / abs(z - 0.2 - 0.1j))) < 1e-3


def test_perturbed_value_and_weight(cavity_potential):
    p = cavity_potential
    assert is_pos_inf(p.value(0.3))
    assert p.weight(0.3) == 0.0
    z = 1.0 + 0.5j
    v = p.alpha * abs(z) ** 2 + 0.5 * math.log(1 / abs(z - 0.3))
    assert np.isclose(float(p.value(z)), v)
    assert np.isclose(p.weight(z), math.exp(-p.N * v))
    assert np.isclose(float(p.rescaled(z)), p.gamma / 2 * v)


def test_weight_grid_zero_at_charge(cavity_potential):
    w = cavity_potential.weight_grid(np.array([0.3 + 0j, 1.0 + 0j]))
    assert w[0] == 0.0 and w[1] > 0


def test_potential_validation():
    with pytest.raises(ValueError):
        PerturbedPotential(alpha=-1.0)
    with pytest.raises(ValueError):
        PerturbedPotential(alpha=1.0, N=0.0)


_P_BOUND = PerturbedPotential(alpha=0.5,
                              nu=PointChargeMeasure(((0.3, 0.5),)), N=4.0)
_, _BOUND = weight_upper_bound(_P_BOUND)


@given(x=finite, y=finite)
@settings(max_examples=50, deadline=None)
def test_weight_upper_bound_dominates(x, y):
    z = complex(x, y)
    assert _P_BOUND.weight(z) <= _BOUND(z) * (1 + 1e-12)
