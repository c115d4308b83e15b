import pytest

import chargedgauss as cg
from chargedgauss import orthopoly, planarquad


@pytest.fixture(scope="session")
def cavity_potential():
    """Single-charge configuration whose cavity sits inside the outer disk."""
    return cg.PerturbedPotential(
        alpha=0.5, nu=cg.PointChargeMeasure(((0.3, 0.5),)), N=4.0, gamma=2.0)


@pytest.fixture(scope="session")
def cavity_grid(cavity_potential):
    return planarquad.build_grid(cavity_potential, orders=(24, 128),
                                 max_degree=24)


@pytest.fixture(scope="session")
def cavity_ops(cavity_potential, cavity_grid):
    return orthopoly.build_orthopolys(cavity_potential, cavity_grid, 12)


@pytest.fixture(scope="session")
def radial_potential():
    return cg.PerturbedPotential(alpha=0.5, nu=cg.EMPTY_MEASURE, N=2.0,
                                 gamma=2.0)


@pytest.fixture(scope="session")
def radial_grid(radial_potential):
    return planarquad.build_grid(radial_potential, orders=(24, 64),
                                 max_degree=24)


@pytest.fixture(scope="session")
def exterior_map():
    return cg.solve_exterior_map(0.5, 0.5, 2.0)
