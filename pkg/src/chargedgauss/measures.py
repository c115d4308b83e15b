"""Core domain types: point-charge measures, disk measures, perturbed
Gaussian potentials and their closed-form logarithmic potentials.

Conventions: the logarithmic potential of a measure mu is
U(z) = int log(1/|z-w|) dmu(w); the background potential is
V(z) = alpha*|z|^2 + U_nu(z) and the weight is exp(-N*V(z)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize


class PositiveInfinity:
    """Explicit extended-real +infinity marker.

    Returned where a logarithmic potential diverges (at charge locations)
    instead of silently propagating float('inf').
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "PositiveInfinity"

    def __gt__(self, other):
        return not isinstance(other, PositiveInfinity)

    def __lt__(self, other):
        return False

    def __ge__(self, other):
        return True

    def __le__(self, other):
        return isinstance(other, PositiveInfinity)


POS_INF = PositiveInfinity()


def is_pos_inf(x) -> bool:
    return isinstance(x, PositiveInfinity)


@dataclass(frozen=True)
class PointChargeMeasure:
    """Finite positive combination of point masses sum_k beta_k * delta(a_k)."""

    charges: tuple  # tuple of (location: complex, mass: float)

    def __post_init__(self):
        charges = tuple((complex(a), float(b)) for a, b in self.charges)
        object.__setattr__(self, "charges", charges)
        for _, b in charges:
            if b <= 0:
                raise ValueError("all point masses must be positive")
        locs = [a for a, _ in charges]
        for i in range(len(locs)):
            for j in range(i + 1, len(locs)):
                if locs[i] == locs[j]:
                    raise ValueError("charge locations must be pairwise distinct")

    @property
    def total_mass(self) -> float:
        return sum(b for _, b in self.charges)

    @property
    def locations(self) -> np.ndarray:
        return np.array([a for a, _ in self.charges], dtype=complex)

    @property
    def masses(self) -> np.ndarray:
        return np.array([b for _, b in self.charges], dtype=float)

    def log_potential(self, z: complex):
        """U_nu(z) = sum_k beta_k log(1/|z - a_k|); POS_INF at each a_k."""
        z = complex(z)
        total = 0.0
        for a, b in self.charges:
            if z == a:
                return POS_INF
            total += b * math.log(1.0 / abs(z - a))
        return total

    def log_potential_grid(self, z: np.ndarray) -> np.ndarray:
        """Vectorized potential; +inf entries mark charge locations."""
        z = np.asarray(z)
        out = np.zeros(z.shape, dtype=z.real.dtype)
        for a, b in self.charges:
            d = np.abs(z - a)
            with np.errstate(divide="ignore"):
                out = out - b * np.log(d)
        return out


EMPTY_MEASURE = PointChargeMeasure(charges=())


@dataclass(frozen=True)
class DiskMeasure:
    """Lebesgue measure restricted to the disk B(center, radius)."""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def total_mass(self) -> float:
        return math.pi * self.radius**2

    def log_potential(self, z: complex) -> float:
        """Two-branch closed form, continuous across |z - c| = R."""
        return float(self.log_potential_grid(np.asarray(complex(z))))

    def log_potential_grid(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        R = self.radius
        d = np.abs(z - self.center)
        inner = 0.5 * R**2 * math.pi * (np.log(1.0 / R**2) + 1.0 - d**2 / R**2)
        with np.errstate(divide="ignore"):
            outer = R**2 * math.pi * np.where(d > 0, -np.log(np.maximum(d, 1e-300)), 0.0)
        return np.where(d <= R, inner, outer)


@dataclass(frozen=True)
class PerturbedPotential:
    """Gaussian background alpha*|z|^2 perturbed by a point-charge measure.

    N is the weight scale (weight exp(-N*V)); gamma the scaling ratio used
    for the rescaled potential Q = (gamma/2)*V in zero-attractor experiments.
    The conductor is the whole plane.
    """

    alpha: float
    nu: PointChargeMeasure = EMPTY_MEASURE
    N: float = 1.0
    gamma: float = 2.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.N <= 0:
            raise ValueError("N must be positive")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    def value(self, z: complex):
        """V(z) = alpha|z|^2 + U_nu(z); POS_INF exactly at the charges."""
        u = self.nu.log_potential(z)
        if is_pos_inf(u):
            return POS_INF
        return self.alpha * abs(complex(z)) ** 2 + u

    def value_grid(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return self.alpha * np.abs(z) ** 2 + self.nu.log_potential_grid(z)

    def rescaled(self, z: complex):
        """Q(z) = (gamma/2) V(z)."""
        v = self.value(z)
        if is_pos_inf(v):
            return POS_INF
        return 0.5 * self.gamma * v

    def weight(self, z: complex) -> float:
        """exp(-N*V(z)); exactly 0 at charge locations."""
        v = self.value(z)
        if is_pos_inf(v):
            return 0.0
        return math.exp(-self.N * v)

    def log_weight_grid(self, z: np.ndarray) -> np.ndarray:
        """-N*V on an array; -inf entries mark charge locations (weight 0)."""
        return -self.N * self.value_grid(z)

    def weight_grid(self, z: np.ndarray) -> np.ndarray:
        lw = self.log_weight_grid(z)
        return np.where(np.isneginf(lw), 0.0, np.exp(lw))


def weight_upper_bound(p: PerturbedPotential):
    """Lower bound L for N*[alpha|z|^2/2 + U_nu(z)], so that
    exp(-N*V(z)) <= exp(-L) * exp(-N*alpha*|z|^2/2) pointwise.

    Found by coarse grid search plus local descent; only needs to be a
    valid bound, not tight.
    """
    nu = p.nu
    if not nu.charges:
        L = 0.0
    else:

        def phi(xy):
            z = complex(xy[0], xy[1])
            u = nu.log_potential(z)
            if is_pos_inf(u):
                return math.inf
            return p.N * (0.5 * p.alpha * abs(z) ** 2 + u)

        locs = nu.locations
        box = max(1.0, np.max(np.abs(locs)) + 1.0,
                  math.sqrt(4.0 * max(nu.total_mass, 1.0) / p.alpha))
        xs = np.linspace(-box, box, 61)
        best, best_xy = math.inf, (0.0, 0.0)
        for x in xs:
            for y in xs:
                v = phi((x, y))
                if v < best:
                    best, best_xy = v, (x, y)
        res = minimize(phi, best_xy, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 2000})
        L = min(best, float(res.fun)) - 1e-9
    Na = p.N * p.alpha

    def bound(z):
        return math.exp(-L) * math.exp(-0.5 * Na * abs(complex(z)) ** 2)

    return L, bound
