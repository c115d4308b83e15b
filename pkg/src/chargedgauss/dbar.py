"""The 2x2 matrix built from consecutive orthogonal polynomials and their
Cauchy transforms, with numerical checks that it solves the d-bar problem

    dY/d(conj z) = conj(Y) [[0, -exp(-N*V)], [0, 0]],
    Y(z) = (I + O(1/z)) diag(z^k, z^-k),

plus the moment identities underlying its uniqueness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .measures import PerturbedPotential
from .orthopoly import OrthoPolySet
from .planarquad import QuadGrid, cauchy_tail_split, cauchy_transform, inner_product


@dataclass(frozen=True)
class DbarMatrix:
    """Evaluable entries: Y11, Y21 polynomial; Y12, Y22 Cauchy transforms.

    Y11 = P_k, Y21 = -(pi/h_{k-1}) P_{k-1},
    Y12 = (1/pi) int conj(P_k(w)) (w-z)^{-1} dlambda(w),
    Y22 = -(1/h_{k-1}) int conj(P_{k-1}(w)) (w-z)^{-1} dlambda(w),
    with dlambda = exp(-N*V) dm.
    """

    k: int
    ops: OrthoPolySet = field(repr=False)
    grid: QuadGrid = field(repr=False)

    @property
    def potential(self) -> PerturbedPotential:
        return self.ops.potential

    def Y11(self, z):
        return np.asarray(self.ops.evaluate(self.k, z), dtype=complex)

    def Y21(self, z):
        h = float(self.ops.norms[self.k - 1])
        return -(math.pi / h) * np.asarray(
            self.ops.evaluate(self.k - 1, z), dtype=complex)

    def _ct(self, degree: int, z: complex) -> complex:
        dens = lambda w: np.conj(self.ops.evaluate(degree, w).astype(complex))
        return cauchy_transform(self.potential, self.grid, dens, z).value

    def Y12(self, z: complex) -> complex:
        # int f (w-z)^{-1} = -int f (z-w)^{-1}
        return -self._ct(self.k, z) / math.pi

    def Y22(self, z: complex) -> complex:
        h = float(self.ops.norms[self.k - 1])
        return self._ct(self.k - 1, z) / h

    def entries(self, z: complex) -> np.ndarray:
        return np.array([[complex(self.Y11(z)), self.Y12(z)],
                         [complex(self.Y21(z)), self.Y22(z)]])


def assemble_Y(ops: OrthoPolySet, p: PerturbedPotential, grid: QuadGrid,
               k: int) -> DbarMatrix:
    if not 1 <= k <= ops.n_max:
        raise ValueError(f"degree k={k} outside 1..{ops.n_max}")
    if ops.potential is not p:
        raise ValueError("polynomial set was built for a different potential")
    return DbarMatrix(k=k, ops=ops, grid=grid)


def wirtinger_dbar(f, z: complex, h: float) -> complex:
    """d f / d(conj z) = (f_x + i f_y)/2 by central differences."""
    fx = (f(z + h) - f(z - h)) / (2.0 * h)
    fy = (f(z + 1j * h) - f(z - 1j * h)) / (2.0 * h)
    return 0.5 * (fx + 1j * fy)


def dbar_residual(Y: DbarMatrix, p: PerturbedPotential, z: complex,
                  h_step: float) -> np.ndarray:
    """2x2 residual matrix of the d-bar equation at z.

    First column entries are polynomials so their residuals are pure
    finite-difference error; second-column residuals compare the FD
    d-bar derivative against -conj(first column) * exp(-N*V).
    """
    if h_step <= 0:
        raise ValueError("h_step must be positive")
    z = complex(z)
    w = p.weight(z)
    r11 = abs(wirtinger_dbar(lambda x: complex(Y.Y11(x)), z, h_step))
    r21 = abs(wirtinger_dbar(lambda x: complex(Y.Y21(x)), z, h_step))
    r12 = abs(wirtinger_dbar(Y.Y12, z, h_step)
              + np.conj(complex(Y.Y11(z))) * w)
    r22 = abs(wirtinger_dbar(Y.Y22, z, h_step)
              + np.conj(complex(Y.Y21(z))) * w)
    return np.array([[r11, r12], [r21, r22]])


def fd_order(Y: DbarMatrix, p: PerturbedPotential, z: complex,
             steps=(1e-2, 5e-3, 2.5e-3)) -> dict:
    """Observed Richardson order of the column-2 residuals across steps.

    The residual at step h is the FD truncation error of a smooth
    function, so it should scale like h^2; non-monotone residuals signal
    a step small enough for roundoff to dominate.
    """
    res = [dbar_residual(Y, p, z, h) for h in steps]
    r12 = np.array([r[0, 1] for r in res])
    r22 = np.array([r[1, 1] for r in res])
    hs = np.asarray(steps, dtype=float)

    def slope(r):
        if np.any(r <= 0):
            return math.inf  # residual at machine floor: better than any order
        return float(np.polyfit(np.log(hs), np.log(r), 1)[0])

    return {"steps": list(steps), "residuals_12": r12.tolist(),
            "residuals_22": r22.tolist(),
            "order_12": slope(r12), "order_22": slope(r22),
            "monotone": bool(np.all(np.diff(r12) < 0) and np.all(np.diff(r22) < 0))}


@dataclass(frozen=True)
class AsymptoticReport:
    k: int
    radii: list
    slope_Y12: float          # theory: -(k+1)
    slope_Y22_dev: float      # |z^k Y22 - 1|, theory: -1
    slope_Y21_ratio: float    # |Y21/z^k|, theory: -1
    max_Y11_ratio_dev: float  # |Y11/z^k - 1| at largest radius


def asymptotic_normalization(Y: DbarMatrix, radii) -> AsymptoticReport:
    """Log-log slope estimates of the large-z normalization.

    The transforms are evaluated through the cancellation-free
    geometric-series split, so the z^(-k-1) tails are resolved even when
    they sit twenty digits below the naive term size.
    """
    radii = np.sort(np.asarray(radii, dtype=float))
    k = Y.k
    h = float(Y.ops.norms[k - 1])
    zs = radii * np.exp(0.37j)  # fixed generic direction
    dens_k = np.conj(Y.ops.evaluate(k, Y.grid.nodes))
    dens_km1 = np.conj(Y.ops.evaluate(k - 1, Y.grid.nodes))

    y12, y22dev, y21r, y11dev = [], [], [], []
    for z in zs:
        val, _, _ = cauchy_tail_split(Y.grid, dens_k, k, z)
        y12.append(abs(val) / math.pi)
        val, dev, mk = cauchy_tail_split(Y.grid, dens_km1, k - 1, z)
        y22dev.append(abs(z**k * dev / h + (mk / h - 1.0)))
        y21r.append(abs(Y.Y21(z)) / abs(z) ** k)
        y11dev.append(abs(complex(Y.Y11(z)) / z**k - 1.0))

    def slope(vals):
        return float(np.polyfit(np.log(radii), np.log(np.asarray(vals)), 1)[0])

    return AsymptoticReport(k=k, radii=radii.tolist(),
                            slope_Y12=slope(y12),
                            slope_Y22_dev=slope(y22dev),
                            slope_Y21_ratio=slope(y21r),
                            max_Y11_ratio_dev=float(y11dev[-1]))


def uniqueness_crosscheck(ops: OrthoPolySet, p: PerturbedPotential,
                          grid: QuadGrid, k: int) -> dict:
    """Moment identities forced by the d-bar problem on its first column:

    - orthogonality: int w^l conj(P_k) dlambda = 0 for l < k;
    - normalization: -(1/pi) int w^{k-1} conj(Y21) dlambda = 1.

    Orthogonality residuals are reported relative to the norms
    sqrt(<w^l, w^l> h_k).
    """
    if not 1 <= k <= ops.n_max:
        raise ValueError(f"k={k} outside 1..{ops.n_max}")
    pk = ops.evaluate(k, grid.nodes)
    hk = float(ops.norms[k])
    max_orth = 0.0
    for l in range(k):
        mono = grid.nodes ** l
        m = inner_product(grid, mono, pk)
        scale = math.sqrt(float(np.real(inner_product(grid, mono, mono))) * hk)
        max_orth = max(max_orth, abs(m) / scale)
    h = float(ops.norms[k - 1])
    y21 = -(math.pi / h) * ops.evaluate(k - 1, grid.nodes)
    norm_int = inner_product(grid, grid.nodes ** (k - 1), y21)
    norm_const = -norm_int / math.pi
    return {"k": k, "max_orthogonality_residual": max_orth,
            "normalization": complex(norm_const),
            "normalization_deviation": abs(norm_const - 1.0)}
