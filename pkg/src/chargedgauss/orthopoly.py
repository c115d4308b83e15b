"""Monic planar orthogonal polynomials against exp(-N*V) dm, their norms,
zeros, counting measures and the one-point function.

Orthogonalization runs as Arnoldi on the quadrature nodes (orthogonalize
z*q_k against all previous orthonormal q_j) rather than Cholesky of the
moment matrix, which would square an already exponential condition
number.  All accumulations are in 80-bit extended precision; zero finding
is simultaneous Aberth iteration refined in arbitrary precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .measures import POS_INF, PerturbedPotential
from .planarquad import CLD, LD, QuadGrid

GRAM_TOL = 1e-8


class LossOfOrthogonality(Exception):
    """Gram residual exceeded tolerance; raise precision or lower n_max."""


class NonConvergence(Exception):
    """Root iteration failed to reach the residual target."""


@dataclass(frozen=True)
class OrthoPolySet:
    """Monic orthogonal polynomials P_0..P_{n_max} with squared norms h_k.

    monic_coeffs[k] holds ascending coefficients of P_k (clongdouble,
    leading entry exactly 1); hessenberg holds the recurrence
    coefficients of the orthonormal Arnoldi basis.
    """

    n_max: int
    monic_coeffs: tuple
    norms: np.ndarray               # h_k, longdouble
    hessenberg: np.ndarray
    gram_residual: float
    potential: PerturbedPotential = field(repr=False)

    def evaluate(self, k: int, z):
        """P_k(z) by Horner in clongdouble."""
        if not 0 <= k <= self.n_max:
            raise ValueError(f"degree {k} outside 0..{self.n_max}")
        z = np.asarray(z, dtype=CLD)
        acc = np.zeros_like(z)
        for c in self.monic_coeffs[k][::-1]:
            acc = acc * z + c
        return acc

    def orthonormal(self, k: int, z):
        """p_k(z) = P_k(z)/sqrt(h_k)."""
        return self.evaluate(k, z) / np.sqrt(self.norms[k])

    def to_json_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "norms": [float(h) for h in self.norms],
            "monic_coeffs": [[[float(c.real), float(c.imag)] for c in ck]
                             for ck in self.monic_coeffs],
        }


def build_orthopolys(p: PerturbedPotential, grid: QuadGrid,
                     n_max: int) -> OrthoPolySet:
    """Arnoldi orthogonalization of 1, z, z^2, ... on the grid nodes.

    One full reorthogonalization pass per step keeps the loss of
    orthogonality at the level of roundoff; coefficient vectors are
    carried alongside the node vectors so the monic polynomials come out
    exactly (leading coefficient set to 1 by division).
    """
    if grid.angular_order < 2 * n_max + 2:
        raise ValueError(
            f"angular order {grid.angular_order} cannot resolve degree "
            f"{2 * n_max} moments; need at least {2 * n_max + 2}")

    sq = np.sqrt(grid.measure_weights).astype(CLD)
    z_nodes = grid.nodes

    def ip(f, g):
        return np.sum(f * np.conj(g))

    q_vecs, q_coeffs = [], []
    H = np.zeros((n_max + 2, n_max + 1), dtype=CLD)
    v = sq.copy()
    nrm = np.sqrt(np.real(ip(v, v)))
    q_vecs.append(v / nrm)
    q_coeffs.append(np.array([1.0 / nrm], dtype=CLD))
    for k in range(n_max):
        v = z_nodes * q_vecs[k]
        c = np.zeros(k + 2, dtype=CLD)
        c[1:k + 2] = q_coeffs[k]
        for _pass in range(2):
            for j in range(k + 1):
                hj = ip(v, q_vecs[j])
                v = v - hj * q_vecs[j]
                c[:len(q_coeffs[j])] -= hj * q_coeffs[j]
                H[j, k] += hj
        nrm = np.sqrt(np.real(ip(v, v)))
        if not nrm > 0:
            raise LossOfOrthogonality(
                f"vanishing norm at degree {k + 1}; grid cannot resolve it")
        H[k + 1, k] = nrm
        q_vecs.append(v / nrm)
        q_coeffs.append(c / nrm)

    monic, hs = [], np.empty(n_max + 1, dtype=LD)
    for k in range(n_max + 1):
        lc = q_coeffs[k][-1]
        monic.append(q_coeffs[k] / lc)
        hs[k] = LD(1.0) / np.abs(lc) ** 2

    # Gram residual of the orthonormal node vectors
    Q = np.array(q_vecs)
    G = Q @ np.conj(Q.T)
    np.fill_diagonal(G, 0.0)
    gram = float(np.max(np.abs(G)))
    if gram > GRAM_TOL:
        raise LossOfOrthogonality(
            f"Gram residual {gram:.2e} exceeds {GRAM_TOL:.0e} at n_max={n_max}")
    return OrthoPolySet(n_max=n_max, monic_coeffs=tuple(monic), norms=hs,
                        hessenberg=H, gram_residual=gram, potential=p)


def radial_norm_oracle(p: PerturbedPotential, k: int) -> float:
    """Closed-form h_k for radial weights: pi*Gamma(k + N*beta/2 + 1) /
    (N*alpha)^(k + N*beta/2 + 1), with beta = 0 for the empty measure."""
    beta = 0.0
    if p.nu.charges:
        if len(p.nu.charges) != 1 or p.nu.charges[0][0] != 0:
            raise ValueError("oracle only valid for the radial cases")
        beta = p.nu.charges[0][1]
    s = k + p.N * beta / 2.0 + 1.0
    return math.pi * math.exp(math.lgamma(s) - s * math.log(p.N * p.alpha))


@dataclass(frozen=True)
class ZeroSet:
    """All n zeros of P_n with counting-measure weight 1/n each."""

    n: int
    zeros: np.ndarray
    max_residual: float  # max_j |P_n(z_j)| / prod_{k != j} |z_j - z_k|

    def counting_weights(self) -> np.ndarray:
        return np.full(self.n, 1.0 / self.n)


def _aberth_longdouble(coeffs: np.ndarray, radius: float,
                       tol: float = 5e-14, itmax: int = 300):
    c = np.asarray(coeffs, dtype=CLD)
    n = len(c) - 1
    x = (radius * np.exp(2j * np.pi * (np.arange(n) + 0.5) / n + 0.3j)).astype(CLD)
    dc = c[1:] * np.arange(1, n + 1)

    def horner(cc, zz):
        acc = np.zeros_like(zz)
        for a in cc[::-1]:
            acc = acc * zz + a
        return acc

    for it in range(itmax):
        newt = horner(c, x) / horner(dc, x)
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        S = np.sum(1.0 / diff, axis=1) - 1.0
        corr = newt / (1.0 - newt * S)
        x = x - corr
        if np.max(np.abs(corr)) < tol:
            break
    return np.asarray(x, dtype=complex)


def _refine_mpmath(coeffs: np.ndarray, roots: np.ndarray, iters: int = 3,
                   dps: int = 45):
    """A few Aberth sweeps in arbitrary precision, plus exact residuals."""
    n = len(roots)
    with mp.workdps(dps):
        cs = [mp.mpc(str(np.real(c)), str(np.imag(c))) for c in coeffs]
        dcs = [cs[k] * k for k in range(1, len(cs))]

        def pv(cc, x):
            acc = mp.mpc(0)
            for c in reversed(cc):
                acc = acc * x + c
            return acc

        xs = [mp.mpc(r) for r in roots]
        for _ in range(iters):
            corr = []
            for i, x in enumerate(xs):
                newt = pv(cs, x) / pv(dcs, x)
                S = mp.fsum([1 / (x - xs[j]) for j in range(n) if j != i])
                corr.append(newt / (1 - newt * S))
            xs = [x - c for x, c in zip(xs, corr)]
        out = np.array([complex(x) for x in xs])
        res = np.array([abs(complex(pv(cs, x))) for x in xs])
    den = np.array([np.prod(np.abs(r - np.delete(out, i)))
                    for i, r in enumerate(out)])
    return out, float(np.max(res / den))


def compute_zeros(ops: OrthoPolySet, n: int, init_radius: float | None = None,
                  residual_tol: float = 1e-10) -> ZeroSet:
    """All roots of P_n by Aberth-Ehrlich simultaneous iteration.

    Extended-precision sweeps from a circle of the support's outer radius,
    then arbitrary-precision polishing; the certified quantity is the
    product-form residual |P_n(z_j)| / prod_{k != j} |z_j - z_k|.
    """
    if not 1 <= n <= ops.n_max:
        raise ValueError(f"degree {n} outside 1..{ops.n_max}")
    coeffs = ops.monic_coeffs[n]
    low = np.max(np.abs(coeffs[:-1])) if n >= 1 else 0.0
    if low < 1e-13:
        # monomial fast path: P_n = z^n, root 0 with multiplicity n
        return ZeroSet(n=n, zeros=np.zeros(n, dtype=complex), max_residual=0.0)
    if init_radius is None:
        p = ops.potential
        init_radius = math.sqrt((1.0 + p.nu.total_mass) / (2.0 * p.alpha))
    roots = _aberth_longdouble(coeffs, init_radius)
    roots, resid = _refine_mpmath(np.asarray(coeffs, dtype=complex), roots)
    if resid > residual_tol:
        raise NonConvergence(
            f"zero residual {resid:.2e} above {residual_tol:.0e} at n={n}")
    return ZeroSet(n=n, zeros=roots, max_residual=resid)


def reconstruct_coeffs(zs: ZeroSet) -> np.ndarray:
    """Monic coefficients from the product form prod (z - z_j)."""
    c = np.array([1.0 + 0.0j], dtype=CLD)
    for r in zs.zeros:
        c = np.convolve(c, np.array([-CLD(r), 1.0], dtype=CLD))
    return np.asarray(c, dtype=complex)


def one_point_function(ops: OrthoPolySet, n: int, z):
    """rho_{n}(z) = (1/n) sum_{k<n} |p_k(z)|^2 exp(-N*V(z)), nonnegative."""
    if not 1 <= n <= ops.n_max + 1:
        raise ValueError(f"need 1 <= n <= {ops.n_max + 1}")
    z = np.asarray(z, dtype=complex)
    acc = np.zeros(z.shape, dtype=float)
    for k in range(n):
        acc += np.abs(ops.orthonormal(k, z).astype(complex)) ** 2
    return acc / n * ops.potential.weight_grid(z)


def zero_potential(zs: ZeroSet, z: complex):
    """-(1/n) log|P_n(z)| = (1/n) sum_j log(1/|z - z_j|); +inf at a zero."""
    z = complex(z)
    d = np.abs(z - zs.zeros)
    if np.any(d == 0):
        return POS_INF
    return float(-np.sum(np.log(d)) / zs.n)


def zero_potential_grid(zs: ZeroSet, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore"):
        return -np.sum(np.log(np.abs(z[..., None] - zs.zeros)), axis=-1) / zs.n
