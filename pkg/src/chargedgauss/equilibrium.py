"""Support geometry of the equilibrium measure for a perturbed Gaussian
potential: disk-with-cavities classification, the rational exterior
conformal map in the non-contained case, and numerical verification of
the equilibrium conditions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .measures import DiskMeasure, PerturbedPotential


class UnsupportedGeometry(Exception):
    """Configuration the closed-form constructions do not cover."""


class NoRootError(Exception):
    """The conformal-map cubic has no admissible root."""


@dataclass(frozen=True)
class DiskWithCavities:
    """Closed disk B(0, R) minus disjoint cavity disks, uniform density."""

    outer_radius: float
    cavities: tuple  # tuple of (center: complex, radius: float)

    def area(self) -> float:
        return math.pi * (self.outer_radius**2
                          - sum(r**2 for _, r in self.cavities))

    def contains(self, z: complex) -> bool:
        z = complex(z)
        if abs(z) > self.outer_radius:
            return False
        return all(abs(z - c) >= r for c, r in self.cavities)


@dataclass(frozen=True)
class ExteriorMap:
    """Support described by f(zeta) = rho*zeta + u + v/(zeta - A), a
    univalent map from the exterior of the unit disk onto the exterior
    of the support."""

    rho: float
    u: complex
    v: complex
    A: complex

    def __post_init__(self):
        if not (0.0 < abs(self.A) < 1.0):
            raise ValueError("need 0 < |A| < 1")
        if self.rho <= 0:
            raise ValueError("rho must be positive")

    def map(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return self.rho * zeta + self.u + self.v / (zeta - self.A)

    def map_derivative(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return self.rho - self.v / (zeta - self.A) ** 2

    def boundary(self, theta):
        return self.map(np.exp(1j * np.asarray(theta, dtype=float)))

    def boundary_element(self, theta):
        """d f(e^{i theta}) / d theta = f'(zeta) * i * zeta."""
        zeta = np.exp(1j * np.asarray(theta, dtype=float))
        return self.map_derivative(zeta) * 1j * zeta

    def area(self) -> float:
        return math.pi * (self.rho**2 - abs(self.v) ** 2
                          / (1.0 - abs(self.A) ** 2) ** 2)

    def zeta_roots(self, z: complex):
        """Both solutions of rho*zeta^2 + (u-z-A*rho)*zeta + A(z-u) + v = 0,
        i.e. preimages of z under the map extended to all of C."""
        b = self.u - z - self.A * self.rho
        c = self.A * (z - self.u) + self.v
        disc = cmath.sqrt(b * b - 4.0 * self.rho * c)
        q = -0.5 * (b + disc) if abs(b + disc) > abs(b - disc) else -0.5 * (b - disc)
        if q == 0:
            return 0.0 + 0.0j, 0.0 + 0.0j
        return q / self.rho, c / q

    def contains(self, z: complex) -> bool:
        """z lies in the support iff both preimages are in the unit disk."""
        z1, z2 = self.zeta_roots(complex(z))
        return abs(z1) < 1.0 and abs(z2) < 1.0


def outer_radius(p: PerturbedPotential) -> float:
    """R = sqrt((1 + nu(C)) / (2*alpha))."""
    return math.sqrt((1.0 + p.nu.total_mass) / (2.0 * p.alpha))


def cavity_radius(p: PerturbedPotential, beta: float) -> float:
    return math.sqrt(beta / (2.0 * p.alpha))


def classify_support(p: PerturbedPotential, delta: float = 1e-9):
    """Return the support geometry, or raise UnsupportedGeometry.

    Cavities must be pairwise disjoint and strictly inside B(0, R) with
    margin delta; the single-charge non-contained case is handed to the
    conformal-map solver.  Everything else is out of reach of the
    closed-form constructions.
    """
    R = outer_radius(p)
    cavities = [(a, cavity_radius(p, b)) for a, b in p.nu.charges]

    contained = all(abs(a) + r < R - delta for a, r in cavities)
    if contained:
        for i in range(len(cavities)):
            for j in range(i + 1, len(cavities)):
                ai, ri = cavities[i]
                aj, rj = cavities[j]
                if abs(ai - aj) < ri + rj + delta:
                    raise UnsupportedGeometry(
                        f"cavities {i} and {j} overlap or touch")
        return DiskWithCavities(outer_radius=R, cavities=tuple(cavities))

    if len(cavities) == 1:
        a, r = cavities[0]
        if abs(a) + r > R:
            if a == 0:
                raise UnsupportedGeometry("charge at origin cannot escape B(0,R)")
            return solve_exterior_map(p.alpha, p.nu.charges[0][1], a)
        raise UnsupportedGeometry("cavity tangent to the outer boundary")

    raise UnsupportedGeometry(
        "multi-charge configuration with a non-contained cavity")


def _cubic(alpha: float, beta: float, t: float):
    """g(x) = 2 t^4 x^3 - (t^4 + (1+2 beta)/alpha t^2) x^2 + 1/(4 alpha^2)."""
    c3 = 2.0 * t**4
    c2 = -(t**4 + (1.0 + 2.0 * beta) / alpha * t**2)
    c0 = 1.0 / (4.0 * alpha**2)

    def g(x):
        return c3 * x**3 + c2 * x**2 + c0

    def dg(x):
        return 3.0 * c3 * x**2 + 2.0 * c2 * x

    return g, dg, (c0, 0.0, c2, c3)


def _map_from_root(alpha: float, t: float, phi: float, x: float) -> ExteriorMap:
    K = math.sqrt(x)
    rho = (K**2 * t**2 + 1.0 / (2.0 * alpha)) / (2.0 * K * t)
    s = (1.0 - K**2) * (K**2 * t**2 - 1.0 / (2.0 * alpha)) / (2.0 * K * t)
    A = K * cmath.exp(1j * phi)
    v = s * cmath.exp(2j * phi)
    # second system equation, conj(u) = conj(v)/conj(A), i.e. u = v/A
    u = v / A
    return ExteriorMap(rho=rho, u=u, v=v, A=A)


def _admissible(em: ExteriorMap, a: complex, alpha: float,
                n_check: int = 4096) -> bool:
    """Physical-solution filter: univalent boundary with the correct
    enclosed area, and the charge outside the support.

    The enclosed area is taken from the sampled polygon (not the exact
    map formula, which every root of the system satisfies); the O(1/n^2)
    polygon error must stay well below the O(1) area defect of a
    non-univalent root, hence the fairly dense sampling.
    """
    th = 2.0 * np.pi * np.arange(n_check) / n_check
    w = em.boundary(th)
    if np.min(np.abs(em.map_derivative(np.exp(1j * th)))) <= 0:
        return False
    x, y = w.real, w.imag
    shoelace = 0.5 * abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    if abs(shoelace - math.pi / (2.0 * alpha)) > 1e-3 * math.pi / (2.0 * alpha):
        return False
    winding = np.sum(np.angle(np.roll(w - a, -1) / (w - a))) / (2.0 * np.pi)
    return abs(winding) < 0.25


def solve_exterior_map(alpha: float, beta: float, a: complex) -> ExteriorMap:
    """Solve the four-equation system for the exterior map parameters.

    The phases of A and v are fixed by the phase of a; the modulus
    reduces to the cubic in x = K^2.  When the cavity and outer-disk
    boundary circles intersect the cubic changes sign on (0, 1) and the
    root is unique (bisection bracket plus Newton polish).  When the
    cavity disk lies entirely outside B(0, R) the cubic has two roots in
    (0, 1); only one yields a univalent map with the charge in the
    exterior, and that one is selected.
    """
    a = complex(a)
    t, phi = abs(a), cmath.phase(a)
    if t == 0:
        raise NoRootError("degenerate charge location a = 0")
    r = math.sqrt(beta / (2.0 * alpha))
    R = math.sqrt((1.0 + beta) / (2.0 * alpha))
    if t + r <= R:
        raise NoRootError("cavity is contained in B(0,R); no exterior map")

    g, dg, coeffs = _cubic(alpha, beta, t)
    candidates = []
    if g(1.0) < 0.0:
        lo, hi = 0.0, 1.0
        while hi - lo > 1e-14:
            mid = 0.5 * (lo + hi)
            if g(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        x = 0.5 * (lo + hi)
        x -= g(x) / dg(x)
        candidates.append(x)
    else:
        roots = np.polynomial.Polynomial(coeffs).roots()
        for rr in roots:
            if abs(rr.imag) < 1e-9 and 1e-12 < rr.real < 1.0 - 1e-12:
                x = rr.real
                for _ in range(3):
                    x -= g(x) / dg(x)
                candidates.append(x)

    for x in candidates:
        try:
            em = _map_from_root(alpha, t, phi, x)
        except ValueError:
            continue
        if _admissible(em, a, alpha):
            return em
    raise NoRootError(
        f"no admissible root of the map cubic for alpha={alpha}, "
        f"beta={beta}, a={a}")


def system_residuals(em: ExteriorMap, alpha: float, beta: float,
                     a: complex) -> np.ndarray:
    """Absolute residuals of the four map equations."""
    rho, u, v, A = em.rho, em.u, em.v, em.A
    one = 1.0 - abs(A) ** 2
    r1 = rho**2 - abs(v) ** 2 / one**2 - 1.0 / (2.0 * alpha)
    r2 = v.conjugate() / A.conjugate() - u.conjugate()
    r3 = u + rho / A.conjugate() + v * A.conjugate() / one - a
    r4 = (v.conjugate() / A.conjugate() ** 2
          * (rho - v * A.conjugate() ** 2 / one**2) + beta / (2.0 * alpha))
    return np.abs(np.array([r1, r2, r3, r4]))


def support_area(geom) -> float:
    return geom.area()


def robin_constant(geom, p: PerturbedPotential) -> float:
    """F = alpha R^2 (log(1/R^2) + 1) for the disk-with-cavities case."""
    if not isinstance(geom, DiskWithCavities):
        raise NotImplementedError(
            "no closed form for the exterior-map case; evaluate "
            "effective_potential at an interior point instead")
    R = geom.outer_radius
    return p.alpha * R**2 * (math.log(1.0 / R**2) + 1.0)


def region_log_potential(boundary_pts: np.ndarray, boundary_elems: np.ndarray,
                         z: np.ndarray) -> np.ndarray:
    """U^S(z) = -int_S log|z-w| dm(w) for the region S enclosed by the
    sampled boundary, reduced exactly to a contour integral by Stokes:

        int_S log|z-w| dm(w) = (1/2i) oint F(w) dw,
        F(w) = (conj(w) - conj(z)) (log|z-w|^2 - 1) / 2.

    Valid both for z inside and outside S (the w = z singularity of F is
    removable).  boundary_elems are the complex line elements w'(theta) *
    dtheta, positively oriented.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(z.shape, dtype=float)
    chunk = 256
    for i in range(0, z.size, chunk):
        zz = z[i:i + chunk, None]
        d = zz - boundary_pts[None, :]
        F = (np.conj(boundary_pts)[None, :] - np.conj(zz)) \
            * (np.log(np.abs(d) ** 2) - 1.0) / 2.0
        out[i:i + chunk] = -np.real(np.sum(F * boundary_elems[None, :],
                                           axis=1) / 2j)
    return out


def _exterior_map_potential(geom: ExteriorMap, z: np.ndarray,
                            n_theta: int = 4096) -> np.ndarray:
    th = 2.0 * np.pi * np.arange(n_theta) / n_theta
    pts = geom.boundary(th)
    elems = geom.boundary_element(th) * (2.0 * np.pi / n_theta)
    return region_log_potential(pts, elems, z)


def effective_potential(geom, p: PerturbedPotential, z) -> np.ndarray:
    """U^sigma(z) + V(z) for sigma uniform with density 2*alpha/pi on the
    support; closed-form disk potentials in the cavity case, contour-
    reduced area quadrature in the exterior-map case."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    dens = 2.0 * p.alpha / math.pi
    if isinstance(geom, DiskWithCavities):
        u = DiskMeasure(0.0, geom.outer_radius).log_potential_grid(z)
        for c, r in geom.cavities:
            u = u - DiskMeasure(c, r).log_potential_grid(z)
    elif isinstance(geom, ExteriorMap):
        u = _exterior_map_potential(geom, z)
    else:
        raise TypeError(f"unknown geometry {type(geom)!r}")
    return dens * u + p.value_grid(z)


@dataclass(frozen=True)
class EquilibriumReport:
    robin_constant: float
    max_dev_on: float
    min_margin_off: float
    n_on: int
    n_off: int
    tol_on: float
    tol_off: float

    @property
    def passed(self) -> bool:
        return (self.max_dev_on < self.tol_on
                and self.min_margin_off >= -self.tol_off)


def verify_equilibrium(geom, p: PerturbedPotential,
                       grid_spec: dict | None = None) -> EquilibriumReport:
    """Check U^sigma + V = F on the support and >= F off it on a cartesian
    grid covering the support plus a margin annulus.

    Points within a thin collar of the boundary are skipped: the contour
    quadrature degrades there while the analytic statement concerns the
    open regions.
    """
    spec = {"n": 200, "margin": 0.6, "collar": 0.02,
            "tol_on": None, "tol_off": 1e-8}
    if grid_spec:
        spec.update(grid_spec)

    closed_form = isinstance(geom, DiskWithCavities)
    tol_on = spec["tol_on"] if spec["tol_on"] is not None else \
        (1e-8 if closed_form else 1e-4)

    if closed_form:
        R = geom.outer_radius
        extent = R + spec["margin"]
        F = robin_constant(geom, p)

        def on_support(z):
            ok = np.abs(z) <= R - spec["collar"]
            for c, r in geom.cavities:
                ok &= np.abs(z - c) >= r + spec["collar"]
            return ok

        def off_support(z):
            out = np.abs(z) >= R + spec["collar"]
            for c, r in geom.cavities:
                out |= np.abs(z - c) <= r - spec["collar"]
            return out
    else:
        th = np.linspace(0.0, 2.0 * np.pi, 720, endpoint=False)
        bpts = geom.boundary(th)
        extent = float(np.max(np.abs(bpts))) + spec["margin"]
        centroid = complex(np.mean(bpts))
        F = float(effective_potential(geom, p, centroid)[0])

        def dist_to_boundary(z):
            return np.min(np.abs(z[:, None] - bpts[None, :]), axis=1)

        def on_support(z):
            inside = np.array([geom.contains(w) for w in z])
            return inside & (dist_to_boundary(z) > spec["collar"])

        def off_support(z):
            inside = np.array([geom.contains(w) for w in z])
            return (~inside) & (dist_to_boundary(z) > spec["collar"])

    n = spec["n"]
    xs = np.linspace(-extent, extent, n)
    X, Y = np.meshgrid(xs, xs)
    Z = (X + 1j * Y).ravel()
    # exclude charge locations, where V = +inf
    for a, _ in p.nu.charges:
        Z = Z[np.abs(Z - a) > 1e-9]

    m_on = on_support(Z)
    m_off = off_support(Z)
    dev_on = 0.0
    if m_on.any():
        dev_on = float(np.max(np.abs(effective_potential(geom, p, Z[m_on]) - F)))
    margin_off = math.inf
    if m_off.any():
        margin_off = float(np.min(effective_potential(geom, p, Z[m_off]) - F))
    return EquilibriumReport(robin_constant=F, max_dev_on=dev_on,
                             min_margin_off=margin_off,
                             n_on=int(m_on.sum()), n_off=int(m_off.sum()),
                             tol_on=tol_on, tol_off=spec["tol_off"])


def radius_bound_check(p: PerturbedPotential, zeros: np.ndarray,
                       eps: float = 0.1) -> dict:
    """Fraction of polynomial zeros inside the closed disk B(0, R + eps)."""
    R = outer_radius(p)
    zeros = np.asarray(zeros, dtype=complex)
    inside = np.abs(zeros) <= R + eps
    return {"outer_radius": R, "eps": eps,
            "fraction_inside": float(np.mean(inside)) if zeros.size else 1.0,
            "n_zeros": int(zeros.size)}
