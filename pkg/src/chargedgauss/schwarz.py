"""Schwarz function of the support boundary: branches, branch points,
critical trajectories of Re[dS * dz] = 0, the effective zero density
carried by the connecting trajectory, and external-potential comparisons
against the zero counting measure.

Exterior-map boundaries have a genuinely two-sheeted Schwarz function
(square-root branch points); the disk-with-cavity boundary contributes a
single-valued analytic jump field with simple zeros, and both are traced
by the same integrator.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import (DiskWithCavities, ExteriorMap, classify_support,
                          outer_radius)
from .measures import DiskMeasure, PerturbedPotential, PointChargeMeasure
from .orthopoly import ZeroSet, zero_potential_grid


class SelfIntersection(Exception):
    """Sampled boundary curve crosses itself; map not univalent."""


class DegenerateMap(Exception):
    """Map parameters degenerate the branch-point quadratic."""


class StiffRegion(Exception):
    """Trajectory step underflowed while enforcing the residual bound."""


class SignFlip(Exception):
    """No orientation makes all density weights nonnegative."""


@dataclass(frozen=True)
class BoundaryCurve:
    geom: ExteriorMap
    theta: np.ndarray
    points: np.ndarray

    def enclosed_area(self) -> float:
        x, y = self.points.real, self.points.imag
        return 0.5 * abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))


def _segments_intersect(p, q):
    """Any proper crossing among closed-polyline segments (vectorized)."""
    a, b = p, np.roll(p, -1)
    n = len(a)

    def cross(o, u, v):
        return (u.real - o.real) * (v.imag - o.imag) \
            - (u.imag - o.imag) * (v.real - o.real)

    A, B = a[:, None], b[:, None]
    C, D = a[None, :], b[None, :]
    d1 = cross(A, B, C)
    d2 = cross(A, B, D)
    d3 = cross(C, D, A)
    d4 = cross(C, D, B)
    hit = (d1 * d2 < 0) & (d3 * d4 < 0)
    i, j = np.indices(hit.shape)
    adjacent = (np.abs(i - j) <= 1) | (np.abs(i - j) >= n - 1)
    return bool(np.any(hit & ~adjacent))


def boundary_curve(geom: ExteriorMap, n_samples: int = 720) -> BoundaryCurve:
    th = 2.0 * np.pi * np.arange(n_samples) / n_samples
    zeta = np.exp(1j * th)
    if np.min(np.abs(geom.map_derivative(zeta))) <= 0:
        raise SelfIntersection("f' vanishes on the unit circle")
    pts = geom.map(zeta)
    if _segments_intersect(pts, pts):
        raise SelfIntersection("sampled boundary polyline crosses itself")
    return BoundaryCurve(geom=geom, theta=th, points=pts)


def schwarz_value(geom: ExteriorMap, zeta):
    """S at the sheet parameter zeta: rho/zeta + conj(u)
    + conj(v)*zeta/(1 - conj(A)*zeta); equals conj(f(zeta)) on |zeta|=1."""
    zeta = np.asarray(zeta, dtype=complex)
    return (geom.rho / zeta + np.conj(geom.u)
            + np.conj(geom.v) * zeta / (1.0 - np.conj(geom.A) * zeta))


@dataclass(frozen=True)
class SchwarzBranches:
    z: complex
    zeta_plus: complex
    zeta_minus: complex
    s_plus: complex
    s_minus: complex

    @property
    def delta(self) -> complex:
        return self.s_plus - self.s_minus


def schwarz_branches(geom: ExteriorMap, z: complex,
                     prev: SchwarzBranches | None = None) -> SchwarzBranches:
    """Both sheet values at z; labeled by nearest-zeta continuity with
    prev when given, else by |zeta| (exterior sheet first)."""
    z1, z2 = geom.zeta_roots(complex(z))
    if prev is not None:
        if (abs(z1 - prev.zeta_plus) + abs(z2 - prev.zeta_minus)
                > abs(z2 - prev.zeta_plus) + abs(z1 - prev.zeta_minus)):
            z1, z2 = z2, z1
    elif abs(z1) < abs(z2):
        z1, z2 = z2, z1
    return SchwarzBranches(z=complex(z), zeta_plus=z1, zeta_minus=z2,
                           s_plus=complex(schwarz_value(geom, z1)),
                           s_minus=complex(schwarz_value(geom, z2)))


def branch_points(geom: ExteriorMap) -> list:
    """Roots z of the sheet-quadratic discriminant
    (u - z - A*rho)^2 - 4*rho*(A*(z - u) + v), filtered to the interior
    sheet (coincident zeta in the closed unit disk)."""
    rho, u, v, A = geom.rho, geom.u, geom.v, geom.A
    # z^2 - 2(u + A*rho) z + (u - A*rho)^2 + 4*rho*(A*u - v)
    b = -2.0 * (u + A * rho)
    c = (u - A * rho) ** 2 + 4.0 * rho * (A * u - v)
    disc = cmath.sqrt(b * b - 4.0 * c)
    roots = [(-b + disc) / 2.0, (-b - disc) / 2.0]
    if abs(roots[0] - roots[1]) < 1e-7 * max(1.0, abs(roots[0])):
        # v -> 0 collapses the two branch points onto each other (the
        # boundary degenerates to a circle, whose Schwarz function is
        # entire off the center); below the square-root noise floor the
        # separation carries no information
        raise DegenerateMap("branch points numerically coincident")
    kept = []
    for z in roots:
        zeta = (z - u + A * rho) / (2.0 * rho)
        if abs(zeta) <= 1.0 + 1e-12:
            kept.append(z)
    return kept


class ExteriorDeltaS:
    """Jump field S_plus - S_minus with branch continuity along a path."""

    def __init__(self, geom: ExteriorMap):
        self.geom = geom
        self._prev = None

    def reset(self):
        self._prev = None

    def __call__(self, z: complex) -> complex:
        br = schwarz_branches(self.geom, z, self._prev)
        self._prev = br
        return br.delta


class CavityDeltaS:
    """Single-valued jump field for a disk-with-one-cavity boundary:
    dS(z) = R^2/z - conj(a) - r^2/(z - a)."""

    def __init__(self, R: float, a: complex, r: float):
        self.R, self.a, self.r = float(R), complex(a), float(r)

    def reset(self):
        pass

    def __call__(self, z: complex) -> complex:
        a = self.a
        return self.R**2 / z - a.conjugate() - self.r**2 / (z - a)

    def critical_points(self) -> np.ndarray:
        """Zeros of dS: roots of R^2 (z-a) - conj(a) z (z-a) - r^2 z."""
        a, R2, r2 = self.a, self.R**2, self.r**2
        poly = np.polynomial.Polynomial(
            [-R2 * a, R2 + a.conjugate() * a - r2, -a.conjugate()])
        return poly.roots()


@dataclass(frozen=True)
class Trajectory:
    points: np.ndarray
    start_tag: str
    end_tag: str       # 'closed' | 'branch' | 'node' | 'exit' | 'maxsteps'
    max_residual: float

    @property
    def closed(self) -> bool:
        return self.end_tag == "closed"


def trajectory_residual(points: np.ndarray, ds_field) -> float:
    """max over segments of |Re[dS(mid) * dz]| / (|dS| |dz|)."""
    ds_field.reset()
    mids = 0.5 * (points[:-1] + points[1:])
    dz = np.diff(points)
    worst = 0.0
    for m, d in zip(mids, dz):
        s = ds_field(m)
        denom = abs(s) * abs(d)
        if denom > 0:
            worst = max(worst, abs((s * d).real) / denom)
    return worst


def _trace(ds_field, z0: complex, origin: complex, sign: float, step: float,
           stop_points, escape_radius: float, ds_tol: float,
           max_steps: int = 100000, init_dir: complex | None = None) -> Trajectory:
    """RK4 along sign * i * conj(dS)/|dS| with steps capped at a tenth of
    the distance to the nearest singular point: near a vanishing point of
    dS the direction field rotates on that length scale, so a fixed step
    would violate the tangency residual there."""
    ds_field.reset()
    prev_dir = [init_dir]

    def f(z):
        d = ds_field(z)
        m = abs(d)
        if m == 0:
            return 0.0
        u = sign * 1j * d.conjugate() / m
        # the trajectory is invariant under dS -> -dS, but the tracer is
        # not: keep the direction continuous across sheet-label flips
        if prev_dir[0] is not None and (u * prev_dir[0].conjugate()).real < 0:
            u = -u
        return u

    singular = [origin] + list(stop_points)
    pts = [z0]
    z = z0
    end = "maxsteps"
    travelled = 0.0
    for i in range(max_steps):
        dmin = min(abs(z - s) for s in singular)
        h = min(step, max(0.1 * dmin, 1e-7))
        k1 = f(z)
        if k1 == 0.0:
            end = "node"
            break
        prev_dir[0] = k1
        k2 = f(z + 0.5 * h * k1)
        k3 = f(z + 0.5 * h * k2)
        k4 = f(z + h * k3)
        z_new = z + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        travelled += abs(z_new - z)
        z = z_new
        pts.append(z)
        prev_dir[0] = (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        if abs(ds_field(z)) < ds_tol:
            end = "node"
            break
        if abs(z) > escape_radius:
            end = "exit"
            break
        if travelled > 20.0 * step:
            if any(abs(z - bp) < 0.5 * step for bp in stop_points):
                end = "branch"
                break
            if abs(z - z0) < 1.5 * step:
                pts.append(z0)
                end = "closed"
                break
    points = np.array(pts)
    return Trajectory(points=points, start_tag="branch", end_tag=end,
                      max_residual=trajectory_residual(points, ds_field))


def _local_exponent_and_phase(ds_field, z0: complex, eps: float = 1e-5):
    """Probe dS ~ C (z - z0)^p near a vanishing point: p from a two-radius
    ratio, arg(C) from the probe value (mod pi, enough to seed the comb
    of critical directions)."""
    ds_field.reset()
    v1 = ds_field(z0 + eps)
    ds_field.reset()
    v2 = ds_field(z0 + 2.0 * eps)
    p = math.log2(abs(v2) / abs(v1))
    p = 0.5 if abs(p - 0.5) < 0.25 else 1.0
    # probe offset is real positive, so phase(v1) = arg C (mod the sheet sign)
    return p, cmath.phase(v1)


def critical_trajectories(geom_or_field, step: float = 2e-3,
                          tol: float = 1e-3, offset: float = 1e-6,
                          start_points=None, escape_radius: float | None = None,
                          ds_tol: float = 1e-9) -> list:
    """Integral curves of Re[dS * dz] = 0 seeded at each point where dS
    vanishes (branch points of the exterior map, or simple zeros of the
    cavity jump field).

    Near a vanishing point dS ~ C (z-z0)^p, and the admissible launch
    directions solve (p+1)*psi + arg C = pi/2 (mod pi): three directions
    for a square-root branch point, four for a simple zero.  Each is
    integrated by RK4; if a returned polyline violates the residual bound
    the step is halved and it is retraced.
    """
    if isinstance(geom_or_field, ExteriorMap):
        field_fn = ExteriorDeltaS(geom_or_field)
        starts = branch_points(geom_or_field) if start_points is None \
            else list(start_points)
        if escape_radius is None:
            th = 2.0 * np.pi * np.arange(256) / 256
            escape_radius = 2.0 * float(np.max(np.abs(geom_or_field.boundary(th))))
    else:
        field_fn = geom_or_field
        if start_points is None:
            raise ValueError("start_points required for a bare jump field")
        starts = list(start_points)
        if escape_radius is None:
            escape_radius = 4.0 * max(abs(z) for z in starts) + 4.0

    if not starts:
        raise ValueError("no vanishing points of dS to launch from")

    trajs = []
    for z0 in starts:
        others = [b for b in starts if b != z0]
        p, arg_c = _local_exponent_and_phase(field_fn, z0)
        n_dir = int(round(2 * (p + 1)))  # 3 for p=1/2, 4 for p=1
        psi0 = (0.5 * math.pi - arg_c) / (p + 1.0)
        for m in range(n_dir):
            psi = psi0 + m * math.pi / (p + 1.0)
            zstart = z0 + offset * cmath.exp(1j * psi)
            h = step
            while True:
                tr = _trace(field_fn, zstart, z0, +1.0, h, others,
                            escape_radius, ds_tol,
                            init_dir=cmath.exp(1j * psi))
                if tr.max_residual < tol or tr.end_tag == "node":
                    break
                h *= 0.5
                if h < 1e-9:
                    raise StiffRegion(
                        f"step underflow near {z0} direction {psi:.3f}")
            trajs.append(tr)
    return trajs


def connecting_trajectories(trajs: list) -> list:
    """Bounded trajectories that start and end at vanishing points (or
    close on themselves): the candidates carrying the zero attractor."""
    return [t for t in trajs if t.end_tag in ("closed", "branch", "node")]


def effective_zero_density(traj: Trajectory, ds_field):
    """Per-segment weights (1/2pi) Im[dS(mid) * dz] along the trajectory,
    orientation-corrected and normalized to total mass 1.

    Returns (midpoints, weights).  Raises SignFlip when no global
    orientation makes all weights nonnegative.
    """
    ds_field.reset()
    pts = traj.points
    mids = 0.5 * (pts[:-1] + pts[1:])
    dz = np.diff(pts)
    w = np.empty(len(mids))
    for i, (m, d) in enumerate(zip(mids, dz)):
        w[i] = (ds_field(m) * d).imag / (2.0 * math.pi)
    total = np.sum(w)
    if total < 0:
        w = -w
        total = -total
    if total <= 0:
        raise SignFlip("zero total mass along trajectory")
    neg = w < 0
    if np.any(np.abs(w[neg]) > 1e-6 * total):
        raise SignFlip("mixed-sign density weights beyond tolerance")
    w = np.clip(w, 0.0, None)
    return mids, w / np.sum(w)


def equilibrium_measure_potential(p: PerturbedPotential, z) -> np.ndarray:
    """U^{mu_Q}(z) for the rescaled potential Q = (gamma/2) V.

    mu_Q is uniform with density gamma*alpha/pi on the support of the
    potential with parameters scaled by gamma/2; evaluated from the
    closed-form disk potentials (cavity case only).
    """
    g = p.gamma / 2.0
    pq = PerturbedPotential(alpha=g * p.alpha,
                            nu=PointChargeMeasure(tuple(
                                (a, g * b) for a, b in p.nu.charges)),
                            N=p.N, gamma=2.0)
    geom = classify_support(pq)
    if not isinstance(geom, DiskWithCavities):
        raise NotImplementedError("closed-form potential needs the cavity case")
    dens = 2.0 * pq.alpha / math.pi
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    u = DiskMeasure(0.0, geom.outer_radius).log_potential_grid(z)
    for c, r in geom.cavities:
        u = u - DiskMeasure(c, r).log_potential_grid(z)
    return dens * u


def external_potential_compare(zs: ZeroSet, p: PerturbedPotential,
                               z_points) -> dict:
    """|-(1/n) log|P_n(z)| - U^{mu_Q}(z)| over exterior sample points,
    using the product form of P_n through its zero set."""
    z_points = np.atleast_1d(np.asarray(z_points, dtype=complex))
    approx = zero_potential_grid(zs, z_points)
    exact = equilibrium_measure_potential(p, z_points)
    err = np.abs(approx - exact)
    return {"n": zs.n, "points": z_points, "errors": err,
            "sup_error": float(np.max(err)), "mean_error": float(np.mean(err))}


def cavity_jump_field(p: PerturbedPotential) -> CavityDeltaS:
    """Jump field for the single-charge cavity configuration of p."""
    geom = classify_support(p)
    if not isinstance(geom, DiskWithCavities) or len(geom.cavities) != 1:
        raise ValueError("needs a single-cavity disk geometry")
    (a, r), = geom.cavities
    return CavityDeltaS(R=geom.outer_radius, a=a, r=r)


def zero_attractor_candidates(p: PerturbedPotential, step: float = 2e-3):
    """Closed critical trajectories of the cavity jump field launched from
    its simple zeros inside the cavity; returns (field, trajectories)."""
    ds = cavity_jump_field(p)
    crit = [z for z in ds.critical_points()
            if abs(z - ds.a) < ds.r]
    trajs = critical_trajectories(ds, step=step, start_points=crit,
                                  escape_radius=3.0 * outer_radius(p))
    return ds, connecting_trajectories(trajs)
