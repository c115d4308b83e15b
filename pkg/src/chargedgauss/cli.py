"""Command-line experiment runner: support geometry, orthogonal
polynomials, zeros, d-bar checks, critical trajectories, Fekete points,
potential comparisons and the full pipeline.

Outputs are JSON reports, CSV polylines/point sets, and standalone SVG
figures regenerable from the CSVs.  Exit codes: 0 ok, 2 invariant
failure, 3 unsupported configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dbar, equilibrium, fekete, orthopoly, planarquad, schwarz
from .equilibrium import DiskWithCavities, ExteriorMap, UnsupportedGeometry
from .measures import PerturbedPotential, PointChargeMeasure

EXIT_OK = 0
EXIT_INVARIANT = 2
EXIT_UNSUPPORTED = 3


@dataclass
class ExperimentConfig:
    alpha: float = 0.5
    gamma: float = 2.0
    N: float | None = None
    charges: tuple = ((0.3 + 0.0j, 0.5),)
    seed: int = 0
    quad: tuple = (24, 384, 1e-12)

    def potential(self, n: int | None = None) -> PerturbedPotential:
        """N from config if fixed, else tied to the degree by N = gamma*n."""
        if self.N is not None:
            N = self.N
        elif n is not None:
            N = self.gamma * n
        else:
            N = self.gamma
        return PerturbedPotential(alpha=self.alpha,
                                  nu=PointChargeMeasure(self.charges),
                                  N=N, gamma=self.gamma)


def load_config(path: str | None) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if path is None:
        return cfg
    doc = json.loads(Path(path).read_text())
    if "N" in doc and "gamma" in doc and doc.get("N") is not None:
        raise ValueError("give either N or gamma, not both")
    charges = tuple((complex(c["re"], c.get("im", 0.0)), float(c["beta"]))
                    for c in doc.get("charges", []))
    return ExperimentConfig(alpha=float(doc.get("alpha", cfg.alpha)),
                            gamma=float(doc.get("gamma", cfg.gamma)),
                            N=doc.get("N"),
                            charges=charges or cfg.charges,
                            seed=int(doc.get("seed", 0)))


# ---------------------------------------------------------------- output

def write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def write_json(path: Path, obj):
    path.write_text(json.dumps(obj, indent=2, default=_json_default) + "\n")


def _json_default(x):
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, (np.floating, np.integer)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serializable: {type(x)}")


class SvgCanvas:
    """Minimal SVG writer with a math-coordinate viewBox (y up)."""

    def __init__(self, xmin, xmax, ymin, ymax, size=640):
        self.parts = []
        self.sc = size / (xmax - xmin)
        self.xmin, self.ymax = xmin, ymax
        w = size
        h = size * (ymax - ymin) / (xmax - xmin)
        self.parts.append(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" '
            f'height="{h:.0f}" viewBox="0 0 {w:.0f} {h:.0f}">')
        self.parts.append(f'<rect width="{w:.0f}" height="{h:.0f}" fill="white"/>')

    def _xy(self, z):
        return ((z.real - self.xmin) * self.sc, (self.ymax - z.imag) * self.sc)

    def polyline(self, zs, color="black", width=1.5, fill="none", close=False):
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(self._xy, zs))
        tag = "polygon" if close else "polyline"
        self.parts.append(f'<{tag} points="{pts}" stroke="{color}" '
                          f'stroke-width="{width}" fill="{fill}"/>')

    def circle(self, center, radius, color="black", width=1.5, fill="none"):
        x, y = self._xy(center)
        self.parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" '
                          f'r="{radius * self.sc:.2f}" stroke="{color}" '
                          f'stroke-width="{width}" fill="{fill}"/>')

    def dots(self, zs, color="blue", r=2.5):
        for z in zs:
            x, y = self._xy(z)
            self.parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r}" '
                              f'fill="{color}"/>')

    def save(self, path: Path):
        Path(path).write_text("\n".join(self.parts) + "\n</svg>\n")


def _support_svg(geom, extras, path: Path):
    if isinstance(geom, DiskWithCavities):
        R = geom.outer_radius
        cv = SvgCanvas(-1.3 * R, 1.3 * R, -1.3 * R, 1.3 * R)
        cv.circle(0j, R, fill="#cfe0f5")
        for c, r in geom.cavities:
            cv.circle(c, r, fill="white")
    else:
        th = 2 * np.pi * np.arange(720) / 720
        b = geom.boundary(th)
        lim = 1.3 * float(np.max(np.abs(b)))
        cv = SvgCanvas(-lim, lim, -lim, lim)
        cv.polyline(b, close=True, fill="#cfe0f5")
    for kind, data, color in extras:
        if kind == "dots":
            cv.dots(data, color=color)
        else:
            cv.polyline(data, color=color)
    cv.save(path)


# -------------------------------------------------------------- commands

def _geometry_dict(geom):
    if isinstance(geom, DiskWithCavities):
        return {"kind": "disk_with_cavities",
                "outer_radius": geom.outer_radius,
                "cavities": [{"center": c, "radius": r}
                             for c, r in geom.cavities],
                "area": geom.area()}
    return {"kind": "exterior_map", "rho": geom.rho, "u": geom.u,
            "v": geom.v, "A": geom.A, "area": geom.area()}


def cmd_support(cfg: ExperimentConfig, out: Path, args) -> int:
    p = cfg.potential(n=args.degree)
    geom = equilibrium.classify_support(p)
    write_json(out / "geometry.json", _geometry_dict(geom))
    if isinstance(geom, DiskWithCavities):
        th = 2 * np.pi * np.arange(720) / 720
        rows = [("outer", t, geom.outer_radius * math.cos(t),
                 geom.outer_radius * math.sin(t)) for t in th]
        for i, (c, r) in enumerate(geom.cavities):
            rows += [(f"cavity{i}", t, c.real + r * math.cos(t),
                      c.imag + r * math.sin(t)) for t in th]
    else:
        bc = schwarz.boundary_curve(geom)
        rows = [("boundary", t, z.real, z.imag)
                for t, z in zip(bc.theta, bc.points)]
    write_csv(out / "boundary.csv", ["component", "theta", "x", "y"], rows)
    _support_svg(geom, [], out / "support.svg")
    print(f"support: {_geometry_dict(geom)['kind']} area={geom.area():.6f}")
    return EXIT_OK


def _build_polys(cfg: ExperimentConfig, n: int, quad=None):
    p = cfg.potential(n=n)
    nr, nt, eps = quad or cfg.quad
    nt = max(nt, 2 * n + 2)
    grid = planarquad.build_grid(p, eps_tail=eps, orders=(nr, nt))
    return p, grid, orthopoly.build_orthopolys(p, grid, n)


def cmd_orthopoly(cfg: ExperimentConfig, out: Path, args) -> int:
    n = args.degree or 20
    p, grid, ops = _build_polys(cfg, n, args.quad)
    write_json(out / "orthopolys.json",
               {"N": p.N, "gamma": p.gamma, **ops.to_json_dict()})
    print(f"orthopoly: n_max={n} gram_residual={ops.gram_residual:.2e}")
    return EXIT_OK


def cmd_zeros(cfg: ExperimentConfig, out: Path, args) -> int:
    n = args.degree or 20
    p, grid, ops = _build_polys(cfg, n, args.quad)
    zs = orthopoly.compute_zeros(ops, n)
    write_csv(out / f"zeros_n{n}.csv", ["re", "im"],
              [(z.real, z.imag) for z in zs.zeros])
    print(f"zeros: n={n} max_residual={zs.max_residual:.2e}")
    return EXIT_OK


def cmd_dbar_check(cfg: ExperimentConfig, out: Path, args) -> int:
    k = args.degree or 3
    p, grid, ops = _build_polys(cfg, max(k, 2), args.quad)
    Y = dbar.assemble_Y(ops, p, grid, k)
    rng = np.random.default_rng(cfg.seed)
    z = complex(0.5 + 0.5j) + 0.1 * complex(*rng.standard_normal(2))
    order = dbar.fd_order(Y, p, z)
    R = equilibrium.outer_radius(p)
    radii = np.geomspace(2.5 * R, 20 * R, 8)
    asym = dbar.asymptotic_normalization(Y, radii)
    uniq = dbar.uniqueness_crosscheck(ops, p, grid, k)
    report = {"k": k, "fd": order,
              "slopes": {"Y12": asym.slope_Y12, "Y22_dev": asym.slope_Y22_dev,
                         "Y21_ratio": asym.slope_Y21_ratio,
                         "Y11_dev": asym.max_Y11_ratio_dev},
              "uniqueness": uniq}
    write_json(out / f"dbar_k{k}.json", report)
    ok = (order["order_12"] >= 1.8 and order["order_22"] >= 1.8
          and abs(asym.slope_Y12 + (k + 1)) < 0.2
          and uniq["max_orthogonality_residual"] < 1e-8)
    print(f"dbar-check: k={k} orders=({order['order_12']:.2f},"
          f"{order['order_22']:.2f}) slope_Y12={asym.slope_Y12:.2f} "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_trajectory(cfg: ExperimentConfig, out: Path, args) -> int:
    p = cfg.potential(n=args.degree)
    geom = equilibrium.classify_support(p)
    if isinstance(geom, DiskWithCavities):
        ds, trajs = schwarz.zero_attractor_candidates(p)
    else:
        trajs = schwarz.critical_trajectories(geom)
    rows = []
    for i, t in enumerate(trajs):
        rows += [(i, t.end_tag, z.real, z.imag) for z in t.points]
    write_csv(out / "trajectories.csv", ["trajectory", "end_tag", "x", "y"],
              rows)
    _support_svg(geom, [("line", t.points, "red") for t in trajs],
                 out / "trajectories.svg")
    worst = max((t.max_residual for t in trajs), default=0.0)
    print(f"trajectory: {len(trajs)} curves, max residual {worst:.2e}")
    return EXIT_OK if worst < 1e-3 else EXIT_INVARIANT


def cmd_fekete(cfg: ExperimentConfig, out: Path, args) -> int:
    n = args.degree or 100
    p = cfg.potential(n=n)
    res = fekete.minimize(n, p, seed=cfg.seed,
                          n_starts=1 if args.quick else 5)
    write_csv(out / f"fekete_n{n}.csv", ["re", "im"],
              [(z.real, z.imag) for z in res.points])
    geom = equilibrium.classify_support(p)
    report = {"n": n, "energy": res.energy, "grad_norm": res.grad_norm,
              "converged": res.converged}
    if isinstance(geom, DiskWithCavities):
        report["discrepancy"] = fekete.discrepancy(res, geom)
        _support_svg(geom, [("dots", res.points, "blue")],
                     out / f"fekete_n{n}.svg")
    write_json(out / f"fekete_n{n}.json", report)
    print(f"fekete: n={n} energy={res.energy:.6f} "
          f"grad={res.grad_norm:.2e}")
    return EXIT_OK


def cmd_compare(cfg: ExperimentConfig, out: Path, args) -> int:
    n = args.degree or 30
    p, grid, ops = _build_polys(cfg, n, args.quad)
    zs = orthopoly.compute_zeros(ops, n)
    R = equilibrium.outer_radius(p)
    rr = np.linspace(1.5 * R, 3.0 * R, 40)
    tt = 2 * np.pi * np.arange(72) / 72
    zpts = (rr[:, None] * np.exp(1j * tt)[None, :]).ravel()
    rep = schwarz.external_potential_compare(zs, p, zpts)
    write_csv(out / f"compare_n{n}.csv", ["x", "y", "error"],
              [(z.real, z.imag, e) for z, e in zip(zpts, rep["errors"])])
    print(f"compare: n={n} sup_err={rep['sup_error']:.4f} "
          f"mean_err={rep['mean_error']:.4f}")
    return EXIT_OK


def cmd_pipeline(cfg: ExperimentConfig, out: Path, args) -> int:
    n = args.degree or (20 if args.quick else 50)
    rc = cmd_support(cfg, out, args)
    p, grid, ops = _build_polys(cfg, n, args.quad)
    zs = orthopoly.compute_zeros(ops, n)
    write_csv(out / f"zeros_n{n}.csv", ["re", "im"],
              [(z.real, z.imag) for z in zs.zeros])
    geom = equilibrium.classify_support(p)
    extras = [("dots", zs.zeros, "blue")]
    if isinstance(geom, DiskWithCavities) and geom.cavities:
        ds, trajs = schwarz.zero_attractor_candidates(p)
        for t in trajs:
            extras.append(("line", t.points, "red"))
    _support_svg(geom, extras, out / "overlay.svg")
    rep = equilibrium.verify_equilibrium(geom, p,
                                         {"n": 80 if args.quick else 200})
    write_json(out / "equilibrium_report.json", {
        "robin_constant": rep.robin_constant, "max_dev_on": rep.max_dev_on,
        "min_margin_off": rep.min_margin_off, "passed": rep.passed})
    rc2 = cmd_dbar_check(cfg, out, argparse.Namespace(
        degree=min(3, n), quad=args.quad, quick=args.quick))
    rc3 = cmd_compare(cfg, out, argparse.Namespace(
        degree=min(30, n), quad=args.quad, quick=args.quick))
    print(f"pipeline: done (n={n}), equilibrium "
          f"{'PASS' if rep.passed else 'FAIL'}")
    codes = [rc, rc2, rc3, EXIT_OK if rep.passed else EXIT_INVARIANT]
    return max(codes)


def cmd_verify(cfg: ExperimentConfig, out: Path, args) -> int:
    """Fast invariant suite over the default configuration."""
    failures = []

    def check(name, ok):
        print(f"  [{'PASS' if ok else 'FAIL'}] {name}")
        if not ok:
            failures.append(name)

    p = cfg.potential(n=10)
    geom = equilibrium.classify_support(p)
    rep = equilibrium.verify_equilibrium(
        geom, p, {"n": 60 if args.quick else 150})
    check("equilibrium conditions", rep.passed)

    n = 8 if args.quick else 20
    p2, grid, ops = _build_polys(cfg, n, args.quad)
    check("gram residual", ops.gram_residual < 1e-8)
    zs = orthopoly.compute_zeros(ops, n)
    check("zero residual", zs.max_residual < 1e-10)
    rec = orthopoly.reconstruct_coeffs(zs)
    ref = np.asarray(ops.monic_coeffs[n], dtype=complex)
    check("zero product form",
          float(np.max(np.abs(rec - ref))) / max(np.max(np.abs(ref)), 1.0) < 1e-8)
    uniq = dbar.uniqueness_crosscheck(ops, p2, grid, min(3, n))
    check("moment identities",
          uniq["max_orthogonality_residual"] < 1e-8
          and uniq["normalization_deviation"] < 1e-8)
    if isinstance(geom, DiskWithCavities) and len(geom.cavities) == 1:
        ds, trajs = schwarz.zero_attractor_candidates(p)
        check("trajectory residual",
              all(t.max_residual < 1e-3 for t in trajs) and len(trajs) > 0)
    write_json(out / "verify.json", {"failures": failures,
                                     "passed": not failures})
    print(f"verify: {'PASS' if not failures else 'FAIL'}")
    return EXIT_OK if not failures else EXIT_INVARIANT


def _parse_quad(s):
    nr, nt, eps = s.split(",")
    return int(nr), int(nt), float(eps)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="chargedgauss",
        description="Equilibrium measures, planar orthogonal polynomials "
                    "and Schwarz-function trajectories for Gaussian weights "
                    "perturbed by point charges.")
    ap.add_argument("--config", help="JSON config path")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--quad", type=_parse_quad, default=None,
                    help="quadrature orders nr,nt,eps")
    ap.add_argument("--degree", type=int, default=None, help="degree n (or k)")
    ap.add_argument("--gamma", type=float, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("command", choices=["support", "orthopoly", "zeros",
                                        "dbar-check", "trajectory", "fekete",
                                        "compare", "verify", "pipeline"])
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    if args.gamma is not None:
        cfg.gamma = args.gamma
        cfg.N = None
    if args.seed is not None:
        cfg.seed = args.seed
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    handlers = {"support": cmd_support, "orthopoly": cmd_orthopoly,
                "zeros": cmd_zeros, "dbar-check": cmd_dbar_check,
                "trajectory": cmd_trajectory, "fekete": cmd_fekete,
                "compare": cmd_compare, "verify": cmd_verify,
                "pipeline": cmd_pipeline}
    try:
        return handlers[args.command](cfg, out, args)
    except UnsupportedGeometry as e:
        print(f"unsupported configuration: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except equilibrium.NoRootError as e:
        print(f"unsupported configuration: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
