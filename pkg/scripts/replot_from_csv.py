#!/usr/bin/env python3
"""Rebuild an overlay SVG from previously written CSV outputs, without
recomputing anything.

Reads geometry.json plus any zeros_n*.csv / trajectories.csv /
attractor.csv / fekete_n*.csv found in DIR and writes replot.svg there.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from chargedgauss.cli import _support_svg
from chargedgauss.equilibrium import DiskWithCavities, ExteriorMap


def _load_points(path: Path, xk: str, yk: str) -> np.ndarray:
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return np.array([float(r[xk]) + 1j * float(r[yk]) for r in rows])


def _cplx(x):
    return complex(x["re"], x["im"]) if isinstance(x, dict) else complex(x)


def _load_geometry(path: Path):
    d = json.loads(path.read_text())
    if d["kind"] == "disk_with_cavities":
        cavs = tuple((_cplx(c["center"]), c["radius"]) for c in d["cavities"])
        return DiskWithCavities(outer_radius=d["outer_radius"], cavities=cavs)
    return ExteriorMap(rho=_cplx(d["rho"]).real, u=_cplx(d["u"]),
                       v=_cplx(d["v"]), A=_cplx(d["A"]))


def run(dirpath: Path) -> int:
    geom = _load_geometry(dirpath / "geometry.json")
    extras = []
    for path in sorted(dirpath.glob("trajectories.csv")) \
            + sorted(dirpath.glob("attractor.csv")):
        extras.append(("line", _load_points(path, "x", "y"), "red"))
    for path in sorted(dirpath.glob("zeros_n*.csv")):
        extras.append(("dots", _load_points(path, "re", "im"), "blue"))
    for path in sorted(dirpath.glob("fekete_n*.csv")):
        extras.append(("dots", _load_points(path, "re", "im"), "green"))
    _support_svg(geom, extras, dirpath / "replot.svg")
    print(f"replot: wrote {dirpath / 'replot.svg'}")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("dir", help="output directory with geometry.json + CSVs")
    args = ap.parse_args()
    sys.exit(run(Path(args.dir)))
