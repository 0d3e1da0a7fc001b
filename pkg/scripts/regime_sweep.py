#!/usr/bin/env python3
"""Phase-diagram sweep of Riemann-problem regimes.

Classifies (u1, sigma1, k) grids as classical, delta-shock, or neither,
and writes one CSV per k value for plotting.
"""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

import numpy as np

from deltashock.riemann import regime_sweep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="regime_sweep_out")
    ap.add_argument("--ks", type=float, nargs="+", default=[0.1, 0.5, 1.0])
    ap.add_argument("--n", type=int, default=81, help="grid points per axis")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    u1s = np.linspace(-4.0, 4.0, args.n)
    u1s = u1s[u1s != 0.0]
    s1s = np.linspace(-4.0, 4.0, args.n)
    for k in args.ks:
        rows = regime_sweep(u1s, s1s, [k])
        tag = f"{k:g}".replace(".", "p")
        path = out / f"regimes_k{tag}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["u1", "sigma1", "k", "regime"])
            writer.writerows(rows)
        counts = {}
        for *_, regime in rows:
            counts[regime] = counts.get(regime, 0) + 1
        print(f"k = {k:g}: " + ", ".join(f"{r}={n}" for r, n in sorted(counts.items())))


if __name__ == "__main__":
    main()
