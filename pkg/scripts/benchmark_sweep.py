#!/usr/bin/env python3
"""Scheme-comparison tables for the 13-panel indoor scenario.

Writes three CSVs under the output directory:

  m0_sweep_b5.csv   objective vs. elements-per-side, 5-bit phase codebooks
  m0_sweep_b7.csv   same sweep with 7-bit codebooks
  b0_sweep.csv      objective vs. codebook bits at fixed panel size,
                    with the continuous-phase scheme as the reference

Each CSV has one row per (value, scheme); the plotting tool consumes these
directly.
"""

import argparse
import dataclasses
import os
import sys
import time

from irs_routing.evaluation import solver_sweep_rows, write_rows_csv
from irs_routing.scene import build_bundled_scenario
from irs_routing.solver import SCHEMES


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--m0-values", default="8,12,16,20,24,28,32")
    ap.add_argument("--b0-values", default="1,2,3,4,5,6,7")
    ap.add_argument("--m0-fixed", type=int, default=24,
                    help="elements per side for the codebook sweep")
    ap.add_argument("--q", type=int, default=5)
    args = ap.parse_args()

    scn = build_bundled_scenario()
    os.makedirs(args.out_dir, exist_ok=True)
    m0_values = [int(v) for v in args.m0_values.split(",") if v.strip()]
    b0_values = [int(v) for v in args.b0_values.split(",") if v.strip()]

    t0 = time.perf_counter()
    for bits in (5, 7):
        base = dataclasses.replace(scn, b1=bits, b2=bits)
        rows, users = solver_sweep_rows(
            lambda v: dataclasses.replace(base, m1=int(v), m2=int(v)),
            "m0", m0_values, list(SCHEMES), q=args.q,
        )
        path = os.path.join(args.out_dir, f"m0_sweep_b{bits}.csv")
        write_rows_csv(rows, users, path)
        print(f"wrote {path} ({len(rows)} rows)")

    fixed = dataclasses.replace(scn, m1=args.m0_fixed, m2=args.m0_fixed)
    rows, users = solver_sweep_rows(
        lambda v: dataclasses.replace(fixed, b1=int(v), b2=int(v)),
        "b0", b0_values, ["maxmin", "continuous"], q=args.q,
    )
    path = os.path.join(args.out_dir, "b0_sweep.csv")
    write_rows_csv(rows, users, path)
    print(f"wrote {path} ({len(rows)} rows)")
    print(f"total {time.perf_counter() - t0:.1f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
