#!/usr/bin/env python3
"""Conversion-chain overhead versus target extent.

Runs the full hexagonal -> triangular -> kagome -> square chain for each
target extent t (a t x t square window) and tabulates how many hexagonal-
lattice faces and sites feed one square cell.  The face count climbs toward
8 (16 sites) as the shear-induced window waste amortizes; the raw patch
qubit ratio stays far above it because rectangular windows cannot hug the
sheared stage images.

t = 3 takes a few minutes; the default stops at 2.
"""

import argparse
import json
import sys
import time

from mqc_lab.lattices import chain_overhead_series


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-extent", type=int, default=2,
                    help="largest t to run (default 2; 3 is slow)")
    ap.add_argument("--json", default=None, help="also dump the rows here")
    args = ap.parse_args(argv)

    extents = range(1, args.max_extent + 1)
    t0 = time.time()
    series = chain_overhead_series(extents)
    rows = series["rows"]

    print(f"{'t':>3} {'patch ratio':>12} {'faces/cell':>11} {'sites/cell':>11}")
    for r in rows:
        print(f"{r['t']:>3} {r['patch_qubit_ratio']:>12.1f} "
              f"{r['hexagons_per_cell']:>11.3f} {r['sites_per_cell']:>11.3f}")
    fit = series.get("fit")
    if fit:
        print(f"\nfitted faces/cell asymptote: {fit['asymptote']:.3f} "
              f"(bulk value 8, sites 16)")
    print(f"elapsed: {time.time() - t0:.1f}s")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(series, fh, indent=2, sort_keys=True, default=float)
    return 0


if __name__ == "__main__":
    sys.exit(main())
