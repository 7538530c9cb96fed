#!/usr/bin/env python3
"""Width/monotone scan across the stock families, via the CLI.

Prints each family's verdict line; mirrors
  mqc-lab analyze --family ... --sizes ... --measures ...
with a compact summary instead of full JSON.
"""

import argparse
import io
import json
import sys
from contextlib import redirect_stdout

from mqc_lab import cli

SCANS = [
    ("ghz", "2..7", "rank_width"),
    ("linear_cluster", "2..8", "rank_width"),
    ("ring", "3..8", "rank_width"),
    ("tree", "4..9", "rank_width"),
    ("w", "2..6", "geometric_measure"),
    ("grid", "2..4", "rank_width"),
]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    for family, sizes, measures in SCANS:
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = cli.main(["analyze", "--family", family, "--sizes", sizes,
                             "--measures", measures, "--seed", str(args.seed)])
        rep = json.loads(buf.getvalue())
        for v in rep["verdicts"]:
            values = [r["value"] for r in rep["results"]
                      if r["measure"] == v["measure"] and r["value"] is not None]
            trail = ", ".join(f"{x:.4g}" for x in values)
            cite = f"  [{v['criterion']}]" if v["criterion"] else ""
            print(f"{family:>15} {v['measure']:<22} [{trail}] "
                  f"-> {v['verdict']}{cite} (exit {code})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
