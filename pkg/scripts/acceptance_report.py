#!/usr/bin/env python3
"""Run the acceptance suite and show one line per criterion.

Thin wrapper over pytest so the per-criterion PASS lines (printed by the
tests themselves) stay visible; exits with pytest's status.
"""

import subprocess
import sys
from pathlib import Path


def main() -> int:
    root = Path(__file__).resolve().parent.parent
    cmd = [sys.executable, "-m", "pytest",
           str(root / "tests" / "test_acceptance.py"), "-v", "-s"]
    return subprocess.call(cmd)


if __name__ == "__main__":
    sys.exit(main())
