#!/usr/bin/env python3
"""Expectation-distribution histograms and bifurcation diagnostics.

One long trajectory per (N, alpha); horizon 1e4 time units as in the
distribution analysis.  Expect several hours per N = 64 point on one core.
"""

import sys

from kitaev_qsd.cli import main

ARGS = [
    "bifurcation",
    "--N", "16", "32", "64",
    "--alpha", "0", "2", "3", "4",
    "--gamma", "0.1",
    "--horizon", "10000",
    "--seed", "20240503",
    "--out", "runs/distributions",
]

if __name__ == "__main__":
    raise SystemExit(main(ARGS + sys.argv[1:]))
