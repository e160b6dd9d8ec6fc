#!/usr/bin/env python3
"""Measurement-only sweep (J = h = 0 during evolution, gamma*dt = 5e-4).

Times are recorded in units of gamma*t; the crossing of S/ln N locates the
subvolume-to-area transition of the measurement-only dynamics.
"""

import sys

from kitaev_qsd.cli import main

ARGS = [
    "entropy-sweep",
    "--N", "16", "32", "64", "128",
    "--alpha", "0", "0.5", "1", "1.2", "1.4", "1.6", "1.8", "2", "2.2", "2.6", "3",
    "--measurement-only",
    "--nr", "48",
    "--steps", "50000",
    "--seed", "20240502",
    "--out", "runs/measurement_only",
]

if __name__ == "__main__":
    raise SystemExit(main(ARGS + sys.argv[1:]))
