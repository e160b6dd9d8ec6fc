#!/usr/bin/env python3
"""Entropy-scaling sweep at stronger monitoring (gamma = 0.5)."""

import sys

from kitaev_qsd.cli import main

ARGS = [
    "entropy-sweep",
    "--N", "16", "32", "64", "128",
    "--alpha", "0", "0.5", "1", "1.5", "2", "2.5", "3", "4",
    "--gamma", "0.5",
    "--nr", "48",
    "--steps", "16000",
    "--seed", "20240504",
    "--out", "runs/strong_monitoring",
]

if __name__ == "__main__":
    raise SystemExit(main(ARGS + sys.argv[1:]))
