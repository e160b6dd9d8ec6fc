#!/usr/bin/env python3
"""Entropy-scaling sweep with Hamiltonian (gamma = 0.1).

Produces ensemble.csv + per-point series for the S(N), S/N and S/ln N
panels.  Production-scale settings; expect several hours per size 128 on a
single core.  Any extra arguments are forwarded to the CLI (e.g. --nr 8
--steps 4000 for a quick desk run).
"""

import sys

from kitaev_qsd.cli import main

ARGS = [
    "entropy-sweep",
    "--N", "16", "32", "64", "128",
    "--alpha", "0", "0.5", "1", "1.5", "2", "2.5", "3", "3.5", "4", "5", "6",
    "--gamma", "0.1",
    "--nr", "48",
    "--steps", "16000",
    "--seed", "20240501",
    "--out", "runs/entropy_scaling",
]

if __name__ == "__main__":
    raise SystemExit(main(ARGS + sys.argv[1:]))
