"""Quantum vs pseudoclassical momentum spread for a sweep of detunings (general case)."""

import argparse
import sys

from pseudorotor.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/variance")
    ap.add_argument("--t-max", type=int, default=12)
    ap.add_argument("--deltas", default="1e-3,1e-2,1e-1")
    args = ap.parse_args()
    sys.exit(main(["variance-compare", "--out", args.out,
                   "--override", f"t_max={args.t_max}", "--override", f"deltas={args.deltas}"]))
