"""Directed current <p>(t) of the PT-symmetric rotor for a sweep of detunings."""

import argparse
import sys

from pseudorotor.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/pt")
    ap.add_argument("--lam", type=float, default=0.01)
    ap.add_argument("--t-max", type=int, default=20)
    ap.add_argument("--deltas", default="1e-3,1e-2,1e-1")
    args = ap.parse_args()
    sys.exit(main(["pt-current", "--out", args.out, "--override", f"lam={args.lam}",
                   "--override", f"t_max={args.t_max}", "--override", f"deltas={args.deltas}"]))
