"""Husimi snapshots with pseudoclassical branches for the general, C1, C2 and PT-gain cases."""

import argparse
import sys

from pseudorotor.cli import main

CASES = {
    "general": ["r=1", "s=4", "omega=1"],
    "c1": ["r=1", "s=3", "omega=3"],
    "c2": ["r=1", "s=4", "omega=2"],
    "pt": ["r=1", "s=4", "omega=1", "lam=0.2", "p0=0", "theta0=0"],
}

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/husimi")
    ap.add_argument("--t-max", type=int, default=3)
    args = ap.parse_args()
    status = 0
    for name, overrides in CASES.items():
        argv = ["husimi-overlay", "--out", f"{args.out}/{name}", "--override", f"t_max={args.t_max}"]
        for o in overrides:
            argv += ["--override", o]
        print(f"== {name}")
        status = max(status, main(argv))
    sys.exit(status)
