"""Diffusion time against detuning for the two symmetric cases, starting from |0>.

The smallest detuning dominates the cost; expect tens of minutes on one core.
"""

import argparse
import sys

from pseudorotor.cli import main

CASES = {"c1": ["r=1", "s=3", "omega=3"], "c2": ["r=1", "s=4", "omega=2"]}

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/tdiff")
    ap.add_argument("--cases", default="c1,c2")
    ap.add_argument("--deltas", default="1e-2,10^-2.4,10^-2.8,10^-3.2")
    ap.add_argument("--n-points", type=int, default=10_000)
    ap.add_argument("--t-max", type=int, default=60_000)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    status = 0
    for name in args.cases.split(","):
        argv = ["sweep-tdiff", "--out", f"{args.out}/{name}",
                "--override", f"deltas={args.deltas}", "--override", f"n_points={args.n_points}",
                "--override", f"t_max={args.t_max}", "--override", f"jobs={args.jobs}"]
        for o in CASES[name]:
            argv += ["--override", o]
        print(f"== {name}")
        status = max(status, main(argv))
    sys.exit(status)
