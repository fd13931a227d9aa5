#!/usr/bin/env python3
"""Run the full verification battery and write reports under out/.

Produces the composite JSON report plus the individual CSV sweeps that back
the sharpness table; everything is deterministic, so reruns overwrite with
identical bytes.
"""

from __future__ import annotations

import pathlib
import sys

from hardy_sphere.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "out"

SWEEPS = [
    ("f1", "shrp1", 5, "2"), ("f1", "shrp2", 5, "2"), ("f1", "shrp3", 7, "2"),
    ("f3", "shrp1", 5, "2"), ("f3", "shrp2", 5, "2"), ("f3", "shrp3", 5, "2"),
    ("fc1", "shrp1", 3, None), ("fc1", "shrp2", 3, None),
    ("fc2", "shrp1", 3, None), ("fc2", "shrp2", 3, None), ("fc2", "shrp3", 3, None),
]


def run() -> int:
    OUT.mkdir(exist_ok=True)
    worst = 0
    worst = max(worst, main(["report-all", "--out", str(OUT / "report_all.json")]))
    for ineq, form, n, p in SWEEPS:
        args = ["sweep", "--ineq", ineq, "--form", form, "--n", str(n),
                "--format", "csv", "--out", str(OUT / f"{ineq}{form}_n{n}.csv")]
        if p is None:
            args += ["--regime", "crit"]
        else:
            args += ["--p", p]
        worst = max(worst, main(args))
    for n, p in (("7", "2"), ("5", "2"), ("4", "2")):
        worst = max(worst, main(["counterexample", "--n", n, "--p", p,
                                 "--format", "csv",
                                 "--out", str(OUT / f"counterexample_n{n}.csv")]))
    print(f"reports written to {OUT}; worst exit status {worst}")
    return worst


if __name__ == "__main__":
    sys.exit(run())
