"""Line (101 steps) and triangle (46 steps) sweeps on both backends.

    python3 scripts/robustness_sweep.py [--out results/]
"""
from __future__ import annotations

import argparse
import os
import time
from dataclasses import dataclass

from cutquad.cases import BACKENDS
from cutquad.integration import StudyFailure, format_csv, robustness_sweep


@dataclass
class Config:
    line_steps: int = 101
    triangle_steps: int = 46
    q: int = 3
    h: float = 0.25
    out: str | None = None


def run(cfg: Config) -> int:
    failures = 0
    for case, steps in (("line", cfg.line_steps), ("triangle", cfg.triangle_steps)):
        for b in BACKENDS:
            t0 = time.perf_counter()
            try:
                recs = robustness_sweep(case, steps, cfg.q, b, cfg.h)
            except StudyFailure as exc:
                failures += 1
                print(f"{case:8s} {b:10s} FAILED: {exc}")
                continue
            worst = max(r.rel_error for r in recs)
            print(f"{case:8s} {b:10s} {steps} steps, max rel error {worst:.2e}, {time.perf_counter() - t0:.1f} s")
            if cfg.out:
                os.makedirs(cfg.out, exist_ok=True)
                with open(os.path.join(cfg.out, f"sweep_{case}_{b}.csv"), "w", newline="") as fh:
                    fh.write(format_csv(recs))
    return failures


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default=None)
    raise SystemExit(1 if run(Config(out=ap.parse_args().out)) else 0)
