"""Immersed elasticity convergence: plate with hole and manufactured square plate.

    python3 scripts/elasticity_convergence.py [--p 2] [--levels 4] [--out results/]
"""
from __future__ import annotations

import argparse
import os
from dataclasses import dataclass

from cutquad.cases import BACKENDS
from cutquad.elasticity.benchmarks import ELASTICITY_CASES, convergence_order, convergence_study, format_elasticity_csv


@dataclass
class Config:
    p: int = 2
    levels: int = 4
    out: str | None = None

    @property
    def h(self) -> list[float]:
        return [0.25 / 2**k for k in range(self.levels)]


def run(cfg: Config) -> None:
    for case in ELASTICITY_CASES:
        results = []
        for b in BACKENDS:
            res = convergence_study(case, b, cfg.p, cfg.h)
            results += res
            errs = [r.rel_l2_error for r in res]
            order = convergence_order(cfg.h, errs)
            print(f"{case:13s} {b:10s} " + " ".join(f"{e:9.2e}" for e in errs) + f"  order {order:.3f}")
        if cfg.out:
            os.makedirs(cfg.out, exist_ok=True)
            with open(os.path.join(cfg.out, f"elasticity_{case}.csv"), "w", newline="") as fh:
                fh.write(format_elasticity_csv(results))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--out", default=None)
    ns = ap.parse_args()
    run(Config(ns.p, ns.levels, ns.out))
