"""Area convergence of the circle and semicircle on both backends.

    python3 scripts/area_convergence.py [--q 3] [--out results/]
"""
from __future__ import annotations

import argparse
import os
from dataclasses import dataclass, field

from cutquad.cases import BACKENDS, get_case
from cutquad.integration import area_convergence_study, format_csv, is_monotone_decreasing


@dataclass
class Config:
    cases: tuple[str, ...] = ("circle", "semicircle")
    h: list[float] = field(default_factory=lambda: [1 / 4, 1 / 8, 1 / 16, 1 / 32, 1 / 64])
    q: int = 3
    out: str | None = None


def run(cfg: Config) -> None:
    for name in cfg.cases:
        case = get_case(name)
        records = []
        for b in BACKENDS:
            recs = area_convergence_study(case.region(b), case.area, cfg.h, cfg.q, b)
            records += recs
            errs = [r.rel_error for r in recs]
            print(f"{name:10s} {b:10s} " + " ".join(f"{e:9.2e}" for e in errs) + ("  monotone" if is_monotone_decreasing(errs) else "  NOT monotone"))
        if cfg.out:
            os.makedirs(cfg.out, exist_ok=True)
            with open(os.path.join(cfg.out, f"area_{name}.csv"), "w", newline="") as fh:
                fh.write(format_csv(records))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--out", default=None, help="directory for CSV output")
    ns = ap.parse_args()
    run(Config(q=ns.q, out=ns.out))
