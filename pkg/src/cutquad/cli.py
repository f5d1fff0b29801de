"""Command-line front end: area studies, sweeps, elasticity runs and node dumps."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cases import BACKENDS, BUILTIN, get_case
from .geometry import BackgroundMesh, GeometryError
from .integration import (
    StudyFailure,
    StudyRecord,
    domain_quadrature,
    format_csv,
    robustness_sweep,
)
from .specfile import SpecError, load_interface

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SPEC = 3
EXIT_BACKEND = 4
EXIT_STUDY = 5

AREA_LEVELS = ("1/4", "1/8", "1/16", "1/32", "1/64")
ELASTICITY_LEVELS = ("1/4", "1/8", "1/16", "1/32")
SWEEP_STEPS = {"line": 101, "triangle": 46}

EPILOG = f"""\
exit codes:
  {EXIT_OK}  success
  {EXIT_USAGE}  usage error (bad flags or values)
  {EXIT_SPEC}  interface-spec file could not be parsed (message names line and field)
  {EXIT_BACKEND}  backend does not match the interface description
  {EXIT_STUDY}  a study step failed (message names the step)

environment:
  CUTQUAD_THREADS  worker threads for per-cell work (default 1); output does not depend on it
"""


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


@dataclass
class RunConfig:
    command: str
    case: str | None = None
    spec: str | None = None
    backend: str = "both"
    q: int = 3
    p: int = 2
    h: list[float] = field(default_factory=list)
    steps: int | None = None
    output: str | None = None
    seed: int = 0
    reference: float | None = None


def parse_h(text: str) -> float:
    try:
        val = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid mesh size {text!r}") from None
    if val <= 0:
        raise argparse.ArgumentTypeError(f"mesh size must be positive, got {text!r}")
    return val


def _positive_int(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if val < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutquad",
        description="Cut-cell quadrature for implicit and parametric interfaces.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, backends=("implicit", "parametric", "both"), default_backend="both"):
        sp.add_argument("--backend", choices=backends, default=default_backend)
        sp.add_argument("--q", type=_positive_int, default=3, help="Gauss points per direction")
        sp.add_argument("-o", "--output", help="output CSV path (default: stdout)")
        sp.add_argument("--seed", type=int, default=0, help="recorded for reproducibility; the studies are deterministic")

    area = sub.add_parser("area", help="area convergence study", epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    src = area.add_mutually_exclusive_group(required=True)
    src.add_argument("--case", choices=sorted(BUILTIN))
    src.add_argument("--spec", help="interface-spec YAML file")
    area.add_argument("--h", type=parse_h, nargs="+", default=None, help="mesh sizes, e.g. 1/4 0.125")
    area.add_argument("--reference", type=float, default=None, help="reference area (built-in cases know theirs)")
    common(area)

    sweep = sub.add_parser("sweep", help="robustness sweep of a moving interface", epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sweep.add_argument("--case", choices=sorted(SWEEP_STEPS), required=True)
    sweep.add_argument("--steps", type=_positive_int, default=None, help="default 101 (line) or 46 (triangle)")
    sweep.add_argument("--h", type=parse_h, nargs=1, default=[0.25])
    common(sweep)

    el = sub.add_parser("elasticity", help="immersed elasticity convergence", epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    el.add_argument("--case", choices=("plate-hole", "square-plate"), required=True)
    el.add_argument("--p", type=_positive_int, default=2, help="spline degree")
    el.add_argument("--h", type=parse_h, nargs="+", default=None)
    common(el)
    el.set_defaults(q=None)

    pts = sub.add_parser("points", help="dump quadrature nodes as x,y,w,cell_i,cell_j", epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    src = pts.add_mutually_exclusive_group(required=True)
    src.add_argument("--case", choices=sorted(BUILTIN))
    src.add_argument("--spec")
    pts.add_argument("--h", type=parse_h, nargs=1, default=[0.25])
    common(pts, backends=("implicit", "parametric"), default_backend=None)
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command, backend=ns.backend, output=ns.output, seed=ns.seed)
    cfg.case = getattr(ns, "case", None)
    cfg.spec = getattr(ns, "spec", None)
    cfg.q = ns.q
    cfg.p = getattr(ns, "p", 2)
    cfg.steps = getattr(ns, "steps", None)
    cfg.reference = getattr(ns, "reference", None)
    default = {"area": AREA_LEVELS, "elasticity": ELASTICITY_LEVELS}.get(ns.command, ("1/4",))
    cfg.h = ns.h if ns.h is not None else [parse_h(x) for x in default]
    return cfg


def _backends(choice: str | None) -> tuple[str, ...]:
    return BACKENDS if choice in (None, "both") else (choice,)


def _interfaces(cfg: RunConfig):
    """(backend, region, reference, domain) for each requested backend."""
    if cfg.spec is not None:
        try:
            spec = load_interface(cfg.spec)
        except OSError as exc:
            raise CliError(EXIT_SPEC, f"cannot read interface spec: {exc}") from exc
        except SpecError as exc:
            raise CliError(EXIT_SPEC, f"{cfg.spec}: {exc}") from exc
        wanted = _backends(cfg.backend) if cfg.backend else (spec.kind,)
        if wanted != (spec.kind,):
            raise CliError(EXIT_BACKEND, f"{cfg.spec} describes an interface of type {spec.kind} and cannot run the {'/'.join(wanted)} backend")
        ref = float("nan") if cfg.reference is None else cfg.reference
        return [(spec.kind, spec.region, ref, spec.domain)]
    case = get_case(cfg.case)
    ref = case.area if cfg.reference is None else cfg.reference
    return [(b, case.region(b), ref, None) for b in _backends(cfg.backend)]


def _mesh(h: float, domain) -> BackgroundMesh:
    try:
        if domain is None:
            return BackgroundMesh.unit_square(h)
        return BackgroundMesh.from_h(h, domain.origin, domain.width, domain.height)
    except GeometryError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from exc


def run_area(cfg: RunConfig) -> str:
    ifaces = _interfaces(cfg)
    records = []
    for k, h in enumerate(cfg.h):
        for backend, region, ref, domain in ifaces:
            mesh = _mesh(h, domain)
            try:
                dq = domain_quadrature(mesh, region, cfg.q)
            except Exception as exc:
                raise CliError(EXIT_STUDY, f"step {k} (h={h:g}, {backend}): {type(exc).__name__}: {exc}") from exc
            if ref != ref:  # no reference available
                rec = StudyRecord(k, h, backend, cfg.q, dq.rule.total, ref, float("nan"), len(dq))
            else:
                rec = StudyRecord.make(k, h, backend, cfg.q, dq.rule.total, ref, len(dq))
            records.append(rec)
    return format_csv(records)


def run_sweep(cfg: RunConfig) -> str:
    steps = cfg.steps or SWEEP_STEPS[cfg.case]
    if steps < 2:
        raise CliError(EXIT_USAGE, "a sweep needs at least two steps")
    per_backend = []
    for backend in _backends(cfg.backend):
        try:
            per_backend.append(robustness_sweep(cfg.case, steps, cfg.q, backend, cfg.h[0]))
        except StudyFailure as exc:
            raise CliError(EXIT_STUDY, f"{cfg.case} sweep, {backend} backend: {exc}") from exc
        except GeometryError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from exc
    rows = [rec for group in zip(*per_backend) for rec in group]
    return format_csv(rows)


def run_elasticity(cfg: RunConfig) -> str:
    from .elasticity.benchmarks import format_elasticity_csv, run_benchmark

    results = []
    for h in cfg.h:
        _mesh(h, None)
        for backend in _backends(cfg.backend):
            try:
                results.append(run_benchmark(cfg.case, backend, cfg.p, h, q=cfg.q))
            except Exception as exc:
                raise CliError(EXIT_STUDY, f"{cfg.case} (h={h:g}, {backend}): {type(exc).__name__}: {exc}") from exc
    return format_elasticity_csv(results)


def run_points(cfg: RunConfig) -> str:
    if cfg.case is not None and cfg.backend is None:
        raise CliError(EXIT_USAGE, "points needs --backend implicit or parametric for a built-in case")
    (backend, region, _, domain), = _interfaces(cfg)
    mesh = _mesh(cfg.h[0], domain)
    try:
        rule = domain_quadrature(mesh, region, cfg.q).rule
    except Exception as exc:
        raise CliError(EXIT_STUDY, f"{type(exc).__name__}: {exc}") from exc
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("x", "y", "w", "cell_i", "cell_j"))
    f = lambda v: format(float(v), ".17g")  # noqa: E731
    for (x, y), wt, (i, j) in zip(rule.points, rule.weights, rule.cells):
        w.writerow((f(x), f(y), f(wt), int(i), int(j)))
    return buf.getvalue()


COMMANDS = {"area": run_area, "sweep": run_sweep, "elasticity": run_elasticity, "points": run_points}


def run(cfg: RunConfig) -> int:
    """Execute a configured command; returns the exit status."""
    try:
        text = COMMANDS[cfg.command](cfg)
    except CliError as exc:
        print(f"cutquad: error: {exc}", file=sys.stderr)
        return exc.code
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    return run(_config(ns))


if __name__ == "__main__":
    sys.exit(main())
