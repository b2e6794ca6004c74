"""Command-line front end.

    ssfrenet frame    --manifold e3 --curve "cos(s), sin(s), 0" --range 0:6.283:0.1
    ssfrenet classify --manifold r3m3 --curve "0, 2*s, 1" --range 0:2:0.01
    ssfrenet geodesic integrate   --manifold r3m3 --pos 0,0,0 --vel 0,2,0 --range 0:3:0.001
    ssfrenet geodesic closed-form --manifold h3m1 --c 0.5,2,0.1 --k 0 --l 0 --range -1:1:0.01
    ssfrenet geodesic verify      --manifold e3 --c 0,2,0,0,0,0 --range -2:2:0.001

Exit codes: 0 ok, 2 parse/usage error, 3 not unit-speed, 4 domain error,
5 constraint violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import geodesics as G
from .curve import parse_curve
from .errors import (
    ConstraintViolation, CurveSyntaxError, DomainError, EmptyRange, NotUnitSpeed, StepError,
)
from .frenet import Tolerances, apparatus_at, classify_interval, grid
from .manifolds import MODELS, get_model

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_PARSE, EXIT_SPEED, EXIT_DOMAIN, EXIT_CONSTRAINT = 0, 2, 3, 4, 5

FRAME_COLUMNS = ["s", "order", "kappa", "tau", "T1", "T2", "T3", "N1", "N2", "N3", "B1", "B2", "B3"]
TRAJECTORY_COLUMNS = ["s", "x", "y", "z", "vx", "vy", "vz", "residual"]
RICCATI_COLUMNS = ["s", "f", "transverse_speed_sq"]

# options whose values may legitimately start with '-'
_VALUE_OPTIONS = ("--range", "--c", "--pos", "--vel", "--k", "--l")


@dataclass
class RunConfig:
    command: str
    manifold: str
    curve: Optional[str] = None
    range: tuple = (0.0, 1.0, 0.01)
    tols: Tolerances = field(default_factory=Tolerances)
    format: str = "csv"
    output: Optional[str] = None
    mode: Optional[str] = None
    c: tuple = ()
    k: float = 0.0
    l: float = 0.0
    pos: Optional[tuple] = None
    vel: Optional[tuple] = None
    printed: bool = False


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be start:end:step, got {text!r}")
    try:
        start, end, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"non-numeric range {text!r}") from None
    if not step > 0:
        raise UsageError(f"range step must be positive, got {step!r}")
    if not start < end:
        raise UsageError(f"range start must be below end, got {text!r}")
    return start, end, step


def _floats(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def fmt(x) -> str:
    """17 significant digits, '.' separator, empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def _json_value(x):
    if x is None:
        return None
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return x if math.isfinite(x) else None


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=False, separators=(", ", ": "), allow_nan=False)


# -- rendering ----------------------------------------------------------


def render(columns: Sequence[str], rows: Sequence[Sequence], fmt_name: str, meta: dict) -> str:
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        return buf.getvalue()
    if fmt_name == "json":
        doc = dict(meta)
        doc["records"] = [{c: _json_value(v) for c, v in zip(columns, r)} for r in rows]
        return dump_json(doc) + "\n"
    # table
    cells = [list(columns)] + [[("" if v is None else f"{v:.10g}" if isinstance(v, float) else str(v)) for v in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = ["  ".join(c.rjust(wd) for c, wd in zip(row, widths)) for row in cells]
    head = [f"# {k}: {v}" for k, v in meta.items() if k != "summary"]
    summ = [f"# {k}: {v}" for k, v in meta.get("summary", {}).items()]
    return "\n".join(head + lines + summ) + "\n"


def _summary_text(summary: dict) -> str:
    return "".join(f"{k}: {fmt(v) if isinstance(v, float) else v}\n" for k, v in summary.items())


# -- commands -----------------------------------------------------------


def _frame_row(p) -> list:
    def comps(v):
        return list(v) if v is not None else [None, None, None]

    return [p.s, p.order, p.kappa, p.tau] + comps(p.T) + comps(p.N) + comps(p.B)


def cmd_frame(cfg: RunConfig):
    curve = parse_curve(cfg.curve)
    model = get_model(cfg.manifold)
    ss = grid(*cfg.range)
    rows = []
    speeds = []
    for s in ss:
        try:
            rows.append(_frame_row(apparatus_at(model, curve, s, cfg.tols)))
        except NotUnitSpeed as exc:
            speeds.extend(exc.speeds)
    if speeds:
        raise NotUnitSpeed("curve is not unit-speed on the grid", speeds)
    meta = {"command": "frame", "manifold": model.id, "curve": cfg.curve}
    return FRAME_COLUMNS, rows, meta, {}


def cmd_classify(cfg: RunConfig):
    model = get_model(cfg.manifold)
    cls = classify_interval(model, parse_curve(cfg.curve), cfg.range, cfg.tols)
    summary = {
        "order": cls.order,
        "kind": cls.kind,
        "kappa_min": cls.kappa_range[0],
        "kappa_max": cls.kappa_range[1],
        "tau_min": cls.tau_range[0] if cls.tau_range else None,
        "tau_max": cls.tau_range[1] if cls.tau_range else None,
        "singular_points": [float(s) for s in cls.singular_points],
    }
    return None, None, {"command": "classify", "manifold": model.id, "curve": cfg.curve}, summary


def _curve_rows(model, curve, ss, printed_check=True):
    rows = []
    for s in ss:
        jets = curve(s, 2)
        pos = [j.value for j in jets]
        vel = [j.derivative_value(1) for j in jets]
        r = G.residual(model, curve, s, check_speed=printed_check)
        rows.append([s, *pos, *vel, r])
    return rows


def _closed_form_curve(cfg: RunConfig, model):
    if model.id == "e3":
        if len(cfg.c) != 6:
            raise UsageError("E^3 closed form needs --c c1,c2,c3,c4,c5,c6")
        return G.e3_curve(G.E3GeodesicParams(*cfg.c))
    if model.id == "h3m1":
        if len(cfg.c) != 3:
            raise UsageError("H^3 closed form needs --c c1,c2,c3")
        return G.h3_curve(G.H3GeodesicParams(*cfg.c, k1=cfg.k, l1=cfg.l), printed=cfg.printed)
    return None


def _riccati_report(traj) -> dict:
    f = G.riccati_invariant(traj)
    c1, misfit = G.fit_riccati_c1(traj.s, f)
    ode_defect = float(np.max(np.abs(G.riccati_ode_defect(traj))))
    return {"riccati_c1": c1, "riccati_fit_error": misfit, "riccati_ode_defect": ode_defect}


def _h3_integrals_report(traj) -> dict:
    z3 = traj.position[:, 2] ** 3
    out = {}
    for name, col in (("first_integral_1", 0), ("first_integral_2", 1)):
        q = traj.velocity[:, col] / z3
        ref = max(abs(q[0]), 1e-300)
        out[name + "_rel_drift"] = float(np.max(np.abs(q - q[0])) / ref) if q[0] != 0 else float(np.max(np.abs(q)))
    return out


def cmd_geodesic(cfg: RunConfig):
    model = get_model(cfg.manifold)
    start, end, step = cfg.range
    meta = {"command": f"geodesic {cfg.mode}", "manifold": model.id}
    summary = {}

    if cfg.mode == "integrate":
        if cfg.pos is None or cfg.vel is None:
            raise UsageError("integrate needs --pos and --vel")
        traj = G.integrate(model, G.GeodesicState(cfg.pos, cfg.vel), end, step, s0=start, tols=cfg.tols)
        summary["unit_speed_drift"] = traj.drift
        summary["max_residual"] = float(traj.residual.max())
        if model.id == "r3m3":
            summary.update(_riccati_report(traj))
        elif model.id == "h3m1":
            summary.update(_h3_integrals_report(traj))
        return TRAJECTORY_COLUMNS, traj.records(), meta, summary

    if cfg.mode not in ("closed-form", "verify"):
        raise UsageError(f"unknown geodesic mode {cfg.mode!r}")

    if model.id == "r3m3":
        # only the Riccati first integral is known in closed form
        if cfg.mode == "closed-form":
            if len(cfg.c) != 1:
                raise UsageError("R^3(-3) closed form needs --c c1")
            p = G.R3RiccatiParams(cfg.c[0])
            rows = [[s, G.r3_riccati_f(p, s), G.r3_transverse_speed_sq(p, s)] for s in grid(*cfg.range)]
            return RICCATI_COLUMNS, rows, meta, summary
        if cfg.pos is None or cfg.vel is None:
            raise UsageError("verify on r3m3 integrates from --pos/--vel and fits the Riccati integral")
        traj = G.integrate(model, G.GeodesicState(cfg.pos, cfg.vel), end, step, s0=start, tols=cfg.tols)
        summary["unit_speed_drift"] = traj.drift
        summary["max_residual"] = float(traj.residual.max())
        summary.update(_riccati_report(traj))
        return TRAJECTORY_COLUMNS, traj.records(), meta, summary

    curve = _closed_form_curve(cfg, model)
    ss = grid(*cfg.range)
    unit = not cfg.printed
    rows = _curve_rows(model, curve, ss, printed_check=unit)
    summary["max_residual"] = max(r[-1] for r in rows)
    if model.id == "h3m1" and not cfg.printed:
        summary["printed_form_max_residual"] = max(
            G.residual(model, G.h3_curve(G.H3GeodesicParams(*cfg.c, k1=cfg.k, l1=cfg.l), printed=True),
                       s, check_speed=False)
            for s in ss
        )
    if cfg.mode == "verify":
        traj = G.integrate(model, G.state_from_curve(curve, ss[0]), ss[-1], step, s0=ss[0],
                           tols=cfg.tols, with_residual=False)
        closed = np.array([[j.value for j in curve(s, 0)] for s in traj.s])
        summary["max_integration_gap"] = float(np.max(np.abs(closed - traj.position)))
        summary["unit_speed_drift"] = traj.drift
    return TRAJECTORY_COLUMNS, rows, meta, summary


# -- argument handling --------------------------------------------------


def _join_negative_values(argv: List[str]) -> List[str]:
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ssfrenet", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, curve=True):
        p.add_argument("--manifold", required=True, choices=sorted(MODELS))
        if curve:
            p.add_argument("--curve", required=True, help='three comma-separated expressions in s')
        p.add_argument("--range", default="0:1:0.01", help="start:end:step (end included when hit)")
        p.add_argument("--tol-geo", type=float, default=Tolerances.geo)
        p.add_argument("--tol-tor", type=float, default=Tolerances.tor)
        p.add_argument("--tol-const", type=float, default=Tolerances.const)
        p.add_argument("--tol-speed", type=float, default=Tolerances.speed)
        p.add_argument("--format", choices=("csv", "json", "table"), default="csv")
        p.add_argument("-o", "--output", default=None, help="write records to this file")

    common(sub.add_parser("frame", help="Frenet apparatus on a grid"))
    common(sub.add_parser("classify", help="order and kind of a curve over an interval"))
    g = sub.add_parser("geodesic", help="integrate / evaluate / verify geodesics")
    g.add_argument("mode", choices=("integrate", "closed-form", "verify"))
    common(g, curve=False)
    g.add_argument("--c", default="", help="closed-form constants, comma separated")
    g.add_argument("--k", type=float, default=0.0)
    g.add_argument("--l", type=float, default=0.0)
    g.add_argument("--pos", default=None, help="initial position x,y,z")
    g.add_argument("--vel", default=None, help="initial velocity in chart coordinates")
    g.add_argument("--printed", action="store_true",
                   help="H^3: use the equal-weight g2 formula instead of the unit-speed one")
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        manifold=args.manifold,
        curve=getattr(args, "curve", None),
        range=parse_range(args.range),
        tols=Tolerances(args.tol_geo, args.tol_tor, args.tol_const, args.tol_speed),
        format=args.format,
        output=args.output,
    )
    if args.command == "geodesic":
        cfg.mode = args.mode
        cfg.c = _floats(args.c)
        cfg.k, cfg.l = args.k, args.l
        cfg.pos = _floats(args.pos) if args.pos else None
        cfg.vel = _floats(args.vel) if args.vel else None
        cfg.printed = args.printed
        for name in ("pos", "vel"):
            v = getattr(cfg, name)
            if v is not None and len(v) != 3:
                raise UsageError(f"--{name} needs 3 numbers")
    return cfg


COMMANDS = {"frame": cmd_frame, "classify": cmd_classify, "geodesic": cmd_geodesic}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        columns, rows, meta, summary = COMMANDS[cfg.command](cfg)
    except (CurveSyntaxError, UsageError, StepError, EmptyRange) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    except NotUnitSpeed as exc:
        print(f"error: NotUnitSpeed: {exc}", file=stderr)
        return EXIT_SPEED
    except ConstraintViolation as exc:
        print(f"error: ConstraintViolation: {exc}", file=stderr)
        return EXIT_CONSTRAINT
    except DomainError as exc:
        print(f"error: DomainError: {exc}", file=stderr)
        return EXIT_DOMAIN

    if columns is None:
        # single-record commands
        if cfg.format == "json":
            text = dump_json({**meta, **{k: _json_value(v) if not isinstance(v, (list, str)) else v
                                         for k, v in summary.items()}}) + "\n"
        elif cfg.format == "csv":
            cols = list(summary)
            vals = [";".join(fmt(x) for x in v) if isinstance(v, list) else (v if isinstance(v, str) else fmt(v))
                    for v in summary.values()]
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(cols)
            w.writerow(vals)
            text = buf.getvalue()
        else:
            text = _summary_text(summary)
        _emit(text, cfg, stdout)
        return EXIT_OK

    if cfg.format == "json":
        meta = dict(meta)
        meta["summary"] = {k: _json_value(v) for k, v in summary.items()}
        _emit(render(columns, rows, "json", meta), cfg, stdout)
    else:
        meta = dict(meta, summary=summary)
        _emit(render(columns, rows, cfg.format, meta), cfg, stdout)
        if summary and cfg.format == "csv":
            stderr.write(_summary_text(summary))
    return EXIT_OK


def _emit(text, cfg, stdout):
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = config_from_args(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
