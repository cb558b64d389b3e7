"""Command-line driver.

Every command prints a JSON document (indented) or, without ``--json``, a
short human-readable summary.  ``--out FILE`` also writes the JSON document to
``FILE``.  Exit codes: 0 success, 1 precondition error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

import numpy as np

from . import io
from .errors import NumericalError, PreconditionError

log = logging.getLogger("conetwist")


def _cmd_admissible(args) -> dict:
    from .pants import find_admissible, is_admissible
    rep = io.rep_from_json(io.load_json(args.rep))
    dec = find_admissible(rep, tol=args.tol)
    return {"curves": [[i + 1 for i in c.block] for c in dec.curves],
            "admissible": is_admissible(rep, dec, args.tol)}


def _cmd_twist(args) -> dict:
    from .flows import flow
    rep = io.rep_from_json(io.load_json(args.rep))
    spec = io.flow_from_json(io.load_json(args.flow), rep.presentation.size)
    return {"representation": io.rep_to_json(flow(rep, spec))}


def _parse_block(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _cmd_split(args) -> dict:
    from .coords import split_conjugator, split_deform
    from .flows import SplitData
    from .algebra import classify
    rep = io.rep_from_json(io.load_json(args.rep))
    split = SplitData.from_block(rep.presentation.size, [i - 1 for i in _parse_block(args.curve)])
    out = split_deform(rep, split, args.sign, args.length)
    conj = classify(split_conjugator(rep, split, args.sign, args.length))
    return {"representation": io.rep_to_json(out),
            "conjugator": {"tag": conj.tag, "translation_length": conj.translation_length}}


def _cmd_coords(args) -> dict:
    from .coords import psi_coordinates, tau_coordinates
    chart = io.chart_from_json(io.load_json(args.chart))
    rep = io.rep_from_json(io.load_json(args.rep))
    out = io.coordinates_to_json(tau_coordinates(chart, rep))
    if any(s is not None for s in chart.split_signs):
        cd = psi_coordinates(chart, rep, args.tol)
        out["cone_angles"] = cd.alphas.tolist()
        out["lengths"] = cd.lengths.tolist()
    return out


def _complex_and_path(args):
    cx = io.cone_complex_from_json(io.load_json(args.complex))
    path = io.path_from_json(io.load_json(args.path), cx)
    return cx, path


def _cmd_cone_angle(args) -> dict:
    from .cone import winding_along
    cx, path = _complex_and_path(args)
    w = winding_along(cx, path)
    return {"cone_angle": abs(w.winding), "winding": w.winding, "rotation_angle": w.rotation_angle,
            "axis": w.axis.tolist()}


def _cmd_splittable(args) -> dict:
    from .cone import is_splittable
    cx, path = _complex_and_path(args)
    res = is_splittable(cx, path)
    return res._asdict()


def _cmd_limit(args) -> dict:
    from .experiments import LimitConfig, grid_csv, limit_experiment
    cfg = io.load_json(args.config) if args.config else {}
    csv_path = cfg.pop("csv", None)
    report = limit_experiment(LimitConfig(**cfg))
    if csv_path:
        with open(csv_path, "w") as fh:
            fh.write(grid_csv(report.ns, report.distances))
    return report.to_dict()


def _cmd_check(args) -> dict:
    from .experiments import run_checks
    return run_checks(args.suite, args.seed)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conetwist", description=__doc__.splitlines()[0])
    p.add_argument("--tol", type=float, default=1e-8, help="numerical tolerance (default 1e-8)")
    p.add_argument("--json", action="store_true", help="print the full JSON document")
    p.add_argument("--out", help="also write the JSON document to this file")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("admissible", help="find an admissible pants decomposition")
    s.add_argument("--rep", required=True)
    s.set_defaults(func=_cmd_admissible)

    s = sub.add_parser("twist", help="apply a composite twist flow")
    s.add_argument("--rep", required=True)
    s.add_argument("--flow", required=True)
    s.set_defaults(func=_cmd_twist)

    s = sub.add_parser("split", help="split along a standard curve")
    s.add_argument("--rep", required=True)
    s.add_argument("--curve", required=True, help="1-based block, e.g. '2,3'")
    s.add_argument("--sign", type=int, choices=(-1, 1), required=True)
    s.add_argument("--length", type=float, required=True)
    s.set_defaults(func=_cmd_split)

    s = sub.add_parser("coords", help="action-angle coordinates in a chart")
    s.add_argument("--chart", required=True)
    s.add_argument("--rep", required=True)
    s.set_defaults(func=_cmd_coords)

    for name, func, text in (("cone-angle", _cmd_cone_angle, "cone angle along a path"),
                             ("splittable", _cmd_splittable, "splitting condition along a path")):
        s = sub.add_parser(name, help=text)
        s.add_argument("--complex", required=True)
        s.add_argument("--path", required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("limit", help="Dehn-twist limit experiment")
    s.add_argument("--config", help="JSON config (LimitConfig fields, optional 'csv' path)")
    s.set_defaults(func=_cmd_limit)

    s = sub.add_parser("check", help="run a property suite")
    s.add_argument("--suite", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_check)
    return p


def _summary(result: dict) -> str:
    lines = []
    for k, v in result.items():
        if isinstance(v, (dict, list)) and len(str(v)) > 100:
            v = f"<{type(v).__name__} of {len(v)}>"
        lines.append(f"{k}: {v}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with np.errstate(all="ignore"):
            result = args.func(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    text = io.dump_json(result, args.out)
    print(text if args.json else _summary(io.to_jsonable(result)))
    if args.command == "check" and not result.get("passed", True):
        log.warning("suite %s has failing properties", args.suite)
    return 0


if __name__ == "__main__":
    sys.exit(main())
