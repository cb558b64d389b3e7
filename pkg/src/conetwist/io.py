"""JSON serialization for representations, flows, charts, complexes and paths.

Conventions: generator indices in words and curve blocks are 1-based; a
complex number is ``[re, im]``; a 2x2 matrix is the list of its four entries
``[a, b, c, d]`` (row-major), each a ``[re, im]`` pair.  Triangle and edge
indices of complexes are 0-based array positions.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .errors import PreconditionError


# ---------------------------------------------------------------------------
# scalars and matrices
# ---------------------------------------------------------------------------

def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise PreconditionError(f"expected [re, im], got {v!r}")


def matrix_to_json(m) -> list:
    return [complex_to_json(x) for x in np.asarray(m).reshape(4)]


def matrix_from_json(v) -> np.ndarray:
    if len(v) != 4:
        raise PreconditionError("a matrix is four [re, im] entries")
    return np.array([complex_from_json(x) for x in v], dtype=np.complex128).reshape(2, 2)


def word_to_json(w) -> list:
    return [(i + 1) * e for i, e in w]


def word_from_json(v) -> tuple:
    from .groups import word_from_signed
    return word_from_signed(v)


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

def rep_to_json(rep) -> dict:
    pres = rep.presentation
    return {"kind": pres.kind, "size": pres.size, "matrices": [matrix_to_json(m) for m in rep.mats]}


def rep_from_json(obj: dict):
    from .groups import Presentation, Representation
    try:
        pres = Presentation(obj["kind"], int(obj["size"]))
        mats = np.stack([matrix_from_json(m) for m in obj["matrices"]])
    except KeyError as exc:
        raise PreconditionError(f"representation JSON misses {exc}") from exc
    return Representation(pres, mats)


# ---------------------------------------------------------------------------
# flows
# ---------------------------------------------------------------------------

def split_to_json(split) -> dict:
    from .flows import HNNData
    if isinstance(split, HNNData):
        return {"hnn": {"cut": [i + 1 for i in split.cut], "stable": word_to_json((split.stable,))[0],
                        "gamma_minus": word_to_json(split.gamma_minus),
                        "gamma_plus": word_to_json(split.gamma_plus)}}
    if split.curve is not None:
        return {"curve": [i + 1 for i in split.curve.block], "d": split.curve.d}
    return {"word": word_to_json(split.word), "side1": [i + 1 for i in split.side1],
            "side2": [i + 1 for i in split.side2]}


def split_from_json(obj: dict, d: int | None = None):
    from .flows import HNNData, SplitData
    if "curve" in obj:
        n = int(obj.get("d", d or 0))
        if not n:
            raise PreconditionError("curve needs the number of punctures 'd'")
        return SplitData.from_block(n, [i - 1 for i in obj["curve"]])
    if "hnn" in obj:
        h = obj["hnn"]
        (stable,) = word_from_json([h["stable"]])
        return HNNData(tuple(i - 1 for i in h["cut"]), stable, word_from_json(h["gamma_minus"]),
                       word_from_json(h["gamma_plus"]))
    if "word" in obj:
        return SplitData(word_from_json(obj["word"]), tuple(i - 1 for i in obj["side1"]),
                         tuple(i - 1 for i in obj["side2"]))
    raise PreconditionError("split JSON needs 'curve', 'word' or 'hnn'")


def flow_to_json(spec) -> dict:
    return {"steps": [dict(split_to_json(s), z=complex_to_json(z)) for s, z in spec.steps]}


def flow_from_json(obj: dict, d: int | None = None):
    from .flows import FlowSpec
    steps = []
    for st in obj["steps"]:
        steps.append((split_from_json(st, d), complex_from_json(st["z"])))
    return FlowSpec(tuple(steps))


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------

def chart_to_json(chart) -> dict:
    dec = chart.decomposition
    return {
        "base": rep_to_json(chart.base),
        "curves": [[i + 1 for i in c.block] for c in dec.curves],
        "ordering": [i + 1 for i in dec.ordering],
        "lift_signs": list(chart.lift_signs),
        "split_signs": list(chart.split_signs),
    }


def chart_from_json(obj: dict):
    from .coords import AngleChart
    from .pants import PantsDecomposition
    base = rep_from_json(obj["base"])
    d = base.presentation.size
    dec = None
    if obj.get("curves") is not None:
        order = obj.get("ordering")
        dec = PantsDecomposition(d, tuple(tuple(i - 1 for i in c) for c in obj["curves"]),
                                 None if order is None else tuple(i - 1 for i in order))
    return AngleChart.build(base, dec, alphas=obj.get("alphas"), lift_signs=obj.get("lift_signs"),
                            split_signs=obj.get("split_signs"))


def coordinates_to_json(c) -> dict:
    return {"boundary_traces": [complex_to_json(x) for x in c.boundary_traces],
            "curve_traces": [complex_to_json(x) for x in c.curve_traces],
            "tau": [complex_to_json(x) for x in c.tau]}


# ---------------------------------------------------------------------------
# complexes and paths
# ---------------------------------------------------------------------------

def cone_complex_to_json(cx) -> dict:
    return {
        "triangles": cx.triangles.tolist(),
        "gluings": [{"tri": g.tri, "edge": g.edge, "to_tri": g.to_tri, "to_edge": g.to_edge,
                     "rotation": matrix_to_json(g.rotation)} for g in cx.gluings],
        "cone_points": [{"angle": cp.angle, "loop_word": [list(x) for x in cp.loop],
                         "corner": list(cp.corner), "smooth": cp.smooth} for cp in cx.cone_points],
        "base_triangle": cx.base_triangle,
        "metadata": _jsonable(cx.metadata),
    }


def cone_complex_from_json(obj: dict):
    from . import cone
    if "construct" in obj:
        kind = obj["construct"]
        if kind == "double_square":
            return cone.double_square(float(obj.get("beta", 2 * math.pi / 3)))
        if kind == "double_polygon":
            return cone.double_polygon(obj["angles"], obj["edges"])
        if kind == "football":
            return cone.football(float(obj["alpha"]))
        raise PreconditionError(f"unknown complex constructor {kind!r}")
    glu = tuple(cone.Gluing(int(g["tri"]), int(g["edge"]), int(g["to_tri"]), int(g["to_edge"]),
                            matrix_from_json(g["rotation"])) for g in obj["gluings"])
    cps = tuple(cone.ConePoint(float(c["angle"]), tuple(tuple(int(v) for v in x) for x in c["loop_word"]),
                               tuple(int(v) for v in c["corner"]), bool(c.get("smooth", False)))
                for c in obj["cone_points"])
    return cone.ConeSurfaceComplex(np.array(obj["triangles"], dtype=np.float64), glu, cps,
                                   int(obj.get("base_triangle", 0)), dict(obj.get("metadata", {})))


def path_to_json(path) -> dict:
    return {"crossings": [{"triangle": t, "entry": a.tolist(), "exit": b.tolist()} for t, a, b in path.crossings]}


def path_from_json(obj: dict, cx=None):
    from . import cone
    if "construct" in obj:
        if cx is None:
            raise PreconditionError("constructed paths need the complex")
        kind = obj["construct"]
        if kind == "straight":
            return cone.straight_curve(cx, int(obj["p"]), int(obj["q"]), tuple(obj.get("start", (0.137, 0.291))))
        if kind == "equator":
            return cone.equator_curve(cx)
        if kind == "polyline":
            return cone.flat_polyline_curve(cx, [tuple(p) for p in obj["points"]])
        if kind == "football_circle":
            return cone.football_circle(cx, float(obj["r"]), float(obj.get("wiggle", 0.0)))
        raise PreconditionError(f"unknown path constructor {kind!r}")
    return cone.PathSpec(tuple((int(c["triangle"]), c["entry"], c["exit"]) for c in obj["crossings"]))


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

def _jsonable(x: Any):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        return float(x) if math.isfinite(x) else None
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return complex_to_json(x)
    return x


def to_jsonable(x: Any):
    """Recursively convert numpy and complex values into JSON-ready data (NaN becomes null)."""
    return _jsonable(x)


def load_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise PreconditionError(f"cannot read JSON from {path}: {exc}") from exc


def dump_json(obj: Any, path: str | Path | None = None) -> str:
    text = json.dumps(_jsonable(obj), indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
