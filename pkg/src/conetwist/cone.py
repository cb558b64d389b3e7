"""Triangulated spherical cone-surfaces and developing maps.

A complex is a list of spherical triangles, each given in its own chart by
three unit vectors in counter-clockwise order (seen from outside the sphere),
together with edge gluings.  Edge ``e`` of a triangle joins its vertices ``e``
and ``e + 1``.  A gluing ``(t, e) -> (t2, e2)`` stores an SU(2) element ``U``
taking the chart of ``t2`` to the position adjacent to ``t`` across edge ``e``:
``U`` maps vertex ``e2`` of ``t2`` to vertex ``e + 1`` of ``t`` and vertex
``e2 + 1`` to vertex ``e``.

The holonomy of a loop (a closed sequence of edge crossings starting in the
base triangle) is the product of the gluing elements in crossing order.  The
signs of the lifts are fixed once, by a linear solve over GF(2), so that loops
around smooth vertices have holonomy ``+I`` and the first ``d - 1`` cone-point
loops have the natural lift ``cos(a/2) I + sin(a/2) K(v)`` of the rotation by
their cone angle ``a`` about the developed vertex ``v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .algebra import (
    IDENTITY, inverse, is_central, quaternion, so3, su2_axis, su2_from_so3, su2_rotation,
)
from .errors import DegenerateError, PreconditionError
from .groups import Representation, punctured_sphere

EDGE_TOL = 1e-10
GB_TOL = 1e-8
VERTEX_AVOID = 1e-6
SAMPLE_SPACING = 0.01
TRANSVERSALITY_MARGIN = 1e-8


# ---------------------------------------------------------------------------
# spherical triangle geometry
# ---------------------------------------------------------------------------

def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    return v / np.linalg.norm(v)


def arc_length(a, b) -> float:
    return math.atan2(np.linalg.norm(np.cross(a, b)), float(np.dot(a, b)))


def corner_angle(p, q, r) -> float:
    """Angle at ``p`` of the spherical triangle ``p q r``."""
    tq = q - np.dot(p, q) * p
    tr = r - np.dot(p, r) * p
    return math.atan2(float(np.dot(np.cross(tq, tr), p)), float(np.dot(tq, tr)))


def triangle_area(p, q, r) -> float:
    """Spherical excess from the three corner angles."""
    return corner_angle(p, q, r) + corner_angle(q, r, p) + corner_angle(r, p, q) - math.pi


def rotate_tangent(t, axis, angle) -> np.ndarray:
    """Rotate tangent vector ``t`` counter-clockwise about the unit normal ``axis``."""
    return math.cos(angle) * t + math.sin(angle) * np.cross(axis, t)


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gluing:
    tri: int
    edge: int
    to_tri: int
    to_edge: int
    rotation: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ConePoint:
    """A marked vertex: its cone angle and its generator loop from the base triangle.

    ``loop`` lists the crossings ``(triangle, exit edge)``.  ``smooth`` marks
    a regular point (angle 2 pi) kept as a puncture.
    """

    angle: float
    loop: tuple
    corner: tuple  # (triangle, corner index) of one incident corner
    smooth: bool = False


@dataclass(frozen=True, eq=False)
class ConeSurfaceComplex:
    triangles: np.ndarray
    gluings: tuple
    cone_points: tuple
    base_triangle: int = 0
    metadata: dict = field(default_factory=dict, compare=False)
    _table: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tris = np.array(self.triangles, dtype=np.float64)
        if tris.ndim != 3 or tris.shape[1:] != (3, 3):
            raise PreconditionError("triangles must have shape (n, 3, 3)")
        tris = tris / np.linalg.norm(tris, axis=2)[:, :, None]
        for k, (p, q, r) in enumerate(tris):
            if np.dot(np.cross(p, q), r) <= 0:
                raise PreconditionError(f"triangle {k} is not counter-clockwise")
        tris.setflags(write=False)
        object.__setattr__(self, "triangles", tris)
        table = {}
        for g in self.gluings:
            rot = np.asarray(g.rotation, dtype=np.complex128)
            table[(g.tri, g.edge)] = (g.to_tri, g.to_edge, rot)
        for (t, e), (t2, e2, rot) in table.items():
            back = table.get((t2, e2))
            if back is None or back[:2] != (t, e):
                raise PreconditionError(f"gluing of ({t},{e}) has no matching reverse gluing")
            r = so3(rot)
            p = tris[t]
            q = tris[t2]
            if (np.abs(r @ q[e2] - p[(e + 1) % 3]).max() > 1e-9
                    or np.abs(r @ q[(e2 + 1) % 3] - p[e]).max() > 1e-9):
                raise PreconditionError(f"gluing ({t},{e})->({t2},{e2}) does not match edge endpoints")
        if len(table) != 3 * len(tris):
            raise PreconditionError("every edge must be glued")
        object.__setattr__(self, "_table", table)

    # -- combinatorics -----------------------------------------------------

    def neighbor(self, t: int, e: int):
        return self._table[(t, e)]

    def vertex_loop(self, t: int, c: int) -> list:
        """Crossings circling corner ``c`` of triangle ``t`` counter-clockwise."""
        out = []
        cur_t, cur_c = t, c
        while True:
            e = (cur_c - 1) % 3
            out.append((cur_t, e))
            t2, e2, _ = self._table[(cur_t, e)]
            cur_t, cur_c = t2, e2
            if (cur_t, cur_c) == (t, c):
                return out
            if len(out) > 4 * len(self.triangles):
                raise PreconditionError("vertex loop does not close")

    def vertices(self) -> list[list[tuple]]:
        """Vertex classes as lists of ``(triangle, corner)``."""
        seen = set()
        out = []
        for t in range(len(self.triangles)):
            for c in range(3):
                if (t, c) in seen:
                    continue
                cls = [(tt, (e + 1) % 3) for tt, e in self.vertex_loop(t, c)]
                seen.update(cls)
                out.append(cls)
        return out

    def corner_angle(self, t: int, c: int) -> float:
        p = self.triangles[t]
        return corner_angle(p[c], p[(c + 1) % 3], p[(c + 2) % 3])

    def vertex_angle(self, cls) -> float:
        return sum(self.corner_angle(t, c) for t, c in cls)

    def area(self) -> float:
        return float(sum(triangle_area(*p) for p in self.triangles))

    def gauss_bonnet_defect(self) -> float:
        """``|sum_v (2 pi - angle_v) - (4 pi - area)|`` (sphere, Euler characteristic 2)."""
        curv = sum(2 * math.pi - self.vertex_angle(v) for v in self.vertices())
        return abs(curv - (4 * math.pi - self.area()))

    def edge_length_defect(self) -> float:
        worst = 0.0
        for (t, e), (t2, e2, _) in self._table.items():
            p, q = self.triangles[t], self.triangles[t2]
            worst = max(worst, abs(arc_length(p[e], p[(e + 1) % 3]) - arc_length(q[e2], q[(e2 + 1) % 3])))
        return worst

    def cone_angle_defect(self) -> float:
        """Largest mismatch between recorded cone angles and corner-angle sums."""
        worst = 0.0
        classes = self.vertices()
        for cp in self.cone_points:
            cls = next(v for v in classes if tuple(cp.corner) in v)
            worst = max(worst, abs(self.vertex_angle(cls) - cp.angle))
        return worst

    # -- holonomy ----------------------------------------------------------

    def loop_holonomy(self, loop: Sequence[tuple]) -> np.ndarray:
        m = IDENTITY.copy()
        t = self.base_triangle
        for tt, e in loop:
            if tt != t:
                raise PreconditionError(f"loop crossing {(tt, e)} does not start in the current triangle {t}")
            t, _, rot = self._table[(tt, e)]
            m = m @ rot
        if t != self.base_triangle:
            raise PreconditionError("loop does not return to the base triangle")
        return m

    def transformed(self, u: np.ndarray) -> "ConeSurfaceComplex":
        """All charts rotated by ``u`` and gluings conjugated accordingly."""
        r = so3(u)
        ui = inverse(u)
        glu = tuple(Gluing(g.tri, g.edge, g.to_tri, g.to_edge, u @ g.rotation @ ui) for g in self.gluings)
        return ConeSurfaceComplex(self.triangles @ r.T, glu, self.cone_points, self.base_triangle, dict(self.metadata))


def natural_lift(axis, angle: float) -> np.ndarray:
    return su2_rotation(axis, angle)


def _gf2_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``a x = b`` over GF(2) (one solution; raises when inconsistent)."""
    a = a.copy() % 2
    b = b.copy() % 2
    rows, cols = a.shape
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        b[[r, piv]] = b[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
                b[i] ^= b[r]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    if np.any(b[r:]):
        raise PreconditionError("lift-sign system is inconsistent")
    x = np.zeros(cols, dtype=np.uint8)
    for i, c in enumerate(piv_cols):
        x[c] = b[i]
    return x


def _tail_to(cx: ConeSurfaceComplex, target: int) -> list:
    """Breadth-first crossing sequence from the base triangle to ``target``."""
    from collections import deque
    prev = {cx.base_triangle: None}
    dq = deque([cx.base_triangle])
    while dq:
        t = dq.popleft()
        if t == target:
            break
        for e in range(3):
            t2 = cx.neighbor(t, e)[0]
            if t2 not in prev:
                prev[t2] = (t, e)
                dq.append(t2)
    out = []
    t = target
    while prev[t] is not None:
        out.append(prev[t])
        t = prev[t][0]
    return out[::-1]


def _reverse(cx: ConeSurfaceComplex, crossings: Sequence[tuple]) -> list:
    out = []
    for t, e in reversed(crossings):
        t2, e2, _ = cx.neighbor(t, e)
        out.append((t2, e2))
    return out


def based_vertex_loop(cx: ConeSurfaceComplex, t: int, c: int) -> tuple:
    tail = _tail_to(cx, t)
    return tuple(tail + cx.vertex_loop(t, c) + _reverse(cx, tail))


def _loop_vertex_position(cx: ConeSurfaceComplex, loop: Sequence[tuple], corner: tuple) -> np.ndarray:
    """Developed position of ``corner`` along ``loop``: first time the loop enters its triangle."""
    m = IDENTITY.copy()
    t = cx.base_triangle
    if t == corner[0]:
        return cx.triangles[t][corner[1]]
    for tt, e in loop:
        t, _, rot = cx.neighbor(tt, e)
        m = m @ rot
        if t == corner[0]:
            break
    return so3(m) @ cx.triangles[corner[0]][corner[1]]


def fix_lift_signs(cx: ConeSurfaceComplex) -> ConeSurfaceComplex:
    """Flip gluing signs so loop holonomies are the natural lifts (see module docstring)."""
    pairs = {}
    for (t, e), (t2, e2, _) in cx._table.items():
        key = min((t, e), (t2, e2))
        pairs.setdefault(key, len(pairs))
    pair_of = {k: pairs[min(k, (v[0], v[1]))] for k, v in cx._table.items()}
    constraints = []
    classes = cx.vertices()
    cone_classes = []
    for cp in cx.cone_points:
        cone_classes.append(next(v for v in classes if tuple(cp.corner) in v))
    for v in classes:
        if any(v is cc for cc in cone_classes):
            continue
        loop = based_vertex_loop(cx, *v[0])
        constraints.append((loop, IDENTITY))
    for cp, cc in zip(cx.cone_points[:-1], cone_classes[:-1]):
        if cp.smooth:
            constraints.append((cp.loop, IDENTITY))
            continue
        pos = _loop_vertex_position(cx, cp.loop, cp.corner)
        constraints.append((cp.loop, natural_lift(pos, cp.angle)))
    a = np.zeros((len(constraints), len(pairs)), dtype=np.uint8)
    b = np.zeros(len(constraints), dtype=np.uint8)
    for i, (loop, target) in enumerate(constraints):
        h = cx.loop_holonomy(loop)
        if np.abs(h - target).max() < 1e-8:
            b[i] = 0
        elif np.abs(h + target).max() < 1e-8:
            b[i] = 1
        else:
            raise PreconditionError("loop holonomy is not a lift of the expected rotation")
        for t, e in loop:
            a[i, pair_of[(t, e)]] ^= 1
    x = _gf2_solve(a, b)
    glu = []
    for g in cx.gluings:
        flip = x[pair_of[(g.tri, g.edge)]]
        glu.append(Gluing(g.tri, g.edge, g.to_tri, g.to_edge, -g.rotation if flip else g.rotation))
    return ConeSurfaceComplex(cx.triangles, tuple(glu), cx.cone_points, cx.base_triangle, dict(cx.metadata))


def holonomy_of_complex(cx: ConeSurfaceComplex) -> Representation:
    """Punctured-sphere representation given by the cone-point loops."""
    mats = np.stack([cx.loop_holonomy(cp.loop) for cp in cx.cone_points])
    if len(mats) < 3:
        raise PreconditionError("need at least three marked points for a punctured-sphere presentation")
    try:
        return Representation(punctured_sphere(len(mats)), mats)
    except PreconditionError as exc:
        raise PreconditionError(f"inconsistent gluing chain: {exc}") from exc


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _glue_pair(glu: list, t: int, e: int, t2: int, e2: int, rot: np.ndarray) -> None:
    glu.append(Gluing(t, e, t2, e2, rot))
    glu.append(Gluing(t2, e2, t, e, inverse(rot)))


def football(alpha: float, sectors: int | None = None) -> ConeSurfaceComplex:
    """Spherical suspension of a circle of length ``alpha``.

    Cone points sit at the poles ``N = e_z`` and ``S = -e_z``.  Because a
    punctured-sphere presentation needs three punctures, the smooth equator
    vertex ``e_0`` is kept as a marked point of angle 2 pi (holonomy ``I``).
    Sector ``k`` spans azimuths ``[k alpha/m, (k+1) alpha/m]``; charts may
    overlap on the sphere when ``alpha > 2 pi``.  The base triangle is the
    upper triangle of sector 0.
    """
    if not alpha > 0:
        raise PreconditionError("football angle must be positive")
    m = sectors or max(4, int(math.ceil(alpha / (math.pi / 2))))
    north, south = np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0])
    eq = [np.array([math.cos(k * alpha / m), math.sin(k * alpha / m), 0.0]) for k in range(m + 1)]
    tris = [(north, eq[k], eq[k + 1]) for k in range(m)] + [(south, eq[k + 1], eq[k]) for k in range(m)]
    glu: list = []
    wrap = su2_rotation([0, 0, 1], alpha)
    for k in range(m - 1):
        _glue_pair(glu, k, 2, k + 1, 0, IDENTITY)          # upper sectors
        _glue_pair(glu, m + k, 0, m + k + 1, 2, IDENTITY)  # lower sectors
    _glue_pair(glu, m - 1, 2, 0, 0, wrap)
    _glue_pair(glu, 2 * m - 1, 0, m, 2, wrap)
    for k in range(m):
        _glue_pair(glu, k, 1, m + k, 1, IDENTITY)
    cx = ConeSurfaceComplex(np.array(tris), tuple(glu), (), 0)
    loop_n = tuple(cx.vertex_loop(0, 0))
    loop_s = tuple([(0, 1)] + cx.vertex_loop(m, 0) + [(m, 1)])
    loop_e = tuple(cx.vertex_loop(0, 1))
    cps = (
        ConePoint(alpha, loop_n, (0, 0)),
        ConePoint(2 * math.pi, loop_e, (0, 1), smooth=True),
        ConePoint(alpha, loop_s, (m, 0)),
    )
    cx = ConeSurfaceComplex(cx.triangles, cx.gluings, cps, 0, {"kind": "football", "alpha": alpha, "sectors": m})
    return fix_lift_signs(cx)


def polygon_vertices(angles: Sequence[float], edges: Sequence[float], tol: float = 1e-9) -> np.ndarray:
    """Vertices of a convex spherical polygon from its angles and side lengths.

    Walks along the sides turning left by ``pi - angle`` at each vertex,
    checks closure, then places the polygon with its centroid at ``e_z`` and
    the first vertex at azimuth ``pi/4``.
    """
    n = len(angles)
    if n < 3 or len(edges) != n:
        raise PreconditionError("polygon needs n >= 3 angles and n edges")
    if any(not 0 < a < math.pi for a in angles) or any(not 0 < e < math.pi for e in edges):
        raise PreconditionError("angles and edges must lie in (0, pi)")
    v = np.array([0.0, 0.0, 1.0])
    d = np.array([1.0, 0.0, 0.0])
    verts = [v]
    for j in range(n):
        e = edges[j]
        v_next = math.cos(e) * v + math.sin(e) * d
        arrive = -math.sin(e) * v + math.cos(e) * d
        d = rotate_tangent(arrive, v_next, math.pi - angles[(j + 1) % n])
        v = v_next
        verts.append(v)
    if np.abs(verts[-1] - verts[0]).max() > tol or np.abs(d - np.array([1.0, 0.0, 0.0])).max() > tol:
        raise PreconditionError("polygon data is not realizable (walk does not close)")
    verts = np.array(verts[:-1])
    c = unit(verts.sum(axis=0))
    r = _rotation_taking(c, np.array([0.0, 0.0, 1.0]))
    verts = verts @ r.T
    az = math.atan2(verts[0, 1], verts[0, 0])
    rz = so3(su2_rotation([0, 0, 1], math.pi / 4 - az))
    verts = verts @ rz.T
    for j in range(n):
        if np.dot(np.cross(verts[j], verts[(j + 1) % n]), [0, 0, 1]) <= 0:
            raise PreconditionError("polygon is not convex around its centroid")
    return verts


def _rotation_taking(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    axis = np.cross(a, b)
    s = np.linalg.norm(axis)
    if s < 1e-15:
        if np.dot(a, b) > 0:
            return np.eye(3)
        return so3(su2_rotation([1, 0, 0], math.pi))
    return so3(su2_rotation(axis / s, math.atan2(s, np.dot(a, b))))


def double_polygon(angles: Sequence[float], edges: Sequence[float]) -> ConeSurfaceComplex:
    """Double of a convex spherical polygon along its boundary.

    Top triangles ``T_j = (c, v_j, v_{j+1})`` (indices ``0 .. n-1``), bottom
    triangles ``B_j = (s c, s v_{j+1}, s v_j)`` (indices ``n .. 2n-1``) where
    ``s`` is the reflection in the plane through ``c`` and ``v_0``.  The seam
    gluing across ``v_j v_{j+1}`` is the reflection in that side's plane
    composed with ``s``.  Cone point ``j`` is ``v_j`` with angle
    ``2 angles[j]``; its loop runs from ``T_0`` counter-clockwise around ``c``
    to ``T_j``, circles ``v_j`` and comes back.
    """
    verts = polygon_vertices(angles, edges)
    n = len(verts)
    c = np.array([0.0, 0.0, 1.0])
    m = unit(np.cross(c, verts[0]))
    refl = np.eye(3) - 2 * np.outer(m, m)
    top = [(c, verts[j], verts[(j + 1) % n]) for j in range(n)]
    bottom = [(refl @ c, refl @ verts[(j + 1) % n], refl @ verts[j]) for j in range(n)]
    glu: list = []
    for j in range(n):
        _glue_pair(glu, j, 2, (j + 1) % n, 0, IDENTITY)
        _glue_pair(glu, n + (j + 1) % n, 2, n + j, 0, IDENTITY)
        side = unit(np.cross(verts[j], verts[(j + 1) % n]))
        seam = (np.eye(3) - 2 * np.outer(side, side)) @ refl
        _glue_pair(glu, j, 1, n + j, 1, su2_from_so3(seam))
    cx = ConeSurfaceComplex(np.array(top + bottom), tuple(glu), (), 0)
    cps = []
    for j in range(n):
        tail = [(k, 2) for k in range(j)]
        loop = tuple(tail + cx.vertex_loop(j, 1) + _reverse(cx, tail))
        cps.append(ConePoint(2 * angles[j], loop, (j, 1)))
    meta = {"kind": "double_polygon", "angles": list(map(float, angles)), "edges": list(map(float, edges))}
    cx = ConeSurfaceComplex(cx.triangles, cx.gluings, tuple(cps), 0, meta)
    return fix_lift_signs(cx)


def square_edge_length(beta: float) -> float:
    """Side of the regular spherical square with angle ``beta``.

    The square is four isosceles triangles with apex angle ``pi/2`` at the
    center and base angles ``beta/2``; the law of cosines for angles gives
    ``cos(side) = cot(beta/2)^2``.
    """
    if not math.pi / 2 < beta < math.pi:
        raise PreconditionError("a regular spherical square needs beta in (pi/2, pi)")
    return math.acos(1.0 / math.tan(beta / 2) ** 2)


def double_square(beta: float = 2 * math.pi / 3) -> ConeSurfaceComplex:
    cx = double_polygon([beta] * 4, [square_edge_length(beta)] * 4)
    half = math.tan(arc_length([0, 0, 1], cx.triangles[0][1])) / math.sqrt(2)
    meta = dict(cx.metadata, kind="double_square", beta=beta, half_width=half)
    return ConeSurfaceComplex(cx.triangles, cx.gluings, cx.cone_points, 0, meta)


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------

def barycentric(tri: np.ndarray, x) -> np.ndarray:
    """Coordinates ``b`` (summing to 1) with ``x`` proportional to ``b @ tri``."""
    b = np.linalg.solve(np.asarray(tri).T, np.asarray(x, dtype=np.float64))
    return b / b.sum()


def from_barycentric(tri: np.ndarray, b) -> np.ndarray:
    return unit(np.asarray(b, dtype=np.float64) @ np.asarray(tri))


def _on_edge(b: np.ndarray, tol: float = 1e-9):
    """Edge index when ``b`` lies on an edge (the opposite coordinate vanishes)."""
    zero = [i for i in range(3) if abs(b[i]) <= tol]
    if len(zero) == 1:
        return (zero[0] + 1) % 3
    if len(zero) > 1:
        raise PreconditionError("path passes through a vertex")
    return None


@dataclass(frozen=True, eq=False)
class PathSpec:
    """Closed piecewise-geodesic path given by triangle crossings.

    Each crossing is ``(triangle, entry, exit)`` in barycentric coordinates.
    An exit on an edge continues in the glued triangle at the image point; an
    exit in the interior is a bend and the next crossing stays in the same
    triangle starting at that point.
    """

    crossings: tuple

    def __post_init__(self):
        cr = tuple((int(t), np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))
                   for t, a, b in self.crossings)
        if not cr:
            raise PreconditionError("empty path")
        object.__setattr__(self, "crossings", cr)

    def validate(self, cx: ConeSurfaceComplex, tol: float = 1e-8) -> None:
        n = len(self.crossings)
        for k, (t, a, b) in enumerate(self.crossings):
            for pt in (a, b):
                if abs(pt.sum() - 1) > 1e-9 or pt.min() < -1e-9:
                    raise PreconditionError(f"crossing {k}: invalid barycentric point {pt}")
                big = np.sort(pt)[1:]
                if big.min() < VERTEX_AVOID:
                    raise PreconditionError(f"crossing {k}: point within {VERTEX_AVOID} of a vertex")
            t2, a2, _ = self.crossings[(k + 1) % n]
            e = _on_edge(b)
            if e is None:
                if t2 != t or np.abs(a2 - b).max() > tol:
                    raise PreconditionError(f"crossing {k}: interior bend must continue in the same triangle")
                continue
            nt, _, rot = cx.neighbor(t, e)
            if nt != t2:
                raise PreconditionError(f"crossing {k}: exit edge leads to triangle {nt}, not {t2}")
            here = from_barycentric(cx.triangles[t], b)
            there = so3(rot) @ from_barycentric(cx.triangles[t2], a2)
            if np.abs(here - there).max() > tol:
                raise PreconditionError(f"crossing {k}: entry point does not match the glued exit point")

    def rotated(self, k: int) -> "PathSpec":
        """The same closed path starting at crossing ``k``."""
        return PathSpec(self.crossings[k:] + self.crossings[:k])


def path_from_points(cx: ConeSurfaceComplex, pieces: Sequence[tuple]) -> PathSpec:
    """PathSpec from ``(triangle, entry point, exit point)`` given in chart coordinates."""
    cr = []
    for t, x, y in pieces:
        tri = cx.triangles[t]
        a, b = barycentric(tri, x), barycentric(tri, y)
        a[np.abs(a) < 1e-12] = 0.0
        b[np.abs(b) < 1e-12] = 0.0
        cr.append((t, a / a.sum(), b / b.sum()))
    p = PathSpec(tuple(cr))
    p.validate(cx)
    return p


class DevelopedPath(NamedTuple):
    starts: np.ndarray
    ends: np.ndarray
    holonomy: np.ndarray


def develop_path(cx: ConeSurfaceComplex, path: PathSpec) -> DevelopedPath:
    """Unroll the path into the chart of its first triangle."""
    path.validate(cx)
    m = IDENTITY.copy()
    r = np.eye(3)
    starts, ends = [], []
    for t, a, b in path.crossings:
        tri = cx.triangles[t]
        starts.append(r @ from_barycentric(tri, a))
        ends.append(r @ from_barycentric(tri, b))
        e = _on_edge(b)
        if e is not None:
            _, _, rot = cx.neighbor(t, e)
            m = m @ rot
            r = so3(m)
    return DevelopedPath(np.array(starts), np.array(ends), m)


def _arc_axis_distance(a: np.ndarray, b: np.ndarray, n: np.ndarray) -> float:
    """Smallest ``|n x p|`` over points ``p`` of the minor arc ``a b``."""
    best = min(np.linalg.norm(np.cross(n, a)), np.linalg.norm(np.cross(n, b)))
    normal = np.cross(a, b)
    s = np.linalg.norm(normal)
    if s < 1e-15:
        return float(best)
    normal /= s
    for sgn in (1, -1):
        p = sgn * n - np.dot(sgn * n, normal) * normal
        pn = np.linalg.norm(p)
        if pn < 1e-15:
            return 0.0
        p /= pn
        if np.dot(np.cross(a, p), normal) >= 0 and np.dot(np.cross(p, b), normal) >= 0:
            best = min(best, abs(float(np.dot(n, normal))))
    return float(best)


class Winding(NamedTuple):
    axis: np.ndarray
    winding: float
    rotation_angle: float


def winding_along(cx: ConeSurfaceComplex, path: PathSpec) -> Winding:
    """Signed azimuthal winding of the developed path about the axis of its holonomy.

    The axis ``n`` is oriented so that the holonomy is ``cos(phi/2) I +
    sin(phi/2) K(n)`` with ``sin(phi/2) > 0``.
    """
    dev = develop_path(cx, path)
    h = dev.holonomy
    if is_central(h, 1e-9):
        raise DegenerateError("closing holonomy is central: the curve is singular for d(theta)")
    n = su2_axis(h)
    dist = min(_arc_axis_distance(a, b, n) for a, b in zip(dev.starts, dev.ends))
    if dist < VERTEX_AVOID:
        raise DegenerateError("developed path meets the rotation axis")
    w = float(np.sum(_kernels.active.azimuth_increments(dev.starts, dev.ends, n)))
    phi = 2 * math.atan2(np.linalg.norm(quaternion(h)[1:]), quaternion(h)[0])
    return Winding(n, w, phi)


def cone_angle_along(cx: ConeSurfaceComplex, path: PathSpec) -> float:
    """``|integral of d(theta)|`` along the developed path."""
    return abs(winding_along(cx, path).winding)


class Splittability(NamedTuple):
    """Result of :func:`is_splittable`.

    ``sign`` is the split sign for the curve oriented so that its winding is
    positive.  ``block_sign`` is the sign to use with a split whose side1 lies
    to the left of the path as given (it differs from ``sign`` when the given
    orientation has negative winding).
    """

    splittable: bool
    sign: int | None
    margin: float
    undetermined: bool
    cone_angle: float
    block_sign: int | None = None


def is_splittable(cx: ConeSurfaceComplex, path: PathSpec, margin: float = TRANSVERSALITY_MARGIN,
                  spacing: float = SAMPLE_SPACING) -> Splittability:
    """Transversality of the path to ``d(theta)`` and the geometric split sign.

    The rate ``d(theta)(u)`` is sampled at spacing ``spacing`` on every arc.
    When it has one sign everywhere the path is splittable; the axis is then
    oriented so that the winding is positive and ``s = -sign`` of the
    holonomy's quaternion component along that oriented axis.
    """
    wd = winding_along(cx, path)
    dev = develop_path(cx, path)
    rates = _kernels.active.arc_rates(dev.starts, dev.ends, wd.axis, spacing)
    lo, hi = float(rates[:, 0].min()), float(rates[:, 1].max())
    smallest = float(np.min(np.minimum(np.abs(rates[:, 0]), np.abs(rates[:, 1]))))
    angle = abs(wd.winding)
    if lo > margin or hi < -margin:
        oriented = wd.axis if wd.winding > 0 else -wd.axis
        comp = float(np.dot(quaternion(dev.holonomy)[1:], oriented))
        sign = -1 if comp > 0 else 1
        return Splittability(True, sign, smallest, False, angle, sign if wd.winding > 0 else -sign)
    undetermined = smallest <= margin
    return Splittability(False, None, smallest, undetermined, angle)


# ---------------------------------------------------------------------------
# straight curves on the doubled square
# ---------------------------------------------------------------------------

def _gnomonic(x: float, y: float) -> np.ndarray:
    return unit([x, y, 1.0])


def _fold(u: float, h: float) -> tuple[float, int]:
    """Reflect the unfolded coordinate into ``[-h, h]``; also return the sheet parity."""
    k = math.floor((u + h) / (2 * h))
    r = (u + h) - 2 * h * k
    return (r - h if k % 2 == 0 else h - r), k % 2


def _square_triangle(x: float, y: float) -> int:
    if y >= abs(x):
        return 0
    if x <= -abs(y):
        return 1
    if y <= -abs(x):
        return 2
    return 3


def straight_curve(cx: ConeSurfaceComplex, p: int, q: int, start=(0.137, 0.291)) -> PathSpec:
    """Closed curve of slope ``q/p`` on the doubled square (see ``flat_polyline_curve``)."""
    if math.gcd(p, q) != 1:
        raise PreconditionError("slope must be given by coprime integers")
    h = _half_width(cx)
    x0, y0 = start
    return flat_polyline_curve(cx, [(x0, y0), (x0 + 4 * h * p, y0 + 4 * h * q)])


def _half_width(cx: ConeSurfaceComplex) -> float:
    if cx.metadata.get("kind") != "double_square":
        raise PreconditionError("flat curves are defined on the doubled square")
    return cx.metadata["half_width"]


def flat_polyline_curve(cx: ConeSurfaceComplex, points: Sequence[tuple]) -> PathSpec:
    """Closed curve on the doubled square from a polyline in unfolded coordinates.

    The two faces are parametrized by gnomonic coordinates ``(x, y)`` in
    ``[-h, h]^2`` (a bottom point sits at the reflected position).  The plane
    of unfolded coordinates ``(X, Y)`` maps onto the surface by reflecting
    back into the square; the parity of the number of reflections picks the
    face.  The polyline must end at its start translated by a multiple of
    ``4h`` in each coordinate.  Each segment is cut at seams and at the
    diagonals ``|x| = |y|`` that bound the triangles; between cuts it is a
    straight segment in a gnomonic chart, which is a great-circle arc.
    """
    h = _half_width(cx)
    pts = np.asarray(points, dtype=np.float64)
    shift = (pts[-1] - pts[0]) / (4 * h)
    if len(pts) < 2 or np.abs(shift - np.round(shift)).max() > 1e-12 or not np.any(np.round(shift)):
        raise PreconditionError("polyline must close up to a nonzero translation by multiples of 4h")
    n = 4

    def point(x_, y_):
        x, sx = _fold(x_, h)
        y, sy = _fold(y_, h)
        return x, y, (sx + sy) % 2

    pieces = []
    for s0, s1 in zip(pts, pts[1:]):
        d = s1 - s0
        events = {0.0, 1.0}
        for axis in (0, 1):
            if d[axis] == 0:
                continue
            lo, hi = sorted((s0[axis], s1[axis]))
            for k in range(math.floor((lo - h) / (2 * h)), math.ceil((hi + h) / (2 * h)) + 1):
                t = ((2 * k + 1) * h - s0[axis]) / d[axis]
                if 0 < t < 1:
                    events.add(t)
        cuts = sorted(events)
        for a, b in zip(cuts, cuts[1:]):
            xa, ya, _ = point(*(s0 + (a + 1e-12 * (b - a)) * d))
            xb, yb, _ = point(*(s0 + (b - 1e-12 * (b - a)) * d))
            for sgn in (1, -1):
                da, db = xa - sgn * ya, xb - sgn * yb
                if da * db < 0:
                    events.add(a + (b - a) * da / (da - db))
        ts = sorted(events)
        for a, b in zip(ts, ts[1:]):
            xm, ym, face = point(*(s0 + 0.5 * (a + b) * d))
            j = _square_triangle(xm, ym)
            xa, ya, _ = point(*(s0 + a * d))
            xb, yb, _ = point(*(s0 + b * d))
            if face == 0:
                pieces.append((j, _gnomonic(xa, ya), _gnomonic(xb, yb)))
            else:
                pieces.append((n + j, _gnomonic(ya, xa), _gnomonic(yb, xb)))
    path = _pieces_to_path(cx, pieces)
    base = next((k for k, c in enumerate(path.crossings) if c[0] == cx.base_triangle), 0)
    return path.rotated(base) if base else path


def _pieces_to_path(cx: ConeSurfaceComplex, pieces: list) -> PathSpec:
    """Snap pieces onto triangle edges and build a validated PathSpec."""
    cr = []
    for t, x, y in pieces:
        tri = cx.triangles[t]
        a, b = barycentric(tri, x), barycentric(tri, y)
        for v in (a, b):
            v[np.abs(v) < 1e-9] = 0.0
            v /= v.sum()
        cr.append((t, a, b))
    path = PathSpec(tuple(cr))
    path.validate(cx)
    return path


def equator_curve(cx: ConeSurfaceComplex) -> PathSpec:
    """The slope-0 curve separating ``v0, v1`` from ``v2, v3``."""
    return straight_curve(cx, 1, 0)


# ---------------------------------------------------------------------------
# football curves
# ---------------------------------------------------------------------------

def _football_point(r: float, phi: float) -> np.ndarray:
    return np.array([math.sin(r) * math.cos(phi), math.sin(r) * math.sin(phi), math.cos(r)])


def football_circle(cx: ConeSurfaceComplex, r: float, wiggle: float = 0.0, waves: int = 7,
                    pieces_per_sector: int = 16) -> PathSpec:
    """Circle at distance ``r`` from the north cone point, optionally wiggled.

    The polar distance is ``r + wiggle * sin(waves * 2 pi phi / alpha)`` at
    azimuth ``phi``; the curve is approximated by geodesic chords between
    ``pieces_per_sector`` sample points per sector.  ``r`` must avoid the
    equator, which is made of triangle edges.
    """
    if cx.metadata.get("kind") != "football":
        raise PreconditionError("football_circle needs a football complex")
    alpha, m = cx.metadata["alpha"], cx.metadata["sectors"]
    if not (0 < r - abs(wiggle) and r + abs(wiggle) < math.pi / 2) and not (
            math.pi / 2 < r - abs(wiggle) and r + abs(wiggle) < math.pi):
        raise PreconditionError("circle must stay inside one hemisphere and avoid the poles")
    lower = r > math.pi / 2
    width = alpha / m
    phi0 = 0.5 * width

    def pt(phi):
        return _football_point(r + wiggle * math.sin(waves * 2 * math.pi * phi / alpha), phi)

    def sector_pieces(k, lo, hi):
        t = m + k if lower else k
        grid = np.linspace(lo, hi, max(2, int(round(pieces_per_sector * (hi - lo) / width)) + 1))
        return [(t, pt(a), pt(b)) for a, b in zip(grid, grid[1:])]

    out = sector_pieces(0, phi0, width)
    for k in range(1, m):
        out += sector_pieces(k, k * width, (k + 1) * width)
    # back in sector 0 after the wrap gluing: chart azimuths restart at 0
    out += [(t, x, y) for t, x, y in sector_pieces(0, 0.0, phi0)]
    return _pieces_to_path(cx, out)


def circle_length(alpha: float, r: float) -> float:
    """Length of the circle at distance ``r`` from a cone point of angle ``alpha``, by quadrature."""
    from scipy.integrate import quad

    def speed(phi):
        tangent = np.array([-math.sin(r) * math.sin(phi), math.sin(r) * math.cos(phi), 0.0])
        return np.linalg.norm(tangent)

    val, _ = quad(speed, 0.0, alpha, epsabs=0.0, epsrel=1e-13)
    return float(val)


def circle_curvature(r: float) -> float:
    """Geodesic curvature of a circle of spherical radius ``r`` (from the Frenet formula)."""
    x = _football_point(r, 0.0)
    dx = np.array([0.0, math.sin(r), 0.0])
    ddx = np.array([-math.sin(r), 0.0, 0.0])
    return float(np.dot(ddx, np.cross(x, dx)) / np.linalg.norm(dx) ** 3)


class LengthBound(NamedTuple):
    alpha: float
    r: float
    length: float
    bound: float
    curvature: float


def football_length_bound(alpha: float, r: float) -> LengthBound:
    """Compare the circle length ``alpha sin r`` with ``2 pi / sqrt(1 + kappa^2) = 2 pi sin r``."""
    kappa = circle_curvature(r)
    return LengthBound(alpha, r, circle_length(alpha, r), 2 * math.pi / math.sqrt(1 + kappa ** 2), kappa)


# ---------------------------------------------------------------------------
# finite holonomy images
# ---------------------------------------------------------------------------

def generated_group(mats: Sequence[np.ndarray], limit: int = 1000, tol: float = 1e-9) -> np.ndarray:
    """Closure of ``mats`` under multiplication; raises when it exceeds ``limit`` elements."""
    gens = [np.asarray(m, dtype=np.complex128) for m in mats]
    found = [IDENTITY.copy()]
    frontier = [IDENTITY.copy()]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                x = g @ s
                if not any(np.abs(x - y).max() < tol for y in found):
                    found.append(x)
                    nxt.append(x)
                    if len(found) > limit:
                        raise DegenerateError(f"group generated exceeds {limit} elements")
        frontier = nxt
    return np.array(found)

