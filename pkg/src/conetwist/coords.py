"""Action-angle coordinates on punctured-sphere character varieties.

The chart is built from an admissible decomposition.  Its section ``sigma``
sends a vector of real traces (``d`` peripheral traces, then one trace per
decomposition curve) to an SU(2) representation: every pants piece is
realized by :func:`su2_pants_from_traces` and pieces are glued along the dual
tree so that each shared curve matrix is the image of its diagonal form under
the minimal rotation taking ``e_z`` to the curve's axis.  That fixed choice is
the zero of the angle coordinates.

The angle coordinates ``tau`` of a character ``chi`` are the flow times with
``chi = flow(sigma(tr chi), tau)``, the flow along curve ``j`` being the twist
with side1 equal to the curve's block.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .algebra import (
    IDENTITY, conjugator_solve, exp_traceless, inverse, su2_axis, su2_generator, su2_rotation, trace,
    variation,
)
from .errors import ChartError, DegenerateError, NotConjugateError, PreconditionError
from .flows import FlowSpec, SplitData, flow, twist_separating
from .groups import Representation, chars_distance, evaluate, evaluate_mats, fingerprint, punctured_sphere
from .pants import PantsDecomposition, find_admissible, is_admissible

ROUND_TRIP_TOL = 1e-8


# ---------------------------------------------------------------------------
# pants from traces
# ---------------------------------------------------------------------------

class PantsPair(NamedTuple):
    A: np.ndarray
    B: np.ndarray
    degenerate: bool


def su2_pants_from_traces(t1: float, t2: float, t3: float, tol: float = 1e-12) -> PantsPair:
    """SU(2) pair ``(A, B)`` with traces ``t1``, ``t2`` and ``tr(AB) = t3``.

    ``A = diag(e^{ia}, e^{-ia})`` and ``B`` rotates by ``2b`` about the unit
    vector at polar angle ``phi`` in the xz-plane, where
    ``cos(phi) = (cos a cos b - t3/2) / (sin a sin b)``.
    """
    for t in (t1, t2, t3):
        if abs(complex(t).imag) > 1e-12 or not -2 - tol <= complex(t).real <= 2 + tol:
            raise PreconditionError(f"trace {t} is not a real number in [-2, 2]")
    t1, t2, t3 = (float(np.clip(complex(t).real, -2, 2)) for t in (t1, t2, t3))
    a, b = math.acos(t1 / 2), math.acos(t2 / 2)
    sa, sb = math.sin(a), math.sin(b)
    num = math.cos(a) * math.cos(b) - t3 / 2
    den = sa * sb
    if abs(num) > den + tol:
        raise PreconditionError(f"trace triple ({t1}, {t2}, {t3}) is not realized in SU(2)")
    degenerate = den <= tol or abs(abs(num) - den) <= tol
    cphi = 1.0 if den <= tol else float(np.clip(num / den, -1.0, 1.0))
    phi = math.acos(cphi)
    A = np.diag([cmath.exp(1j * a), cmath.exp(-1j * a)])
    B = math.cos(b) * IDENTITY + sb * su2_generator([math.sin(phi), 0.0, math.cos(phi)])
    return PantsPair(A, B, degenerate)


def _align_z(n: np.ndarray) -> np.ndarray:
    """Lift of the minimal rotation taking ``e_z`` to the unit vector ``n``."""
    axis = np.cross([0.0, 0.0, 1.0], n)
    s = np.linalg.norm(axis)
    if s < 1e-14:
        if n[2] > 0:
            return IDENTITY.copy()
        raise DegenerateError("curve axis is -e_z: canonical alignment undefined")
    return su2_rotation(axis / s, math.atan2(s, n[2]))


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AngleChart:
    """Admissible decomposition plus the sign data used by the coordinate maps."""

    decomposition: PantsDecomposition
    base: Representation
    lift_signs: tuple
    split_signs: tuple
    base_fingerprint: np.ndarray = field(init=False, repr=False)
    base_traces: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        dec = self.decomposition
        pres = self.base.presentation
        if pres != punctured_sphere(dec.d):
            raise PreconditionError("chart decomposition does not match the base presentation")
        if not is_admissible(self.base, dec):
            raise PreconditionError("decomposition is not admissible for the base representation")
        tr = np.trace(self.base.mats, axis1=1, axis2=2)
        if np.any(np.abs(tr.imag) > 1e-9) or np.any(np.abs(tr.real) >= 2):
            raise PreconditionError("base peripheral traces must lie in (-2, 2)")
        lift = tuple(int(c) for c in self.lift_signs)
        split = tuple(None if s is None else int(s) for s in self.split_signs)
        if len(lift) != dec.d or any(c not in (-1, 1) for c in lift):
            raise PreconditionError("one lift sign (+-1) per puncture required")
        if len(split) != len(dec.curves) or any(s not in (None, -1, 1) for s in split):
            raise PreconditionError("one split sign (+-1 or None) per curve required")
        object.__setattr__(self, "lift_signs", lift)
        object.__setattr__(self, "split_signs", split)
        object.__setattr__(self, "base_fingerprint", fingerprint(self.base))
        object.__setattr__(self, "base_traces", traces_of(self, self.base))

    @classmethod
    def build(cls, base: Representation, decomposition: PantsDecomposition | None = None,
              alphas: Sequence[float] | None = None, lift_signs: Sequence[int] | None = None,
              split_signs: Sequence[int | None] | None = None) -> "AngleChart":
        """Chart around ``base``; lift signs come from ``alphas`` when given."""
        dec = find_admissible(base) if decomposition is None else decomposition
        if lift_signs is None:
            if alphas is None:
                lift_signs = (1,) * dec.d
            else:
                lift_signs = tuple(lift_sign(trace(m).real, a) for m, a in zip(base.mats, alphas))
        if split_signs is None:
            split_signs = (None,) * len(dec.curves)
        return cls(dec, base, tuple(lift_signs), tuple(split_signs))

    @property
    def d(self) -> int:
        return self.decomposition.d

    def curve_split(self, j: int) -> SplitData:
        return SplitData.from_curve(self.decomposition.curves[j])

    def with_signs(self, lift_signs=None, split_signs=None) -> "AngleChart":
        return AngleChart(self.decomposition, self.base,
                          self.lift_signs if lift_signs is None else tuple(lift_signs),
                          self.split_signs if split_signs is None else tuple(split_signs))


@dataclass(frozen=True)
class Coordinates:
    boundary_traces: np.ndarray
    curve_traces: np.ndarray
    tau: np.ndarray

    @property
    def traces(self) -> np.ndarray:
        return np.concatenate([self.boundary_traces, self.curve_traces])


@dataclass(frozen=True)
class ConeData:
    alphas: np.ndarray
    lengths: np.ndarray


def traces_of(chart: AngleChart, rep: Representation) -> np.ndarray:
    """Peripheral traces followed by decomposition-curve traces."""
    per = np.trace(rep.mats, axis1=1, axis2=2)
    cur = [np.trace(evaluate(rep, c.word)) for c in chart.decomposition.curves]
    return np.concatenate([per, np.array(cur, dtype=np.complex128)])


def _part_trace(t: np.ndarray, d: int, part) -> float:
    kind, idx = part
    return t[idx] if kind == "puncture" else t[d + idx]


def _part_punctures(dec: PantsDecomposition, part) -> list[int]:
    kind, idx = part
    if kind == "puncture":
        return [idx]
    k = dec.piece_of_curve(idx)
    p = dec.pieces[k]
    return _part_punctures(dec, p.parts[0]) + _part_punctures(dec, p.parts[1])


# ---------------------------------------------------------------------------
# section
# ---------------------------------------------------------------------------

def build_section(chart: AngleChart, t: Sequence[float]) -> Representation:
    """The SU(2) representation with prescribed traces and zero twist."""
    dec = chart.decomposition
    d = dec.d
    t = np.asarray(t, dtype=np.complex128)
    if t.shape != (2 * d - 3,):
        raise PreconditionError(f"expected {2 * d - 3} traces")
    if np.any(np.abs(t.imag) > 1e-9):
        raise ChartError("section is defined for real traces only")
    t = t.real
    mats = np.zeros((d, 2, 2), dtype=np.complex128)
    root = dec.root
    tr = [_part_trace(t, d, p) for p in root.parts]
    A, B, degen = su2_pants_from_traces(tr[0], tr[1], tr[2])
    if degen:
        raise DegenerateError("root pants triple is reducible")
    pending = list(zip(root.parts, (A, B, inverse(A @ B))))
    while pending:
        part, m = pending.pop()
        if part[0] == "puncture":
            mats[part[1]] = m
            continue
        piece = dec.pieces[dec.piece_of_curve(part[1])]
        pa, pb = piece.parts[0], piece.parts[1]
        tq = _part_trace(t, d, part)
        aq, bprime, degen = su2_pants_from_traces(tq, _part_trace(t, d, pb), _part_trace(t, d, pa))
        if degen:
            raise DegenerateError(f"pants piece bounded by curve {part[1]} is reducible")
        h = _align_z(su2_axis(m))
        hi = inverse(h)
        mb = inverse(bprime)
        pending.append((pa, h @ aq @ bprime @ hi))
        pending.append((pb, h @ mb @ hi))
    return Representation(punctured_sphere(d), mats)


def flow_spec(chart: AngleChart, tau: Sequence[complex]) -> FlowSpec:
    return FlowSpec(tuple((chart.curve_split(j), z) for j, z in enumerate(tau)))


def reconstruct(chart: AngleChart, coords: Coordinates) -> Representation:
    return flow(build_section(chart, coords.traces), flow_spec(chart, coords.tau))


# ---------------------------------------------------------------------------
# angle coordinates
# ---------------------------------------------------------------------------

def _centralizer_time(h: np.ndarray, q: np.ndarray) -> complex:
    """``w`` of minimal modulus with ``h = +-exp(w F(q))`` for SU(2) elliptic ``q``."""
    c = math.acos(float(np.clip(trace(q).real / 2, -1, 1)))
    n = su2_axis(q)
    v = _align_z(n)[:, 0]  # eigenvector of q for exp(ic)
    hv = h @ v
    mu = complex(np.vdot(v, hv))
    if np.linalg.norm(hv - mu * v) > 1e-7 * max(1.0, abs(mu)):
        raise ChartError("discrepancy does not centralize the curve holonomy")
    logs = [cmath.log(mu), cmath.log(-mu)]
    lg = min(logs, key=abs)
    return lg / (1j * math.sin(c))


def tau_coordinates(chart: AngleChart, rep: Representation, check: bool = True) -> Coordinates:
    """Traces and angle coordinates of ``rep`` in ``chart``."""
    dec = chart.decomposition
    d = dec.d
    t = traces_of(chart, rep)
    if np.any(np.abs(t.imag) > 1e-9) or np.any(np.abs(t.real) >= 2):
        raise ChartError("character outside the chart: traces must be real in (-2, 2)")
    sigma = build_section(chart, t.real)
    root = dec.root
    try:
        g = conjugator_solve([evaluate(sigma, w) for w in root.words[:2]],
                             [evaluate(rep, w) for w in root.words[:2]])
    except NotConjugateError as exc:
        raise ChartError(f"root alignment failed: {exc}") from exc
    gi = inverse(g)
    cur = np.einsum("ij,njk,kl->nil", gi, rep.mats, g)
    tau = np.zeros(len(dec.curves), dtype=np.complex128)
    pending = [p for p in root.parts if p[0] == "curve"]
    while pending:
        kind, j = pending.pop()
        piece = dec.pieces[dec.piece_of_curve(j)]
        xs = [evaluate(sigma, w) for w in piece.words[:2]]
        ys = [evaluate_mats(cur, w) for w in piece.words[:2]]
        try:
            h = conjugator_solve(xs, ys)
        except NotConjugateError as exc:
            raise ChartError(f"alignment across curve {j} failed: {exc}") from exc
        q = evaluate_mats(sigma.mats, piece.words[0] + piece.words[1])
        tau[j] = -_centralizer_time(h, q)
        hi = inverse(h)
        for p in _part_punctures(dec, ("curve", j)):
            cur[p] = hi @ cur[p] @ h
        pending += [p for p in piece.parts[:2] if p[0] == "curve"]
    coords = Coordinates(t[:d], t[d:], tau)
    if check:
        err = chars_distance(rep, reconstruct(chart, coords))
        if err > ROUND_TRIP_TOL:
            raise ChartError(f"coordinate round trip failed (distance {err:.3e})")
    return coords


# ---------------------------------------------------------------------------
# signs, splitting and cone data
# ---------------------------------------------------------------------------

def lift_sign(trace_value: float, alpha: float, tol: float = 1e-9) -> int:
    """The sign ``c`` with ``trace = 2 c cos(alpha/2)``."""
    c2 = 2 * math.cos(alpha / 2)
    if abs(c2) <= tol:
        raise PreconditionError("lift sign is ambiguous at alpha = pi")
    if abs(trace_value - c2) <= tol:
        return 1
    if abs(trace_value + c2) <= tol:
        return -1
    raise PreconditionError(f"trace {trace_value} is inconsistent with cone angle {alpha}")


def split_time(trace_value: complex, length: float, tol: float = 1e-9) -> float:
    """``t = l (4 - tr^2)^(-1/2)`` for an elliptic trace."""
    tr = complex(trace_value)
    if abs(tr.imag) > tol or abs(tr.real) >= 2 - tol:
        raise PreconditionError(f"curve holonomy with trace {tr} is not elliptic")
    return length / math.sqrt(4 - tr.real ** 2)


def split_deform(rep: Representation, split: SplitData, sign: int, length: float,
                 tol: float = 1e-9) -> Representation:
    """Imaginary-time twist ``psi_{i s t}`` opening a new edge of length ``length``."""
    if sign not in (-1, 1):
        raise PreconditionError("split sign must be +-1")
    if length < 0:
        raise PreconditionError("length must be non-negative")
    t = split_time(np.trace(evaluate(rep, split.word)), length, tol)
    return twist_separating(rep, split, 1j * sign * t)


def split_conjugator(rep: Representation, split: SplitData, sign: int, length: float) -> np.ndarray:
    """The element ``exp(i s t F(rho(nu)))`` conjugating side2 in :func:`split_deform`."""
    w = evaluate(rep, split.word)
    t = split_time(trace(w), length)
    return exp_traceless(1j * sign * t * variation(w))


def psi_coordinates(chart: AngleChart, rep: Representation, tol: float = 1e-9) -> ConeData:
    """Cone angles ``2 arccos(c tr/2)`` and new-edge lengths ``s Im(tau) sqrt(4 - tr^2)``."""
    coords = tau_coordinates(chart, rep)
    bt = coords.boundary_traces.real
    alphas = np.array([2 * math.acos(float(np.clip(c * x / 2, -1, 1))) for c, x in zip(chart.lift_signs, bt)])
    lengths = np.zeros(len(coords.tau))
    for j, (s, z, tr) in enumerate(zip(chart.split_signs, coords.tau, coords.curve_traces)):
        if s is None:
            if abs(z.imag) > tol:
                raise ChartError(f"curve {j} has no split sign but Im tau = {z.imag:.3e}")
            continue
        val = s * z.imag * math.sqrt(4 - tr.real ** 2)
        if val < -tol:
            raise ChartError(f"curve {j} is split in the wrong direction (s Im tau < 0)")
        lengths[j] = max(val, 0.0) if abs(val) > tol else 0.0
    return ConeData(alphas, lengths)


def psi_jacobian(chart: AngleChart, h: float = 1e-6) -> np.ndarray:
    """Finite-difference Jacobian of Psi at the base.

    Parameters are the real peripheral traces and ``Im tau`` of the curves;
    the curve traces and ``Re tau`` are frozen at the base.  Length
    components are differentiated one-sidedly in the split direction (the
    domain of Psi is a corner there).  Curves without a split sign use +1.
    """
    d = chart.d
    n = len(chart.decomposition.curves)
    base = tau_coordinates(chart, chart.base)
    t0 = base.traces.real
    re_tau = base.tau.real
    signs = np.array([1 if s is None else s for s in chart.split_signs])
    probe = chart.with_signs(split_signs=tuple(int(s) for s in signs))

    def psi(tb, y):
        t = np.concatenate([tb, t0[d:]])
        rep = flow(build_section(chart, t), flow_spec(chart, re_tau + 1j * y))
        cd = psi_coordinates(probe, rep)
        return np.concatenate([cd.alphas, cd.lengths])

    y0 = np.zeros(n)
    f0 = psi(t0[:d], y0)
    cols = []
    for i in range(d):
        e = np.zeros(d)
        e[i] = h
        cols.append((psi(t0[:d] + e, y0) - psi(t0[:d] - e, y0)) / (2 * h))
    for j in range(n):
        e = np.zeros(n)
        e[j] = signs[j] * h
        cols.append((psi(t0[:d], e) - f0) / h)
    return np.stack(cols, axis=1)
