"""Inner loops over 2x2 complex matrices and sphere arcs.

Each kernel has a pure-numpy reference implementation and, when numba is
importable, an ``@njit`` twin with identical semantics.  The active backend is
chosen once at import time:

* ``CONETWIST_BACKEND=numpy`` forces the numpy implementations;
* ``CONETWIST_BACKEND=numba`` (or unset) uses numba when it can be imported.

Both variants are always importable as ``numpy_kernels`` / ``numba_kernels``
so tests and the benchmark can compare them directly.
"""

from __future__ import annotations

import math
import os
from types import SimpleNamespace

import numpy as np

# Below this |delta| the closed form of exp switches to Taylor series.
SERIES_THRESHOLD = 1e-4


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def _np_word_product(mats, letters, exps):
    """Product of ``mats[letters[k]] ** exps[k]`` for exponents +-1.

    Inverses use the adjugate divided by the determinant.
    """
    out = np.eye(2, dtype=np.complex128)
    for idx, e in zip(letters, exps):
        m = mats[idx]
        if e > 0:
            out = out @ m
        else:
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            adj = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])
            out = out @ (adj / det)
    return out


def _np_exp_traceless(v):
    """Batched closed-form exponential of traceless 2x2 matrices, shape (n,2,2)."""
    v = np.asarray(v, dtype=np.complex128)
    det = v[:, 0, 0] * v[:, 1, 1] - v[:, 0, 1] * v[:, 1, 0]
    d2 = -det
    delta = np.sqrt(d2)
    small = np.abs(delta) < SERIES_THRESHOLD
    safe = np.where(small, 1.0, delta)
    ch = np.where(small, 1.0 + d2 / 2.0 + d2 * d2 / 24.0, np.cosh(safe))
    sc = np.where(small, 1.0 + d2 / 6.0 + d2 * d2 / 120.0, np.sinh(safe) / safe)
    out = sc[:, None, None] * v
    out[:, 0, 0] += ch
    out[:, 1, 1] += ch
    return out


def _frame(axis):
    axis = axis / np.linalg.norm(axis)
    helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = helper - axis * (helper @ axis)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    return axis, e1, e2


def _np_azimuth_increments(starts, ends, axis):
    """Signed azimuth change about ``axis`` along each geodesic arc.

    Exact for arcs shorter than pi that do not meet +-axis, because the
    azimuth is monotone along such arcs.
    """
    n, e1, e2 = _frame(np.asarray(axis, dtype=np.float64))
    th0 = np.arctan2(starts @ e2, starts @ e1)
    th1 = np.arctan2(ends @ e2, ends @ e1)
    return (th1 - th0 + np.pi) % (2.0 * np.pi) - np.pi


def _np_arc_rates(starts, ends, axis, spacing):
    """Min/max of the azimuthal rate d(theta)/ds along each sampled arc.

    Returns an array of shape (n_arcs, 3): minimum rate, maximum rate, and
    minimum distance (chordal, sin of angle) from the axis line.
    """
    n = np.asarray(axis, dtype=np.float64)
    n = n / np.linalg.norm(n)
    out = np.empty((len(starts), 3))
    for k in range(len(starts)):
        a, b = starts[k], ends[k]
        c = min(1.0, max(-1.0, float(a @ b)))
        om = math.acos(c)
        if om < 1e-15:
            out[k] = (0.0, 0.0, float(np.linalg.norm(np.cross(n, a))))
            continue
        m = max(2, int(math.ceil(om / spacing)) + 1)
        s = np.linspace(0.0, 1.0, m)
        so = math.sin(om)
        x = (np.sin((1 - s) * om)[:, None] * a + np.sin(s * om)[:, None] * b) / so
        u = (-np.cos((1 - s) * om)[:, None] * a + np.cos(s * om)[:, None] * b) / so
        u /= np.linalg.norm(u, axis=1)[:, None]
        nx = np.cross(n, x)
        r2 = np.einsum("ij,ij->i", nx, nx)
        rate = np.einsum("ij,ij->i", nx, u) / r2
        out[k] = (rate.min(), rate.max(), math.sqrt(r2.min()))
    return out


numpy_kernels = SimpleNamespace(
    name="numpy",
    word_product=_np_word_product,
    exp_traceless=_np_exp_traceless,
    azimuth_increments=_np_azimuth_increments,
    arc_rates=_np_arc_rates,
)


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

def _build_numba():
    from numba import njit

    @njit(cache=True)
    def word_product(mats, letters, exps):
        a, b, c, d = 1.0 + 0j, 0j, 0j, 1.0 + 0j
        for k in range(letters.shape[0]):
            m = mats[letters[k]]
            p, q, r, s = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
            if exps[k] < 0:
                det = p * s - q * r
                p, q, r, s = s / det, -q / det, -r / det, p / det
            a, b, c, d = a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s
        out = np.empty((2, 2), dtype=np.complex128)
        out[0, 0], out[0, 1], out[1, 0], out[1, 1] = a, b, c, d
        return out

    @njit(cache=True)
    def exp_traceless(v):
        out = np.empty_like(v)
        for k in range(v.shape[0]):
            d2 = -(v[k, 0, 0] * v[k, 1, 1] - v[k, 0, 1] * v[k, 1, 0])
            delta = np.sqrt(d2)
            if abs(delta) < SERIES_THRESHOLD:
                ch = 1.0 + d2 / 2.0 + d2 * d2 / 24.0
                sc = 1.0 + d2 / 6.0 + d2 * d2 / 120.0
            else:
                ch = np.cosh(delta)
                sc = np.sinh(delta) / delta
            out[k, 0, 0] = ch + sc * v[k, 0, 0]
            out[k, 0, 1] = sc * v[k, 0, 1]
            out[k, 1, 0] = sc * v[k, 1, 0]
            out[k, 1, 1] = ch + sc * v[k, 1, 1]
        return out

    @njit(cache=True)
    def _azimuth_core(starts, ends, e1, e2):
        out = np.empty(starts.shape[0])
        for k in range(starts.shape[0]):
            th0 = math.atan2(starts[k] @ e2, starts[k] @ e1)
            th1 = math.atan2(ends[k] @ e2, ends[k] @ e1)
            d = th1 - th0 + math.pi
            d = d - 2.0 * math.pi * math.floor(d / (2.0 * math.pi))
            out[k] = d - math.pi
        return out

    def azimuth_increments(starts, ends, axis):
        _, e1, e2 = _frame(np.asarray(axis, dtype=np.float64))
        return _azimuth_core(np.ascontiguousarray(starts, dtype=np.float64),
                             np.ascontiguousarray(ends, dtype=np.float64), e1, e2)

    @njit(cache=True)
    def _rates_core(starts, ends, n, spacing):
        out = np.empty((starts.shape[0], 3))
        for k in range(starts.shape[0]):
            a = starts[k]
            b = ends[k]
            c = min(1.0, max(-1.0, a @ b))
            om = math.acos(c)
            lo, hi, rmin = np.inf, -np.inf, np.inf
            if om < 1e-15:
                nx = np.cross(n, a)
                out[k, 0], out[k, 1], out[k, 2] = 0.0, 0.0, math.sqrt(nx @ nx)
                continue
            m = max(2, int(math.ceil(om / spacing)) + 1)
            so = math.sin(om)
            for j in range(m):
                s = j / (m - 1)
                x = (math.sin((1 - s) * om) * a + math.sin(s * om) * b) / so
                u = (-math.cos((1 - s) * om) * a + math.cos(s * om) * b) / so
                u = u / math.sqrt(u @ u)
                nx = np.cross(n, x)
                r2 = nx @ nx
                rate = (nx @ u) / r2
                lo = min(lo, rate)
                hi = max(hi, rate)
                rmin = min(rmin, r2)
            out[k, 0], out[k, 1], out[k, 2] = lo, hi, math.sqrt(rmin)
        return out

    def arc_rates(starts, ends, axis, spacing):
        n = np.asarray(axis, dtype=np.float64)
        n = n / np.linalg.norm(n)
        return _rates_core(np.ascontiguousarray(starts, dtype=np.float64),
                           np.ascontiguousarray(ends, dtype=np.float64), n, float(spacing))

    return SimpleNamespace(
        name="numba",
        word_product=word_product,
        exp_traceless=exp_traceless,
        azimuth_increments=azimuth_increments,
        arc_rates=arc_rates,
    )


try:
    numba_kernels = _build_numba()
except ImportError:  # pragma: no cover - depends on the environment
    numba_kernels = None

_requested = os.environ.get("CONETWIST_BACKEND", "numba").strip().lower()
if _requested == "numpy" or numba_kernels is None:
    active = numpy_kernels
else:
    active = numba_kernels

BACKEND = active.name


def warmup() -> None:
    """Trigger compilation of the numba kernels (no-op for numpy)."""
    if active is numpy_kernels:
        return
    mats = np.stack([np.eye(2, dtype=np.complex128)] * 2)
    active.word_product(mats, np.array([0, 1], dtype=np.int64), np.array([1, -1], dtype=np.int64))
    active.exp_traceless(np.zeros((1, 2, 2), dtype=np.complex128))
    pts = np.array([[1.0, 0.0, 0.0]])
    pts2 = np.array([[0.0, 1.0, 0.0]])
    active.azimuth_increments(pts, pts2, np.array([0.0, 0.0, 1.0]))
    active.arc_rates(pts, pts2, np.array([0.0, 0.0, 1.0]), 0.01)
