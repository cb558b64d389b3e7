"""Arithmetic in SL(2,C) and its Lie algebra.

Group elements and tangent vectors are plain ``(2, 2)`` complex numpy arrays.
The helpers below validate, renormalize and classify them, and provide the
variation function ``F(A) = A - tr(A)/2 * I`` together with the centralizer
one-parameter subgroups ``exp(z F(A))`` that drive every twist flow.

SU(2) is identified with unit quaternions.  For a unit vector ``n`` put::

    K(n) = i * [[n_z, n_x + i n_y], [n_x - i n_y, -n_z]]      (K(n)^2 = -I)

so that ``cos(phi/2) I + sin(phi/2) K(n)`` acts on the unit sphere as the
right-handed rotation by ``phi`` about ``n``.  The action is
``v -> U M(v) U^*`` with ``M(v) = [[v_z, v_x + i v_y], [v_x - i v_y, -v_z]]``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from . import _kernels
from .errors import DegenerateError, NotConjugateError, PreconditionError, ReducibleError, SingularMatrixError

DEFAULT_TOL = 1e-9
DET_TOL = 1e-12

IDENTITY = np.eye(2, dtype=np.complex128)
IDENTITY.setflags(write=False)


# ---------------------------------------------------------------------------
# group arithmetic
# ---------------------------------------------------------------------------

def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite ``(2, 2)`` complex128 array."""
    a = np.array(m, dtype=np.complex128)
    if a.shape != (2, 2):
        raise PreconditionError(f"expected a 2x2 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise PreconditionError("matrix has non-finite entries")
    return a


def det(m: np.ndarray) -> complex:
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def trace(m: np.ndarray) -> complex:
    return complex(m[0, 0] + m[1, 1])


def renormalize(m) -> np.ndarray:
    """Divide by the principal square root of the determinant."""
    a = as_matrix(m)
    dt = det(a)
    if abs(dt) <= 1e-14 * max(1.0, float(np.abs(a).max()) ** 2):
        raise SingularMatrixError("cannot renormalize a singular matrix")
    return a / cmath.sqrt(dt)


def as_group_elem(m, tol: float = DET_TOL) -> np.ndarray:
    """Validate the unit-determinant invariant and return a renormalized copy."""
    a = as_matrix(m)
    if abs(det(a) - 1.0) > tol * max(1.0, float(np.abs(a).max()) ** 2):
        raise PreconditionError(f"determinant {det(a)} is not 1")
    return renormalize(a)


def mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product of two group elements, renormalized to unit determinant."""
    return renormalize(np.asarray(x) @ np.asarray(y))


def inverse(x: np.ndarray) -> np.ndarray:
    """Inverse via the adjugate; raises on (nearly) singular input."""
    a = as_matrix(x)
    dt = det(a)
    if abs(dt) <= 1e-14 * max(1.0, float(np.abs(a).max()) ** 2):
        raise SingularMatrixError("matrix is singular")
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]]) / dt


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Group commutator ``a b a^-1 b^-1``."""
    return a @ b @ inverse(a) @ inverse(b)


# ---------------------------------------------------------------------------
# Lie algebra
# ---------------------------------------------------------------------------

def trace_form(a: np.ndarray, b: np.ndarray) -> complex:
    """The invariant bilinear form ``tr(ab)`` on sl(2,C)."""
    return complex(np.trace(np.asarray(a) @ np.asarray(b)))


def variation(a: np.ndarray) -> np.ndarray:
    """Variation function ``F(A) = A - tr(A)/2 * I``.

    ``F(A)`` is traceless, commutes with ``A`` and represents the differential
    of the trace function at ``A`` under the trace form.
    """
    a = np.asarray(a, dtype=np.complex128)
    return a - 0.5 * trace(a) * IDENTITY


def exp_traceless(v) -> np.ndarray:
    """Exponential of a traceless matrix, ``cosh(d) I + sinh(d)/d v`` with ``d^2 = -det v``.

    Below ``|d| < 1e-4`` both coefficients are evaluated by their Taylor
    series, which only involve ``d^2``.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.shape == (2, 2):
        return _kernels.active.exp_traceless(v[None])[0]
    return _kernels.active.exp_traceless(np.ascontiguousarray(v))


def is_central(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True when ``a`` is within ``tol`` (relative) of ``+I`` or ``-I``."""
    scale = max(1.0, float(np.abs(a).max()))
    return bool(np.abs(variation(a)).max() <= tol * scale)


def one_param(a: np.ndarray, z: complex) -> np.ndarray:
    """Centralizer one-parameter subgroup ``zeta_z = exp(z F(a))``.

    Raises :class:`DegenerateError` when ``a`` is central, since then ``F(a)``
    vanishes and the subgroup is trivial.
    """
    a = np.asarray(a, dtype=np.complex128)
    if is_central(a):
        raise DegenerateError("one_param: central element has no variation")
    return exp_traceless(complex(z) * variation(a))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsometryClass:
    """Trace-based classification of a unit-determinant matrix.

    ``eigen_angle`` is ``theta`` in ``(0, pi)`` for elliptic elements (the
    eigenvalues are ``exp(+-i theta)`` and the rotation angle is ``2 theta``).
    ``translation_length`` is set for hyperbolic and loxodromic elements.
    ``ambiguous`` marks traces within tolerance of ``+-2`` where the trace
    alone cannot separate parabolic elements from near-central ones.
    """

    tag: str
    trace: complex
    eigen_angle: float | None = None
    translation_length: float | None = None
    complex_length: complex | None = None
    ambiguous: bool = False

    @property
    def rotation_angle(self) -> float | None:
        return None if self.eigen_angle is None else 2.0 * self.eigen_angle


def classify(a: np.ndarray, tol: float = DEFAULT_TOL) -> IsometryClass:
    a = np.asarray(a, dtype=np.complex128)
    tr = trace(a)
    scale = max(1.0, float(np.abs(a).max()))
    if np.abs(a - IDENTITY).max() <= tol * scale:
        return IsometryClass("identity", tr)
    if np.abs(a + IDENTITY).max() <= tol * scale:
        return IsometryClass("minus_identity", tr)
    if abs(tr - 2) <= tol * scale or abs(tr + 2) <= tol * scale:
        return IsometryClass("parabolic", tr, ambiguous=True)
    if abs(tr.imag) <= tol * max(1.0, abs(tr)):
        x = tr.real
        if abs(x) < 2:
            return IsometryClass("elliptic", tr, eigen_angle=math.acos(x / 2))
        length = 2.0 * math.acosh(abs(x) / 2)
        return IsometryClass("hyperbolic", tr, translation_length=length, complex_length=complex(length))
    cl = 2.0 * cmath.acosh(tr / 2)
    if cl.real < 0:
        cl = -cl
    return IsometryClass("loxodromic", tr, translation_length=cl.real, complex_length=cl)


def reference_eigenvector(a: np.ndarray) -> np.ndarray:
    """Eigenvector orienting the axis of a non-parabolic element.

    Elliptic elements use the eigenvalue with positive imaginary part, all
    others the eigenvalue of modulus larger than one.  For
    ``diag(exp(i a/2), exp(-i a/2))`` with ``a`` in ``(0, 2 pi)`` this is ``e1``.
    """
    w, v = np.linalg.eig(np.asarray(a, dtype=np.complex128))
    if abs(w[0] - w[1]) <= 1e-12 * max(1.0, abs(w[0])):
        raise DegenerateError("repeated eigenvalue: no oriented axis")
    tr = w[0] + w[1]
    if abs(tr.imag) <= 1e-12 and abs(tr.real) < 2:
        k = 0 if w[0].imag > 0 else 1
    else:
        k = 0 if abs(w[0]) > abs(w[1]) else 1
    return v[:, k] / np.linalg.norm(v[:, k])


def axis_complex_length(g: np.ndarray, a: np.ndarray) -> complex:
    """Signed complex length of ``g`` along the oriented axis of ``a``.

    ``g`` must commute with ``a``.  If ``mu`` is the eigenvalue of ``g`` on the
    reference eigenvector of ``a``, the result is ``2 log(mu)``: its real part is
    the signed translation length and its imaginary part the signed rotation
    angle in ``(-2 pi, 2 pi]``.
    """
    v = reference_eigenvector(a)
    gv = np.asarray(g) @ v
    mu = complex(np.vdot(v, gv))
    resid = np.linalg.norm(gv - mu * v)
    if resid > 1e-8 * max(1.0, abs(mu)):
        raise PreconditionError("g does not preserve the axis of a")
    return 2.0 * cmath.log(mu)


# ---------------------------------------------------------------------------
# fixed points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedPoints:
    """Projective fixed points of a non-central element.

    ``vectors`` holds unit eigenvectors as columns.  ``axis`` is the unit
    rotation axis on the sphere (only for special-unitary input); the fixed
    points on the sphere are ``+axis`` and ``-axis``.
    """

    vectors: np.ndarray
    eigenvalues: np.ndarray
    axis: np.ndarray | None
    parabolic: bool


def fixed_points(a: np.ndarray, tol: float = DEFAULT_TOL) -> FixedPoints:
    a = np.asarray(a, dtype=np.complex128)
    if is_central(a, tol):
        raise DegenerateError("central element fixes everything")
    w, v = np.linalg.eig(a)
    v = v / np.linalg.norm(v, axis=0)
    parabolic = bool(abs(w[0] - w[1]) <= 1e-7 * max(1.0, abs(w[0])))
    axis = su2_axis(a) if is_special_unitary(a, tol) else None
    return FixedPoints(v, w, axis, parabolic)


# ---------------------------------------------------------------------------
# simultaneous conjugation
# ---------------------------------------------------------------------------

def conjugator_solve(xs, ys, tol: float = 1e-8) -> np.ndarray:
    """Find ``g`` in SL(2,C) with ``g x_i g^-1 = y_i`` for all ``i``.

    The equations ``g x_i - y_i g = 0`` are linear in the entries of ``g``; the
    solution is the right singular vector of the smallest singular value of the
    stacked system.  A second small singular value means the ``x_i`` are
    reducible; a large residual means the tuples are not conjugate.
    """
    xs = [np.asarray(x, dtype=np.complex128) for x in xs]
    ys = [np.asarray(y, dtype=np.complex128) for y in ys]
    if len(xs) != len(ys) or len(xs) < 2:
        raise PreconditionError("conjugator_solve needs two lists of equal length >= 2")
    eye = np.eye(2)
    blocks = [np.kron(x.T, eye) - np.kron(eye, y) for x, y in zip(xs, ys)]
    _, s, vh = np.linalg.svd(np.vstack(blocks))
    if s[-2] <= 1e-7 * max(1.0, s[0]):
        raise ReducibleError("conjugator is not unique: first tuple is reducible")
    g = vh[-1].conj().reshape(2, 2, order="F")
    g = renormalize(g)
    ginv = inverse(g)
    resid = max(float(np.abs(g @ x @ ginv - y).max()) for x, y in zip(xs, ys))
    scale = max(1.0, max(float(np.abs(y).max()) for y in ys))
    if resid > tol * scale:
        raise NotConjugateError(f"tuples are not conjugate (residual {resid:.3e})")
    return g


# ---------------------------------------------------------------------------
# SU(2) and the unit sphere
# ---------------------------------------------------------------------------

def su2_generator(axis) -> np.ndarray:
    """``K(n)``: the unit quaternion associated with the unit vector ``n``."""
    n = np.asarray(axis, dtype=np.float64)
    n = n / np.linalg.norm(n)
    return 1j * np.array([[n[2], n[0] + 1j * n[1]], [n[0] - 1j * n[1], -n[2]]])


def su2_rotation(axis, angle: float) -> np.ndarray:
    """Lift of the right-handed rotation by ``angle`` about ``axis``."""
    return math.cos(angle / 2) * IDENTITY + math.sin(angle / 2) * su2_generator(axis)


def quaternion(u: np.ndarray) -> np.ndarray:
    """Coordinates ``(w, x, y, z)`` with ``u = w I + x K(e_x) + y K(e_y) + z K(e_z)``."""
    u = np.asarray(u)
    return np.array([u[0, 0].real, u[1, 0].imag, u[1, 0].real, u[0, 0].imag])


def from_quaternion(q) -> np.ndarray:
    w, x, y, z = (float(t) for t in q)
    return np.array([[w + 1j * z, 1j * x - y], [1j * x + y, w - 1j * z]])


def is_special_unitary(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.abs(m @ m.conj().T - IDENTITY).max() <= tol and abs(det(m) - 1) <= tol)


def su2_axis(u: np.ndarray) -> np.ndarray:
    """Unit rotation axis ``n`` of ``u = cos(phi/2) I + sin(phi/2) K(n)`` with ``sin(phi/2) > 0``."""
    q = quaternion(u)[1:]
    nrm = np.linalg.norm(q)
    if nrm < 1e-14:
        raise DegenerateError("central element has no rotation axis")
    return q / nrm


def sphere_action(u: np.ndarray, v) -> np.ndarray:
    """Rotate unit vector(s) ``v`` (shape ``(3,)`` or ``(n, 3)``) by ``u``."""
    return np.asarray(v) @ so3(u).T


def so3(u: np.ndarray) -> np.ndarray:
    """The rotation matrix of ``u`` in SU(2)."""
    w, x, y, z = quaternion(u)
    return Rotation.from_quat([x, y, z, w]).as_matrix()


def su2_from_so3(r: np.ndarray) -> np.ndarray:
    """One of the two SU(2) lifts of a rotation matrix (the one with ``w >= 0``)."""
    x, y, z, w = Rotation.from_matrix(np.asarray(r, dtype=np.float64)).as_quat()
    if w < 0:
        x, y, z, w = -x, -y, -z, -w
    return from_quaternion((w, x, y, z))


def random_su2(rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-random special-unitary matrices via normalized Gaussian quaternions."""
    n = 1 if size is None else size
    q = rng.normal(size=(n, 4))
    q /= np.linalg.norm(q, axis=1)[:, None]
    out = np.stack([from_quaternion(row) for row in q])
    return out[0] if size is None else out


def random_sl2(rng: np.random.Generator, scale: float = 1.0, size: int | None = None) -> np.ndarray:
    """Random SL(2,C) elements ``exp(v)`` with Gaussian traceless ``v``."""
    n = 1 if size is None else size
    re = rng.normal(scale=scale, size=(n, 3))
    im = rng.normal(scale=scale, size=(n, 3))
    c = re + 1j * im
    v = np.empty((n, 2, 2), dtype=np.complex128)
    v[:, 0, 0] = c[:, 0]
    v[:, 1, 1] = -c[:, 0]
    v[:, 0, 1] = c[:, 1]
    v[:, 1, 0] = c[:, 2]
    out = exp_traceless(v)
    return out[0] if size is None else out
