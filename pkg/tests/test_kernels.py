import numpy as np
import pytest

from conetwist import _kernels

pytestmark = pytest.mark.skipif(_kernels.numba_kernels is None, reason="numba not installed")


def test_backends_agree_on_words(rng):
    mats = rng.normal(size=(4, 2, 2)) + 1j * rng.normal(size=(4, 2, 2))
    mats /= np.sqrt(np.linalg.det(mats))[:, None, None]
    letters = rng.integers(0, 4, size=30).astype(np.int64)
    exps = rng.choice([-1, 1], size=30).astype(np.int64)
    a = _kernels.numpy_kernels.word_product(mats, letters, exps)
    b = _kernels.numba_kernels.word_product(mats, letters, exps)
    assert np.abs(a - b).max() < 1e-10 * max(1.0, np.abs(a).max())


def test_backends_agree_on_exp(rng):
    v = rng.normal(size=(50, 2, 2)) + 1j * rng.normal(size=(50, 2, 2))
    v[:, 1, 1] = -v[:, 0, 0]
    v[::5] *= 1e-6
    assert np.abs(_kernels.numpy_kernels.exp_traceless(v) - _kernels.numba_kernels.exp_traceless(v)).max() < 1e-13


def test_backends_agree_on_arcs(rng):
    s = rng.normal(size=(40, 3))
    e = s + 0.3 * rng.normal(size=(40, 3))
    s /= np.linalg.norm(s, axis=1)[:, None]
    e /= np.linalg.norm(e, axis=1)[:, None]
    axis = np.array([0.0, 0.6, 0.8])
    a = _kernels.numpy_kernels.azimuth_increments(s, e, axis)
    b = _kernels.numba_kernels.azimuth_increments(s, e, axis)
    assert np.abs(a - b).max() < 1e-13
    ra = _kernels.numpy_kernels.arc_rates(s, e, axis, 0.01)
    rb = _kernels.numba_kernels.arc_rates(s, e, axis, 0.01)
    assert np.abs(ra - rb).max() < 1e-10


def test_azimuth_increment_quarter_turn():
    s = np.array([[1.0, 0.0, 0.0]])
    e = np.array([[0.0, 1.0, 0.0]])
    inc = _kernels.active.azimuth_increments(s, e, np.array([0.0, 0.0, 1.0]))
    assert abs(inc[0] - np.pi / 2) < 1e-15
