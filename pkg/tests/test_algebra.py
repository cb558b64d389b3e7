import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm
from scipy.spatial.transform import Rotation

from conetwist.algebra import (
    IDENTITY, axis_complex_length, classify, commutator, conjugator_solve, det, exp_traceless, fixed_points,
    from_quaternion, inverse, is_central, is_special_unitary, one_param, quaternion, random_sl2, random_su2,
    so3, sphere_action, su2_axis, su2_from_so3, su2_generator, su2_rotation, trace, trace_form, variation,
)
from conetwist.errors import DegenerateError, NotConjugateError, ReducibleError

finite = st.floats(-2.0, 2.0, allow_nan=False)


def _traceless(vals):
    a, b, c, d, e, f = vals
    return np.array([[a + 1j * b, c + 1j * d], [e + 1j * f, -(a + 1j * b)]])


@settings(max_examples=200, deadline=None)
@given(st.lists(finite, min_size=6, max_size=6))
def test_exp_traceless_matches_expm(vals):
    v = _traceless(vals)
    assert np.abs(exp_traceless(v) - expm(v)).max() <= 1e-12 * max(1.0, np.abs(expm(v)).max())


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e-5, 1e-5), min_size=6, max_size=6))
def test_exp_traceless_series_branch(vals):
    v = _traceless(vals)
    assert np.abs(exp_traceless(v) - expm(v)).max() <= 1e-15
    assert abs(det(exp_traceless(v)) - 1) <= 1e-14


def test_exp_of_nilpotent_is_exact():
    v = np.array([[0, 3.0], [0, 0]], dtype=complex)
    assert np.allclose(exp_traceless(v), [[1, 3], [0, 1]], atol=0)


def test_exp_batch_shape():
    v = np.zeros((5, 2, 2), dtype=complex)
    assert exp_traceless(v).shape == (5, 2, 2)


def test_variation_is_trace_gradient(rng):
    a = random_sl2(rng)
    x = random_sl2(rng) - np.eye(2)
    x -= 0.5 * np.trace(x) * np.eye(2)
    h = 1e-6
    deriv = (trace(a @ expm(h * x)) - trace(a @ expm(-h * x))) / (2 * h)
    assert abs(deriv - trace_form(variation(a), x)) < 1e-8
    assert abs(trace(variation(a))) < 1e-14
    assert np.abs(commutator(a, exp_traceless(variation(a))) - IDENTITY).max() < 1e-10


def test_inverse_and_det(rng):
    a = random_sl2(rng, 2.0)
    assert abs(det(a) - 1) < 1e-12
    assert np.abs(inverse(a) @ a - IDENTITY).max() < 1e-12


def test_one_param_rejects_central():
    with pytest.raises(DegenerateError):
        one_param(-IDENTITY, 0.3)


def test_one_param_is_a_group(rng):
    a = random_sl2(rng)
    s, t = 0.3 + 0.2j, -0.7 + 0.1j
    assert np.abs(one_param(a, s) @ one_param(a, t) - one_param(a, s + t)).max() < 1e-12
    assert np.abs(commutator(one_param(a, s), a) - IDENTITY).max() < 1e-12


@pytest.mark.parametrize("alpha", [0.3, 1.0, 2.5, 4.0, 6.0])
def test_signed_complex_length_laws(alpha, rng):
    a = su2_rotation(rng.normal(size=3), alpha)
    for t in (-0.8, 0.25, 1.0):
        assert abs(axis_complex_length(one_param(a, t), a) - 2j * t * math.sin(alpha / 2)) < 1e-12
        assert abs(axis_complex_length(one_param(a, 1j * t), a) + 2 * t * math.sin(alpha / 2)) < 1e-12


def test_classify_tags():
    assert classify(IDENTITY).tag == "identity"
    assert classify(-IDENTITY).tag == "minus_identity"
    par = classify(np.array([[1, 1], [0, 1]], dtype=complex))
    assert par.tag == "parabolic" and par.ambiguous
    ell = classify(su2_rotation([0, 0, 1], 1.2))
    assert ell.tag == "elliptic" and abs(ell.rotation_angle - 1.2) < 1e-12
    hyp = classify(np.diag([math.exp(0.4), math.exp(-0.4)]).astype(complex))
    assert hyp.tag == "hyperbolic" and abs(hyp.translation_length - 0.8) < 1e-12
    lox = classify(np.diag([np.exp(0.4 + 0.3j), np.exp(-0.4 - 0.3j)]))
    assert lox.tag == "loxodromic" and abs(lox.complex_length - (0.8 + 0.6j)) < 1e-12


def test_conjugator_solve_recovers_conjugator(rng):
    xs = [random_sl2(rng) for _ in range(3)]
    g = random_sl2(rng)
    ys = [g @ x @ inverse(g) for x in xs]
    h = conjugator_solve(xs, ys)
    assert max(np.abs(h @ x @ inverse(h) - y).max() for x, y in zip(xs, ys)) < 1e-9


def test_conjugator_solve_errors(rng):
    d1 = np.diag([2.0, 0.5]).astype(complex)
    d2 = np.diag([3.0, 1 / 3]).astype(complex)
    with pytest.raises(ReducibleError):
        conjugator_solve([d1, d2], [d1, d2])
    xs = [random_sl2(rng) for _ in range(2)]
    with pytest.raises(NotConjugateError):
        conjugator_solve(xs, [random_sl2(rng) for _ in range(2)])


def test_su2_rotation_matches_scipy(rng):
    for _ in range(20):
        n = rng.normal(size=3)
        phi = rng.uniform(0, 2 * math.pi)
        u = su2_rotation(n, phi)
        r = Rotation.from_rotvec(phi * n / np.linalg.norm(n)).as_matrix()
        assert np.abs(so3(u) - r).max() < 1e-12
        v = rng.normal(size=3)
        assert np.abs(sphere_action(u, v) - r @ v).max() < 1e-12


def test_su2_helpers_round_trip(rng):
    u = random_su2(rng)
    assert is_special_unitary(u)
    assert np.abs(from_quaternion(quaternion(u)) - u).max() < 1e-14
    back = su2_from_so3(so3(u))
    assert min(np.abs(back - u).max(), np.abs(back + u).max()) < 1e-12
    n = su2_axis(su2_rotation([1, 2, 2], 1.0))
    assert np.abs(n - np.array([1, 2, 2]) / 3).max() < 1e-12
    assert np.abs(su2_generator([0, 0, 1]) @ su2_generator([0, 0, 1]) + IDENTITY).max() < 1e-15


def test_fixed_points(rng):
    u = su2_rotation([0, 1, 0], 0.9)
    fp = fixed_points(u)
    assert np.abs(fp.axis - [0, 1, 0]).max() < 1e-12 and not fp.parabolic
    assert fixed_points(np.array([[1, 1], [0, 1]], dtype=complex)).parabolic
    with pytest.raises(DegenerateError):
        fixed_points(IDENTITY)
    assert is_central(-IDENTITY)
