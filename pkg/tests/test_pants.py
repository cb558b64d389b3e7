import numpy as np
import pytest

from conetwist.errors import PreconditionError, ReducibleError
from conetwist.groups import make_representation, punctured_sphere, random_su2_representation
from conetwist.pants import (
    CurveClass, PantsDecomposition, commute_defect, find_admissible, is_admissible, standard_decomposition,
)


def test_curve_class_sides():
    c = CurveClass(6, (4, 5, 0))
    assert c.side2 == (1, 2, 3)
    assert c.word == ((4, 1), (5, 1), (0, 1))
    assert c.complement().block == (1, 2, 3)
    assert c.same_curve(CurveClass(6, (1, 2, 3)))
    assert CurveClass(5, (0,)).is_peripheral
    with pytest.raises(PreconditionError):
        CurveClass(5, (0, 2))
    with pytest.raises(PreconditionError):
        CurveClass(5, (0, 1, 2, 3, 4))


def test_standard_decomposition_tree():
    dec = standard_decomposition(6)
    assert len(dec.curves) == 3 and len(dec.pieces) == 4
    assert len(dec.tree_edges()) == 3
    for p in dec.pieces:
        assert len(p.words) == 3


def test_decomposition_rejects_intersecting_curves():
    with pytest.raises(PreconditionError):
        PantsDecomposition(5, ((0, 1), (1, 2)))
    with pytest.raises(PreconditionError):
        PantsDecomposition(5, ((0, 1), (2, 3, 4)))  # same curve twice
    with pytest.raises(PreconditionError):
        PantsDecomposition(5, ((0, 1),))
    with pytest.raises(PreconditionError):
        PantsDecomposition(5, ((0, 1), (2, 3)), ordering=(0, 2, 1, 3, 4))


def test_piece_words_multiply_to_identity(rng):
    rep = random_su2_representation(7, rng)
    from conetwist.groups import evaluate
    dec = PantsDecomposition(7, ((1, 2), (4, 5), (1, 2, 3), (4, 5, 6)))
    for p in dec.pieces:
        prod = evaluate(rep, p.words[0]) @ evaluate(rep, p.words[1]) @ evaluate(rep, p.words[2])
        assert np.abs(prod - np.eye(2)).max() < 1e-10


@pytest.mark.parametrize("d", [4, 5, 6, 7, 8])
def test_find_admissible(d, rng):
    for _ in range(20):
        rep = random_su2_representation(d, rng)
        dec = find_admissible(rep)
        assert is_admissible(rep, dec)


def test_find_admissible_avoids_commuting_pair(rng):
    # g0 and g1 commute; the first cut must not pair them
    a = np.diag([np.exp(0.4j), np.exp(-0.4j)])
    b = np.diag([np.exp(0.9j), np.exp(-0.9j)])
    from conetwist.algebra import su2_rotation
    c = su2_rotation([1, 0, 0], 1.1)
    rep = make_representation(punctured_sphere(4), [a, b, c])
    assert commute_defect(rep.mats[0], rep.mats[1]) < 1e-12
    dec = find_admissible(rep)
    assert is_admissible(rep, dec)
    assert set(dec.curves[0].block) not in ({0, 1}, {2, 3})


def test_find_admissible_rejects_reducible():
    rep = make_representation(punctured_sphere(4), [np.diag([np.exp(1j * t), np.exp(-1j * t)]) for t in (.3, .4, .5)])
    with pytest.raises(ReducibleError):
        find_admissible(rep)
