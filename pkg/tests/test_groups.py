import numpy as np
import pytest

from conetwist.algebra import random_sl2, random_su2
from conetwist.errors import PreconditionError, ReducibleError
from conetwist.groups import (
    Representation, align, apply_automorphism, chars_distance, closed_genus, evaluate, fingerprint,
    free_reduce, identity_automorphism, invert_word, is_irreducible, make_representation, punctured_sphere,
    random_genus2_su2, random_su2_representation, relation_defect, same_character, substitute, unitarize,
    word_from_signed,
)


def test_word_helpers():
    w = word_from_signed([1, -2, 3])
    assert w == ((0, 1), (1, -1), (2, 1))
    assert invert_word(w) == ((2, -1), (1, 1), (0, -1))
    assert free_reduce(w + invert_word(w)) == ()
    assert substitute(((0, 1),), [((1, 1), (2, 1))] * 3) == ((1, 1), (2, 1))


def test_presentations():
    p = punctured_sphere(4)
    assert p.n_generators == 4 and p.relation == ((0, 1), (1, 1), (2, 1), (3, 1))
    g = closed_genus(2)
    assert g.n_generators == 4
    assert g.relation[:4] == ((0, 1), (1, 1), (0, -1), (1, -1))
    with pytest.raises(PreconditionError):
        punctured_sphere(2)
    with pytest.raises(PreconditionError):
        p.check_word(((7, 1),))


def test_relation_is_enforced(rng):
    mats = random_su2(rng, 4)
    with pytest.raises(PreconditionError):
        Representation(punctured_sphere(4), mats)
    rep = make_representation(punctured_sphere(4), mats[:3])
    assert relation_defect(rep) < 1e-12
    with pytest.raises(ValueError):
        rep.mats[0, 0, 0] = 2


def test_fingerprint_is_conjugation_invariant(rng):
    rep = random_su2_representation(5, rng)
    g = random_sl2(rng)
    assert chars_distance(rep, rep.conjugate(g)) < 1e-10
    assert same_character(rep, rep.conjugate(g))
    h = align(rep, rep.conjugate(g))
    assert np.abs(h - g).max() < 1e-8 or np.abs(h + g).max() < 1e-8


def test_irreducibility(rng):
    d = [np.diag([np.exp(1j * t), np.exp(-1j * t)]) for t in (0.3, 0.5)]
    rep = make_representation(punctured_sphere(3), d)
    assert not is_irreducible(rep)
    assert is_irreducible(random_su2_representation(4, rng))


def test_unitarize(rng):
    su = random_su2_representation(4, rng)
    g = random_sl2(rng, 1.5)
    back = unitarize(su.conjugate(g))
    assert all(np.abs(m @ m.conj().T - np.eye(2)).max() < 1e-9 for m in back.mats)
    assert chars_distance(back, su) < 1e-9
    red = make_representation(punctured_sphere(3), [np.diag([2.0, 0.5]), np.diag([3.0, 1 / 3])])
    with pytest.raises(ReducibleError):
        unitarize(red)
    # real hyperbolic traces do not come from SU(2)
    non = make_representation(punctured_sphere(3), [random_sl2(rng, 2.0), random_sl2(rng, 2.0)])
    with pytest.raises(PreconditionError):
        unitarize(non)


def test_automorphism_composition(rng):
    from conetwist.experiments import braid_half_twist
    rep = random_su2_representation(4, rng)
    a, b = braid_half_twist(4, 0), braid_half_twist(4, 2)
    two = apply_automorphism(apply_automorphism(rep, a), b)
    assert chars_distance(two, apply_automorphism(rep, a.then(b))) < 1e-12
    assert chars_distance(apply_automorphism(rep, identity_automorphism(rep.presentation)), rep) == 0


def test_genus2_sampler(rng):
    rep = random_genus2_su2(rng)
    assert relation_defect(rep) < 1e-12
    assert evaluate(rep, ((0, 1),)).shape == (2, 2)
    assert len(fingerprint(rep)) > 4
