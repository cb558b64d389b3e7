import numpy as np
import pytest

from conetwist.algebra import inverse, random_sl2, variation
from conetwist.errors import PreconditionError
from conetwist.flows import (
    FlowSpec, SplitData, commutation_defect, curves_disjoint, flow, one_sided_word, period,
    separating_genus_split, standard_hnn, trace_jacobian, trace_jacobian_rank, twist, twist_hnn,
    twist_separating,
)
from conetwist.groups import (
    chars_distance, evaluate, make_representation, punctured_sphere, random_genus2_su2,
    random_su2_representation, relation_defect,
)
from conetwist.pants import CurveClass


def test_twist_fixes_side1_and_curve_trace(rng):
    rep = random_su2_representation(6, rng)
    sp = SplitData.from_block(6, (1, 2, 3))
    out = twist_separating(rep, sp, 0.7 - 0.4j)
    for i in sp.side1:
        assert np.abs(out.mats[i] - rep.mats[i]).max() < 1e-14
    assert abs(np.trace(evaluate(out, sp.word)) - np.trace(evaluate(rep, sp.word))) < 1e-12
    assert relation_defect(out) < 1e-12
    w = one_sided_word(rng, sp.side2, 7)
    assert abs(np.trace(evaluate(out, w)) - np.trace(evaluate(rep, w))) < 1e-12


def test_zero_time_is_identity(rng):
    rep = random_su2_representation(5, rng)
    assert chars_distance(twist(rep, SplitData.from_block(5, (0, 1)), 0.0), rep) < 1e-14


def test_swapped_sides_reverse_time(rng):
    rep = random_su2_representation(5, rng)
    sp = SplitData.from_block(5, (2, 3))
    z = 0.4 + 0.3j
    assert chars_distance(twist(rep, sp.swapped(), z), twist(rep, sp, -z)) < 1e-12


def test_complement_block_gives_same_flow(rng):
    rep = random_su2_representation(6, rng)
    c = CurveClass(6, (4, 5))
    z = -0.3 + 0.8j
    a = twist(rep, SplitData.from_curve(c), z)
    b = twist(rep, SplitData.from_curve(c.complement()), z)
    assert chars_distance(a, b) < 1e-12


def test_period_formula(rng):
    rep = random_su2_representation(5, rng)
    sp = SplitData.from_block(5, (0, 1))
    f = variation(evaluate(rep, sp.word))
    for g in sp.side2:
        x = rep.mats[g]
        expected = f - x @ f @ inverse(x)
        assert np.abs(period(rep, sp, g) - expected).max() < 1e-8


def test_disjointness():
    d = 6
    assert curves_disjoint(CurveClass(d, (0, 1)), CurveClass(d, (0, 1, 2)))
    assert curves_disjoint(CurveClass(d, (0, 1)), CurveClass(d, (2, 3)))
    assert curves_disjoint(CurveClass(d, (0, 1, 2)), CurveClass(d, (3, 4, 5, 0)))
    assert not curves_disjoint(CurveClass(d, (0, 1)), CurveClass(d, (1, 2)))
    spec = FlowSpec(((SplitData.from_block(d, (0, 1)), 1.0), (SplitData.from_block(d, (1, 2)), 1.0)))
    rep = random_su2_representation(d, np.random.default_rng(0))
    with pytest.raises(PreconditionError):
        flow(rep, spec)


def test_disjoint_flows_commute(rng):
    for _ in range(20):
        rep = random_su2_representation(6, rng)
        c1 = SplitData.from_block(6, (0, 1))
        c2 = SplitData.from_block(6, (3, 4, 5))
        assert commutation_defect(rep, c1, c2, 0.5 + 0.5j, -0.3 + 0.9j) < 1e-10


def test_intersecting_flows_do_not_commute(rng):
    rep = random_su2_representation(5, rng)
    a = twist(twist(rep, SplitData.from_block(5, (0, 1)), 0.7), SplitData.from_block(5, (1, 2)), 0.9)
    b = twist(twist(rep, SplitData.from_block(5, (1, 2)), 0.9), SplitData.from_block(5, (0, 1)), 0.7)
    assert chars_distance(a, b) > 1e-3


def test_hnn_twist_preserves_relation_and_cut_traces(rng):
    rep = random_genus2_su2(rng)
    h = standard_hnn(2, 0)
    out = twist_hnn(rep, h, 0.6 + 0.2j)
    assert relation_defect(out) < 1e-10
    for i in h.cut:
        assert np.abs(out.mats[i] - rep.mats[i]).max() < 1e-14
    assert abs(np.trace(out.mats[0]) - np.trace(rep.mats[0])) < 1e-12
    # the trace of b_k moves
    assert abs(np.trace(out.mats[1]) - np.trace(rep.mats[1])) > 1e-6


def test_separating_genus_twist(rng):
    rep = random_genus2_su2(rng)
    out = twist(rep, separating_genus_split(2), 0.5 + 0.1j)
    assert relation_defect(out) < 1e-10


def test_hnn_needs_closed_surface(rng):
    with pytest.raises(PreconditionError):
        twist_hnn(random_su2_representation(4, rng), standard_hnn(2), 0.1)


def test_split_data_validation():
    with pytest.raises(PreconditionError):
        SplitData(((0, 1), (2, 1)), (0, 1), (2, 3))
    with pytest.raises(PreconditionError):
        SplitData(((0, 1),), (0, 1), (1, 2))


def test_trace_jacobian_against_analytic(rng):
    # d tr(g0) along g0 exp(eps X) is tr(g0 X)
    a, b = random_sl2(rng, 1.0, size=2)
    rep = make_representation(punctured_sphere(3), [a, b])
    jac = trace_jacobian(rep, [((0, 1),)])
    h_mat = np.diag([1.0, -1.0])
    assert abs(jac[0, 0] - np.trace(a @ h_mat)) < 1e-9


def test_rank_drops_for_commuting_pairs():
    a = np.diag([np.exp(0.3 + 0.2j), np.exp(-0.3 - 0.2j)])
    b = np.diag([np.exp(-0.5 + 1j), np.exp(0.5 - 1j)])
    rep = make_representation(punctured_sphere(3), [a, b])
    res = trace_jacobian_rank(rep, [((0, 1),), ((1, 1),), ((0, 1), (1, 1))])
    assert res.rank == 2 and res.singular_values[2] < 1e-10
