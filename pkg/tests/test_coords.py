import math

import numpy as np
import pytest

from conetwist.errors import ChartError, PreconditionError
from conetwist.coords import (
    AngleChart, Coordinates, build_section, lift_sign, psi_coordinates, psi_jacobian, reconstruct,
    split_deform, su2_pants_from_traces, tau_coordinates, traces_of,
)
from conetwist.flows import SplitData, twist
from conetwist.groups import chars_distance, random_su2_representation, relation_defect
from conetwist.pants import PantsDecomposition, standard_decomposition


@pytest.mark.parametrize("traces", [(0.3, -1.2, 0.7), (1.9, 1.9, 1.7), (-1.0, -1.0, 0.0)])
def test_pants_from_traces(traces):
    pair = su2_pants_from_traces(*traces)
    t1, t2, t3 = traces
    assert abs(np.trace(pair.A) - t1) < 1e-12
    assert abs(np.trace(pair.B) - t2) < 1e-12
    assert abs(np.trace(pair.A @ pair.B) - t3) < 1e-12


def test_pants_from_traces_rejects_non_unitary():
    with pytest.raises(PreconditionError):
        su2_pants_from_traces(1.9, 1.9, -1.9)


@pytest.mark.parametrize("d", [4, 5, 6, 7])
def test_section_has_requested_traces(d, rng):
    rep = random_su2_representation(d, rng)
    chart = AngleChart.build(rep)
    t = traces_of(chart, rep).real
    sec = build_section(chart, t)
    assert np.abs(traces_of(chart, sec) - t).max() < 1e-10
    assert np.abs(tau_coordinates(chart, sec).tau).max() < 1e-9


@pytest.mark.parametrize("dec", [None, "standard", "unflipped"])
def test_tau_round_trip(dec, rng):
    d = 6
    for _ in range(5):
        rep = random_su2_representation(d, rng)
        if dec == "standard":
            decomposition = standard_decomposition(d)
        elif dec == "unflipped":
            decomposition = PantsDecomposition(d, ((1, 2), (4, 5), (1, 2, 3)))
            assert not any(decomposition.flipped)
        else:
            decomposition = None
        try:
            chart = AngleChart.build(rep, decomposition)
        except PreconditionError:
            continue
        c = tau_coordinates(chart, rep)
        assert np.abs(c.tau.imag).max() < 1e-8
        assert chars_distance(reconstruct(chart, c), rep) < 1e-8
        # twisting along curve j by z shifts tau_j by z
        z = 0.37
        moved = twist(rep, chart.curve_split(0), z)
        c2 = tau_coordinates(chart, moved)
        # tau is defined modulo the centralizer period pi / sin(theta), tr = 2 cos(theta)
        per = math.pi / math.sqrt(1 - (c.curve_traces[0].real / 2) ** 2)
        shift = (c2.tau[0] - c.tau[0] - z).real
        assert abs(shift - per * round(shift / per)) < 1e-8


def test_tau_recovers_complex_times(rng):
    rep = random_su2_representation(5, rng)
    chart = AngleChart.build(rep)
    sec = build_section(chart, traces_of(chart, rep).real)
    z = np.array([0.2 + 0.05j, -0.4 + 0.1j])
    from conetwist.coords import flow_spec
    from conetwist.flows import flow
    got = tau_coordinates(chart, flow(sec, flow_spec(chart, z))).tau
    assert np.abs(got - z).max() < 1e-9


def test_section_rejects_complex_traces(rng):
    chart = AngleChart.build(random_su2_representation(4, rng))
    t = chart.base_traces.copy()
    t[0] += 0.5j
    with pytest.raises(ChartError):
        build_section(chart, t)


def test_lift_sign():
    assert lift_sign(2 * math.cos(1.0), 2.0) == 1
    assert lift_sign(-2 * math.cos(1.0), 2.0) == -1
    with pytest.raises(PreconditionError):
        lift_sign(0.0, math.pi)
    with pytest.raises(PreconditionError):
        lift_sign(0.3, 2.0)


def test_split_round_trip_random_chart(rng):
    rep = random_su2_representation(5, rng)
    chart = AngleChart.build(rep)
    signs = (1, -1)
    chart = chart.with_signs(split_signs=signs)
    out = rep
    lengths = (0.2, 0.05)
    for j, (s, l) in enumerate(zip(signs, lengths)):
        out = split_deform(out, chart.curve_split(j), s, l)
    assert relation_defect(out) < 1e-10
    cd = psi_coordinates(chart, out)
    assert np.abs(cd.lengths - lengths).max() < 1e-8


def test_wrong_split_direction_is_an_error(rng):
    rep = random_su2_representation(4, rng)
    chart = AngleChart.build(rep).with_signs(split_signs=(1,))
    with pytest.raises(ChartError):
        psi_coordinates(chart, split_deform(rep, chart.curve_split(0), -1, 0.3))


def test_psi_jacobian_is_invertible():
    from conetwist.cone import double_square, holonomy_of_complex
    base = holonomy_of_complex(double_square())
    chart = AngleChart.build(base, PantsDecomposition(4, ((1, 2),)), alphas=[4 * math.pi / 3] * 4,
                             split_signs=[1])
    jac = psi_jacobian(chart)
    assert jac.shape == (5, 5)
    assert np.linalg.svd(jac, compute_uv=False)[-1] > 1e-3


def test_coordinates_container():
    c = Coordinates(np.array([1.0, 1.0]), np.array([0.5]), np.array([0.0]))
    assert c.traces.tolist() == [1.0, 1.0, 0.5]
