import math

import numpy as np
import pytest

from conetwist.errors import PreconditionError
from conetwist.experiments import (
    LimitConfig, braid_half_twist, dehn_twist_full, geometric_gamma_sign, grid_csv, limit_base,
    limit_experiment, power, run_checks,
)
from conetwist.groups import (
    apply_automorphism, chars_distance, evaluate, fingerprint, random_su2_representation,
    relation_defect,
)
from conetwist.pants import CurveClass


def test_half_twist_squared_is_full_twist(rng):
    # as outer automorphisms: sigma_i^2 conjugates the block (i, i+1) by its product
    for d, i in ((4, 0), (5, 1), (6, 4)):
        rep = random_su2_representation(d, rng)
        a = apply_automorphism(rep, power(braid_half_twist(d, i), 2))
        b = apply_automorphism(rep, dehn_twist_full(CurveClass(d, (i, i + 1)), -1))
        assert chars_distance(fingerprint(a), fingerprint(b)) < 1e-12


def test_full_twist_fixes_curve_and_relation(rng):
    rep = random_su2_representation(5, rng)
    c = CurveClass(5, (1, 2, 3))
    out = apply_automorphism(rep, dehn_twist_full(c, 3))
    assert relation_defect(out) < 1e-12
    assert abs(np.trace(evaluate(out, c.word)) - np.trace(evaluate(rep, c.word))) < 1e-12


def test_twist_and_inverse_cancel(rng):
    rep = random_su2_representation(4, rng)
    c = CurveClass(4, (0, 1))
    out = apply_automorphism(apply_automorphism(rep, dehn_twist_full(c, 2)), dehn_twist_full(c, -2))
    assert np.abs(out.mats - rep.mats).max() < 1e-12


def test_half_twist_range():
    with pytest.raises(PreconditionError):
        braid_half_twist(4, 3)


def test_limit_base_traces():
    base = limit_base(LimitConfig())
    assert abs(np.trace(evaluate(base, ((0, 1), (1, 1))))) < 1e-12
    assert abs(np.trace(evaluate(base, ((1, 1), (2, 1)))) - 1) < 1e-12
    assert geometric_gamma_sign(LimitConfig()) == -1


def test_limit_config_validation():
    with pytest.raises(PreconditionError):
        LimitConfig(length=-1.0)
    with pytest.raises(PreconditionError):
        LimitConfig(marking="other")


def test_limit_report_is_deterministic():
    cfg = LimitConfig(ns=(1, 2, 4, 8))
    a, b = limit_experiment(cfg), limit_experiment(cfg)
    assert a.to_dict() == b.to_dict()
    assert a.non_increasing
    assert a.distances[0] > a.distances[-1]
    # flow-time distances decay roughly like 1/n
    ratio = np.array(a.flow_distances[:-1]) / np.array(a.flow_distances[1:])
    assert np.all(ratio > 1.8)
    assert abs(a.fitted_factor - 2 / math.sqrt(3)) < 5e-3


def test_natural_marking_records_failures():
    rep = limit_experiment(LimitConfig(marking="natural", ns=(1, 2)))
    assert rep.failures and math.isnan(rep.distances[0])


@pytest.mark.parametrize("suite", ["core", "poisson", "admissible", "coords", "doubled-square", "football"])
def test_check_suites_pass(suite):
    out = run_checks(suite, seed=3)
    assert out["passed"], [p for p in out["properties"] if not p["passed"]]


def test_unknown_suite():
    with pytest.raises(PreconditionError):
        run_checks("nope")


def test_grid_csv():
    assert grid_csv([1, 2], [0.5, 0.25]) == "n,d_n\n1,0.5\n2,0.25\n"
