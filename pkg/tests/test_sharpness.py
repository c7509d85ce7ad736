import math
import time

import pytest
from hypothesis import given, settings, strategies as st

from hardy.core import Direction, HardyProblem
from hardy.errors import DomainError, ResolutionError
from hardy.geometry import PolarGeometry
from hardy.sharpness import (
    default_schedule,
    lower_bound_certificate,
    sharpness_study,
    witness_function,
    witness_spec,
)
from hardy.weights import RadialWeight


def critical_e3():
    return HardyProblem(PolarGeometry.euclidean(3), RadialWeight.power(-4), RadialWeight.power(-1), 1)


def hyperbolic_case_a():
    # H^3, q = 1, u = sinh^-3, v = sinh^-1: finite, and 1/v = sinh r peaks at the ball edge
    return HardyProblem(PolarGeometry.hyperbolic(3), RadialWeight.sinh_power(-3), RadialWeight.sinh_power(-1), 1)


def test_study_on_critical_problem():
    t = time.perf_counter()
    study = sharpness_study(critical_e3())
    assert time.perf_counter() - t < 10
    assert study.passed
    A = study.A.value
    assert study.best_ratio >= 0.99 * A
    for c in study.certificates:
        assert c.analytic_floor * (1 - 1e-9) <= c.ratio_achieved <= A * (1 + 1e-4)
    assert all(study.monotone_in_n().values())


def test_witness_sets():
    # v = r^-1 on E3: 1/v = r, so the set is (R - 1/n, R]
    spec = witness_spec(critical_e3(), 1.0, 10)
    assert spec.resolved_set == pytest.approx((0.9, 1.0))
    conj = HardyProblem(PolarGeometry.half_line(), RadialWeight.power(0), RadialWeight.power(1), 1,
                        direction=Direction.CONJUGATE)
    spec = witness_spec(conj, 1.0, 10)
    assert spec.resolved_set == pytest.approx((1.0, 1 / 0.9))


def test_tabulated_witness_is_exact_crossing():
    # v rises linearly 1 -> 1.5 on [0.5, 1]; 1/v = 0.9 at v = 1/0.9
    tab = HardyProblem(PolarGeometry.half_line(), RadialWeight.power(-2),
                       RadialWeight.tabulated([0.5, 1, 2], [1, 1.5, 2]), 1)
    lo, hi = witness_spec(tab, 2.0, 10).resolved_set
    assert lo == 0.5
    assert math.isclose(hi, 0.5 + (1 / 0.9 - 1) / 1.0, rel_tol=1e-12)


def test_whole_ball_when_slack_exceeds_sup():
    prob = HardyProblem(PolarGeometry.half_line(), RadialWeight.power(-2), RadialWeight.power(0), 1)
    spec = witness_spec(prob, 3.0, 1)
    assert spec.resolved_set == (0.0, 3.0) and spec.threshold == 0.0


def test_witness_refuses_infinite_sup_and_unresolvable_sets():
    prob = HardyProblem(PolarGeometry.euclidean(3), RadialWeight.power(-4), RadialWeight.power(1), 1)
    with pytest.raises(DomainError):
        witness_spec(prob, 1.0, 10)
    with pytest.raises(ResolutionError):
        witness_spec(critical_e3(), 1.0, 10**17)


def test_divergent_constant_is_refused():
    prob = HardyProblem(PolarGeometry.euclidean(3), RadialWeight.power(-4), RadialWeight.power(-0.9), 1)
    study = sharpness_study(prob)
    assert study.refused and not study.passed and not study.certificates


def test_conjugate_exterior_witness_is_capped():
    conj = HardyProblem(PolarGeometry.half_line(), RadialWeight.power(0), RadialWeight.power(0), 1,
                        direction=Direction.CONJUGATE)
    spec = witness_spec(conj, 2.0, 10)
    assert spec.capped and spec.resolved_set == (2.0, 4.0)


def test_default_schedule():
    assert default_schedule(None, (1, 2)) == [(0.1, 1), (0.1, 2), (1.0, 1), (1.0, 2), (10.0, 1), (10.0, 2)]


def test_certificate_in_hyperbolic_case():
    prob = hyperbolic_case_a()
    c = lower_bound_certificate(prob, 1.0, 1000)
    assert c.floor_ok and c.upper_ok
    assert witness_function(prob, 1.0, 1000).support == c.spec.resolved_set


@settings(max_examples=15, deadline=None)
@given(st.floats(0.05, 20.0), st.lists(st.integers(2, 100000), min_size=2, max_size=4, unique=True))
def test_certificate_ratio_monotone_in_n(R, ns):
    prob = hyperbolic_case_a()
    study = sharpness_study(prob, [(R, n) for n in sorted(ns)])
    assert study.error is None
    assert all(study.monotone_in_n().values())
    assert all(c.floor_ok and c.upper_ok for c in study.certificates)
