import math

import pytest
from hypothesis import given, settings, strategies as st

from hardy.core import RadialTestFunction
from hardy.corollaries import (
    CaseTag,
    PowerWeightParams,
    classical_hardy_check,
    classical_halfline_constant,
    classify,
    classify_cartan_hadamard,
    classify_group,
    classify_hyperbolic,
    power_weight_problem,
)
from hardy.errors import DomainError
from hardy.geometry import unit_sphere_area


def test_group_examples():
    c = classify_group(PowerWeightParams(-1, 3, 2, 4), sphere_measure=2.0)
    assert c.finite and c.case_tag is CaseTag.GROUP_CRITICAL
    assert math.isclose(c.constant_over_sphere, 2 ** -0.5)
    assert math.isclose(c.best_constant, 1.0)
    assert not classify_group(PowerWeightParams(-1, 3.5, 2, 4)).finite  # off the critical line
    assert not classify_group(PowerWeightParams(0.5, 2.5, 1, 3)).finite  # alpha > 0
    assert not classify_group(PowerWeightParams(1, 1, 2, 4)).finite  # beta q < Q


def test_group_boundary_flags():
    assert classify_group(PowerWeightParams(-1e-12, 3, 1, 3)).boundary
    assert classify_group(PowerWeightParams(-1, 4 + 1e-10, 1, 3)).boundary
    assert not classify_group(PowerWeightParams(-1, 4, 1, 3)).boundary


def test_hyperbolic_cases():
    a = classify_hyperbolic(PowerWeightParams(-1, 3, 1, 3))
    assert a.finite and a.case_tag is CaseTag.HYP_CASE_A
    b = classify_hyperbolic(PowerWeightParams(-0.5, 2, 2, 3))
    assert b.case_tag is CaseTag.HYP_CASE_B and b.finite  # (n-1)/q = 1 <= 1.5 <= 1.5
    assert not classify_hyperbolic(PowerWeightParams(-0.5, 2.5, 2, 3)).finite
    assert not classify_hyperbolic(PowerWeightParams(0.5, 2, 1, 3)).finite
    with pytest.raises(DomainError):
        classify_hyperbolic(PowerWeightParams(-1, 1, 1, 1))


def test_invalid_params():
    with pytest.raises(DomainError):
        PowerWeightParams(0, 0, 0.5, 3)
    with pytest.raises(DomainError):
        PowerWeightParams(0, 0, 1, 3, -1)
    with pytest.raises(DomainError):
        classify(PowerWeightParams(0, 0, 1, 3), "sphere")


PARAMS = st.builds(
    PowerWeightParams,
    st.floats(-3, 3),
    st.floats(0, 4),
    st.sampled_from([1.0, 1.5, 2.0, 3.0]),
    st.sampled_from([2.0, 3.0, 4.0, 5.0]),
)


@settings(max_examples=300, deadline=None)
@given(PARAMS)
def test_cartan_hadamard_delegation(params):
    curved = PowerWeightParams(params.alpha, params.beta, params.q, params.dimension_param, 1.0)
    ch, hyp = classify_cartan_hadamard(curved), classify_hyperbolic(params)
    assert ch.case_tag is CaseTag.CH_CURVED
    assert (ch.finite, ch.boundary, ch.slacks) == (hyp.finite, hyp.boundary, hyp.slacks)
    ch0 = classify_cartan_hadamard(params)
    grp = classify_group(params, unit_sphere_area(int(params.dimension_param)))
    assert ch0.case_tag is CaseTag.CH_FLAT
    assert (ch0.finite, ch0.boundary, ch0.best_constant) == (grp.finite, grp.boundary, grp.best_constant)


def test_power_weight_problem_kinds():
    p = PowerWeightParams(-1, 3, 1, 3, 0.25)
    for kind in ("group", "euclidean", "hyperbolic", "cartan_hadamard"):
        prob = power_weight_problem(p, kind)
        assert prob.q == 1
    with pytest.raises(DomainError):
        power_weight_problem(p, "torus")


def test_classical_constant():
    assert classical_halfline_constant(2) == 4
    assert math.isclose(classical_halfline_constant(3), 1.5**3)
    with pytest.raises(DomainError):
        classical_halfline_constant(1)


@pytest.mark.parametrize(
    "f, key",
    [
        (RadialTestFunction.indicator(0, 1), "indicator"),
        (RadialTestFunction.closed_form(1.0, 1.0, 1.0), "r_exp"),
        (RadialTestFunction.step([0.5, 1, 3], [2, 1]), "two_step"),
    ],
)
def test_classical_check_matches_oracle(f, key, frozen):
    chk = classical_hardy_check(f, 2)
    assert chk.passed and chk.constant == 4
    assert math.isclose(chk.lhs, frozen[f"classical_p2_{key}_lhs"], rel_tol=1e-8)
    assert math.isclose(chk.rhs, frozen[f"classical_p2_{key}_rhs"], rel_tol=1e-10)
