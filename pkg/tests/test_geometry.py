import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardy.errors import ConfigError, DomainError
from hardy.geometry import (
    PolarGeometry,
    QuasiNorm,
    QuasiNormKind,
    ball_volume,
    dilate,
    log_sinh,
    quasi_norm,
    radial_density,
    sphere_measure_mc,
    unit_sphere_area,
)


def test_radial_density_examples(frozen):
    assert math.isclose(radial_density(PolarGeometry.euclidean(2), 1.0), frozen["sphere_area_2"], rel_tol=1e-14)
    assert radial_density(PolarGeometry.half_line(), 7.3) == 1.0
    assert radial_density(PolarGeometry.hyperbolic(2), 1e-12) < 1e-10


def test_radial_density_rejects_nonpositive_r():
    with pytest.raises(DomainError):
        radial_density(PolarGeometry.euclidean(3), 0.0)
    with pytest.raises(DomainError):
        radial_density(PolarGeometry.euclidean(3), -1.0)


def test_radial_density_signals_overflow():
    g = PolarGeometry.hyperbolic(3)
    with pytest.raises(OverflowError):
        radial_density(g, 400.0)
    assert math.isfinite(g.log_density(400.0))


def test_log_density_formulas():
    r = np.array([0.3, 1.0, 5.0, 50.0])
    e3 = PolarGeometry.euclidean(3).log_density(r)
    assert np.allclose(e3, np.log(4 * np.pi) + 2 * np.log(r))
    h3 = PolarGeometry.hyperbolic(3).log_density(r)
    assert np.allclose(h3, np.log(4 * np.pi) + 2 * np.log(np.sinh(r)))


def test_ball_volume_examples(frozen):
    assert math.isclose(ball_volume(PolarGeometry.euclidean(3), 1.0), frozen["ball_E3_R1"], rel_tol=1e-9)
    assert ball_volume(PolarGeometry.hyperbolic(2), 0.0) == 0.0
    assert math.isclose(ball_volume(PolarGeometry.half_line(), 2.0), 2.0, rel_tol=1e-12)


def test_ball_volume_increasing():
    for g in (PolarGeometry.euclidean(2), PolarGeometry.hyperbolic(3), PolarGeometry.cartan_hadamard(4, 0.5)):
        vols = [ball_volume(g, R) for R in (0.0, 0.1, 1.0, 3.0, 10.0)]
        assert all(b > a for a, b in zip(vols, vols[1:]))


def test_group_with_unit_weights_matches_euclidean():
    r = np.geomspace(1e-3, 1e3, 13)
    g = PolarGeometry.homogeneous_group((1, 1, 1), unit_sphere_area(3))
    assert np.allclose(g.log_density(r), PolarGeometry.euclidean(3).log_density(r), rtol=0, atol=1e-13)


def test_hyperbolic_near_origin_is_euclidean():
    for n in (2, 3, 5):
        ratio = math.exp(PolarGeometry.hyperbolic(n).log_density(1e-6) - PolarGeometry.euclidean(n).log_density(1e-6))
        assert abs(ratio - 1) < 1e-6


def test_cartan_hadamard_unit_curvature_is_hyperbolic():
    r = np.geomspace(1e-4, 300, 40)
    for n in (2, 3, 4):
        a = PolarGeometry.cartan_hadamard(n, 1.0).log_density(r)
        b = PolarGeometry.hyperbolic(n).log_density(r)
        assert np.allclose(a, b, rtol=1e-14, atol=1e-12)


def test_cartan_hadamard_flat_is_euclidean():
    r = np.geomspace(1e-3, 1e3, 9)
    assert np.allclose(PolarGeometry.cartan_hadamard(3, 0.0).log_density(r), PolarGeometry.euclidean(3).log_density(r))


def test_log_sinh_stable(frozen):
    assert math.isclose(float(log_sinh(1.0)), frozen["log_sinh_1"], rel_tol=1e-14)
    assert math.isclose(float(log_sinh(1e4)), 1e4 - math.log(2), rel_tol=1e-15)


def test_quasi_norm_examples():
    qn = QuasiNorm(QuasiNormKind.MAX_TYPE, (1, 1, 2))
    assert quasi_norm(qn, [0, 0, 0]) == 0
    assert quasi_norm(qn, [2, 0, 0]) == 2
    k = QuasiNorm(QuasiNormKind.KORANYI, (1, 1, 2))
    assert math.isclose(quasi_norm(k, [1, 0, 0]), 1.0)
    assert math.isclose(quasi_norm(k, [0, 0, 16]), 4.0)


def test_quasi_norm_dimension_mismatch():
    with pytest.raises(DomainError):
        quasi_norm(QuasiNorm(QuasiNormKind.EUCLIDEAN, (1, 1)), [1.0, 2.0, 3.0])


def test_invalid_quasi_norm_weights():
    with pytest.raises(DomainError):
        QuasiNorm(QuasiNormKind.KORANYI, (1, 1, 1))
    with pytest.raises(DomainError):
        QuasiNorm(QuasiNormKind.EUCLIDEAN, (1, 2))


NORMS = [
    QuasiNorm(QuasiNormKind.MAX_TYPE, (1.0, 1.0, 2.0)),
    QuasiNorm(QuasiNormKind.MAX_TYPE, (0.5, 1.5, 3.0, 1.0)),
    QuasiNorm(QuasiNormKind.KORANYI, (1, 1, 2)),
    QuasiNorm(QuasiNormKind.KORANYI, (1, 1, 1, 1, 2)),
    QuasiNorm(QuasiNormKind.EUCLIDEAN, (1, 1, 1)),
]


def test_dilation_homogeneity_on_1000_samples():
    rng = np.random.default_rng(3)
    for qn in NORMS:
        x = rng.normal(size=(1000, qn.dimension))
        lam = np.exp(rng.uniform(-3, 3, size=1000))
        lhs = np.array([quasi_norm(qn, dilate(xi, li, qn.dilation_weights)) for xi, li in zip(x, lam)])
        rhs = lam * quasi_norm(qn, x)
        assert np.max(np.abs(lhs - rhs) / rhs) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(NORMS), st.data())
def test_quasi_norm_symmetric_and_definite(qn, data):
    # magnitudes stay where every weight's power of the norm is representable
    coord = st.one_of(st.just(0.0), st.floats(1e-60, 1e3), st.floats(-1e3, -1e-60))
    x = np.array(data.draw(st.lists(coord, min_size=qn.dimension, max_size=qn.dimension)))
    assert quasi_norm(qn, x) == quasi_norm(qn, -x)
    assert (quasi_norm(qn, x) == 0) == bool(np.all(x == 0))


def test_sphere_measure_examples():
    est = sphere_measure_mc(QuasiNorm(QuasiNormKind.MAX_TYPE, (1, 1)), samples=200_000, seed=1)
    assert abs(est.value - 8.0) <= 3 * est.std_error + 1e-12


def test_sphere_measure_koranyi_matches_closed_form():
    # unit ball of (|x'|^4 + t^2)^(1/4) in R^3 has volume pi^2 / 2, so |S| = 2 pi^2
    est = sphere_measure_mc(QuasiNorm(QuasiNormKind.KORANYI, (1, 1, 2)), samples=400_000, seed=5)
    assert abs(est.value - 2 * math.pi**2) <= 3 * est.std_error


def test_sphere_measure_is_deterministic():
    qn = QuasiNorm(QuasiNormKind.KORANYI, (1, 1, 2))
    a = sphere_measure_mc(qn, samples=50_000, seed=11).to_dict()
    b = sphere_measure_mc(qn, samples=50_000, seed=11).to_dict()
    assert a == b


def test_sphere_measure_rejects_small_box_and_few_samples():
    qn = QuasiNorm(QuasiNormKind.EUCLIDEAN, (1, 1))
    with pytest.raises(ConfigError):
        sphere_measure_mc(qn, bounding_box=(0.5, 1.0), samples=20_000)
    with pytest.raises(ConfigError):
        sphere_measure_mc(qn, samples=100)
