"""Closed-form admissibility of power weights on groups, hyperbolic and Cartan-Hadamard spaces.

Weights are ``u = rho**(-beta*q)`` and ``v = rho**alpha`` where ``rho`` is
``|x|`` on homogeneous groups and ``b = 0`` manifolds, ``sinh |x|`` on
hyperbolic space and ``sinh(sqrt(b) |x|)`` on curved Cartan-Hadamard
manifolds. The classifiers below serve as independent oracles for the
numerical constant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .core import HardyProblem, RadialTestFunction, hardy_lhs, _integral
from .errors import DomainError
from .geometry import PolarGeometry, unit_sphere_area
from .quadrature import QuadConfig
from .values import jsonable
from .weights import RadialWeight

EQUALITY_TOL = 1e-12
DEFAULT_BAND = 1e-9


class CaseTag(str, enum.Enum):
    GROUP_CRITICAL = "group_critical"
    HYP_CASE_A = "hyp_case_a"
    HYP_CASE_B = "hyp_case_b"
    CH_FLAT = "ch_flat"
    CH_CURVED = "ch_curved"
    INVALID = "invalid"


@dataclass(frozen=True)
class PowerWeightParams:
    alpha: float
    beta: float
    q: float
    dimension_param: float
    curvature_param: float = 0.0

    def __post_init__(self):
        if not self.q >= 1:
            raise DomainError(f"q must be >= 1, got {self.q!r}")
        if not self.dimension_param > 0:
            raise DomainError("dimension parameter must be positive")
        if not self.curvature_param >= 0:
            raise DomainError("curvature parameter b must be nonnegative")


@dataclass(frozen=True)
class Classification:
    """Closed-form verdict. ``slacks`` holds the signed margin of every constraint."""

    finite: bool
    case_tag: CaseTag
    boundary: bool
    best_constant: float | None = None
    constant_over_sphere: float | None = None
    slacks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return jsonable({
            "finite": self.finite,
            "case_tag": self.case_tag.value,
            "boundary": self.boundary,
            "best_constant": self.best_constant,
            "constant_over_sphere": self.constant_over_sphere,
            "slacks": self.slacks,
        })


def _near(slacks: dict, band: float) -> bool:
    return any(abs(s) <= band for s in slacks.values())


def classify_group(
    params: PowerWeightParams, sphere_measure: float | None = None, band: float = DEFAULT_BAND
) -> Classification:
    """Finite iff ``beta*q > Q``, ``alpha < 0`` and ``alpha + beta = Q/q``.

    ``alpha + beta = Q/q`` is tested to absolute tolerance 1e-12. Without a
    sphere measure only ``1/|beta*q - Q|**(1/q)`` is returned.
    """
    a, b, q, Q = params.alpha, params.beta, params.q, params.dimension_param
    slacks = {"beta_q_minus_Q": b * q - Q, "alpha": a, "alpha_plus_beta_minus_Q_over_q": a + b - Q / q}
    finite = b * q > Q and a < 0 and abs(a + b - Q / q) <= EQUALITY_TOL
    eq = abs(slacks["alpha_plus_beta_minus_Q_over_q"])
    # exact criticality is the finite case itself, only near misses are ambiguous
    boundary = abs(slacks["beta_q_minus_Q"]) <= band or abs(a) <= band or EQUALITY_TOL < eq <= band
    if not finite:
        return Classification(False, CaseTag.INVALID, boundary, slacks=slacks)
    factor = abs(b * q - Q) ** (-1.0 / q)
    best = None if sphere_measure is None else sphere_measure ** (1.0 / q) * factor
    return Classification(True, CaseTag.GROUP_CRITICAL, boundary, best, factor, slacks)


def classify_hyperbolic(params: PowerWeightParams, band: float = DEFAULT_BAND) -> Classification:
    """Split on the sign of ``n - beta*q``.

    * ``n - beta*q >= 0``: finite iff ``alpha <= 0`` and ``alpha + beta >= (n-1)/q``.
    * ``n - beta*q < 0``: finite iff ``alpha <= 0`` and
      ``(n-1)/q <= alpha + beta <= n/q``.

    ``boundary`` is set when any of these quantities, the case split included,
    is within ``band`` of equality.
    """
    a, b, q, n = params.alpha, params.beta, params.q, params.dimension_param
    if n < 2:
        raise DomainError("hyperbolic classification needs n >= 2")
    split = n - b * q
    s = a + b
    tol = EQUALITY_TOL
    slacks = {"n_minus_beta_q": split, "alpha": a, "alpha_plus_beta_minus_lower": s - (n - 1) / q}
    if split >= -tol:
        tag = CaseTag.HYP_CASE_A
        finite = a <= tol and s >= (n - 1) / q - tol
    else:
        tag = CaseTag.HYP_CASE_B
        slacks["alpha_plus_beta_minus_upper"] = s - n / q
        finite = a <= tol and (n - 1) / q - tol <= s <= n / q + tol
    return Classification(finite, tag, _near(slacks, band), slacks=slacks)


def classify_cartan_hadamard(params: PowerWeightParams, band: float = DEFAULT_BAND) -> Classification:
    """Flat manifolds follow the group rule with ``Q = n``, curved ones the hyperbolic rule."""
    if params.curvature_param == 0:
        n = params.dimension_param
        c = classify_group(params, unit_sphere_area(int(n)) if float(n).is_integer() else None, band)
        tag = CaseTag.CH_FLAT
    else:
        c = classify_hyperbolic(params, band)
        tag = CaseTag.CH_CURVED
    return Classification(c.finite, tag, c.boundary, c.best_constant, c.constant_over_sphere, c.slacks)


def power_weight_problem(params: PowerWeightParams, kind: str, sphere_measure: float | None = None) -> HardyProblem:
    """The direct problem whose admissibility the matching classifier predicts.

    ``kind`` is ``"group"``, ``"euclidean"``, ``"hyperbolic"`` or
    ``"cartan_hadamard"``.
    """
    a, b, q, n = params.alpha, params.beta, params.q, params.dimension_param
    if kind == "group":
        geom = PolarGeometry.homogeneous_group((n,), sphere_measure or 1.0)
        u, v = RadialWeight.power(-b * q), RadialWeight.power(a)
    elif kind == "euclidean":
        geom = PolarGeometry.euclidean(n)
        u, v = RadialWeight.power(-b * q), RadialWeight.power(a)
    elif kind == "hyperbolic":
        geom = PolarGeometry.hyperbolic(n)
        u, v = RadialWeight.sinh_power(-b * q), RadialWeight.sinh_power(a)
    elif kind == "cartan_hadamard":
        bc = params.curvature_param
        geom = PolarGeometry.cartan_hadamard(n, bc)
        if bc == 0:
            u, v = RadialWeight.power(-b * q), RadialWeight.power(a)
        else:
            s = math.sqrt(bc)
            u, v = RadialWeight.sinh_scaled_power(-b * q, s), RadialWeight.sinh_scaled_power(a, s)
    else:
        raise DomainError(f"unknown geometry kind {kind!r}")
    return HardyProblem(geom, u, v, q)


def classify(params: PowerWeightParams, kind: str, sphere_measure: float | None = None,
             band: float = DEFAULT_BAND) -> Classification:
    if kind == "group":
        return classify_group(params, sphere_measure, band)
    if kind == "euclidean":
        n = params.dimension_param
        return classify_group(params, unit_sphere_area(int(n)), band)
    if kind == "hyperbolic":
        return classify_hyperbolic(params, band)
    if kind == "cartan_hadamard":
        return classify_cartan_hadamard(params, band)
    raise DomainError(f"unknown geometry kind {kind!r}")


# -- the classical inequality on the half-line -------------------------------------


def classical_halfline_constant(p: float) -> float:
    """``(p/(p-1))**p``, the sharp constant of the classical Hardy inequality."""
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p!r}")
    return (p / (p - 1.0)) ** p


@dataclass(frozen=True)
class ClassicalCheck:
    p: float
    lhs: float
    rhs: float
    constant: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs

    @property
    def passed(self) -> bool:
        return self.lhs <= self.constant * self.rhs * (1.0 + 1e-9)

    def to_dict(self) -> dict:
        return jsonable({**self.__dict__, "ratio": self.ratio, "passed": self.passed})


def classical_hardy_check(f: RadialTestFunction, p: float, cfg: QuadConfig | None = None) -> ClassicalCheck:
    """Both sides of ``int (F(x)/x)^p dx <= (p/(p-1))^p int f^p`` on the half-line."""
    cfg = cfg or QuadConfig()
    c = classical_halfline_constant(p)
    geom = PolarGeometry.half_line()
    prob = HardyProblem(geom, RadialWeight.power(-p), RadialWeight.power(0.0), p)
    lhs = hardy_lhs(prob, f, cfg)
    lo, hi = f.support
    rhs = _integral(lambda r: p * f.log_value(r), lo, hi, cfg, f.inner_breakpoints)
    if not (lhs.is_finite and rhs.is_finite):
        raise DomainError("f must have finite p-th moment and finite averaged norm")
    return ClassicalCheck(p, math.exp(p * lhs.log_value), math.exp(rhs.log_value), c)
