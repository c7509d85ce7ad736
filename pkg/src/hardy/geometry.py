"""Metric measure spaces reduced to their radial density, and quasi-norms.

A space with a polar decomposition at a point is represented here only by
the angularly integrated density ``Lambda(r)``: every integral of a radial
function is ``int_0^inf f(r) Lambda(r) dr``. Densities are exposed in log
space because ``sinh(r)**(n-1)`` leaves the double range near
``r = 710/(n-1)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DomainError

LN2 = math.log(2.0)


class GeometryKind(str, enum.Enum):
    HALF_LINE = "half_line"
    EUCLIDEAN = "euclidean"
    HOMOGENEOUS_GROUP = "homogeneous_group"
    HYPERBOLIC = "hyperbolic"
    CARTAN_HADAMARD = "cartan_hadamard"
    CUSTOM_RADIAL = "custom_radial"


def log_sinh(x):
    """``log(sinh(x))`` for ``x > 0`` without overflow for large ``x``."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    big = x > 20.0
    xb = x[big]
    out[big] = xb - LN2 + np.log1p(-np.exp(-2.0 * xb))
    xs = x[~big]
    with np.errstate(divide="ignore", invalid="ignore"):
        out[~big] = np.log(np.sinh(xs))
    return out if out.ndim else float(out)


def unit_sphere_area(n: int) -> float:
    """Surface area of the unit sphere ``S^{n-1}`` in ``R^n``."""
    if n < 1:
        raise DomainError(f"dimension must be positive, got {n}")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


@dataclass(frozen=True)
class PolarGeometry:
    """Radial density of a space with polar decomposition.

    Use the named constructors; the raw fields mirror the configuration
    block. ``sphere_measure`` is the area of the unit sphere for the chosen
    (quasi-)norm and is absorbed into the density for custom geometries.
    """

    kind: GeometryKind
    topological_dimension: int = 1
    homogeneous_dimension: float = 1.0
    dilation_weights: tuple[float, ...] = ()
    curvature_param: float = 0.0
    sphere_measure: float = 1.0
    custom_log_density: Callable | None = field(default=None, compare=False, repr=False)
    label: str = ""

    # -- constructors -------------------------------------------------------
    @classmethod
    def half_line(cls) -> "PolarGeometry":
        return cls(GeometryKind.HALF_LINE, 1, 1.0, (), 0.0, 1.0)

    @classmethod
    def euclidean(cls, n: int) -> "PolarGeometry":
        n = _positive_int(n, "n")
        return cls(GeometryKind.EUCLIDEAN, n, float(n), (), 0.0, unit_sphere_area(n))

    @classmethod
    def homogeneous_group(
        cls, dilation_weights: Sequence[float], sphere_measure: float
    ) -> "PolarGeometry":
        nu = tuple(float(w) for w in dilation_weights)
        if not nu or any(w <= 0 for w in nu):
            raise DomainError("dilation weights must be a nonempty list of positive reals")
        if not sphere_measure > 0:
            raise DomainError("sphere measure must be positive")
        return cls(
            GeometryKind.HOMOGENEOUS_GROUP, len(nu), float(sum(nu)), nu, 0.0, float(sphere_measure)
        )

    @classmethod
    def hyperbolic(cls, n: int) -> "PolarGeometry":
        n = _positive_int(n, "n")
        if n < 2:
            raise DomainError("hyperbolic space needs n >= 2")
        return cls(GeometryKind.HYPERBOLIC, n, float(n), (), 1.0, unit_sphere_area(n))

    @classmethod
    def cartan_hadamard(cls, n: int, b: float) -> "PolarGeometry":
        n = _positive_int(n, "n")
        if b < 0:
            raise DomainError("curvature parameter b must be nonnegative (curvature is -b)")
        return cls(GeometryKind.CARTAN_HADAMARD, n, float(n), (), float(b), unit_sphere_area(n))

    @classmethod
    def custom(cls, log_density: Callable, label: str = "custom") -> "PolarGeometry":
        """Arbitrary radial density given by a vectorised ``r -> log Lambda(r)``."""
        return cls(GeometryKind.CUSTOM_RADIAL, 1, 1.0, (), 0.0, 1.0, log_density, label)

    # -- density ------------------------------------------------------------
    def log_density(self, r):
        """Vectorised ``log Lambda(r)`` for ``r > 0``."""
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            logr = np.log(r)
        kind = self.kind
        if kind is GeometryKind.HALF_LINE:
            out = np.zeros_like(r)
        elif kind in (GeometryKind.EUCLIDEAN, GeometryKind.HOMOGENEOUS_GROUP):
            out = math.log(self.sphere_measure) + (self.homogeneous_dimension - 1.0) * logr
        elif kind is GeometryKind.HYPERBOLIC:
            n1 = self.topological_dimension - 1
            out = math.log(self.sphere_measure) + n1 * log_sinh(r)
        elif kind is GeometryKind.CARTAN_HADAMARD:
            n1 = self.topological_dimension - 1
            b = self.curvature_param
            if b == 0.0:
                out = math.log(self.sphere_measure) + n1 * logr
            else:
                # J(r) r^{n-1} = (sinh(sqrt(b) r) / sqrt(b))^{n-1}
                sb = math.sqrt(b)
                out = math.log(self.sphere_measure) + n1 * (log_sinh(sb * r) - math.log(sb))
        else:
            out = np.asarray(self.custom_log_density(r), dtype=float)
        out = np.asarray(out, dtype=float)
        if np.any(r <= 0):
            out = np.where(r > 0, out, np.nan)
        return out if out.ndim else float(out)

    def describe(self) -> dict:
        d = {
            "kind": self.kind.value,
            "n": self.topological_dimension,
            "Q": self.homogeneous_dimension,
            "sphere_measure": self.sphere_measure,
        }
        if self.dilation_weights:
            d["nu"] = list(self.dilation_weights)
        if self.kind is GeometryKind.CARTAN_HADAMARD:
            d["b"] = self.curvature_param
        if self.label:
            d["label"] = self.label
        return d


def _positive_int(n, name: str) -> int:
    if int(n) != n or n < 1:
        raise DomainError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def radial_density(geom: PolarGeometry, r: float) -> float:
    """``Lambda(r)`` in linear space.

    Raises ``OverflowError`` when the value exceeds the double range; use
    ``geom.log_density`` in that regime.
    """
    if not r > 0:
        raise DomainError(f"radial density needs r > 0, got {r!r}")
    log_value = float(geom.log_density(r))
    if log_value > 709.78:
        raise OverflowError(
            f"Lambda({r}) = exp({log_value:.6g}) overflows; use log_density instead"
        )
    return math.exp(log_value)


def ball_volume(geom: PolarGeometry, R: float, quad=None) -> float:
    """``int_0^R Lambda(r) dr``, the measure of the ball of radius ``R``."""
    from .quadrature import QuadConfig, integrate_interval

    if R < 0:
        raise DomainError(f"radius must be nonnegative, got {R!r}")
    if R == 0:
        return 0.0
    res = integrate_interval(geom.log_density, 0.0, R, quad or QuadConfig())
    return res.value


# -- quasi-norms on homogeneous groups ---------------------------------------


class QuasiNormKind(str, enum.Enum):
    MAX_TYPE = "max"
    KORANYI = "koranyi"
    EUCLIDEAN = "euclidean"


@dataclass(frozen=True)
class QuasiNorm:
    """A homogeneous quasi-norm in exponential coordinates.

    ``MAX_TYPE`` is ``max_i |x_i|**(1/nu_i)`` for any positive weights.
    ``KORANYI`` is the Heisenberg gauge ``(|x'|**4 + t**2)**(1/4)`` with
    weights ``(1, ..., 1, 2)``; the common factor 16 on ``t**2`` is omitted.
    ``EUCLIDEAN`` requires all weights equal to one.
    """

    kind: QuasiNormKind
    dilation_weights: tuple[float, ...]

    def __post_init__(self):
        nu = tuple(float(w) for w in self.dilation_weights)
        object.__setattr__(self, "dilation_weights", nu)
        if not nu or any(w <= 0 for w in nu):
            raise DomainError("dilation weights must be positive")
        if self.kind is QuasiNormKind.KORANYI:
            if len(nu) < 3 or len(nu) % 2 == 0 or any(w != 1.0 for w in nu[:-1]) or nu[-1] != 2.0:
                raise DomainError("Koranyi gauge needs weights (1, ..., 1, 2) of odd length >= 3")
        if self.kind is QuasiNormKind.EUCLIDEAN and any(w != 1.0 for w in nu):
            raise DomainError("the Euclidean norm is homogeneous only for unit weights")

    @property
    def dimension(self) -> int:
        return len(self.dilation_weights)

    @property
    def homogeneous_dimension(self) -> float:
        return float(sum(self.dilation_weights))

    def __call__(self, x) -> np.ndarray:
        return quasi_norm(self, x)


def _scaled_l2(x):
    m = np.max(np.abs(x), axis=-1)
    safe = np.where(m > 0, m, 1.0)
    return np.where(m > 0, m * np.sqrt(np.sum((x / safe[..., None]) ** 2, axis=-1)), 0.0)


def quasi_norm(qn: QuasiNorm, x):
    """Evaluate the quasi-norm on a vector or on the rows of an array."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (qn.dimension,):
        raise DomainError(f"expected coordinates of length {qn.dimension}, got shape {x.shape}")
    if qn.kind is QuasiNormKind.MAX_TYPE:
        nu = np.asarray(qn.dilation_weights)
        out = np.max(np.abs(x) ** (1.0 / nu), axis=-1)
    elif qn.kind is QuasiNormKind.KORANYI:
        # (|x'|^4 + t^2)^(1/4) written over a common scale to dodge underflow
        a, b = _scaled_l2(x[..., :-1]), np.sqrt(np.abs(x[..., -1]))
        m = np.maximum(a, b)
        safe = np.where(m > 0, m, 1.0)
        out = np.where(m > 0, m * ((a / safe) ** 4 + (b / safe) ** 4) ** 0.25, 0.0)
    else:
        out = _scaled_l2(x)
    return out if out.ndim else float(out)


def dilate(x, lam: float, dilation_weights: Sequence[float]) -> np.ndarray:
    """``D_lam(x) = (lam**nu_1 x_1, ..., lam**nu_N x_N)``."""
    if not lam > 0:
        raise DomainError("dilation factor must be positive")
    return np.asarray(x, dtype=float) * lam ** np.asarray(dilation_weights, dtype=float)


@dataclass(frozen=True)
class SphereMeasureEstimate:
    value: float
    std_error: float
    ball_volume: float
    ball_volume_std_error: float
    samples: int
    accepted: int
    seed: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def sphere_measure_mc(
    qn: QuasiNorm,
    Q: float | None = None,
    bounding_box: Sequence[float] | None = None,
    samples: int = 1_000_000,
    seed: int = 0,
    chunk: int = 1_000_000,
) -> SphereMeasureEstimate:
    """Estimate ``|S|`` for a quasi-norm by rejection sampling.

    The unit ball volume is estimated from uniform samples in the box
    ``prod [-h_i, h_i]``; polar integration of the ball indicator gives
    ``vol(B) = |S| / Q``.
    """
    N = qn.dimension
    Q = qn.homogeneous_dimension if Q is None else float(Q)
    if not Q > 0:
        raise DomainError("homogeneous dimension must be positive")
    half = np.ones(N) if bounding_box is None else np.asarray(bounding_box, dtype=float)
    if half.shape != (N,) or np.any(half <= 0):
        raise ConfigError(f"bounding box needs {N} positive half-widths")
    if samples < 10_000:
        raise ConfigError("sphere_measure_mc needs at least 1e4 samples")

    rng = np.random.default_rng(seed)
    _check_box_contains_ball(qn, half, np.random.default_rng([seed, 1]))

    accepted = 0
    remaining = int(samples)
    while remaining:
        m = min(chunk, remaining)
        pts = rng.uniform(-1.0, 1.0, size=(m, N)) * half
        accepted += int(np.count_nonzero(quasi_norm(qn, pts) <= 1.0))
        remaining -= m

    box = float(np.prod(2.0 * half))
    frac = accepted / samples
    vol = box * frac
    vol_se = box * math.sqrt(frac * (1.0 - frac) / samples)
    return SphereMeasureEstimate(Q * vol, Q * vol_se, vol, vol_se, int(samples), accepted, int(seed))


def _check_box_contains_ball(qn: QuasiNorm, half: np.ndarray, rng, per_face: int = 4096):
    # a face point strictly inside the unit ball means the ball pokes out of the box
    N = qn.dimension
    for axis in range(N):
        for sign in (-1.0, 1.0):
            pts = rng.uniform(-1.0, 1.0, size=(per_face, N)) * half
            pts[:, axis] = sign * half[axis]
            inside = quasi_norm(qn, pts) < 1.0 - 1e-12
            if np.any(inside):
                raise ConfigError(
                    f"bounding box does not contain the unit ball: accepted samples on face "
                    f"{'+' if sign > 0 else '-'}x{axis + 1}"
                )
