"""Positive radial weights and suprema of their reciprocals.

Closed-form families carry enough metadata (sign of the exponent) to take
``sup 1/w`` over a ball or an exterior analytically; weights of unknown
monotonicity fall back to a refined grid search with a growth test for
divergence. Pointwise and essential suprema agree here because all weights
are continuous away from the origin.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, DomainError
from .geometry import log_sinh
from .values import ExtendedValue

GRID_FLOOR = 1e-12
GRID_CEILING = 1e12
_GRID_POINTS = 400
_DECADES_PER_LEVEL = 3


class WeightFamily(str, enum.Enum):
    POWER = "power"
    SINH_POWER = "sinh_power"
    SINH_SCALED_POWER = "sinh_scaled_power"
    TABULATED = "tabulated"


class Monotonicity(str, enum.Enum):
    NON_DECREASING = "non_decreasing"
    NON_INCREASING = "non_increasing"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class RadialWeight:
    """``r -> r**e``, ``sinh(r)**e``, ``sinh(s r)**e`` or a sampled table.

    Tabulated weights interpolate linearly (``interpolation="linear"``) or
    linearly in ``log w`` (``"log"``). Outside the table they raise, unless
    ``outside="zero"``, which models indicator-like weights; such a weight
    is zero off its table and its reciprocal is infinite there.
    """

    family: WeightFamily
    exponent: float = 0.0
    scale: float = 1.0
    table_r: tuple[float, ...] = ()
    table_values: tuple[float, ...] = ()
    interpolation: str = "linear"
    outside: str = "error"
    monotonicity: Monotonicity | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", WeightFamily(self.family))
        if self.family is WeightFamily.SINH_SCALED_POWER and not self.scale > 0:
            raise DomainError("scale sqrt(b) must be positive")
        if self.family is WeightFamily.TABULATED:
            r = np.asarray(self.table_r, dtype=float)
            v = np.asarray(self.table_values, dtype=float)
            if r.size < 2 or r.shape != v.shape:
                raise DomainError("a tabulated weight needs at least two (r, value) pairs")
            if r[0] <= 0 or np.any(np.diff(r) <= 0):
                raise DomainError("table radii must be positive and strictly increasing")
            if np.any(v <= 0):
                raise DomainError("tabulated weight values must be strictly positive")
            if self.interpolation not in ("linear", "log"):
                raise DomainError("interpolation must be 'linear' or 'log'")
            if self.outside not in ("error", "zero"):
                raise DomainError("outside must be 'error' or 'zero'")
            object.__setattr__(self, "table_r", tuple(map(float, r)))
            object.__setattr__(self, "table_values", tuple(map(float, v)))
        mono = self.monotonicity
        if mono is None:
            if self.family is WeightFamily.TABULATED:
                mono = Monotonicity.UNKNOWN
            elif self.exponent >= 0:
                mono = Monotonicity.NON_DECREASING
            else:
                mono = Monotonicity.NON_INCREASING
        object.__setattr__(self, "monotonicity", Monotonicity(mono))

    # -- constructors ---------------------------------------------------------
    @classmethod
    def power(cls, e: float) -> "RadialWeight":
        return cls(WeightFamily.POWER, float(e))

    @classmethod
    def sinh_power(cls, e: float) -> "RadialWeight":
        return cls(WeightFamily.SINH_POWER, float(e))

    @classmethod
    def sinh_scaled_power(cls, e: float, scale: float) -> "RadialWeight":
        return cls(WeightFamily.SINH_SCALED_POWER, float(e), float(scale))

    @classmethod
    def tabulated(
        cls, r: Sequence[float], values: Sequence[float], interpolation="linear", outside="error"
    ) -> "RadialWeight":
        return cls(
            WeightFamily.TABULATED,
            table_r=tuple(r),
            table_values=tuple(values),
            interpolation=interpolation,
            outside=outside,
        )

    @classmethod
    def from_csv(cls, path, interpolation="linear", outside="error") -> "RadialWeight":
        """Read ``r,value`` rows (an optional header line is skipped)."""
        rows = []
        with open(Path(path), newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if rows:
                        raise ConfigError(f"bad row in weight table {path}: {row}")
        if not rows:
            raise ConfigError(f"weight table {path} is empty")
        r, v = zip(*rows)
        return cls.tabulated(r, v, interpolation, outside)

    def with_monotonicity(self, mono: Monotonicity) -> "RadialWeight":
        return RadialWeight(
            self.family, self.exponent, self.scale, self.table_r, self.table_values,
            self.interpolation, self.outside, Monotonicity(mono),
        )

    @property
    def is_closed_form(self) -> bool:
        return self.family is not WeightFamily.TABULATED

    @property
    def support(self) -> tuple[float, float]:
        if self.family is WeightFamily.TABULATED:
            return self.table_r[0], self.table_r[-1]
        return 0.0, math.inf

    @property
    def knots(self) -> tuple[float, ...]:
        return self.table_r

    # -- evaluation -----------------------------------------------------------
    def log_value(self, r):
        """Vectorised ``log w(r)``."""
        r = np.asarray(r, dtype=float)
        fam = self.family
        if fam is WeightFamily.TABULATED:
            out = self._table_log(r)
        elif self.exponent == 0.0:
            out = np.zeros_like(r)
        elif fam is WeightFamily.POWER:
            with np.errstate(divide="ignore"):
                out = self.exponent * np.log(r)
        elif fam is WeightFamily.SINH_POWER:
            out = self.exponent * log_sinh(r)
        else:
            out = self.exponent * log_sinh(self.scale * r)
        out = np.asarray(out, dtype=float)
        return out if out.ndim else float(out)

    def _table_log(self, r: np.ndarray) -> np.ndarray:
        tr = np.asarray(self.table_r)
        tv = np.asarray(self.table_values)
        inside = (r >= tr[0]) & (r <= tr[-1])
        if self.outside == "error" and not np.all(inside):
            bad = r[~inside].ravel()[0]
            raise DomainError(f"r={bad!r} outside the weight table [{tr[0]}, {tr[-1]}]")
        if self.interpolation == "linear":
            out = np.log(np.interp(r, tr, tv))
        else:
            out = np.interp(r, tr, np.log(tv))
        return np.where(inside, out, -np.inf)

    def describe(self) -> dict:
        d = {"family": self.family.value, "monotonicity": self.monotonicity.value}
        if self.is_closed_form:
            d["exponent"] = self.exponent
            if self.family is WeightFamily.SINH_SCALED_POWER:
                d["scale"] = self.scale
        else:
            d["table_points"] = len(self.table_r)
            d["interpolation"] = self.interpolation
            d["outside"] = self.outside
        return d


def eval_log(w: RadialWeight, r):
    """``log w(r)`` for ``r > 0``."""
    if np.any(np.asarray(r) <= 0):
        raise DomainError("weights are evaluated at r > 0 only")
    return w.log_value(r)


def _inverse_log_at_zero(w: RadialWeight) -> float:
    """``lim_{r->0+} log(1/w(r))`` for closed forms with exponent >= 0."""
    return 0.0 if w.exponent == 0 else math.inf


def _inverse_log_at_infinity(w: RadialWeight) -> float:
    """``lim_{r->inf} log(1/w(r))`` for closed forms with exponent <= 0."""
    return 0.0 if w.exponent == 0 else math.inf


def log_sup_inv_on_ball(w: RadialWeight, radii) -> np.ndarray:
    """Vectorised ``log sup_{0<r<=R} 1/w(r)``; ``+inf`` marks divergence."""
    radii = np.asarray(radii, dtype=float)
    if w.is_closed_form and w.monotonicity is Monotonicity.NON_INCREASING:
        return -np.asarray(w.log_value(radii), dtype=float)
    if w.is_closed_form and w.monotonicity is Monotonicity.NON_DECREASING:
        return np.full(radii.shape, _inverse_log_at_zero(w))
    return np.array([sup_inv_on_ball(w, float(R)).log_value for R in radii.ravel()]).reshape(
        radii.shape
    )


def log_sup_inv_on_exterior(w: RadialWeight, radii) -> np.ndarray:
    """Vectorised ``log sup_{r>=R} 1/w(r)``; ``+inf`` marks divergence."""
    radii = np.asarray(radii, dtype=float)
    if w.is_closed_form and w.monotonicity is Monotonicity.NON_DECREASING:
        return -np.asarray(w.log_value(radii), dtype=float)
    if w.is_closed_form and w.monotonicity is Monotonicity.NON_INCREASING:
        return np.full(radii.shape, _inverse_log_at_infinity(w))
    return np.array(
        [sup_inv_on_exterior(w, float(R)).log_value for R in radii.ravel()]
    ).reshape(radii.shape)


def sup_inv_on_ball(w: RadialWeight, R: float) -> ExtendedValue:
    """``sup_{0<r<=R} 1/w(r)`` with its maximiser."""
    if not R > 0:
        raise DomainError(f"ball radius must be positive, got {R!r}")
    if w.is_closed_form and w.monotonicity is Monotonicity.NON_INCREASING:
        return ExtendedValue.finite(-float(w.log_value(R)), argmax=R)
    if w.is_closed_form and w.monotonicity is Monotonicity.NON_DECREASING:
        if w.exponent > 0:
            return ExtendedValue.divergent(
                {"reason": "1/w -> inf at the origin", "exponent": w.exponent}
            )
        return ExtendedValue.finite(0.0, argmax=R)
    if not w.is_closed_form:
        return _table_sup(w, 0.0, R, ball=True)
    return _grid_sup(w, R, ball=True)


def sup_inv_on_exterior(w: RadialWeight, R: float) -> ExtendedValue:
    """``sup_{r>=R} 1/w(r)`` with its maximiser (``inf`` when attained at infinity)."""
    if not R > 0:
        raise DomainError(f"radius must be positive, got {R!r}")
    if w.is_closed_form and w.monotonicity is Monotonicity.NON_DECREASING:
        return ExtendedValue.finite(-float(w.log_value(R)), argmax=R)
    if w.is_closed_form and w.monotonicity is Monotonicity.NON_INCREASING:
        if w.exponent < 0:
            return ExtendedValue.divergent(
                {"reason": "1/w -> inf at infinity", "exponent": w.exponent}
            )
        return ExtendedValue.finite(0.0, argmax=R)
    if not w.is_closed_form:
        return _table_sup(w, R, math.inf, ball=False)
    return _grid_sup(w, R, ball=False)


def _table_sup(w: RadialWeight, lo: float, hi: float, ball: bool) -> ExtendedValue:
    # piecewise-monotone interpolation: extremes of 1/w sit at knots or at the cut
    t0, t1 = w.support
    if w.outside == "zero" and (lo < t0 or hi > t1):
        return ExtendedValue.divergent({"reason": "weight vanishes outside its table"})
    a, b = max(lo, t0), min(hi, t1)
    if a > b:
        raise DomainError(f"interval [{lo}, {hi}] does not meet the weight table [{t0}, {t1}]")
    cand = np.array([a, b] + [x for x in w.table_r if a < x < b])
    vals = -np.asarray(w.log_value(cand))
    i = int(np.argmax(vals))
    return ExtendedValue.finite(float(vals[i]), argmax=float(cand[i]))


def _golden_max(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200):
    """Maximise a unimodal ``f`` on ``[lo, hi]`` by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(hi - lo) <= tol * max(1.0, abs(lo) + abs(hi)):
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _sup_on_log_grid(neg_log_w, lo: float, hi: float):
    t = np.linspace(math.log(lo), math.log(hi), _GRID_POINTS)
    t[0], t[-1] = math.log(lo), math.log(hi)
    y = neg_log_w(np.exp(t))
    i = int(np.argmax(y))
    best_t, best_y = t[i], float(y[i])
    if 0 < i < t.size - 1:
        rt, ry = _golden_max(lambda s: float(neg_log_w(math.exp(s))), t[i - 1], t[i + 1])
        if ry > best_y:
            best_t, best_y = rt, ry
    return best_y, math.exp(best_t), i


def _grid_sup(w: RadialWeight, R: float, ball: bool) -> ExtendedValue:
    """Grid search for weights of unknown monotonicity.

    Successive levels push the far end of the search window by three
    decades until ``GRID_FLOOR`` (ball) or ``GRID_CEILING`` (exterior). The
    supremum is declared divergent when the maximiser sticks to the moving
    end and either the total growth exceeds 1e6 or the per-level growth
    does not slow down per decade of window movement. Growth too slow to
    certify but not slowing down either is inconclusive.
    """

    def neg_log_w(r):
        return -np.asarray(w.log_value(r), dtype=float)

    ends = []
    end = R
    while True:
        end = end / 10.0**_DECADES_PER_LEVEL if ball else end * 10.0**_DECADES_PER_LEVEL
        end = max(end, GRID_FLOOR) if ball else min(end, GRID_CEILING)
        ends.append(end)
        if (ball and end <= GRID_FLOOR) or (not ball and end >= GRID_CEILING):
            break
    if (ball and R <= GRID_FLOOR) or (not ball and R >= GRID_CEILING):
        y = float(neg_log_w(R))
        return ExtendedValue.finite(y, argmax=R)

    levels = []
    for end in ends:
        lo, hi = (end, R) if ball else (R, end)
        y, at, i = _sup_on_log_grid(neg_log_w, lo, hi)
        at_end = (i == 0) if ball else (i == _GRID_POINTS - 1)
        levels.append((y, at, at_end))
    y, at, at_end = levels[-1]
    # growth per decade moved, since the last level may be clipped short
    span = [abs(math.log10(b) - math.log10(a)) for a, b in zip(ends[:-1], ends[1:])]
    growth = [(b[0] - a[0]) / d for a, b, d in zip(levels[:-1], levels[1:], span) if d > 0]
    evidence = {"levels": [lv[0] for lv in levels], "window_end": ends[-1]}
    if at_end and len(levels) >= 2 and levels[-2][2]:
        total = levels[-1][0] - levels[0][0]
        steady = len(growth) >= 2 and growth[-1] > 1e-3 and growth[-1] >= 0.9 * growth[-2]
        if total > math.log(1e6) or steady:
            evidence["reason"] = "1/w keeps growing toward the window end"
            return ExtendedValue.divergent(evidence)
        if len(growth) >= 2 and growth[-1] > 0 and growth[-1] >= 0.9 * growth[-2]:
            evidence["reason"] = "1/w creeps up at the window end without slowing down"
            return ExtendedValue.inconclusive(evidence)
    return ExtendedValue.finite(y, argmax=at, evidence=evidence)
