"""Nonnegative extended reals that may be finite, divergent or undecided."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class State(str, enum.Enum):
    FINITE = "finite"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ExtendedValue:
    """A nonnegative quantity stored through its logarithm.

    Values are kept as ``log_value`` so that results far outside the double
    range (hyperbolic volumes, tails at radius 1e6) survive. ``rel_error`` is
    the estimated relative error of a finite value; ``argmax`` is filled in
    by supremum computations.
    """

    state: State
    log_value: float = math.nan
    rel_error: float = 0.0
    evidence: dict = field(default_factory=dict)
    argmax: float | None = None

    @classmethod
    def finite(cls, log_value: float, rel_error: float = 0.0, **kw) -> "ExtendedValue":
        return cls(State.FINITE, float(log_value), float(rel_error), **kw)

    @classmethod
    def of(cls, value: float, rel_error: float = 0.0, **kw) -> "ExtendedValue":
        if value < 0:
            raise ValueError("ExtendedValue holds nonnegative quantities only")
        log_value = math.log(value) if value > 0 else -math.inf
        return cls(State.FINITE, log_value, float(rel_error), **kw)

    @classmethod
    def divergent(cls, evidence: dict | None = None, **kw) -> "ExtendedValue":
        return cls(State.DIVERGENT, math.inf, math.inf, dict(evidence or {}), **kw)

    @classmethod
    def inconclusive(cls, evidence: dict | None = None, **kw) -> "ExtendedValue":
        return cls(State.INCONCLUSIVE, math.nan, math.inf, dict(evidence or {}), **kw)

    @property
    def is_finite(self) -> bool:
        return self.state is State.FINITE

    @property
    def value(self) -> float:
        """Linear-space value; ``inf`` for divergent, ``nan`` if undecided.

        A finite value whose exponent exceeds the double range raises
        ``OverflowError`` rather than silently returning infinity.
        """
        if self.state is State.DIVERGENT:
            return math.inf
        if self.state is State.INCONCLUSIVE:
            return math.nan
        if self.log_value == -math.inf:
            return 0.0
        return math.exp(self.log_value)

    @property
    def error_estimate(self) -> float:
        if not self.is_finite:
            return math.inf
        return self.value * self.rel_error

    def to_dict(self) -> dict:
        """JSON-safe representation (no infinities or NaNs)."""
        out: dict = {"state": self.state.value}
        if self.is_finite:
            try:
                out["value"] = self.value
            except OverflowError:
                out["value"] = None
            out["log_value"] = None if self.log_value == -math.inf else self.log_value
            out["rel_error"] = self.rel_error
        if self.argmax is not None:
            out["argmax"] = self.argmax
        if self.evidence:
            out["evidence"] = jsonable(self.evidence)
        return out


def jsonable(obj):
    """Recursively replace non-finite floats by strings so json can dump them."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, enum.Enum):
        return obj.value
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        try:
            obj = obj.item()
        except (ValueError, AttributeError):
            pass
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj
