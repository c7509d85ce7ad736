"""Log-space quadrature for nonnegative radial integrands.

Integrands are passed as vectorised callables returning ``log g(r)``
(``-inf`` where ``g`` vanishes). Every panel is evaluated with a shared
max-subtraction so that integrals of ``sinh(r)**k`` at ``r ~ 1e6`` are
representable; results come back as :class:`ExtendedValue` carrying the
logarithm of the integral.

Finite intervals use globally adaptive bisection with an embedded
Gauss-Legendre pair (20 and 10 nodes). Neighbourhoods of the origin and of
infinity are summed as dyadic block series ``[c 2^-(k+1), c 2^-k]`` and
``[c 2^k, c 2^(k+1)]``; the series test decides between convergence (with
geometric extrapolation of the remainder once block ratios settle),
certified divergence (block sums that stop decaying, or a partial sum that
grew by ``divergence_growth_factor`` while still growing) and an
inconclusive outcome.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DivergenceError, DomainError, InconclusiveError
from .values import ExtendedValue, State

LogIntegrand = Callable[[np.ndarray], np.ndarray]

_X_HI, _W_HI = np.polynomial.legendre.leggauss(20)
_X_LO, _W_LO = np.polynomial.legendre.leggauss(10)
_EPS = float(np.finfo(float).eps)
_NODES = np.concatenate([_X_HI, _X_LO])
_N_HI = _X_HI.size
_TINY = 1e-300


class TailTransform(str, enum.Enum):
    RECIPROCAL = "reciprocal"
    EXP_DECAY_AWARE = "exp_decay_aware"


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances for all integrals.

    Refinement stops on relative error only, since values live in log space
    and may be far below the double range; ``abs_tol`` enters reported
    error bounds. ``pivot`` separates the finite-interval part from the
    block series near 0 and infinity.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-300
    max_depth: int = 50
    tail_transform: TailTransform = TailTransform.EXP_DECAY_AWARE
    divergence_growth_factor: float = 1e6
    max_blocks: int = 400
    stall_blocks: int = 8
    pivot: float = 1.0

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise DomainError("rel_tol must lie in (0, 1)")
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if self.max_depth < 10:
            raise DomainError("max_depth must be at least 10")
        if not self.divergence_growth_factor > 1:
            raise DomainError("divergence_growth_factor must exceed 1")
        if self.stall_blocks < 3 or self.max_blocks < self.stall_blocks:
            raise DomainError("need 3 <= stall_blocks <= max_blocks")
        if not self.pivot > 0:
            raise DomainError("pivot must be positive")
        object.__setattr__(self, "tail_transform", TailTransform(self.tail_transform))


# -- panel kernels -------------------------------------------------------------


def _panels(g_log: LogIntegrand, lo: np.ndarray, hi: np.ndarray):
    """Log integrals, relative error estimates and noise floors on a batch of panels.

    The floor is the relative error that rounding the nodes alone causes:
    far from the origin a steep ``g`` cannot be evaluated more accurately
    than ``eps * |r| * |d log g / dr|``, so refining below it is futile.
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(g_log(x.ravel()), dtype=float).reshape(x.shape)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    peak = vals.max(axis=1)
    finite = np.isfinite(peak)
    shift = np.where(finite, peak, 0.0)
    e = np.exp(vals - shift[:, None])
    s_hi = e[:, :_N_HI] @ _W_HI
    s_lo = e[:, _N_HI:] @ _W_LO
    with np.errstate(divide="ignore", invalid="ignore"):
        log_i = shift + np.log(s_hi) + np.log(half)
        rel = np.abs(s_hi - s_lo) / s_hi + 1e-15
    log_i = np.where(finite, log_i, peak)
    rel = np.where(finite & (s_hi > 0), rel, 0.0)
    fin_vals = np.where(np.isfinite(vals), vals, shift[:, None])
    spread = fin_vals.max(axis=1) - fin_vals.min(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        floor = 8.0 * _EPS * np.abs(mid) / (hi - lo) * spread
    floor = np.where(np.isfinite(floor), floor, 0.0)
    return log_i, np.maximum(rel, floor), floor


def _group_logsumexp(log_vals: np.ndarray, owner: np.ndarray, n: int) -> np.ndarray:
    peak = np.full(n, -np.inf)
    np.maximum.at(peak, owner, log_vals)
    shift = np.where(np.isfinite(peak), peak, 0.0)
    acc = np.zeros(n)
    with np.errstate(invalid="ignore"):
        np.add.at(acc, owner, np.exp(log_vals - shift[owner]))
    with np.errstate(divide="ignore"):
        out = shift + np.log(acc)
    return np.where(np.isfinite(peak), out, peak)


def _presplit(lo, hi, breakpoints=()):
    """Initial panels: split at breakpoints and geometrically on long ranges."""
    bps = np.asarray(sorted(set(float(b) for b in breakpoints)), dtype=float)
    a_list, b_list, own = [], [], []
    for i, (l, h) in enumerate(zip(lo, hi)):
        inner = bps[(bps > l) & (bps < h)]
        edges = np.concatenate([[l], inner, [h]])
        for el, eh in zip(edges[:-1], edges[1:]):
            if el > 0 and eh / el > 2.0:
                k = int(math.ceil(math.log2(eh / el)))
                pts = el * np.exp2(np.arange(k + 1) * (math.log2(eh / el) / k))
                pts[0], pts[-1] = el, eh
                a_list.append(pts[:-1])
                b_list.append(pts[1:])
                own.append(np.full(k, i))
            else:
                a_list.append(np.array([el]))
                b_list.append(np.array([eh]))
                own.append(np.array([i]))
    if not a_list:
        return np.empty(0), np.empty(0), np.empty(0, dtype=int)
    return np.concatenate(a_list), np.concatenate(b_list), np.concatenate(own).astype(int)


def _adaptive(g_log: LogIntegrand, a, b, owner, n: int, cfg: QuadConfig):
    """Globally adaptive bisection for ``n`` independent integrals at once.

    ``a, b, owner`` describe initial panels and the integral each belongs
    to. Returns per-integral log values and achieved relative errors.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    owner = np.asarray(owner, dtype=int)
    if n == 0:
        return np.empty(0), np.empty(0)
    depth = np.zeros(a.size, dtype=int)
    li, re, fl = _panels(g_log, a, b)
    while True:
        tot = _group_logsumexp(li, owner, n)
        with np.errstate(invalid="ignore", over="ignore"):
            w = np.exp(li - tot[owner])
        contrib = np.nan_to_num(w * re, nan=0.0, posinf=0.0)
        oerr = np.bincount(owner, contrib, minlength=n)
        cnt = np.bincount(owner, minlength=n)
        done = (oerr <= cfg.rel_tol) | ~np.isfinite(tot)
        split = (
            ~done[owner]
            & (contrib > cfg.rel_tol / cnt[owner])
            & (depth < cfg.max_depth)
            & (re > 4.0 * fl)
        )
        if not split.any():
            return tot, np.where(np.isfinite(tot), oerr, 0.0)
        m = 0.5 * (a[split] + b[split])
        na = np.concatenate([a[split], m])
        nb = np.concatenate([m, b[split]])
        nli, nre, nfl = _panels(g_log, na, nb)
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        owner = np.concatenate([owner[keep], owner[split], owner[split]])
        depth = np.concatenate([depth[keep], depth[split] + 1, depth[split] + 1])
        li = np.concatenate([li[keep], nli])
        re = np.concatenate([re[keep], nre])
        fl = np.concatenate([fl[keep], nfl])


def _integrate_panels(g_log, lo, hi, cfg, breakpoints=()):
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    a, b, own = _presplit(lo, hi, breakpoints)
    return _adaptive(g_log, a, b, own, lo.size, cfg)


# -- block series -------------------------------------------------------------


def _sum_blocks(next_blocks, cfg: QuadConfig, where: str) -> ExtendedValue:
    """Sum a series of nonnegative block integrals given in log form.

    ``next_blocks(k, count)`` returns log values and relative errors of
    blocks ``k .. k+count-1``.
    """
    terms: list[float] = []
    errs: list[float] = []
    log_sum = -math.inf
    first_log = None
    log_gf = math.log(cfg.divergence_growth_factor)
    stall = cfg.stall_blocks

    def evidence(reason):
        tail = terms[-stall:]
        ratios = [b_ - a_ for a_, b_ in zip(tail[:-1], tail[1:])]
        return {
            "where": where,
            "reason": reason,
            "blocks": len(terms),
            "log_partial_sum": log_sum,
            "log_growth": None if first_log is None else log_sum - first_log,
            "last_log_block_ratios": ratios,
        }

    def steady(m):
        # growth that is slowing down may be a transient hump, not divergence
        inc = [terms[-i] - terms[-i - 1] for i in range(m, 0, -1)]
        return all(b >= a - 1e-6 for a, b in zip(inc[:-1], inc[1:]))

    def quad_err():
        if log_sum == -math.inf:
            return 0.0
        return float(sum(math.exp(t - log_sum) * e for t, e in zip(terms, errs) if t > -math.inf))

    k = 0
    while k < cfg.max_blocks:
        count = min(8, cfg.max_blocks - k)
        new_t, new_e = next_blocks(k, count)
        for t, e in zip(new_t, new_e):
            t, e = float(t), float(e)
            k += 1
            if t == math.inf:
                return ExtendedValue.divergent(evidence("non-integrable block"))
            terms.append(t)
            errs.append(e)
            log_sum = np.logaddexp(log_sum, t)
            if first_log is None and t > -math.inf:
                first_log = log_sum
            n = len(terms)
            if n >= 4 and all(x == -math.inf for x in terms[-4:]):
                return ExtendedValue.finite(log_sum, quad_err())
            if n < 2 or t == -math.inf or terms[-2] == -math.inf:
                continue
            if n > stall and all(
                terms[-i - 1] > -math.inf and terms[-i] - terms[-i - 1] >= -1e-9
                for i in range(1, stall + 1)
            ) and steady(stall):
                return ExtendedValue.divergent(evidence("block sums stopped decaying"))
            if (
                first_log is not None
                and log_sum - first_log >= log_gf
                and n >= 4
                and all(terms[-i] >= terms[-i - 1] for i in range(1, 4))
                and steady(3)
            ):
                return ExtendedValue.divergent(evidence("partial sum exceeded growth factor"))
            lr = t - terms[-2]
            if lr >= -1e-12:
                continue
            rho = math.exp(lr)
            log_rem = t + lr - math.log1p(-rho)
            if log_rem <= log_sum + math.log(cfg.rel_tol) - math.log(100.0):
                total = np.logaddexp(log_sum, log_rem)
                return ExtendedValue.finite(total, quad_err() + math.exp(log_rem - total))
            if n >= 4 and all(x > -math.inf for x in terms[-4:]):
                rhos = [math.exp(terms[-i] - terms[-i - 1]) for i in (3, 2, 1)]
                if max(rhos) < 1.0:
                    drho = max(abs(rhos[2] - rhos[1]), abs(rhos[1] - rhos[0]))
                    total = np.logaddexp(log_sum, log_rem)
                    rem_err = math.exp(log_rem - total) * drho / (1.0 - rho)
                    if drho <= 1e-3 and rem_err <= cfg.rel_tol:
                        return ExtendedValue.finite(
                            total, quad_err() + rem_err, evidence={"extrapolated": True}
                        )
    return ExtendedValue.inconclusive(evidence("block limit reached"))


def _head_series(g_log: LogIntegrand, b0: float, cfg: QuadConfig) -> ExtendedValue:
    """``int_0^b0 g`` as a series over dyadic blocks shrinking to the origin."""

    def blocks(k, count):
        hi = b0 * np.exp2(-np.arange(k, k + count, dtype=float))
        lo = 0.5 * hi
        return _adaptive(g_log, lo, hi, np.arange(count), count, cfg)

    return _sum_blocks(blocks, cfg, "origin")


def _tail_series(g_log: LogIntegrand, T0: float, cfg: QuadConfig) -> ExtendedValue:
    """``int_T0^inf g`` as a block series."""
    if cfg.tail_transform is TailTransform.RECIPROCAL:
        # r = T0 - 1 + 1/s maps s in (0, 1] onto [T0, inf), dr = ds / s^2
        def h_log(s):
            s = np.asarray(s, dtype=float)
            return g_log(T0 - 1.0 + 1.0 / s) - 2.0 * np.log(s)

        res = _head_series(h_log, 1.0, cfg)
        if res.evidence:
            res.evidence["where"] = "infinity"
        return res

    def blocks(k, count):
        lo = T0 * np.exp2(np.arange(k, k + count, dtype=float))
        hi = 2.0 * lo
        return _adaptive(g_log, lo, hi, np.arange(count), count, cfg)

    return _sum_blocks(blocks, cfg, "infinity")


def _combine(parts: Sequence[ExtendedValue]) -> ExtendedValue:
    for p in parts:
        if p.state is not State.FINITE:
            return p
    logs = [p.log_value for p in parts]
    total = float(np.logaddexp.reduce(logs)) if logs else -math.inf
    if total == -math.inf:
        return ExtendedValue.finite(-math.inf, 0.0)
    if total == math.inf:
        return ExtendedValue.divergent({"reason": "infinite panel value"})
    err = sum(math.exp(p.log_value - total) * p.rel_error for p in parts if p.log_value > -math.inf)
    return ExtendedValue.finite(total, err)


def _finite(log_value: float, rel: float) -> ExtendedValue:
    if log_value == math.inf:
        return ExtendedValue.divergent({"reason": "non-integrable singularity inside interval"})
    return ExtendedValue.finite(log_value, rel)


def _raise_unless_finite(res: ExtendedValue) -> ExtendedValue:
    if res.state is State.DIVERGENT:
        raise DivergenceError("integral diverges", res.evidence)
    if res.state is State.INCONCLUSIVE:
        raise InconclusiveError("integral neither converged nor diverged", res.evidence)
    return res


# -- public operations ----------------------------------------------------------


def integrate_interval(
    g_log: LogIntegrand,
    a: float,
    b: float,
    cfg: QuadConfig | None = None,
    breakpoints: Sequence[float] = (),
) -> ExtendedValue:
    """``int_a^b g`` for ``0 <= a <= b``.

    A lower limit of zero is treated as a possible power singularity and
    summed over dyadic blocks. Raises :class:`DivergenceError` when the
    integral is infinite and :class:`InconclusiveError` when that cannot be
    decided.
    """
    cfg = cfg or QuadConfig()
    if not (a >= 0 and b >= a):
        raise DomainError(f"need 0 <= a <= b, got a={a!r}, b={b!r}")
    if b == a:
        return ExtendedValue.finite(-math.inf, 0.0)
    if math.isinf(b):
        raise DomainError("use integrate_tail for infinite upper limits")
    parts = []
    if a == 0:
        positive = [x for x in breakpoints if 0 < x < b]
        b0 = min([b, cfg.pivot] + positive)
        parts.append(_raise_unless_finite(_head_series(g_log, b0, cfg)))
        a = b0
    if b > a:
        li, re = _integrate_panels(g_log, [a], [b], cfg, breakpoints)
        parts.append(_finite(li[0], re[0]))
    return _raise_unless_finite(_combine(parts))


def integrate_tail(
    g_log: LogIntegrand,
    R: float,
    cfg: QuadConfig | None = None,
    breakpoints: Sequence[float] = (),
) -> ExtendedValue:
    """``int_R^inf g``; divergence is returned as a value, not raised."""
    cfg = cfg or QuadConfig()
    if not R > 0:
        raise DomainError(f"tail integration needs R > 0, got {R!r}")
    T0 = max([R, cfg.pivot] + [x for x in breakpoints if x > R])
    parts = []
    if T0 > R:
        li, re = _integrate_panels(g_log, [R], [T0], cfg, breakpoints)
        parts.append(_finite(li[0], re[0]))
    parts.append(_tail_series(g_log, T0, cfg))
    return _combine(parts)


def integrate_half_line(
    g_log: LogIntegrand, cfg: QuadConfig | None = None, breakpoints: Sequence[float] = ()
) -> ExtendedValue:
    """``int_0^inf g`` with both endpoints handled; never raises on divergence."""
    cfg = cfg or QuadConfig()
    try:
        head = integrate_interval(g_log, 0.0, cfg.pivot, cfg, breakpoints)
    except DivergenceError as exc:
        return ExtendedValue.divergent(exc.evidence)
    except InconclusiveError as exc:
        return ExtendedValue.inconclusive(exc.evidence)
    return _combine([head, integrate_tail(g_log, cfg.pivot, cfg, breakpoints)])


def _sorted_points(points, breakpoints, lo, hi):
    pts = np.asarray(points, dtype=float).ravel()
    extra = [x for x in breakpoints if lo < x < hi]
    xs = np.unique(np.concatenate([pts, np.asarray(extra, dtype=float)]))
    return pts, xs


def log_lower_table(
    g_log: LogIntegrand,
    points,
    cfg: QuadConfig | None = None,
    breakpoints: Sequence[float] = (),
    start: float = 0.0,
):
    """``log int_start^x g`` at every ``x`` in ``points`` (each ``>= start``).

    Returns ``(logs, rel_error)``; panels between consecutive points are
    accumulated so the table is nondecreasing by construction.
    """
    cfg = cfg or QuadConfig()
    pts, xs = _sorted_points(points, breakpoints, start, np.inf)
    if pts.size == 0:
        return np.empty(0), 0.0
    if xs[0] < start:
        raise DomainError("table points must not precede the start point")
    first = integrate_interval(g_log, start, float(xs[0]), cfg, breakpoints)
    li, re = _integrate_panels(g_log, xs[:-1], xs[1:], cfg)
    if np.any(li == np.inf):
        raise DivergenceError("non-integrable singularity between table points")
    cum = np.logaddexp.accumulate(np.concatenate([[first.log_value], li]))
    rel = max([first.rel_error] + list(re))
    return cum[np.searchsorted(xs, pts)], float(rel)


def log_upper_table(
    g_log: LogIntegrand,
    points,
    cfg: QuadConfig | None = None,
    breakpoints: Sequence[float] = (),
    stop: float = math.inf,
):
    """``log int_x^stop g`` at every ``x`` in ``points`` (each ``> 0``).

    Returns ``(state, logs, rel_error, evidence)``; a divergent or
    undecided tail beyond the largest point makes the whole table so.
    """
    cfg = cfg or QuadConfig()
    pts, xs = _sorted_points(points, breakpoints, 0.0, stop)
    if pts.size == 0:
        return State.FINITE, np.empty(0), 0.0, {}
    if math.isinf(stop):
        last = integrate_tail(g_log, float(xs[-1]), cfg, breakpoints)
    else:
        last = integrate_interval(g_log, float(xs[-1]), stop, cfg, breakpoints) if stop > xs[-1] else ExtendedValue.finite(-math.inf)
    if not last.is_finite:
        fill = np.inf if last.state is State.DIVERGENT else np.nan
        return last.state, np.full(pts.size, fill), math.inf, last.evidence
    li, re = _integrate_panels(g_log, xs[:-1], xs[1:], cfg)
    if np.any(li == np.inf):
        return State.DIVERGENT, np.full(pts.size, np.inf), math.inf, {
            "reason": "non-integrable singularity between table points"
        }
    seq = np.concatenate([li, [last.log_value]])[::-1]
    cum = np.logaddexp.accumulate(seq)[::-1]
    rel = max([last.rel_error] + list(re))
    return State.FINITE, cum[np.searchsorted(xs, pts)], float(rel), {}


def log_cumulative_table(g_log: LogIntegrand, grid, cfg: QuadConfig | None = None) -> np.ndarray:
    """``log F(r_i)`` with ``F(r) = int_0^r g`` on a strictly increasing grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        return np.empty(0)
    if grid[0] <= 0 or np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be strictly increasing and positive")
    logs, _ = log_lower_table(g_log, grid, cfg)
    return logs


def cumulative_table(g_log: LogIntegrand, grid, cfg: QuadConfig | None = None) -> np.ndarray:
    """Linear-space version of :func:`log_cumulative_table`."""
    return np.exp(log_cumulative_table(g_log, grid, cfg))
