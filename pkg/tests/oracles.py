"""Independent reference values, computed with mpmath and closed forms only.

Nothing here imports the package. ``python tests/oracles.py --freeze``
rewrites ``tests/data/frozen_oracles.json``; the test suite compares the
package against the frozen file and checks that this module still
reproduces it.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 30
FROZEN = Path(__file__).parent / "data" / "frozen_oracles.json"


def sphere_area(n):
    return 2 * mp.pi ** (mp.mpf(n) / 2) / mp.gamma(mp.mpf(n) / 2)


def power_tail(S, Q, e, R):
    """``S * int_R^inf r**(e + Q - 1) dr``; needs ``e + Q < 0``."""
    k = e + Q
    return S * mp.mpf(R) ** k / (-k)


def hyperbolic_tail(n, e, R):
    """``|S^{n-1}| int_R^inf sinh(r)**(e + n - 1) dr`` by mpmath quadrature."""
    f = lambda r: mp.sinh(r) ** (e + n - 1)
    return sphere_area(n) * mp.quad(f, [R, R + 1, R + 10, mp.inf])


def critical_group_constant(S, Q, q, beta):
    return S ** (mp.mpf(1) / q) / abs(beta * q - Q) ** (mp.mpf(1) / q)


def brute_force_sup(phi, lo=-6, hi=6, per_decade=200):
    """Max of ``phi`` over a dense log grid (the grid itself is the oracle)."""
    best = mp.mpf(0)
    n = (hi - lo) * per_decade
    for i in range(n + 1):
        R = mp.mpf(10) ** (lo + mp.mpf(i) / per_decade)
        best = max(best, phi(R))
    return best


def halfline_Ap(p, q, u_exp, v_exp):
    """Brute-force ``sup U^(1/q) V^(1/p')`` for power weights on the half-line."""
    pc = mp.mpf(p) / (p - 1)

    def phi(R):
        U = mp.quad(lambda r: r ** u_exp, [R, mp.inf])
        V = mp.quad(lambda r: r ** (v_exp * (1 - pc)), [0, R])
        return U ** (1 / mp.mpf(q)) * V ** (1 / pc)

    return brute_force_sup(phi, -3, 3, 20)


def classical_sides(kind, p):
    """``int (F/x)^p`` and ``int f^p`` for three sample functions on the half-line."""
    p = mp.mpf(p)
    if kind == "indicator":  # f = 1 on (0, 1]
        F = lambda x: min(x, 1)
        f = lambda x: 1 if x <= 1 else 0
        pts = [0, 1, mp.inf]
    elif kind == "r_exp":  # f = r e^{-r}
        F = lambda x: 1 - (1 + x) * mp.exp(-x)
        f = lambda x: x * mp.exp(-x)
        pts = [0, 1, 10, mp.inf]
    else:  # two steps: 2 on (0.5, 1], 1 on (1, 3]
        def F(x):
            if x <= 0.5:
                return mp.mpf(0)
            if x <= 1:
                return 2 * (x - mp.mpf(0.5))
            return 1 + (min(x, 3) - 1)
        f = lambda x: 2 if 0.5 < x <= 1 else (1 if 1 < x <= 3 else 0)
        pts = [0, 0.5, 1, 3, mp.inf]
    lhs = mp.quad(lambda x: (F(x) / x) ** p, pts)
    rhs = mp.quad(lambda x: f(x) ** p, pts)
    return lhs, rhs


def minkowski_E3():
    """``int_0^1 (4 pi / r) 4 pi r^2 dr``."""
    return mp.quad(lambda r: (4 * mp.pi / r) * 4 * mp.pi * r**2, [0, 1])


def full_ball_constant_v(R, c, u_lo=1.0, u_hi=3.0):
    """Both sides for ``f = 1_(0, R]`` on the half-line, ``u = 1_(u_lo, u_hi]``, ``v = c``, ``q = 1``."""
    F = lambda x: min(x, R)
    lhs = mp.quad(lambda x: F(x), [u_lo, min(max(R, u_lo), u_hi), u_hi])
    rhs = c * mp.mpf(R)
    return lhs, rhs


def compute_all() -> dict:
    out = {
        "sphere_area_2": sphere_area(2),
        "sphere_area_3": sphere_area(3),
        "tail_E3_u_rm4_R1": power_tail(sphere_area(3), 3, -4, 1),
        "tail_halfline_rm2_R2": power_tail(1, 1, -2, 2),
        "tail_hyp_n3_e_m4_R20": hyperbolic_tail(3, -4, 20),
        "A_E3_q1_u_rm4_v_rm1": critical_group_constant(sphere_area(3), 3, 1, 4),
        "A_E2_q2_u_rm4_v_rm1": critical_group_constant(sphere_area(2), 2, 2, 2),
        "A_p_halfline_p2_q2": halfline_Ap(2, 2, -2, 0),
        "minkowski_E3_indicator": minkowski_E3(),
        "ball_E3_R1": sphere_area(3) / 3,
        "log_sinh_1": mp.log(mp.sinh(1)),
    }
    for kind in ("indicator", "r_exp", "two_step"):
        lhs, rhs = classical_sides(kind, 2)
        out[f"classical_p2_{kind}_lhs"] = lhs
        out[f"classical_p2_{kind}_rhs"] = rhs
    for R in (1, 2):
        lhs, rhs = full_ball_constant_v(R, 2)
        out[f"full_ball_halfline_R{R}_c2_lhs"] = lhs
        out[f"full_ball_halfline_R{R}_c2_rhs"] = rhs
    return {k: float(v) for k, v in out.items()}


def load_frozen() -> dict:
    return json.loads(FROZEN.read_text())


if __name__ == "__main__":
    values = compute_all()
    if "--freeze" in sys.argv:
        FROZEN.write_text(json.dumps(values, indent=2, sort_keys=True) + "\n")
    print(json.dumps(values, indent=2, sort_keys=True))
