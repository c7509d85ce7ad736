"""YAML run configuration: loading, overrides and construction of domain objects.

A config file is a mapping of sections::

    geometry:   {kind: euclidean, n: 3}
    weights:
      u: {family: power, exponent: -4}
      v: {family: power, exponent: -1}
    problem:    {q: 1, direction: direct}        # optional p
    quadrature: {rel_tol: 1.0e-9}
    search:     {r_min: 1.0e-6, r_max: 1.0e6}
    verify:     {functions: [...], random_steps: 0, slack: 1.0e-4}
    sharpness:  {schedule: null, ns: [10, 100, 1000, 10000], tolerance: 0.01}
    region:     {geometry: hyperbolic, alpha: [-2, 2, 21], beta: [0, 3, 21], ...}
    corollary:  {geometry: group, alpha: -1, beta: 4, q: 1, dimension: 3}
    sphere_measure: {norm: euclidean, weights: [1, 1, 1], samples: 1000000}
    seed: 0

Overrides use dotted keys (``problem.q=2``) whose values are parsed as
YAML scalars. Environment variables ``HARDY_SET_<SECTION>__<KEY>`` apply
before command-line overrides.
"""

from __future__ import annotations

import copy
import os
from pathlib import Path

import numpy as np
import yaml

from .core import Direction, HardyProblem, RadialTestFunction, SupSearchConfig
from .errors import ConfigError, DomainError
from .geometry import PolarGeometry, QuasiNorm, QuasiNormKind, sphere_measure_mc
from .quadrature import QuadConfig, TailTransform
from .region import RegionSpec
from .weights import Monotonicity, RadialWeight

ENV_PREFIX = "HARDY_SET_"

DEFAULTS: dict = {
    "quadrature": {},
    "search": {},
    "verify": {"functions": [], "random_steps": 0, "step_pieces": 3, "slack": 1e-4},
    "sharpness": {"schedule": None, "ns": [10, 100, 1000, 10000], "tolerance": 1e-2, "slack": 1e-4},
    "region": {
        "geometry": "hyperbolic",
        "alpha": [-2.0, 2.0, 21],
        "beta": [0.0, 3.0, 21],
        "dims": [2, 3],
        "qs": [1, 2],
        "curvature": 0.0,
        "sphere_measure": None,
        "band": 0.05,
        "workers": 0,
    },
    "seed": 0,
}


def load_config(path: str | os.PathLike | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc.strerror or exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {p} is not valid YAML: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config {p} must be a mapping of sections")
    return data


def _merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def set_dotted(cfg: dict, key: str, raw: str) -> None:
    parts = [p for p in key.strip().split(".") if p]
    if not parts:
        raise ConfigError(f"bad override key {key!r}")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse override value for {key}: {exc}") from exc
    if isinstance(value, str):
        # YAML 1.1 reads exponent forms such as 1e4 as strings
        try:
            value = float(value)
        except ValueError:
            pass
    node = cfg
    for p in parts[:-1]:
        nxt = node.setdefault(p, {})
        if not isinstance(nxt, dict):
            raise ConfigError(f"override {key} descends into non-section {p!r}")
        node = nxt
    node[parts[-1]] = value


def env_overrides(environ=None) -> list[tuple[str, str]]:
    environ = os.environ if environ is None else environ
    out = []
    for name in sorted(environ):
        if name.startswith(ENV_PREFIX):
            key = name[len(ENV_PREFIX):].lower().replace("__", ".")
            out.append((key, environ[name]))
    return out


def resolve_config(path=None, overrides=(), environ=None, seed: int | None = None) -> dict:
    """Defaults, then file, then environment, then ``--set``, then ``--seed``."""
    cfg = _merge(DEFAULTS, load_config(path))
    for key, raw in env_overrides(environ):
        set_dotted(cfg, key, raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        set_dotted(cfg, key, raw)
    if seed is not None:
        cfg["seed"] = int(seed)
    if not isinstance(cfg.get("seed"), int):
        raise ConfigError("seed must be an integer")
    return cfg


# -- builders ----------------------------------------------------------------------


def _section(cfg: dict, name: str) -> dict:
    sec = cfg.get(name)
    if sec is None:
        raise ConfigError(f"config is missing the [{name}] block")
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a mapping")
    return sec


def _build(fn, where: str, *args, **kw):
    try:
        return fn(*args, **kw)
    except (DomainError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid [{where}] block: {exc}") from exc


def _only(sec: dict, allowed: set, where: str) -> None:
    extra = set(sec) - allowed
    if extra:
        raise ConfigError(f"unknown keys in [{where}]: {', '.join(sorted(extra))}")


def build_geometry(sec: dict, seed: int = 0, notes: dict | None = None) -> PolarGeometry:
    """Geometry from its block.

    A homogeneous group without ``sphere_measure`` needs a ``norm``; its
    sphere measure is then estimated by Monte Carlo (``samples`` draws,
    seeded) and the estimate is stored in ``notes``.
    """
    kind = sec.get("kind")
    _only(sec, {"kind", "n", "nu", "sphere_measure", "b", "norm", "samples"}, "geometry")
    if kind == "half_line":
        return PolarGeometry.half_line()
    if kind == "euclidean":
        return _build(PolarGeometry.euclidean, "geometry", sec.get("n"))
    if kind == "homogeneous_group":
        measure = sec.get("sphere_measure")
        if measure is None:
            if "norm" not in sec:
                raise ConfigError("[geometry] a group needs sphere_measure or a norm to estimate it")
            qn = build_quasi_norm({"norm": sec["norm"], "weights": sec.get("nu")})
            est = _build(sphere_measure_mc, "geometry", qn, None, None,
                         int(float(sec.get("samples", 1_000_000))), seed)
            measure = est.value
            if notes is not None:
                notes["sphere_measure_estimate"] = est.to_dict()
        return _build(PolarGeometry.homogeneous_group, "geometry", sec.get("nu"), measure)
    if kind == "hyperbolic":
        return _build(PolarGeometry.hyperbolic, "geometry", sec.get("n"))
    if kind == "cartan_hadamard":
        return _build(PolarGeometry.cartan_hadamard, "geometry", sec.get("n"), sec.get("b", 0.0))
    raise ConfigError(
        f"unknown geometry kind {kind!r}; expected half_line, euclidean, "
        "homogeneous_group, hyperbolic or cartan_hadamard"
    )


def build_weight(sec, name: str, base_dir: Path | None = None) -> RadialWeight:
    where = f"weights.{name}"
    if not isinstance(sec, dict):
        raise ConfigError(f"[{where}] must be a mapping")
    fam = sec.get("family")
    _only(sec, {"family", "exponent", "scale", "r", "values", "csv", "interpolation", "outside",
                "monotonicity"}, where)
    if fam in ("power", "sinh_power", "sinh_scaled_power") and "exponent" not in sec:
        raise ConfigError(f"[{where}] needs an exponent")
    if fam == "power":
        w = _build(RadialWeight.power, where, float(sec.get("exponent", 0.0)))
    elif fam == "sinh_power":
        w = _build(RadialWeight.sinh_power, where, float(sec.get("exponent", 0.0)))
    elif fam == "sinh_scaled_power":
        w = _build(RadialWeight.sinh_scaled_power, where, float(sec.get("exponent", 0.0)),
                   float(sec.get("scale", 1.0)))
    elif fam == "tabulated":
        interp, outside = sec.get("interpolation", "linear"), sec.get("outside", "error")
        if "csv" in sec:
            path = Path(sec["csv"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            w = _build(RadialWeight.from_csv, where, path, interp, outside)
        else:
            w = _build(RadialWeight.tabulated, where, sec.get("r", ()), sec.get("values", ()), interp, outside)
    else:
        raise ConfigError(f"unknown weight family {fam!r} in [{where}]")
    if "monotonicity" in sec:
        try:
            mono = Monotonicity(sec["monotonicity"])
        except ValueError:
            raise ConfigError(f"[{where}] monotonicity {sec['monotonicity']!r} is not recognised") from None
        w = _build(w.with_monotonicity, where, mono)
    return w


def build_problem(cfg: dict, base_dir: Path | None = None, notes: dict | None = None) -> HardyProblem:
    geom = build_geometry(_section(cfg, "geometry"), cfg.get("seed", 0), notes)
    weights = _section(cfg, "weights")
    for name in ("u", "v"):
        if name not in weights:
            raise ConfigError(f"config is missing the [weights.{name}] block")
    u = build_weight(weights["u"], "u", base_dir)
    v = build_weight(weights["v"], "v", base_dir)
    prob = _section(cfg, "problem")
    _only(prob, {"q", "p", "direction"}, "problem")
    if "q" not in prob:
        raise ConfigError("[problem] needs q")
    direction = prob.get("direction", "direct")
    if direction not in {d.value for d in Direction}:
        raise ConfigError(f"[problem] direction must be direct or conjugate, got {direction!r}")
    return _build(HardyProblem, "problem", geom, u, v, float(prob["q"]),
                  None if prob.get("p") is None else float(prob["p"]), direction)


def build_quad(cfg: dict) -> QuadConfig:
    sec = dict(cfg.get("quadrature") or {})
    if "tail_transform" in sec:
        sec["tail_transform"] = _build(TailTransform, "quadrature", sec["tail_transform"])
    return _build(QuadConfig, "quadrature", **sec)


def build_search(cfg: dict) -> SupSearchConfig:
    return _build(SupSearchConfig, "search", **(cfg.get("search") or {}))


def build_function(sec: dict) -> RadialTestFunction:
    if not isinstance(sec, dict):
        raise ConfigError("each entry of [verify.functions] must be a mapping")
    kind = sec.get("kind")
    where = "verify.functions"
    if kind == "zero":
        return RadialTestFunction.zero()
    if kind == "indicator":
        return _build(RadialTestFunction.indicator, where, sec.get("a", 0.0), sec.get("b"),
                      sec.get("coefficient", 1.0))
    if kind == "step":
        return _build(RadialTestFunction.step, where, sec.get("breakpoints"), sec.get("levels"))
    if kind == "closed_form":
        support = tuple(float(x) for x in sec.get("support", (0.0, float("inf"))))
        return _build(RadialTestFunction.closed_form, where, sec.get("coefficient", 1.0),
                      sec.get("power", 0.0), sec.get("decay", 0.0), support)
    raise ConfigError(f"unknown test function kind {kind!r}")


def random_step_function(rng: np.random.Generator, pieces: int = 3,
                         r_range: tuple[float, float] = (1e-2, 1e2)) -> RadialTestFunction:
    """Step function with log-uniform breakpoints and uniform levels."""
    lo, hi = np.log(r_range[0]), np.log(r_range[1])
    bps = np.sort(np.exp(rng.uniform(lo, hi, pieces + 1)))
    levels = rng.uniform(0.05, 1.0, pieces)
    return RadialTestFunction.step(bps, levels)


def build_region(cfg: dict) -> tuple[RegionSpec, int]:
    sec = _section(cfg, "region")
    _only(sec, set(DEFAULTS["region"]), "region")

    def rng3(key):
        val = sec[key]
        if not (isinstance(val, (list, tuple)) and len(val) == 3):
            raise ConfigError(f"[region] {key} must be [start, stop, points]")
        return (float(val[0]), float(val[1])), int(val[2])

    (ar, an), (br, bn) = rng3("alpha"), rng3("beta")
    if sec["geometry"] not in ("group", "euclidean", "hyperbolic", "cartan_hadamard"):
        raise ConfigError(f"[region] geometry {sec['geometry']!r} is not supported")
    spec = _build(
        RegionSpec, "region", sec["geometry"], ar, an, br, bn,
        tuple(float(d) for d in sec["dims"]), tuple(float(q) for q in sec["qs"]),
        float(sec["curvature"]), sec["sphere_measure"], float(sec["band"]),
    )
    return spec, int(sec["workers"])


def build_quasi_norm(sec: dict) -> QuasiNorm:
    kind = sec.get("norm")
    try:
        k = QuasiNormKind(kind)
    except ValueError:
        raise ConfigError(f"unknown quasi-norm {kind!r}; expected max, koranyi or euclidean") from None
    if "weights" not in sec:
        raise ConfigError("[sphere_measure] needs dilation weights")
    return _build(QuasiNorm, "sphere_measure", k, tuple(sec["weights"]))
