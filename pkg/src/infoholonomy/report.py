"""
Run configuration, pipeline orchestration and the structured report.

A run is described by a :class:`RunConfig` (usually read from a YAML file)
and produces a :class:`VerdictReport`: a plain-data tree that serializes to
JSON and to a short text summary.  Reports carry no wall-clock time, so
identical configurations and seeds give byte-identical output.

Config file layout (``schema: 1``)::

    schema: 1
    model: normal-2            # registry name, or an inline mapping (below)
    tasks: [metric, curvature, checks, holonomy]
    alpha: 0.0
    points:                    # explicit list ...
      - [0.0, 0.0, -0.5, 0.0, -0.5]
      - {mu: [0, 0], cov: [[1, 0], [0, 1]]}
    # points: {count: 20, seed: 0, box: [[-1, 1], [0.5, 2]]}   # ... or a sampler
    tolerances: {einstein: 1.0e-6}
    loops:                     # optional transport loops for the holonomy task
      - [[...], [...], [...]]

Inline model::

    model:
      name: softplus-square
      parameters: [a, b]
      potential: "log(1 + exp(a)) + 0.5 * b * b"
      constraints: []          # expressions that must be > 0
      box: [[-2, 2], [-2, 2]]  # default sampling box
      metadata: {simply_connected: true, admits_kaehler: false}
"""

from __future__ import annotations

import json
import math
import platform
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

import numpy as np
import yaml

from . import __version__
from .published import discrepancy_ledger
from .checks import (
    block_diagonal_partition,
    constant_curvature,
    curvature_sign_profile,
    is_einstein,
    is_flat,
)
from .deriv import FD_TOLERANCES, Domain, ScalarField, evaluate_stack, finite_difference_stack
from .errors import ConfigError, InfoHolonomyError
from .expr import compile_expression
from .holonomy import (
    EvidenceFlags,
    berger_candidates,
    classify,
    parallel_transport_loop,
)
from .models import (
    ExponentialFamilyModel,
    MeanCovariancePoint,
    get_model,
    meancov_from_natural,
    natural_from_meancov,
    random_meancov,
)
from .tensors import curvature_bundles

SCHEMA_VERSION = 1
TASKS = ("metric", "curvature", "checks", "holonomy", "verify-paper")
DEFAULT_TOLERANCES = {
    "einstein": 1e-6,
    "constant_curvature": 1e-8,
    "flat": 1e-10,
    "block_diagonal": 1e-10,
    "rank": 1e-8,
    "orthogonality": 1e-6,
    "symmetry": 1e-9,
}
CONFIG_KEYS = {"schema", "model", "tasks", "alpha", "points", "seed", "tolerances", "loops", "steps"}


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    model: Any = "normal-2"
    tasks: list = field(default_factory=lambda: ["metric"])
    alpha: float = 0.0
    points: Any = None
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    loops: list = field(default_factory=list)
    steps: int = 10_000
    source: Optional[str] = None

    def tolerance(self, name):
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def echo(self):
        """Fully resolved configuration, defaults included."""
        out = asdict(self)
        out.pop("source")
        out["tolerances"] = {k: self.tolerance(k) for k in DEFAULT_TOLERANCES}
        out["schema"] = SCHEMA_VERSION
        return _plain(out)


def _key_lines(text):
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in node.value}


def config_from_dict(data: dict, source: str = None, lines: dict = None) -> RunConfig:
    """Validate a mapping (as read from YAML) into a :class:`RunConfig`.

    Raises
    ------
    ConfigError
        With ``where`` set to ``field`` or ``file:line (field)``.
    """
    lines = lines or {}

    def where(key):
        if source and key in lines:
            return f"{source}:{lines[key]} ({key})"
        return key

    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping", source)
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(unknown)}", where(unknown[0]))
    schema = data.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema {schema!r}; expected {SCHEMA_VERSION}", where("schema"))
    cfg = RunConfig(source=source)
    if "model" in data:
        if not isinstance(data["model"], (str, dict)):
            raise ConfigError("model must be a name or a mapping", where("model"))
        cfg.model = data["model"]
    if "tasks" in data:
        tasks = data["tasks"]
        if isinstance(tasks, str):
            tasks = [tasks]
        if not isinstance(tasks, list) or any(t not in TASKS for t in tasks):
            raise ConfigError(f"tasks must be a subset of {list(TASKS)}", where("tasks"))
        cfg.tasks = list(tasks)
    for key, typ in (("alpha", float), ("seed", int), ("steps", int)):
        if key in data:
            try:
                setattr(cfg, key, typ(data[key]))
            except (TypeError, ValueError):
                raise ConfigError(f"{key} must be {typ.__name__}", where(key)) from None
    if "points" in data:
        cfg.points = data["points"]
    if "tolerances" in data:
        tol = data["tolerances"]
        if not isinstance(tol, dict) or any(k not in DEFAULT_TOLERANCES for k in tol):
            raise ConfigError(f"tolerances keys must be among {sorted(DEFAULT_TOLERANCES)}",
                              where("tolerances"))
        cfg.tolerances = {k: float(v) for k, v in tol.items()}
    if "loops" in data:
        if not isinstance(data["loops"], list):
            raise ConfigError("loops must be a list of waypoint lists", where("loops"))
        cfg.loops = data["loops"]
    return cfg


def load_config(path) -> RunConfig:
    """Read a YAML run configuration."""
    path = str(path)
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(str(exc), path) from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f"{path}:{mark.line + 1}" if mark else path
        raise ConfigError(f"invalid YAML: {getattr(exc, 'problem', exc)}", loc) from None
    return config_from_dict(data or {}, path, _key_lines(text))


def _inline_model(spec: dict) -> ExponentialFamilyModel:
    for key in ("parameters", "potential"):
        if key not in spec:
            raise ConfigError(f"inline model needs {key!r}", f"model.{key}")
    names = [str(p) for p in spec["parameters"]]
    n = len(names)
    fn = compile_expression(str(spec["potential"]), names, "model.potential")
    constraints = []
    for k, text in enumerate(spec.get("constraints") or []):
        g = compile_expression(str(text), names, f"model.constraints[{k}]")
        constraints.append((f"{text} > 0", lambda x, g=g: g(list(x))))
    domain = Domain.unbounded(n, constraints)
    box = spec.get("box")
    if box is not None:
        box = np.asarray(box, dtype=float)
        if box.shape != (n, 2) or np.any(box[:, 0] >= box[:, 1]):
            raise ConfigError("box must be one [low, high] pair per parameter", "model.box")

    def point_sampler(count, rng):
        if box is None:
            raise ConfigError("inline model without a box needs explicit points", "model.box")
        return rng.uniform(box[:, 0], box[:, 1], size=(count, n))

    metadata = {"simply_connected": False, "admits_kaehler": None}
    metadata.update(spec.get("metadata") or {})
    return ExponentialFamilyModel(
        name=str(spec.get("name", "inline")), n=n,
        potential=ScalarField(n, fn, domain, name=str(spec.get("name", "inline"))),
        point_sampler=point_sampler, metadata=metadata,
    )


def resolve_model(cfg: RunConfig) -> ExponentialFamilyModel:
    if isinstance(cfg.model, dict):
        return _inline_model(cfg.model)
    try:
        return get_model(cfg.model)
    except KeyError as exc:
        raise ConfigError(exc.args[0], "model") from None


def _point_from_entry(model, entry, k):
    where = f"points[{k}]"
    if isinstance(entry, dict):
        if model.d is None:
            raise ConfigError("mean/covariance points need a normal model", where)
        mu = np.atleast_1d(np.asarray(entry.get("mu", np.zeros(model.d)), dtype=float))
        if "cov" in entry:
            cov = np.asarray(entry["cov"], dtype=float)
        elif "sigma" in entry and model.d == 1:
            cov = np.array([[float(entry["sigma"]) ** 2]])  # univariate: standard deviation
        else:
            raise ConfigError("give 'cov' (or 'sigma' for d = 1)", where)
        try:
            return natural_from_meancov(model.d, MeanCovariancePoint(mu, np.atleast_2d(cov)))
        except (ValueError, InfoHolonomyError) as exc:
            raise ConfigError(str(exc), where) from None
    theta = np.asarray(entry, dtype=float)
    if theta.shape != (model.n,):
        raise ConfigError(f"expected {model.n} natural coordinates", where)
    return theta


def resolve_points(cfg: RunConfig, model: ExponentialFamilyModel, count: int = 20) -> np.ndarray:
    """Points as a ``(count, n)`` array; every point is checked against the domain."""
    spec = cfg.points
    if spec is None:
        spec = {"count": count, "seed": cfg.seed}
    if isinstance(spec, dict):
        count = int(spec.get("count", count))
        seed = int(spec.get("seed", cfg.seed))
        if count < 1:
            raise ConfigError("count must be >= 1", "points.count")
        rng = np.random.default_rng(seed)
        if "box" in spec:
            box = np.asarray(spec["box"], dtype=float)
            if box.shape != (model.n, 2):
                raise ConfigError("box must be one [low, high] pair per coordinate", "points.box")
            corners = np.array(np.meshgrid(*box, indexing="ij")).reshape(model.n, -1)
            if not model.potential.domain.contains(corners):
                raise ConfigError("sampler box is not inside the model domain", "points.box")
            pts = rng.uniform(box[:, 0], box[:, 1], size=(count, model.n))
        else:
            pts = model.sample_points(count, seed)
    elif isinstance(spec, list):
        if not spec:
            raise ConfigError("empty point list", "points")
        pts = np.array([_point_from_entry(model, e, k) for k, e in enumerate(spec)])
    else:
        raise ConfigError("points must be a list or a sampler mapping", "points")
    bad = model.potential.domain.violations(pts.T)
    if bad:
        raise ConfigError("point outside the model domain: " + "; ".join(bad), "points")
    return pts


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

def _plain(obj):
    """Convert numpy containers and scalars into JSON-ready Python data."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, frozenset):
        return sorted(obj)
    return obj


@dataclass
class VerdictReport:
    schema: int
    config: dict
    results: dict
    discrepancies: list
    provenance: dict
    status: str

    @property
    def ok(self):
        return self.status == "ok"

    def to_dict(self):
        return _plain(asdict(self))

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


def serialize(report: VerdictReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def parse(text: str) -> VerdictReport:
    data = json.loads(text)
    if data.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported report schema {data.get('schema')!r}")
    return VerdictReport.from_dict(data)


def _provenance(seed):
    import scipy
    return {
        "package": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "seed": seed,
        "timestamp": None,
    }


# ---------------------------------------------------------------------------
# Tasks
# ---------------------------------------------------------------------------

def _task_metric(model, pts, cfg):
    g = evaluate_stack(model.potential, pts.T, 2).order2
    out = []
    for k, theta in enumerate(pts):
        fd = finite_difference_stack(model.potential, theta).order2
        err = float(np.max(np.abs(g[k] - fd)) / max(1.0, np.max(np.abs(g[k]))))
        out.append({"point": theta, "g": g[k], "fd_discrepancy": err, "tolerance": FD_TOLERANCES[2]})
    return {"points": out, "passed": all(p["fd_discrepancy"] <= p["tolerance"] for p in out)}


def _symmetry_residual(b):
    R = b.riemann
    scale = max(1.0, float(np.max(np.abs(R))))
    res = max(
        np.max(np.abs(R + R.transpose(1, 0, 2, 3))),
        np.max(np.abs(R + R.transpose(0, 1, 3, 2))),
        np.max(np.abs(R - R.transpose(2, 3, 0, 1))),
        np.max(np.abs(R + R.transpose(0, 2, 3, 1) + R.transpose(0, 3, 1, 2))),
    )
    return float(res) / scale


def _task_curvature(model, pts, cfg):
    tol = cfg.tolerance("symmetry")
    out = []
    for b in curvature_bundles(model, pts, cfg.alpha):
        item = b.summary()
        item["symmetry_residual"] = _symmetry_residual(b)
        item["tolerance"] = tol
        out.append(item)
    return {"points": out, "passed": all(p["symmetry_residual"] <= tol for p in out)}


def _task_checks(model, pts, cfg):
    bundles = curvature_bundles(model, pts)
    btol = cfg.tolerance("block_diagonal")
    partitions = [block_diagonal_partition(b.K, btol) for b in bundles]
    out = {
        "flat": is_flat(model, bundles, cfg.tolerance("flat")).to_dict(),
        "sign_profile": {"verdict": curvature_sign_profile(model, bundles), "tolerance": 1e-10},
        "block_diagonal": {"partitions": partitions, "connected": all(p is None for p in partitions),
                           "tolerance": btol},
    }
    if len(bundles) >= 5:
        out["einstein"] = is_einstein(model, bundles, cfg.tolerance("einstein")).to_dict()
        out["constant_curvature"] = constant_curvature(
            model, bundles, cfg.tolerance("constant_curvature")).to_dict()
    return out


def _task_holonomy(model, pts, cfg):
    verdict = classify(model, point_budget=len(pts), seed=cfg.seed, tol=cfg.tolerance("rank"))
    out = {"classification": verdict.to_dict(), "rank_tolerance": cfg.tolerance("rank")}
    tol = cfg.tolerance("orthogonality")
    loops = []
    for loop in cfg.loops:
        res = parallel_transport_loop(model, np.asarray(loop, dtype=float), cfg.steps)
        loops.append({"waypoints": loop, "matrix": res.matrix,
                      "orthogonality_residual": res.orthogonality_residual,
                      "determinant": res.determinant, "tolerance": tol,
                      "passed": res.orthogonality_residual < tol and res.determinant > 0})
    out["loops"] = loops
    out["passed"] = all(item["passed"] for item in loops)
    return out


_TASK_FUNCS = {
    "metric": _task_metric,
    "curvature": _task_curvature,
    "checks": _task_checks,
    "holonomy": _task_holonomy,
}


def run(cfg: RunConfig) -> VerdictReport:
    """Execute the configured tasks in order; task errors are captured per task."""
    model = resolve_model(cfg)
    results, discrepancies, failed = {}, [], False
    needs_points = [t for t in cfg.tasks if t in _TASK_FUNCS]
    pts = resolve_points(cfg, model) if needs_points else None
    for task in TASKS:
        if task not in cfg.tasks:
            continue
        try:
            if task == "verify-paper":
                sub = verify_paper()
                results[task] = sub.results["verify-paper"]
                discrepancies.extend(sub.discrepancies)
                failed |= not sub.ok
            else:
                results[task] = _TASK_FUNCS[task](model, pts, cfg)
                failed |= results[task].get("passed", True) is False
        except (InfoHolonomyError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            results[task] = {"error": type(exc).__name__, "message": str(exc)}
            failed = True
    return VerdictReport(SCHEMA_VERSION, cfg.echo(), _plain(results), _plain(discrepancies),
                         _provenance(cfg.seed), "failed" if failed else "ok")


# ---------------------------------------------------------------------------
# Regression suite
# ---------------------------------------------------------------------------

def _item(items, name, expected, computed, tolerance, passed, quarantined=False, note=""):
    items.append({"item": name, "expected": expected, "computed": computed,
                  "tolerance": tolerance, "passed": bool(passed),
                  "quarantined": quarantined, "note": note})


def _normal1_metric(mu, s):
    return np.array([[s**2, 2 * mu * s**2], [2 * mu * s**2, 2 * s**2 * (2 * mu**2 + s**2)]])


def verify_paper(seed: int = 0, count: int = 20) -> VerdictReport:
    """Run the regression suite of published values.

    Every item records expected and computed values and its tolerance.
    Items marked ``quarantined`` document known misprints; they are
    reported but do not affect the status.
    """
    items = []
    rng = np.random.default_rng(seed)
    n1, n2, n3 = get_model("normal-1"), get_model("normal-2"), get_model("normal-3")

    # univariate normal: metric, curvature tensor and kappa
    theta0 = natural_from_meancov(1, MeanCovariancePoint([0.0], [[1.0]]))
    g0 = evaluate_stack(n1.potential, theta0, 2).order2
    _item(items, "normal-1 metric at (mu=0, sigma=1)", [[1, 0], [0, 2]], g0, 1e-10,
          np.max(np.abs(g0 - [[1, 0], [0, 2]])) <= 1e-10)
    mus = rng.uniform(-2, 2, count)
    sds = rng.uniform(0.5, 2, count)
    pts1 = np.array([natural_from_meancov(1, MeanCovariancePoint([m], [[s * s]])) for m, s in zip(mus, sds)])
    g1 = evaluate_stack(n1.potential, pts1.T, 2).order2
    ref = np.array([_normal1_metric(m, s) for m, s in zip(mus, sds)])
    rel = float(np.max(np.abs(g1 - ref) / np.maximum(1.0, np.abs(ref))))
    _item(items, "normal-1 metric symbolic form", "[[s^2, 2 mu s^2], [2 mu s^2, 2 s^2 (2 mu^2 + s^2)]]",
          rel, 1e-9, rel <= 1e-9, note="computed = max relative error")
    b1 = curvature_bundles(n1, pts1)
    kappa = np.array([b.K[0, 1] for b in b1])
    _item(items, "normal-1 sectional curvature", -0.5, float(kappa[np.argmax(np.abs(kappa + 0.5))]),
          1e-8, np.max(np.abs(kappa + 0.5)) <= 1e-8)
    r1212 = np.array([b.riemann[0, 1, 0, 1] for b in b1])
    printed = 1 / sds**6
    _item(items, "normal-1 R_1212 printed as 1/sigma^6", printed[0], r1212[0], 1e-8,
          np.allclose(r1212, printed, rtol=1e-8), quarantined=True,
          note="computed R_1212 = -sigma^6 (kappa * det g with det g = 2 sigma^6)")

    # bivariate normal: published spot values
    pts2 = n2.sample_points(count, seed)
    b2 = curvature_bundles(n2, pts2)
    for (i, j), val in (((0, 1), 0.25), ((0, 2), -0.5), ((1, 4), -0.5)):
        vals = np.array([b.K[i, j] for b in b2])
        _item(items, f"normal-2 K_{i + 1}{j + 1}", val, float(vals[np.argmax(np.abs(vals - val))]),
              1e-8, np.max(np.abs(vals - val)) <= 1e-8)
    kdiag = max(float(np.max(np.abs(np.diag(b.K)))) for b in b2)
    _item(items, "normal-2 K_ii", 0.0, kdiag, 1e-8, kdiag <= 1e-8)
    sig11 = np.array([meancov_from_natural(2, p).sigma[0, 0] for p in pts2])
    ric11 = np.array([b.ricci[0, 0] for b in b2])
    err = float(np.max(np.abs(ric11 + 0.5 * sig11)))
    _item(items, "normal-2 Ric_11 = -Sigma_11 / 2", "-Sigma_11/2", err, 1e-8, err <= 1e-8,
          note="computed = max absolute error")

    def computed(point, alpha):
        th = natural_from_meancov(2, point)
        b = curvature_bundles(n2, th[None, :], alpha)[0]
        return {"g": b.g, "K": b.K, "Ric": b.ricci}

    table_pts = [random_meancov(2, rng) for _ in range(count)]
    ledger = discrepancy_ledger(computed, table_pts, alphas=(0.0, 0.4), tol=1e-6)
    rate = sum(e["matches"] for e in ledger) / len(ledger)
    _item(items, "normal-2 published tables match rate", ">= 0.8", rate, 1e-6, rate >= 0.8,
          note=f"{len(ledger)} printed entries at alpha in (0, 0.4)")

    # Einstein, sign profile, irreducibility evidence
    b3 = curvature_bundles(n3, n3.sample_points(count, seed))
    e1 = is_einstein(n1, b1)
    _item(items, "normal-1 Einstein with k = -1/2", -0.5, e1.value, 1e-8,
          e1.holds and abs(e1.value + 0.5) <= 1e-8)
    for name, model, bundles in (("normal-2", n2, b2), ("normal-3", n3, b3)):
        e = is_einstein(model, bundles)
        worst = min(w["residual"] for w in e.witness)
        _item(items, f"{name} not Einstein", "residual > 0.1 at every point", worst, 0.1,
              not e.holds and worst > 0.1, note="computed = smallest residual")
        prof = curvature_sign_profile(model, bundles)
        _item(items, f"{name} sign profile", "mixed", prof, 1e-10, prof == "mixed")
        conn = all(block_diagonal_partition(b.K) is None for b in bundles)
        _item(items, f"{name} sectional matrix connected", True, conn, 1e-10, conn)

    # Berger table
    cases = [
        ("n=5 exponential, not Einstein", EvidenceFlags(5, True, True, True, einstein=False,
                                                        ricci_flat=False, admits_kaehler=False,
                                                        exponential_family=True), ["SO(5)"]),
        ("n=7 exponential", EvidenceFlags(7, True, True, True, exponential_family=True),
         ["SO(7)", "G2"]),
        ("n=8 exponential", EvidenceFlags(8, True, True, True, exponential_family=True),
         ["SO(8)", "Sp(2)·Sp(1)", "Spin(7)"]),
        ("n=12 generic", EvidenceFlags(12, True, True, True), ["SO(12)", "U(6)", "SU(6)",
                                                               "Sp(3)·Sp(1)", "Sp(3)"]),
    ]
    for label, flags, expected in cases:
        got = [c.group for c in berger_candidates(flags)]
        _item(items, f"Berger candidates {label}", expected, got, 0.0, sorted(got) == sorted(expected))

    # classification
    for model, expected in ((n1, "SO(2)"), (n2, "SO(5)"), (n3, "SO(9)")):
        v = classify(model, point_budget=count, seed=seed)
        _item(items, f"classify {model.name}", expected, v.verdict, 1e-8, v.verdict == expected,
              note=f"curvature algebra dim {v.curvature_algebra_dim} of {v.so_dim}")

    # known misprints, recorded for the reader
    discrepancies = [e for e in ledger if not e["matches"]]
    discrepancies.append({
        "table": "normal-2 chart", "entry": "theta_4",
        "printed": "-sigma_12 / Delta", "computed": "+sigma_12 / Delta",
        "note": "the printed density expansion has xy coefficient sigma_12/(2 Delta); "
                "the potential used throughout is consistent with +sigma_12/Delta",
    })
    discrepancies.append({
        "table": "normal-1", "entry": "R_1212", "printed": "1/sigma^6", "computed": "-sigma^6",
        "note": "kappa = -1/2 holds; the printed tensor component is inconsistent with it",
    })
    passed = all(it["passed"] for it in items if not it["quarantined"])
    cfg = RunConfig(model="normal-2", tasks=["verify-paper"], seed=seed,
                    points={"count": count, "seed": seed})
    return VerdictReport(
        SCHEMA_VERSION, cfg.echo(),
        _plain({"verify-paper": {"items": items, "table_ledger": ledger,
                                 "passed": passed, "match_rate": rate}}),
        _plain(discrepancies), _provenance(seed), "ok" if passed else "failed")


# ---------------------------------------------------------------------------
# Text rendering
# ---------------------------------------------------------------------------

def _fmt(x):
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def render_text(report: VerdictReport) -> str:
    """Short human-readable summary of a report."""
    cfg = report.config
    model = cfg["model"] if isinstance(cfg["model"], str) else cfg["model"].get("name", "inline")
    lines = [f"infoholonomy report (schema {report.schema})",
             f"model: {model}   alpha: {cfg['alpha']}   seed: {cfg['seed']}",
             f"status: {report.status}", ""]
    for task, res in report.results.items():
        lines.append(f"[{task}]")
        if "error" in res:
            lines.append(f"  error {res['error']}: {res['message']}")
        elif task == "metric":
            for p in res["points"]:
                lines.append(f"  theta={_fmt_vec(p['point'])}")
                lines.extend("    " + _fmt_vec(row) for row in p["g"])
                lines.append(f"    fd check {p['fd_discrepancy']:.2e} (tol {p['tolerance']:.0e})")
        elif task == "curvature":
            for p in res["points"]:
                lines.append(f"  theta={_fmt_vec(p['point'])}  scalar={p['scalar']:.6g}"
                             f"  symmetry {p['symmetry_residual']:.1e} (tol {p['tolerance']:.0e})")
                lines.extend("    K " + _fmt_vec(row) for row in p["K"])
        elif task == "checks":
            for key, val in res.items():
                if key == "block_diagonal":
                    parts = [q for q in val["partitions"] if q is not None]
                    desc = "connected at every point" if val["connected"] else \
                        f"block diagonal at {len(parts)} of {len(val['partitions'])} points, e.g. {parts[0]}"
                    lines.append(f"  block_diagonal: {desc}")
                elif key == "sign_profile":
                    lines.append(f"  sign_profile: {val['verdict']}")
                else:
                    extra = f" value={_fmt(val['value'])}" if val.get("value") is not None else ""
                    lines.append(f"  {key}: {val['verdict']} (tol {val['tolerance']:.0e}){extra}"
                                 + (f"  {val['note']}" if val.get("note") else ""))
        elif task == "holonomy":
            c = res["classification"]
            lines.append(f"  verdict: {c['verdict']}")
            lines.append(f"  candidates: {', '.join(c['candidates']) or '-'}")
            lines.append(f"  curvature algebra dim: {c['curvature_algebra_dim']} of {c['so_dim']}")
            for a in c["assumptions"]:
                lines.append(f"  assumption: {a}")
            for note in c["notes"]:
                lines.append(f"  note: {note}")
            for lp in res["loops"]:
                lines.append(f"  loop: orthogonality {lp['orthogonality_residual']:.2e}"
                             f" det {lp['determinant']:.12f} {'ok' if lp['passed'] else 'FAIL'}")
        elif task == "verify-paper":
            for it in res["items"]:
                mark = "PASS" if it["passed"] else ("QUARANTINED" if it["quarantined"] else "FAIL")
                lines.append(f"  {mark:11s} {it['item']}: expected {_fmt(it['expected'])},"
                             f" got {_fmt(it['computed'])} (tol {it['tolerance']:.0e})")
            lines.append(f"  published table match rate: {res['match_rate']:.3f}")
        lines.append("")
    if report.discrepancies:
        lines.append("[discrepancies]")
        for d in report.discrepancies:
            lines.append(f"  {d['table']} {d['entry']}: printed {_fmt(d['printed'])},"
                         f" computed {_fmt(d['computed'])}")
    return "\n".join(lines).rstrip() + "\n"


def _fmt_vec(v):
    return "[" + ", ".join(f"{x: .6g}" for x in v) + "]"
