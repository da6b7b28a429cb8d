import json

import numpy as np
import pytest

from infoholonomy.cli import main
from infoholonomy.errors import ConfigError
from infoholonomy.report import (
    RunConfig,
    config_from_dict,
    load_config,
    parse,
    render_text,
    resolve_points,
    run,
    serialize,
    verify_paper,
)


def test_holonomy_task():
    rep = run(RunConfig(model="normal-2", tasks=["holonomy"], points={"count": 6, "seed": 1}))
    assert rep.ok
    assert rep.results["holonomy"]["classification"]["verdict"] == "SO(5)"


def test_flat_checks():
    rep = run(RunConfig(model="flat-toy", tasks=["checks"]))
    checks = rep.results["checks"]
    assert checks["flat"]["verdict"] == "holds"
    assert checks["einstein"]["verdict"] == "holds" and checks["einstein"]["value"] == 0.0


def test_metric_at_meancov_point():
    rep = run(RunConfig(model="normal-1", tasks=["metric"], points=[{"mu": 0, "sigma": 1}]))
    np.testing.assert_allclose(rep.results["metric"]["points"][0]["g"], [[1, 0], [0, 2]], atol=1e-12)


def test_every_number_has_tolerance():
    rep = run(RunConfig(model="normal-2", tasks=["metric", "curvature"], points={"count": 2}))
    for task in ("metric", "curvature"):
        assert all("tolerance" in p for p in rep.results[task]["points"])


def test_byte_identical_and_round_trip():
    cfg = RunConfig(model="normal-1", tasks=["metric", "checks", "holonomy"], seed=3)
    a, b = serialize(run(cfg)), serialize(run(cfg))
    assert a == b
    rep = parse(a)
    assert rep == parse(serialize(rep))
    assert serialize(rep) == a


def test_task_errors_are_captured():
    cfg = RunConfig(model={"parameters": ["t"], "potential": "log(t)", "box": [[-1, 1]]},
                    tasks=["metric"], points=[[0.5]])
    rep = run(cfg)
    assert rep.ok
    cfg.points = [[-0.5]]
    rep = run(cfg)
    assert not rep.ok and rep.results["metric"]["error"] == "NonFiniteError"


def test_inline_model_and_box():
    spec = {"name": "toy", "parameters": ["a", "b"], "potential": "log(1 + exp(a)) + 0.5*b**2",
            "constraints": ["2 - a"], "metadata": {"simply_connected": True}}
    cfg = RunConfig(model=spec, tasks=["curvature"], points={"count": 3, "box": [[-1, 1], [0, 1]]})
    rep = run(cfg)
    assert rep.ok and len(rep.results["curvature"]["points"]) == 3
    cfg.points = {"count": 3, "box": [[0, 3], [0, 1]]}
    with pytest.raises(ConfigError, match="box"):
        run(cfg)


def test_config_validation(tmp_path):
    with pytest.raises(ConfigError, match="tasks"):
        config_from_dict({"tasks": ["everything"]})
    with pytest.raises(ConfigError, match="schema"):
        config_from_dict({"schema": 7})
    path = tmp_path / "run.yaml"
    path.write_text("model: normal-2\ntasks: [checks]\nalpha: fast\n")
    with pytest.raises(ConfigError) as exc:
        load_config(path)
    assert exc.value.where.endswith(":3 (alpha)")
    path.write_text("model: [unclosed\n")
    with pytest.raises(ConfigError, match="YAML"):
        load_config(path)


def test_points_outside_domain():
    from infoholonomy.models import get_model
    with pytest.raises(ConfigError):
        resolve_points(RunConfig(points=[[0, 0, 0.5, 0, -0.5]]), get_model("normal-2"))


def test_regression_suite_passes():
    rep = verify_paper(count=8)
    assert rep.ok
    items = rep.results["verify-paper"]["items"]
    assert all(i["passed"] for i in items if not i["quarantined"])
    assert any(i["quarantined"] for i in items)
    assert "[verify-paper]" in render_text(rep)


def test_cli_structured(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["classify", "--model", "normal-1", "--points", "6", "--format", "structured",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["results"]["holonomy"]["classification"]["verdict"] == "SO(2)"
    assert data["schema"] == 1


def test_cli_text_and_exit_codes(tmp_path, capsys):
    assert main(["metric", "--model", "normal-1", "--points", "2", "--seed", "4"]) == 0
    assert "[metric]" in capsys.readouterr().out
    assert main(["checks", "--model", "no-such-model"]) == 2
    cfg = tmp_path / "c.yaml"
    cfg.write_text("model:\n  parameters: [t]\n  potential: log(t)\n  constraints: [t]\npoints: [[-1.0]]\n")
    assert main(["metric", "--config", str(cfg)]) == 2
    cfg.write_text("model:\n  parameters: [t]\n  potential: log(t - 1)\npoints: [[0.5]]\n")
    assert main(["metric", "--config", str(cfg)]) == 1


def test_cli_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("model: normal-2\nalpha: 0.5\npoints: {count: 2, seed: 1}\n")
    assert main(["curvature", "--config", str(cfg), "--alpha", "0.25", "--model", "normal-1",
                 "--format", "structured"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["config"]["alpha"] == 0.25 and data["config"]["model"] == "normal-1"
