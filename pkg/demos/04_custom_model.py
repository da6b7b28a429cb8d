"""
Running the pipeline on a user-defined family
=============================================

A family can be described by its log-partition function alone, written
as an arithmetic expression.  Here: a product of a Bernoulli family and a
Poisson family, which is flat (the metric is diagonal and each factor is
one-dimensional), so the holonomy classification reports that Berger's
hypotheses do not hold.
"""

# %%
import tempfile
from pathlib import Path

from infoholonomy.cli import main
from infoholonomy.report import RunConfig, render_text, run

config = RunConfig(
    model={
        "name": "bernoulli-x-poisson",
        "parameters": ["a", "b"],
        "potential": "log(1 + exp(a)) + exp(b)",
        "box": [[-2, 2], [-1, 1]],
        "metadata": {"simply_connected": True, "admits_kaehler": False},
    },
    tasks=["metric", "checks", "holonomy"],
    points={"count": 5, "seed": 0},
    loops=[[[0.0, 0.0], [0.5, 0.0], [0.5, 0.5], [0.0, 0.5]]],
)
print(render_text(run(config)))

# %%
# The same run from a YAML file through the command-line entry point
text = """
schema: 1
model:
  name: softplus-gauss
  parameters: [a, b]
  potential: "log(1 + exp(a + b)) + 0.5 * b**2"
  box: [[-1, 1], [-1, 1]]
tasks: [curvature]
points: [[0.1, 0.2]]
"""
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "run.yaml"
    path.write_text(text)
    status = main(["curvature", "--config", str(path)])
print("exit status", status)
