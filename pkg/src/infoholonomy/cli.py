"""
Command-line front end.

    infoholonomy metric --model normal-1 --points 3
    infoholonomy classify --model normal-3 --format structured --out n3.json
    infoholonomy verify-paper

Flags override values read from ``--config``.  Exit status is 0 when every
requested task ran and passed, 1 when a task errored or a regression item
failed, and 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError
from .models import model_names
from .report import RunConfig, load_config, render_text, run, serialize, verify_paper

COMMANDS = {
    "metric": ["metric"],
    "curvature": ["curvature"],
    "checks": ["checks"],
    "classify": ["holonomy"],
    "verify-paper": ["verify-paper"],
}


def build_parser() -> argparse.ArgumentParser:
    parts = __doc__.split("\n\n")
    parser = argparse.ArgumentParser(
        prog="infoholonomy", description=parts[0].strip(), epilog=parts[1] + "\n\n" + parts[2].strip(),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--model", help="registered model: " + ", ".join(model_names()))
        p.add_argument("--config", help="YAML run configuration")
        p.add_argument("--alpha", type=float, help="alpha-connection parameter")
        p.add_argument("--seed", type=int, help="seed for sampled points")
        p.add_argument("--points", type=int, help="number of sampled points")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("text", "structured"), default="text")
    return parser


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    cfg.tasks = COMMANDS[args.command]
    if args.model is not None:
        cfg.model = args.model
    if args.alpha is not None:
        cfg.alpha = args.alpha
    if args.seed is not None:
        cfg.seed = args.seed
        if isinstance(cfg.points, dict):
            cfg.points = dict(cfg.points, seed=args.seed)
    if args.points is not None:
        if isinstance(cfg.points, list):
            raise ConfigError("--points conflicts with an explicit point list", "--points")
        spec = dict(cfg.points or {})
        spec["count"] = args.points
        cfg.points = spec
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-paper" and not args.config and args.model is None:
            seed = 0 if args.seed is None else args.seed
            report = verify_paper(seed=seed, count=args.points or 20)
        else:
            report = run(_config(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    text = serialize(report) if args.format == "structured" else render_text(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.ok else 1
