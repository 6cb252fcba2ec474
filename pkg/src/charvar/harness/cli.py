"""Command line: ``charvar {sample,verify,plot,report}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import ConfigError, ExperimentConfig, default_matrix, load_config
from .verify import SUITES, run_sample, run_verify


def _config(args) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = default_matrix()[args.preset]
    return cfg.with_overrides(seed=args.seed, threads=args.threads, epsilon=args.epsilon,
                              samples=args.samples, output=args.out)


def _add_common(p):
    p.add_argument("--config", help="experiment JSON document")
    p.add_argument("--preset", default="g2n2", choices=sorted(default_matrix()),
                   help="shipped configuration used when --config is absent")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="charvar")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("sample", help="draw a batch and write it as JSON lines"))
    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    _add_common(p)
    p = sub.add_parser("plot", help="histograms, spectra and epsilon sweeps")
    p.add_argument("--sweep", help="comma-separated epsilon values")
    _add_common(p)
    p = sub.add_parser("report", help="summarize the reports under the output directory")
    _add_common(p)
    return parser


def _summarize(directory: Path) -> int:
    reports = sorted(directory.glob("*/report.json"))
    if not reports:
        print(f"no reports under {directory}")
        return 1
    failed = False
    for path in reports:
        rep = json.loads(path.read_text())
        counts = {}
        for t in rep["tests"]:
            counts[t["status"]] = counts.get(t["status"], 0) + 1
        failed |= counts.get("fail", 0) > 0
        summary = " ".join(f"{k}={v}" for k, v in sorted(counts.items()))
        print(f"{rep['suite']:<14} acceptance={rep['acceptance_rate']:.4g}  {summary}")
        for t in rep["tests"]:
            if t["status"] != "pass":
                print(f"    {t['status']:<5} {t['name']} {t.get('observable', '')} "
                      f"measured={t['measured']:.6g} threshold={t['threshold']}")
    return 1 if failed else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.command == "sample":
        path = run_sample(cfg)
        print(path)
        return 0
    if args.command == "verify":
        report = run_verify(cfg, args.suite)
        for t in report.tests:
            print(f"{t.status:<5} {t.name:<30} {t.observable:<28} "
                  f"measured={t.measured:.6g} threshold={t.threshold}")
        return 1 if report.failed else 0
    if args.command == "plot":
        from .plots import emit_plots

        sweep = [float(x) for x in args.sweep.split(",")] if args.sweep else None
        for path in emit_plots(cfg, sweep):
            print(path)
        return 0
    return _summarize(cfg.output_dir)


if __name__ == "__main__":
    sys.exit(main())
