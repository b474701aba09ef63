"""Console entry point: `thdet MODE [--config FILE] [overrides]`.

The config file is JSON; command-line overrides are applied on top of it
and the merged config is validated before anything runs.  `--seed` is
accepted for interface stability but unused: every mode is deterministic.
"""

import argparse
import json
import sys

from .runner import MODES, run


def build_parser():
    p = argparse.ArgumentParser(
        prog="thdet",
        description="Toeplitz+Hankel determinants, orthogonal polynomials, "
                    "and their Riemann-Hilbert asymptotics.")
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", metavar="FILE",
                   help="JSON config; command-line flags override its fields")
    p.add_argument("--out", default=".", metavar="DIR",
                   help="directory for report.csv / summary.json / "
                        "invariants.json (default: current directory)")
    p.add_argument("--n-min", type=int, dest="n_min")
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--n-step", type=int, dest="n_step")
    p.add_argument("--precision", choices=("double", "extended"))
    p.add_argument("--seed", type=int, help="reserved; runs are deterministic")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = {}
    if args.config:
        try:
            with open(args.config) as f:
                config = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"config: cannot read {args.config}: {exc}", file=sys.stderr)
            return 2
        if not isinstance(config, dict):
            print("config: top level must be a JSON object", file=sys.stderr)
            return 2
    config["mode"] = args.mode
    for key in ("n_min", "n_max", "n_step", "precision"):
        value = getattr(args, key)
        if value is not None:
            config[key] = value
    return run(config, out_dir=args.out)


if __name__ == "__main__":
    sys.exit(main())
