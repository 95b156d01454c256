"""Command line front end: ``qwentangle <experiment> [flags]``.

Exit status 0 on success, 2 on a configuration error, 3 when a numerical
guard trips (boundary overrun, negligible overlap and so on).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import KINDS, ExperimentConfig, read_config_dict
from .errors import ConfigError, QWalkError
from .experiments import run, write_result

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# flag name -> config field
FLAGS = {
    "theta1": float,
    "theta2": float,
    "theta2_minus": float,
    "theta2_plus": float,
    "width": float,
    "center": float,
    "steps": int,
    "half_width": int,
    "out": str,
    "seed": int,
    "n_k": int,
    "grid": int,
    "stride": int,
}


def _thetas(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser) -> None:
    for name, typ in FLAGS.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=None)
    p.add_argument("--initial", choices=["A", "B", "upup", "downdown", "up", "down"], default=None)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.add_argument("--thetas", type=_thetas, default=None, help="comma separated theta1 values (bands)")
    p.add_argument("--config", default=None, help="JSON config file; its values override flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwentangle", description="Split-step quantum walk experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        _add_common(sub.add_parser(kind, help=f"run the {kind} experiment"))
    _add_common(sub.add_parser("run", help="run whatever kind a --config file names"))
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values = {k: v for k, v in vars(args).items() if k in FLAGS or k in ("initial", "format", "thetas")}
    values = {k: v for k, v in values.items() if v is not None}
    if args.command != "run":
        values["kind"] = args.command
    if args.config:
        from_file = read_config_dict(args.config)
        kind = from_file.get("kind", values.get("kind"))
        if args.command != "run" and kind != args.command:
            raise ConfigError(f"config file is for {kind!r}, not {args.command!r}")
        values.update(from_file)
    elif args.command == "run":
        raise ConfigError("'run' needs --config")
    return ExperimentConfig.from_dict(values)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        result = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QWalkError as exc:
        print(f"numerical guard: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    written = write_result(result, cfg.out)
    if isinstance(written, str):
        sys.stdout.write(written)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
