"""Command line entry point ``nf``.

Subcommands::

    nf normal-form --order 2 --format latex
    nf simulate --config run.yaml --out runs/
    nf compare  --config cmp.yaml --out runs/
    nf sweep    --config sweep.yaml --out runs/ --workers 4
    nf stationary --nodes 1 --tol 1e-8 --out states/ --format csv
    nf convert-units --mass 1e-57 --total-solar 1e12

Failures exit nonzero and print a JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .report import report_normal_form
from .runner import RunFailure, run_experiment
from .units import convert_units, solar_masses

__all__ = ["main", "build_parser"]


def _fail(kind: str, message: str, code: int = 2, **extra) -> int:
    rec = {"error": kind, "message": message, **extra}
    print(json.dumps(rec, sort_keys=True), file=sys.stderr)
    return code


def _write_or_print(text: str, out, filename: str):
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / filename).write_text(text)
        print(str(d / filename))
    else:
        sys.stdout.write(text)


def cmd_normal_form(args) -> int:
    fmt = args.format or "text"
    text = report_normal_form(args.order, fmt)
    ext = {"text": "txt", "unicode": "txt", "latex": "tex", "json": "json"}[fmt]
    _write_or_print(text, args.out, f"normal_form_order{args.order}.{ext}")
    return 0


def _experiment(args, mode: str) -> int:
    if not args.config:
        return _fail("configuration", "--config is required")
    cfg = load_config(args.config)
    if cfg.mode != mode:
        cfg.mode = mode
        if mode in ("compare", "sweep") and len(cfg.systems) < 2:
            raise ConfigError(f"{mode} needs at least two systems")
    if args.format == "svg":
        cfg.plots = True
    res = run_experiment(cfg, out=args.out, workers=args.workers)
    summary = {"directory": str(res.directory), "slopes": res.slopes,
               "config_hash": res.manifest["config_hash"]}
    if args.format == "json":
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        print(f"output: {res.directory}")
        for s, v in res.slopes.items():
            print(f"slope {s} vs {cfg.systems[0]}: {v:.4f}")
    return 0


def cmd_stationary(args) -> int:
    from ..stationary import shoot_radial, write_profile_csv

    res = shoot_radial(args.nodes, args.tol)
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        path = write_profile_csv(d / f"profile_j{args.nodes}.csv", res)
        if args.snapshot_n:
            from ..dynamics import Grid
            from ..stationary import write_profile_snapshot

            grid = Grid(3, args.snapshot_n, args.snapshot_box)
            write_profile_snapshot(d / f"profile_j{args.nodes}.nfld", res, grid, scale=args.snapshot_scale)
    info = {"nodes": res.nodes, "omega": res.omega, "mu": res.mu, "residual": res.residual}
    if args.format == "json":
        print(json.dumps(info, indent=2, sort_keys=True))
    else:
        print(",".join(info))
        print(",".join(repr(v) for v in info.values()))
        if args.out:
            print(f"profile: {path}")
    return 0


def cmd_convert_units(args) -> int:
    if args.total_mass is None and args.total_solar is None:
        return _fail("configuration", "give --total-mass (grams) or --total-solar")
    total = args.total_mass if args.total_mass is not None else solar_masses(args.total_solar)
    p = convert_units(args.mass, total)
    d = p.to_dict()
    if args.format == "json":
        print(json.dumps(d, indent=2))
    else:
        print(",".join(d))
        print(",".join(repr(v) for v in d.values()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nf", description="Normal forms and field simulations.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normal-form", help="compute and render the normal form")
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--format", choices=["text", "unicode", "latex", "json"], default="text")
    p.add_argument("--out", help="directory for the document (default: stdout)")
    p.set_defaults(func=cmd_normal_form)

    for name in ("simulate", "compare", "sweep"):
        p = sub.add_parser(name, help=f"{name} runs described by a config file")
        p.add_argument("--config", help="YAML experiment description")
        p.add_argument("--out", help="output root (default: output_dir from config or ./runs)")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--format", choices=["csv", "svg", "json"], default="csv")
        p.set_defaults(func=lambda a, m=name: _experiment(a, m))

    p = sub.add_parser("stationary", help="radial stationary state by shooting")
    p.add_argument("--nodes", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--snapshot-n", type=int, default=0,
                   help="also write an NFLD1 snapshot on an n^3 grid")
    p.add_argument("--snapshot-box", type=float, default=32.0)
    p.add_argument("--snapshot-scale", type=float, default=1.0,
                   help="scaling parameter applied before sampling (mass becomes this value)")
    p.set_defaults(func=cmd_stationary)

    p = sub.add_parser("convert-units", help="dimensionless parameters from physical masses")
    p.add_argument("--mass", type=float, required=True, help="particle mass in grams")
    p.add_argument("--total-mass", type=float, help="total mass in grams")
    p.add_argument("--total-solar", type=float, help="total mass in solar masses")
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.set_defaults(func=cmd_convert_units)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail("configuration", str(exc))
    except RunFailure as exc:
        rec = exc.record()
        return _fail(rec.pop("error"), rec.pop("message"), code=3, **rec)
    except (ValueError, OSError) as exc:
        return _fail(type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
