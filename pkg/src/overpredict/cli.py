"""Command-line entry point: ``overpredict <subcommand> ...``.

Exit codes: 0 success, 1 usage or I/O problems, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import energy as en
from .analytics import table1_bound
from .envelope import Scheme, Side, envelope
from .errors import OverpredictError, SolverError
from .pipeline import (
    PipelineConfig,
    dump_json,
    ingest_csv,
    load_devices,
    run_pipeline,
    sweep,
    write_signal_csv,
    write_sweep_csv,
)
from .signal import SmoothSignalSpec, generate_smooth, smooth_coeffs

log = logging.getLogger("overpredict")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

DEFAULT_ENERGY_SIGNAL = SmoothSignalSpec(C=1.0, r=3.0, Kmax=64, seed=0)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_json(args.config) if args.config else PipelineConfig()
    return cfg.replace(grid_size=getattr(args, "grid_size", None))


def _emit(obj, out):
    if out:
        dump_json(obj, out)
    else:
        json.dump(obj, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


def _schemes(text):
    try:
        return [Scheme(s.strip()) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def cmd_envelope(args) -> int:
    cfg = _config(args)
    ts = ingest_csv(args.input, smoothing_harmonics=cfg.smoothing_harmonics, n_samples=cfg.n_samples)
    res = envelope(ts, args.L, args.scheme, args.side, cfg.grid_size, cfg.delta_margin,
                   cfg.verification_factor)
    out = res.to_dict()
    out["input"] = str(args.input)
    out["signal_scale"] = ts.scale
    out["signal_ramp"] = ts.ramp
    _emit(out, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _config(args)
    devices = load_devices(args.inputs, cfg)
    res = run_pipeline(devices, args.L, args.scheme, cfg.grid_size, args.side,
                       cfg.delta_margin, cfg.verification_factor)
    out = res.to_dict()
    out["scheme"] = Scheme(args.scheme).value
    _emit(out, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args)
    lo = args.Lmin if args.Lmin is not None else cfg.L_range[0]
    hi = args.Lmax if args.Lmax is not None else cfg.L_range[1]
    if hi < lo:
        raise _UsageError("--Lmax must be >= --Lmin")
    schemes = _schemes(args.schemes) if args.schemes else [Scheme(s) for s in cfg.schemes]
    devices = load_devices(args.inputs, cfg)
    records = sweep(devices, range(lo, hi + 1), schemes, cfg.grid_size, args.side,
                    cfg.delta_margin, cfg.verification_factor)
    out = Path(args.out)
    write_sweep_csv(records, out)
    bounds = out.with_name(out.stem + "_bounds.csv")
    with open(bounds, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["L", "r", "sa2_optimal", "sa2_naive", "sainf_optimal", "sainf_naive"])
        for L in range(max(lo, 1), hi + 1):
            w.writerow([L, repr(args.r)] + [
                repr(table1_bound(q, args.r, L, side))
                for q in ("2", "inf") for side in ("optimal", "naive")
            ])
    return EXIT_OK


def cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i in range(args.count):
        spec = SmoothSignalSpec(args.C, args.r, args.Kmax, args.seed + i)
        name = f"signal_{i:03d}.csv"
        write_signal_csv(generate_smooth(spec, args.n_samples), out / name)
        fc = smooth_coeffs(spec)
        entries.append({"file": name, "seed": spec.seed, "a0": fc.a0})
    manifest = {
        "C": args.C,
        "r": args.r,
        "Kmax": args.Kmax,
        "count": args.count,
        "seed": args.seed,
        "n_samples": args.n_samples,
        "signals": entries,
    }
    dump_json(manifest, out / "manifest.json")
    return EXIT_OK


def cmd_energy(args) -> int:
    model = en.preset(args.link, args.bits)
    if args.input:
        cfg = _config(args)
        ts = ingest_csv(args.input, smoothing_harmonics=cfg.smoothing_harmonics,
                        n_samples=cfg.n_samples)
    else:
        ts = generate_smooth(DEFAULT_ENERGY_SIGNAL)
    res = envelope(ts, args.L, args.scheme)
    report = en.energy_report(model, args.L, res.flops)
    out = report.to_dict()
    out.update(L=args.L, link=args.link, bits=args.bits, scheme=Scheme(args.scheme).value,
               eb=model.eb, flops_per_joule=model.flops_per_joule)
    _emit(out, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="overpredict", description="Over-predictive envelope analytics.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, grid=True):
        sp.add_argument("--config", help="JSON config overriding defaults")
        if grid:
            sp.add_argument("--grid-size", type=int, dest="grid_size")

    scheme_names = [s.value for s in Scheme]
    side_names = [s.value for s in Side]

    sp = sub.add_parser("envelope", help="envelope of one CSV signal")
    sp.add_argument("--input", required=True)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--scheme", choices=scheme_names, default="l1")
    sp.add_argument("--side", choices=side_names, default="upper")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_envelope)

    sp = sub.add_parser("simulate", help="device -> cloud run over a CSV directory")
    sp.add_argument("--inputs", required=True)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--scheme", choices=scheme_names, default="l1")
    sp.add_argument("--side", choices=side_names, default="upper")
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="error vs bandwidth table")
    sp.add_argument("--inputs", required=True)
    sp.add_argument("--Lmin", type=int)
    sp.add_argument("--Lmax", type=int)
    sp.add_argument("--schemes", help="comma-separated, e.g. l1,l2,linf,naive")
    sp.add_argument("--side", choices=side_names, default="upper")
    sp.add_argument("--r", type=float, default=3.0, help="decay exponent for the bound overlay")
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("generate", help="write synthetic smooth signals")
    sp.add_argument("--C", type=float, default=1.0)
    sp.add_argument("--r", type=float, default=3.0)
    sp.add_argument("--Kmax", type=int, default=64)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n-samples", type=int, default=4096, dest="n_samples")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("energy", help="communication and computation energy")
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--link", choices=sorted(en.PRESETS), default="ethernet")
    sp.add_argument("--bits", type=int, default=32)
    sp.add_argument("--scheme", choices=scheme_names, default="l1")
    sp.add_argument("--input", help="CSV signal whose envelope is costed")
    sp.add_argument("--out")
    common(sp, grid=False)
    sp.set_defaults(func=cmd_energy)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"overpredict: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"overpredict: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, OverpredictError, ValueError, json.JSONDecodeError) as exc:
        print(f"overpredict: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
