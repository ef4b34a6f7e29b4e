"""Command-line front end.

Exit codes: 0 success, 2 usage or configuration error, 3 runtime validity
failure (packet escaped the analysis window, no oscillation found).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

from . import resonance as res
from .analysis import NoDominantComponent, Series, dominant_frequency, linear_fit
from .config import ConfigError, RunConfig, load_config
from .dirac import ContainmentError, ObservableRecord, PacketSpec, TimeSeries, run
from .time_operator import clock_report

EXIT_USAGE = 2
EXIT_RUNTIME = 3

SERIES_HEADER = ObservableRecord.columns()

# tolerances reported by `clock`
CLOCK_TOLERANCES = {
    "slope_x": 1e-3,
    "slope_T": 1e-2,
    "ratio_x_over_T": 1e-2,
    "velocity_product": 2e-2,
    "phase_rate": 5e-3,
}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"usage: {message}", EXIT_USAGE)


def _fmt(value, precision: int) -> str:
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return f"{value:.{precision}g}"


def _csv(header: list[str], rows, precision: int) -> str:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v, precision) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _round9(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.9g}")
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(v) for v in obj]
    return obj


def _json(obj) -> str:
    return json.dumps(_round9(obj), indent=2) + "\n"


def _emit(text: str, output: str | None, stream=None) -> None:
    if output:
        with open(output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        (stream or sys.stdout).write(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


# -- channeling arithmetic ---------------------------------------------------


def cmd_resonance(args) -> int:
    try:
        setups = [res.ChannelingSetup(args.d, args.mc2, n) for n in args.n]
        preds = [res.predict(s) for s in setups]
        emass = None
        if args.observed is not None:
            emass = res.effective_mass(args.observed, res.ChannelingSetup(args.d, args.mc2, args.observed_n))
    except ValueError as exc:
        raise CliError(str(exc))

    cols = ["n", "beta_ph_res", "pc_res", "delta_T", "delta_phi"]
    rows = [[p.n, p.beta_ph_res, p.pc_res, p.delta_T_npi, p.delta_phi] for p in preds]
    if args.format == "json":
        doc = {
            "d_fm": args.d,
            "mc2_mev": args.mc2,
            "resonances": [dict(zip(cols, r)) for r in rows],
        }
        if emass is not None:
            doc["effective_mass"] = {
                "pc_observed": args.observed,
                "n": args.observed_n,
                "ratio_sq": emass.ratio_sq,
                "ratio": emass.ratio,
                "m_eff_mc2": emass.m_eff_mc2,
            }
        text = _json(doc)
    else:
        text = _csv(cols, rows, args.precision)
        if emass is not None:
            text += "\n" + _csv(
                ["pc_observed", "n", "ratio_sq", "ratio", "m_eff_mc2"],
                [[args.observed, args.observed_n, emass.ratio_sq, emass.ratio, emass.m_eff_mc2]],
                args.precision,
            )
    _emit(text, args.output)
    return 0


def cmd_scan(args) -> int:
    try:
        rows = res.mismatch_scan(args.lo, args.hi, args.steps, args.d, args.mc2)
    except ValueError as exc:
        raise CliError(str(exc))
    cols = ["pc", "delta_phi", "mismatch"]
    if args.format == "json":
        text = _json({"rows": [dict(zip(cols, r)) for r in rows]})
    else:
        text = _csv(cols, rows, args.precision)
    _emit(text, args.output)
    return 0


# -- simulation --------------------------------------------------------------


def _load(path) -> RunConfig:
    try:
        return load_config(path)
    except ConfigError as exc:
        raise CliError(f"config: {exc}")


def _simulate(cfg: RunConfig) -> TimeSeries:
    try:
        return run(cfg.lattice, cfg.packet, cfg.algebra, cfg.t_final, cfg.n_records, cfg.tau0_value)
    except ContainmentError as exc:
        raise CliError(str(exc), EXIT_RUNTIME)


def _series_text(series: TimeSeries, fmt: str, precision: int) -> str:
    rows = [r.values() for r in series]
    if fmt == "json":
        return _json({"records": [dict(zip(SERIES_HEADER, r)) for r in rows]})
    return _csv(SERIES_HEADER, rows, precision)


def _summary(cfg: RunConfig, series: TimeSeries, frequency: bool) -> dict:
    t = series.t
    summary = {
        "records": len(series),
        "x_slope": linear_fit(t, series.column("x_mean"))[0],
        "T_slope": linear_fit(t, series.column("T_mean"))[0],
        "phase_rate": linear_fit(t, series.column("phase_central"))[0],
        "containment_warnings": series.n_warnings,
        "phase_aliased": series.phase_aliased,
    }
    if frequency:
        try:
            est = dominant_frequency(Series(t, series.column("x_mean")))
        except NoDominantComponent as exc:
            raise CliError(str(exc), EXIT_RUNTIME)
        expected = 2.0 * math.hypot(cfg.packet.k0, cfg.mc2)
        summary.update(
            zitter_omega=est.omega,
            zitter_amplitude=est.amplitude,
            zitter_omega_expected=expected,
            zitter_rel_err=abs(est.omega - expected) / expected,
        )
    return summary


def _write_series_and_summary(cfg: RunConfig, args, frequency: bool) -> int:
    precision = args.precision if args.precision is not None else cfg.precision
    series = _simulate(cfg)
    summary = _summary(cfg, series, frequency)
    target = args.output or cfg.csv
    _emit(_series_text(series, args.format, precision), target)
    # summary goes to stdout unless stdout already carries the series
    _emit(_json(summary), None, sys.stdout if target else sys.stderr)
    return 0


def cmd_evolve(args) -> int:
    cfg = _load(args.config)
    return _write_series_and_summary(cfg, args, args.frequency or cfg.frequency)


ZITTER_PRESET = RunConfig(
    N=2048,
    L=409.6,
    packet=PacketSpec(k0=0.0, sigma_x=10.0, content="mixed"),
    t_final=40.0,
    n_records=512,
)


def cmd_zitter(args) -> int:
    cfg = _load(args.config) if args.config else ZITTER_PRESET
    packet = cfg.packet
    if packet.content != "mixed":
        packet = replace(packet, content="mixed", w_plus=1.0, w_minus=1.0)
    if args.k0 is not None:
        packet = replace(packet, k0=args.k0)
    try:
        cfg = replace(cfg, packet=packet).validate()
    except ConfigError as exc:
        raise CliError(f"config: {exc}")
    return _write_series_and_summary(cfg, args, True)


def cmd_clock(args) -> int:
    cfg = _load(args.config)
    if cfg.packet.content != "positive":
        raise CliError("clock analysis requires positive-energy packet")
    series = _simulate(cfg)
    try:
        report = clock_report(series, cfg.packet.k0, cfg.algebra)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_RUNTIME)

    expected = {
        "slope_x": report.v_gp_expected,
        "slope_T": report.beta2_expected,
        "ratio_x_over_T": report.v_ph_expected,
        "velocity_product": 1.0,
        "phase_rate": -report.clock_rate_expected,
    }
    doc = report.as_dict()
    checks = {}
    for name, tol in CLOCK_TOLERANCES.items():
        value, target = doc[name], expected[name]
        if value is None or target is None or target == 0:
            checks[name] = {"value": value, "expected": target, "tolerance": tol, "pass": None}
            continue
        rel = abs(value - target) / abs(target)
        checks[name] = {"value": value, "expected": target, "rel_err": rel, "tolerance": tol, "pass": rel <= tol}
    doc["checks"] = checks
    doc["k0"] = cfg.packet.k0
    doc["mc2"] = cfg.mc2
    _emit(_json(doc), args.output)
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", help="write the main result to this path instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--precision", type=int, default=None, help="significant digits in CSV output")

    parser = _Parser(prog="dbclock", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def channeling(p):
        p.add_argument("--d", type=float, default=3.84e5, help="interatomic spacing [fm]")
        p.add_argument("--mc2", type=float, default=0.511, help="rest energy [MeV]")
        p.add_argument("--n", type=_int_list, default=[1, 2], help="harmonics, e.g. 1,2")
        p.add_argument("--observed-n", type=int, default=2, help="harmonic the observation is matched to")

    p = sub.add_parser("resonance", parents=[common], help="resonance momenta per harmonic")
    channeling(p)
    p.add_argument("--observed", type=float, help="observed resonance momentum [MeV/c]")
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("effective-mass", parents=[common], help="resonance table plus effective mass")
    channeling(p)
    p.add_argument("--observed", type=float, required=True)
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("scan", parents=[common], help="phase mismatch over a momentum grid")
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--d", type=float, default=3.84e5)
    p.add_argument("--mc2", type=float, default=0.511)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("evolve", parents=[common], help="simulate a packet from a config file")
    p.add_argument("config")
    p.add_argument("--frequency", action="store_true", help="add the dominant x_mean frequency to the summary")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("zitter", parents=[common], help="mixed-energy packet and its Zitterbewegung frequency")
    p.add_argument("config", nargs="?")
    p.add_argument("--k0", type=float)
    p.set_defaults(func=cmd_zitter)

    p = sub.add_parser("clock", parents=[common], help="time-operator and clock-rate report")
    p.add_argument("config")
    p.set_defaults(func=cmd_clock)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.format is None:
            args.format = "json" if args.command == "clock" else "csv"
        if args.command in ("resonance", "effective-mass", "scan") and args.precision is None:
            args.precision = 12
        if args.precision is not None and not 1 <= args.precision <= 17:
            raise CliError("usage: --precision must be within 1..17")
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
