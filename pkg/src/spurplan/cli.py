"""Command-line front end.

Exit codes: 0 success, 1 domain errors (no spur-free region, plan
violation, no matching coefficients), 2 usage errors.  Output for identical
inputs is byte-identical: stable ordering, frequencies printed with three
decimals in MHz and dB values with two.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .cascade import (
    cascade,
    cascade_report,
    dynamic_range,
    format_cascade_text,
    mds,
    narrowest_bandwidth_hz,
    retune_vga,
    SensitivityInputs,
)
from .core import (
    ChainError,
    FrequencyBand,
    Injection,
    PlanConfig,
    SpurTableError,
    format_mhz,
    parse_chain,
    parse_frequency,
    parse_spur_table,
)
from .filtersynth import (
    chebyshev_prototype,
    lc_bandpass,
    sample_response,
    synthesis_report,
)
from .planner import (
    PlanError,
    StageChoice,
    find_spur_free_regions,
    make_frequency_plan,
    plan_to_dict,
    regions_to_dict,
    sweep_oracle,
)
from .scan import build_chart, chart_to_dict, identify_coefficients
from .svg import SvgStyle, render_svg

logger = logging.getLogger(__name__)

TABLE_DIR_ENV = "SPURPLAN_TABLE_DIR"


class UsageError(Exception):
    pass


def _freq_arg(text: str) -> float:
    try:
        value = parse_frequency(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if value <= 0:
        raise argparse.ArgumentTypeError("frequency must be > 0")
    return value


def _band_arg(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected LOW:HIGH")
    return _freq_arg(lo), _freq_arg(hi)


def _point_arg(text: str) -> tuple[float, float]:
    fin, sep, fout = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected F_IN:F_OUT")
    try:
        return parse_frequency(fin), parse_frequency(fout)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_table(path: str):
    candidate = Path(path)
    if not candidate.exists():
        table_dir = os.environ.get(TABLE_DIR_ENV)
        if table_dir:
            for alt in (Path(table_dir) / path, Path(table_dir) / f"{path}.spur"):
                if alt.exists():
                    candidate = alt
                    break
    if not candidate.exists():
        raise UsageError(f"spur table {path!r} not found")
    try:
        return parse_spur_table(candidate.read_text())
    except SpurTableError as exc:
        raise UsageError(f"{candidate}: {exc}") from None


def _emit(doc: str) -> None:
    sys.stdout.write(doc)
    if not doc.endswith("\n"):
        sys.stdout.write("\n")


def _json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------

def cmd_regions(args: argparse.Namespace) -> int:
    table = _load_table(args.table)
    config = PlanConfig(
        table=table,
        rf_center_hz=args.rf_center,
        rf_bw_hz=args.rf_bw,
        if_bw_hz=args.if_bw,
        injection=Injection(args.injection),
        spur_floor_db=args.floor,
        max_order=args.max_order or max(table.max_rf_order, table.max_lo_order),
        include_sum_products=args.sums,
    )
    search = FrequencyBand(*args.search) if args.search else None
    if args.oracle_step:
        regions = sweep_oracle(config, search, step_hz=args.oracle_step)
    else:
        regions = find_spur_free_regions(config, search)

    if args.format == "json":
        _emit(_json(regions_to_dict(regions)))
    else:
        lines = []
        for i, region in enumerate(regions, start=1):
            band = region.if_center_band
            binding = " ".join(f"({m},{n},{s.value})" for m, n, s in region.binding_products)
            lines.append(f"region {i}: {format_mhz(band.low_hz)} .. "
                         f"{format_mhz(band.high_hz)} MHz"
                         + (f"  binding: {binding}" if binding else ""))
        if not lines:
            lines.append("no spur-free region in the search band")
        _emit("\n".join(lines))

    if args.plot:
        from .plots import save_regions_figure
        from .planner import resolve_search_band
        effective = resolve_search_band(config, search)
        save_regions_figure(regions, effective.low_hz, effective.high_hz, args.plot)
    return 0 if regions else 1


# ---------------------------------------------------------------------------
# chart
# ---------------------------------------------------------------------------

def cmd_chart(args: argparse.Namespace) -> int:
    table = _load_table(args.table)
    rf_range = FrequencyBand(*args.rf)
    config = PlanConfig(
        table=table,
        rf_center_hz=rf_range.center_hz,
        rf_bw_hz=rf_range.width_hz,
        if_bw_hz=1.0,
        max_order=args.max_order or max(table.max_rf_order, table.max_lo_order),
        include_sum_products=args.sums,
    )
    chart = build_chart(table, args.lo, rf_range, config,
                        normalized=args.normalized,
                        include_non_impact=args.all_classes)
    if args.format == "svg":
        _emit(render_svg(chart, SvgStyle(if_band=args.if_band,
                                         title=table.mixer_id)))
    else:
        _emit(_json(chart_to_dict(chart)))
    if args.plot:
        from .plots import save_chart_figure
        save_chart_figure(chart, args.plot, if_band=args.if_band)
    return 0


# ---------------------------------------------------------------------------
# identify
# ---------------------------------------------------------------------------

def cmd_identify(args: argparse.Namespace) -> int:
    if len(args.point) != 2:
        raise UsageError("exactly two --point F_IN:F_OUT pairs are required")
    candidates = identify_coefficients(args.point, args.lo, args.max_order,
                                       tol_hz=args.tolerance)
    if args.format == "json":
        _emit(_json({"candidates": [
            {"m": m, "n": n, "sign": s.value} for m, n, s in candidates]}))
    else:
        if not candidates:
            _emit("no product of order <= %d fits both points" % args.max_order)
        else:
            _emit("\n".join(f"(m={m}, n={n}, {s.value})" for m, n, s in candidates))
    return 0 if candidates else 1


# ---------------------------------------------------------------------------
# cascade
# ---------------------------------------------------------------------------

def cmd_cascade(args: argparse.Namespace) -> int:
    path = Path(args.chain)
    if not path.exists():
        raise UsageError(f"chain file {args.chain!r} not found")
    try:
        stages = parse_chain(path.read_text())
    except ChainError as exc:
        raise UsageError(str(exc)) from None

    if args.gain_target is not None:
        try:
            stages, result = retune_vga(stages, args.gain_target)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    else:
        result = cascade(stages)

    bw = args.bw if args.bw else narrowest_bandwidth_hz(stages)
    mds_dbm = mds(SensitivityInputs(nf_db=result.nf_db, bandwidth_hz=bw,
                                    snr_min_db=args.snr_min))
    dr = None
    if result.op1db_dbm is not None:
        dr = dynamic_range(result.op1db_dbm, result.gain_db, mds_dbm)

    if args.format == "json":
        report = cascade_report(result, mds_dbm, dr)
        report["Bandwidth_Hz"] = bw
        _emit(_json(report))
    else:
        _emit(format_cascade_text(result, mds_dbm, dr))
    if args.plot:
        from .plots import save_cascade_figure
        save_cascade_figure(result, args.plot)
    return 0


# ---------------------------------------------------------------------------
# plan
# ---------------------------------------------------------------------------

def _load_plan_file(path: Path) -> list[StageChoice]:
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise UsageError(f"{path}: invalid YAML: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("stages"), list):
        raise UsageError(f"{path}: plan file must contain a 'stages' list")
    choices = []
    for i, raw in enumerate(data["stages"]):
        if not isinstance(raw, dict):
            raise UsageError(f"{path}: stage {i} must be a mapping")
        try:
            table_path = Path(raw["table"])
            if not table_path.is_absolute():
                table_path = path.parent / table_path
            table = parse_spur_table(table_path.read_text())
            config = PlanConfig(
                table=table,
                rf_center_hz=parse_frequency(raw["rf_center"]),
                rf_bw_hz=parse_frequency(raw["rf_bw"]),
                if_bw_hz=parse_frequency(raw["if_bw"]),
                injection=Injection(raw.get("injection", "high")),
                spur_floor_db=float(raw.get("floor_db", 70.0)),
                max_order=int(raw.get("max_order",
                                      max(table.max_rf_order, table.max_lo_order))),
                include_sum_products=bool(raw.get("sums", True)),
            )
            choices.append(StageChoice(config=config,
                                       if_center_hz=parse_frequency(raw["if_center"])))
        except KeyError as exc:
            raise UsageError(f"{path}: stage {i} missing field {exc}") from None
        except (SpurTableError, OSError, ValueError) as exc:
            raise UsageError(f"{path}: stage {i}: {exc}") from None
    return choices


def cmd_plan(args: argparse.Namespace) -> int:
    choices = _load_plan_file(Path(args.plan))
    try:
        plan = make_frequency_plan(choices)
    except PlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        _emit(_json(plan_to_dict(plan)))
    else:
        lines = []
        for i, stage in enumerate(plan.stages, start=1):
            lines.append(
                f"stage {i}: rf {format_mhz(stage.rf_band.low_hz)} .. "
                f"{format_mhz(stage.rf_band.high_hz)} MHz, "
                f"lo {format_mhz(stage.lo_hz)} MHz ({stage.injection.value} side), "
                f"if {format_mhz(stage.if_band.low_hz)} .. "
                f"{format_mhz(stage.if_band.high_hz)} MHz")
            for spur in stage.permitted:
                lines.append(
                    f"  permitted ({spur.m},{spur.n},{spur.sign.value}): "
                    f"{spur.suppression_db:.2f} dB down, "
                    f"margin {spur.margin_db:.2f} dB [{spur.spur_class.value}]")
        _emit("\n".join(lines))
    return 0


# ---------------------------------------------------------------------------
# filter
# ---------------------------------------------------------------------------

def cmd_filter(args: argparse.Namespace) -> int:
    proto = chebyshev_prototype(args.order, args.ripple)
    if args.format == "csv":
        span = args.span or (args.f0 - 3 * args.bw, args.f0 + 3 * args.bw)
        freqs = np.linspace(span[0], span[1], args.points)
        s21 = sample_response(args.order, args.ripple, args.f0, args.bw, freqs)
        rows = ["f_hz,s21_db"]
        rows += [f"{f:.3f},{v:.6f}" for f, v in zip(freqs, s21)]
        _emit("\n".join(rows))
    else:
        _emit(_json(synthesis_report(proto, args.f0, args.bw, args.z0,
                                     snapped_series=args.snap)))
    if args.plot:
        from .plots import save_response_figure
        span = args.span or (args.f0 - 3 * args.bw, args.f0 + 3 * args.bw)
        freqs = np.linspace(span[0], span[1], args.points)
        s21 = sample_response(args.order, args.ripple, args.f0, args.bw, freqs)
        save_response_figure(freqs, s21, args.plot, args.f0, args.bw)
    return 0


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------

def cmd_serve(args: argparse.Namespace) -> int:
    from .serve import serve_forever
    table_dir = args.tables or os.environ.get(TABLE_DIR_ENV) or "tables"
    logging.basicConfig(level=logging.INFO)
    serve_forever(args.host, args.port, table_dir, args.frontend)
    return 0


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spurplan",
        description="Spur-table driven frequency planning and RF chain budgets.")
    parser.add_argument("--version", action="version", version=f"spurplan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("regions", help="find spur-free IF-center regions")
    p.add_argument("--table", required=True, help="spur-table file (or name in $%s)" % TABLE_DIR_ENV)
    p.add_argument("--rf-center", type=_freq_arg, required=True)
    p.add_argument("--rf-bw", type=_freq_arg, required=True)
    p.add_argument("--if-bw", type=_freq_arg, required=True)
    p.add_argument("--floor", type=float, default=70.0, help="spur floor in dB (default 70)")
    p.add_argument("--injection", choices=["high", "low"], default="high")
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--sums", action=argparse.BooleanOptionalAction, default=True,
                   help="include m*f+n*lo sum products (default on)")
    p.add_argument("--search", type=_band_arg, default=None, metavar="LOW:HIGH")
    p.add_argument("--oracle-step", type=_freq_arg, default=None, metavar="STEP",
                   help="use the brute-force sweep oracle at this step instead "
                        "of the analytic search")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--plot", default=None, metavar="FILE.png")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("chart", help="build a spur chart")
    p.add_argument("--table", required=True)
    p.add_argument("--lo", type=_freq_arg, required=True)
    p.add_argument("--rf", type=_band_arg, required=True, metavar="LOW:HIGH")
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--sums", action=argparse.BooleanOptionalAction, default=False,
                   help="include sum products (default off for charts)")
    p.add_argument("--normalized", action="store_true",
                   help="divide both axes by the LO frequency")
    p.add_argument("--all-classes", action="store_true",
                   help="keep NonImpact lines")
    p.add_argument("--if-band", type=_band_arg, default=None, metavar="LOW:HIGH",
                   help="overlay the chosen IF band rectangle")
    p.add_argument("--format", choices=["json", "svg"], default="json")
    p.add_argument("--plot", default=None, metavar="FILE.png")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("identify", help="back-solve (m, n, sign) from two points")
    p.add_argument("--lo", type=_freq_arg, required=True)
    p.add_argument("--point", type=_point_arg, action="append", required=True,
                   metavar="F_IN:F_OUT")
    p.add_argument("--max-order", type=int, default=10)
    p.add_argument("--tolerance", type=float, default=1.0, help="match tolerance in Hz")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("cascade", help="cascade a chain file")
    p.add_argument("--chain", required=True)
    p.add_argument("--bw", type=_freq_arg, default=None,
                   help="sensitivity bandwidth (default: narrowest stage band)")
    p.add_argument("--snr-min", type=float, default=0.0)
    p.add_argument("--gain-target", type=float, default=None,
                   help="retune the VGA so the chain hits this total gain")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--plot", default=None, metavar="FILE.png")
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("plan", help="validate and emit a multi-stage frequency plan")
    p.add_argument("--plan", required=True, help="plan file (YAML)")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("filter", help="synthesize a Chebyshev bandpass filter")
    p.add_argument("--f0", type=_freq_arg, required=True)
    p.add_argument("--bw", type=_freq_arg, required=True)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--ripple", type=float, default=0.5)
    p.add_argument("--z0", type=float, default=50.0)
    p.add_argument("--snap", choices=["E12", "E24", "E96"], default=None,
                   help="also emit the LC ladder snapped to this series")
    p.add_argument("--span", type=_band_arg, default=None, metavar="LOW:HIGH",
                   help="response sampling span (default f0 +- 3 bw)")
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--plot", default=None, metavar="FILE.png")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("serve", help="serve the JSON API and explorer UI")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8780)
    p.add_argument("--tables", default=None,
                   help="spur-table directory (default $%s or ./tables)" % TABLE_DIR_ENV)
    p.add_argument("--frontend", default=None, help="explorer static bundle directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (SpurTableError, ChainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1


if __name__ == "__main__":
    sys.exit(main())
