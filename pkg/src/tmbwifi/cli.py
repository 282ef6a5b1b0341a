"""Command line interface.

Subcommands: eval, curve, fit, ingest, variance, mcs-table, predict,
registry-export. Output goes to stdout unless ``--out`` is given. Exit codes:
0 success, 1 domain or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys

from . import synthetic
from .errors import FitError, InsufficientDataError, UnknownLocationError
from .fitting import FitReport, fit_full
from .measurements import (
    LocationRegistry,
    aggregate_path_loss,
    read_capture,
    read_grid_map,
    read_registry,
    variance_report,
    write_capture,
    write_registry,
)
from .pathloss import DEFAULT_PARAMS, LinkGeometry, ModelId, evaluate, params_from_text, parse_kv_text
from .rate_model import PREDICTION_HEADER, McsDistributionTable, build_table, query_by_rssi

PARAM_FLAGS = {
    "l0": "l0_db",
    "gamma": "gamma",
    "k": "k_db_per_wall",
    "wbar": "wbar_walls_per_m",
    "fc": "fc_ghz",
    "n_itu": "n_itu",
    "lf": "lf_itu_db",
}


class CliError(Exception):
    """Domain/data failure reported with exit status 1."""


def _model(text):
    try:
        return ModelId.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _models(text):
    return [_model(t) for t in text.split(",") if t.strip()]


def _non_negative_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {v}")
    return v


def _add_param_flags(p):
    g = p.add_argument_group("model parameters")
    g.add_argument("--params", metavar="FILE", help="key=value parameter document")
    g.add_argument("--l0", type=float, help="path loss intercept L0 (dB)")
    g.add_argument("--gamma", type=float, help="attenuation factor")
    g.add_argument("--k", type=float, help="attenuation per wall (dB)")
    g.add_argument("--wbar", type=float, help="average walls per metre")
    g.add_argument("--fc", type=float, help="carrier frequency (GHz)")
    g.add_argument("--n-itu", dest="n_itu", type=float, help="ITU distance power loss coefficient")
    g.add_argument("--lf", type=float, help="ITU floor penetration loss (dB)")


def _add_geometry_flags(p):
    p.add_argument("--walls", type=_non_negative_int, default=0, help="traversed walls")
    p.add_argument("--floors", type=_non_negative_int, default=0, help="traversed floors")


def _params(args):
    base = DEFAULT_PARAMS
    if args.params:
        with open(args.params) as fh:
            text = fh.read()
        # a fit report is also a valid parameter file
        if "sample_count" in parse_kv_text(text):
            base = FitReport.from_text(text).params
        else:
            base = params_from_text(text)
    overrides = {field: getattr(args, flag) for flag, field in PARAM_FLAGS.items()}
    try:
        return base.with_overrides(**overrides)
    except ValueError as e:
        raise CliError(f"parameters: {e}") from None


def _geometry(args, d):
    try:
        return LinkGeometry(distance_m=d, walls=args.walls, floors=args.floors)
    except ValueError as e:
        raise CliError(f"--d: {e}") from None


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _read_records(paths):
    records, errors = [], []
    for path in paths:
        with open(path, newline="") as fh:
            try:
                summary = read_capture(fh)
            except ValueError as e:
                raise CliError(f"ingest: {path}: {e}") from None
        records.extend(summary.records)
        errors.extend((path, e) for e in summary.errors)
    return records, errors


def _report_rejects(errors):
    for path, e in errors:
        print(f"warning: {path}: row {e.row}: {e.field}: {e.message}", file=sys.stderr)


def _registry(path):
    if path is None:
        return LocationRegistry.reference()
    with open(path, newline="") as fh:
        return read_registry(fh)


# --- subcommands ----------------------------------------------------------


def cmd_eval(args):
    params = _params(args)
    geom = _geometry(args, args.d)
    pl = evaluate(args.model, geom, params)
    line = f"model={args.model.value} d={args.d:.3f} m PL={pl:.3f} dB"
    if args.ptx is not None:
        line += f" RSSI={args.ptx - pl:.3f} dBm"
    with _output(args.out) as out:
        print(line, file=out)


def _parse_range(parser, text):
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        parser.error(f"--d: expected MIN:MAX:STEP, got {text!r}")
    if not (0 < lo < hi) or not step > 0:
        parser.error(f"--d: need 0 < MIN < MAX and STEP > 0, got {text!r}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(n)]


def cmd_curve(args, parser):
    params = _params(args)
    models = args.models
    rows = []
    if args.registry:
        reg = _registry(args.registry)
        header = ["location_id", "d_m"] + [m.value for m in models]
        for loc, g in sorted(reg.items(), key=lambda kv: kv[1].distance_m):
            rows.append([loc, f"{g.distance_m:.3f}"] + [f"{evaluate(m, g, params):.3f}" for m in models])
    else:
        header = ["d_m"] + [m.value for m in models]
        for d in _parse_range(parser, args.d):
            g = _geometry(args, d)
            rows.append([f"{d:.3f}"] + [f"{evaluate(m, g, params):.3f}" for m in models])
    with _output(args.out) as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def cmd_fit(args):
    base = _params(args)
    records, errors = _read_records(args.captures)
    _report_rejects(errors)
    if not records:
        raise CliError("ingest: no valid records")
    try:
        registry = _registry(args.registry)
    except ValueError as e:
        raise CliError(f"registry: {e}") from None
    try:
        samples = aggregate_path_loss(records, registry, by_ptx=args.by_ptx)
    except UnknownLocationError as e:
        raise CliError(f"aggregate: {e}") from None
    try:
        report = fit_full(samples, base)
    except FitError as e:
        raise CliError(f"fit: {e}") from None
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_text())
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(report.trace_csv())
    print(report.summary())


def cmd_ingest(args):
    records, errors = _read_records(args.captures)
    _report_rejects(errors)
    rejected = len({(p, e.row) for p, e in errors})
    print(f"accepted={len(records)} rejected={rejected}", file=sys.stderr)
    with _output(args.out) as out:
        write_capture(records, out)
    if args.strict and rejected:
        raise CliError(f"ingest: {rejected} row(s) rejected")


def cmd_variance(args):
    records, errors = _read_records(args.captures)
    _report_rejects(errors)
    grid_map = None
    if args.grid_map:
        with open(args.grid_map, newline="") as fh:
            grid_map = read_grid_map(fh)
    try:
        report = variance_report(records, grid_map=grid_map, reference_channel=args.reference_channel)
    except InsufficientDataError as e:
        raise CliError(f"variance: {e}") from None
    with _output(args.out) as out:
        report.to_csv(out)
    for kind, loc, ch, v in report.exceeding(args.threshold):
        where = loc if ch is None else f"{loc} channel {ch}"
        print(f"warning: {kind} at {where} = {v:.3f} dB exceeds {args.threshold:.3f} dB", file=sys.stderr)


def _load_table(args):
    if getattr(args, "table", None):
        with open(args.table, newline="") as fh:
            return McsDistributionTable.from_csv(fh)
    if getattr(args, "captures", None):
        records, errors = _read_records(args.captures)
        _report_rejects(errors)
        table = build_table(records)
        if table.out_of_range or table.excluded:
            print(
                f"note: {table.out_of_range} record(s) outside the RSSI range, "
                f"{table.excluded} invalid MCS/BW record(s) skipped",
                file=sys.stderr,
            )
        return table
    return synthetic.reference_table()


def cmd_mcs_table(args):
    table = _load_table(args)
    with _output(args.out) as out:
        table.to_csv(out)


def cmd_predict(args):
    table = _load_table(args)
    if args.rssi is not None:
        rssi = args.rssi
    else:
        params = _params(args)
        rssi = args.ptx - evaluate(args.model, _geometry(args, args.d), params)
    pred = query_by_rssi(table, rssi, args.bw, args.ptx, args.guard)
    with _output(args.out) as out:
        if args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(PREDICTION_HEADER)
            w.writerow(pred.csv_row())
            if args.full:
                w.writerow([])
                w.writerow(["mcs", "nss", "probability"])
                for e in pred.distribution:
                    w.writerow([e.mcs, e.nss, repr(e.probability)])
        else:
            print(pred.summary(full=args.full), file=out)


def cmd_registry_export(args):
    with _output(args.out) as out:
        write_registry(LocationRegistry.reference(), out)


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tmbwifi", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("eval", help="path loss (and RSSI) at one distance")
    p.add_argument("--model", type=_model, default=ModelId.TMB)
    p.add_argument("--d", type=float, required=True, help="AP-STA distance (m)")
    p.add_argument("--ptx", type=float, help="transmit power (dBm); also prints RSSI")
    _add_geometry_flags(p)
    _add_param_flags(p)
    p.add_argument("--out")

    p = sub.add_parser("curve", help="CSV of path loss against distance")
    p.add_argument("--models", type=_models, default=list(ModelId), help="comma separated model names")
    p.add_argument("--d", default="1:25:1", help="MIN:MAX:STEP in metres, inclusive")
    p.add_argument("--registry", help="evaluate at the locations of this registry CSV instead")
    _add_geometry_flags(p)
    _add_param_flags(p)
    p.add_argument("--out")

    p = sub.add_parser("fit", help="fit L0, gamma, k, Wbar from captures")
    p.add_argument("--captures", nargs="+", required=True)
    p.add_argument("--registry", help="registry CSV (default: the embedded 21 locations)")
    p.add_argument("--by-ptx", action="store_true", help="one sample per location and PTX")
    p.add_argument("--trace", help="write the k search trace CSV here")
    _add_param_flags(p)
    p.add_argument("--out", help="write the fit report document here")

    p = sub.add_parser("ingest", help="validate captures and write canonical CSV")
    p.add_argument("--captures", nargs="+", required=True)
    p.add_argument("--strict", action="store_true", help="exit 1 if any row is rejected")
    p.add_argument("--out")

    p = sub.add_parser("variance", help="time / grid / channel variance statistics")
    p.add_argument("--captures", nargs="+", required=True)
    p.add_argument("--grid-map", help="CSV location_id,center_id")
    p.add_argument("--reference-channel", type=int)
    p.add_argument("--threshold", type=float, default=5.0, help="flag statistics above this (dB)")
    p.add_argument("--out")

    p = sub.add_parser("mcs-table", help="build the MCS distribution table")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--captures", nargs="+")
    src.add_argument("--reference", action="store_true", help="the embedded reference table (default)")
    p.add_argument("--out")

    p = sub.add_parser("predict", help="MCS / NSS distribution at a distance or RSSI")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--table", help="MCS table CSV (default: embedded reference table)")
    src.add_argument("--captures", nargs="+")
    at = p.add_mutually_exclusive_group(required=True)
    at.add_argument("--d", type=float, help="AP-STA distance (m)")
    at.add_argument("--rssi", type=float, help="RSSI (dBm)")
    p.add_argument("--model", type=_model, default=ModelId.TMB)
    p.add_argument("--bw", type=int, required=True, choices=(20, 40, 80))
    p.add_argument("--ptx", type=float, required=True)
    p.add_argument("--guard", choices=("long", "short"), default="long")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--full", action="store_true", help="include the full distribution")
    _add_geometry_flags(p)
    _add_param_flags(p)
    p.add_argument("--out")

    p = sub.add_parser("registry-export", help="write the embedded location registry CSV")
    p.add_argument("--out")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "eval": cmd_eval,
        "curve": lambda a: cmd_curve(a, parser),
        "fit": cmd_fit,
        "ingest": cmd_ingest,
        "variance": cmd_variance,
        "mcs-table": cmd_mcs_table,
        "predict": cmd_predict,
        "registry-export": cmd_registry_export,
    }
    try:
        handlers[args.command](args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValueError, LookupError, OSError) as e:
        print(f"error: {args.command}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
