"""Command-line entry point: ``mcimbias <subcommand> [options]``.

Exit codes: 0 success, 1 usage or I/O error, 2 invalid parameter
combination, 3 degenerate estimate or mechanism.
"""

from __future__ import annotations

import argparse
import re
import sys
from contextlib import contextmanager

from . import __version__
from .analytic import (
    Mechanism,
    bias_percent,
    mar_condition_holds,
    mar_stratum_rr_limit,
)
from .errors import DegenerateEstimate, DegenerateMechanism, InvalidCombination, RiskOutOfRange
from .estimators import crude_rr_complete, mcim_rr, pooled_complete_rr, stratum_rr
from .montecarlo import (
    PRNG_NAME,
    SimConfig,
    asymptotic_mcim_bias,
    expected_tables,
    replicate_bias,
    write_replicates_csv,
)
from .params import ParameterPoint, derive_conditionals, parse_number
from .sweep import (
    DEFAULT_QUANTILE,
    DEFAULT_THRESHOLD_MODE,
    default_grid,
    enumerate_valid,
    parse_grid,
    render_summary,
    summarize,
    write_records_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_DEGENERATE = 0, 1, 2, 3

_MECH_LINE = re.compile(r"^f_obs\s+y\s*=\s*([01])\s+e\s*=\s*([01])\s*=\s*(\S+)$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _number(text: str) -> float:
    try:
        return parse_number(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or p/q fraction: {text!r}")


def parse_mechanism(text: str) -> Mechanism:
    """Parse four ``f_obs y=<0|1> e=<0|1> = <prob>`` lines."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _MECH_LINE.match(line)
        if not m:
            raise ValueError(f"line {lineno}: expected 'f_obs y=<0|1> e=<0|1> = <prob>', got {raw!r}")
        key = (int(m.group(1)), int(m.group(2)))
        if key in entries:
            raise ValueError(f"line {lineno}: duplicate entry for y={key[0]} e={key[1]}")
        entries[key] = parse_number(m.group(3))
    return Mechanism.from_mapping(entries)


def _read_text(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}")
    with fh:
        yield fh


def _point(args, p_miss: float | None = None) -> ParameterPoint:
    try:
        return ParameterPoint(
            p_e=args.pe,
            p_c=args.pc,
            p_miss=args.pmiss if p_miss is None else p_miss,
            rr_c=args.rrc,
            rr_ec=args.rrec,
        )
    except ValueError as exc:
        raise UsageError(str(exc))


def _load_mechanism(spec: str, p_miss: float | None) -> Mechanism:
    if spec == "mcar":
        if p_miss is None:
            raise UsageError("--mechanism mcar needs --pmiss")
        return Mechanism.mcar(p_miss)
    try:
        return parse_mechanism(_read_text(spec))
    except ValueError as exc:
        raise UsageError(f"{spec}: {exc}")


# -- subcommands ------------------------------------------------------------


def cmd_bias(args) -> int:
    point = _point(args)
    cond = derive_conditionals(point)
    res = bias_percent(point)
    print("valid: yes")
    print(f"Pr(E=1|C=1) = {cond.p_e_given_c1:.6g}")
    print(f"Pr(E=1|C=0) = {cond.p_e_given_c0:.6g}")
    print(f"Pr(C=1|E=1) = {cond.p_c_given_e1:.6g}")
    print(f"Pr(C=1|E=0) = {cond.p_c_given_e0:.6g}")
    print(f"RR_miss/RR(E) = {res.rr_miss_over_rr_e:.10g}")
    print(f"P_bias% = {res.p_bias_percent:.2f}")
    print(f"P_bias% (full precision) = {res.p_bias_percent:.17g}")
    return EXIT_OK


def _summary_metadata(grid, n_records, mode, quantile) -> dict:
    return {
        "tool": f"mcimbias {__version__}",
        "grid_sha256": grid.digest(),
        "valid_combinations": n_records,
        "threshold_mode": mode,
        "quantile": quantile,
    }


def cmd_sweep(args) -> int:
    grid = default_grid()
    if args.grid:
        try:
            grid = parse_grid(_read_text(args.grid))
        except ValueError as exc:
            raise UsageError(f"{args.grid}: {exc}")
    records = enumerate_valid(grid)
    print(f"{len(records)} valid combinations")
    if not records:
        return EXIT_OK
    if args.records:
        with _output(args.records) as fh:
            write_records_csv(records, fh)
    rows = summarize(records, args.threshold_mode, args.quantile)
    meta = _summary_metadata(grid, len(records), args.threshold_mode, args.quantile)
    with _output(args.summary) as fh:
        fh.write(render_summary(rows, args.format, meta))
    return EXIT_OK


def cmd_table3(args) -> int:
    grid = default_grid()
    records = enumerate_valid(grid)
    rows = summarize(records, DEFAULT_THRESHOLD_MODE, DEFAULT_QUANTILE)
    meta = _summary_metadata(grid, len(records), DEFAULT_THRESHOLD_MODE, DEFAULT_QUANTILE)
    with _output(args.out) as fh:
        fh.write(render_summary(rows, args.format, meta))
    return EXIT_OK


def cmd_simulate(args) -> int:
    mech = _load_mechanism(args.mechanism, args.pmiss)
    is_mcar = args.mechanism == "mcar"
    point = _point(args, p_miss=None if args.pmiss is not None else 0.0)
    if args.n < 1 or args.reps < 1:
        raise UsageError("--n and --reps must be positive")
    try:
        config = SimConfig(point, args.baseline, args.rre, mech, args.n, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    tables = expected_tables(point, args.baseline, args.rre, mech)
    w = point.p_miss if is_mcar else tables.miss.total / tables.total
    analytic = bias_percent(point.replace(p_miss=w)).p_bias_percent
    asymptotic = asymptotic_mcim_bias(point, args.baseline, args.rre, mech)
    result = replicate_bias(config, args.reps, estimator=args.estimator, workers=args.workers)

    print(f"mechanism: {'mcar' if is_mcar else args.mechanism}")
    print(f"prng: {PRNG_NAME}; base seed {args.seed}")
    print(f"missing fraction: {w:.6g}")
    print(f"analytic P_bias% (closed form): {analytic:.4f}")
    print(f"asymptotic P_bias% (expected tables, {args.estimator}): {asymptotic:.4f}")
    k = len(result.biases)
    print(f"replicates: {args.reps} (degenerate: {result.n_degenerate})")
    if k:
        print(f"empirical mean P_bias%: {result.mean:.4f}")
        print(f"standard error: {result.se:.4f}")
        if k >= 2 and result.se > 0:
            print(f"z-gap vs asymptotic: {(result.mean - asymptotic) / result.se:.3f}")
    if args.out:
        with _output(args.out) as fh:
            write_replicates_csv(result, fh)
    if k == 0:
        print("every replicate was degenerate", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def _fmt_est(fn, tables) -> str:
    try:
        return f"{fn(tables).value:.10g}"
    except DegenerateEstimate as exc:
        return f"undefined ({exc})"


def cmd_mar_limit(args) -> int:
    mech = _load_mechanism(args.mechanism, args.pmiss)
    point = _point(args, p_miss=None if args.pmiss is not None else 0.0)
    rr1 = mar_stratum_rr_limit(point, args.baseline, args.rre, mech, 1)
    rr0 = mar_stratum_rr_limit(point, args.baseline, args.rre, mech, 0)
    tables = expected_tables(point, args.baseline, args.rre, mech)
    w = tables.miss.total / tables.total
    print(f"outcome-independent missingness (f10 = f00, f11 = f01): {'yes' if mar_condition_holds(mech) else 'no'}")
    print(f"stratum RR limit, C=1: {rr1:.10g}")
    print(f"stratum RR limit, C=0: {rr0:.10g}")
    print(f"true RR(E): {args.rre:.10g}")
    print(f"pooled complete-data RR: {_fmt_est(pooled_complete_rr, tables)}")
    print(f"crude RR, complete strata: {_fmt_est(crude_rr_complete, tables)}")
    print(f"crude RR, missing stratum: {_fmt_est(lambda s: stratum_rr(s.miss), tables)}")
    print(f"missing fraction: {w:.10g}")
    try:
        est = mcim_rr(tables).value
        print(f"asymptotic MCIM P_bias%: {(est - args.rre) / args.rre * 100:.10g}")
    except DegenerateEstimate as exc:
        print(f"asymptotic MCIM P_bias%: undefined ({exc})")
    closed = bias_percent(point.replace(p_miss=w)).p_bias_percent
    print(f"closed-form P_bias% at this missing fraction: {closed:.10g}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _add_point_flags(p, pmiss_required=True):
    p.add_argument("--pe", type=_number, required=True, help="exposure prevalence Pr(E)")
    p.add_argument("--pc", type=_number, required=True, help="covariate prevalence Pr(C)")
    p.add_argument("--pmiss", type=_number, required=pmiss_required, help="covariate missingness Pr(C_miss)")
    p.add_argument("--rrc", type=_number, required=True, help="covariate-outcome relative risk RR(C)")
    p.add_argument("--rrec", type=_number, required=True, help="exposure-covariate relative risk RR(E|C)")


def _add_outcome_flags(p):
    p.add_argument("--baseline", type=_number, default=0.05, help="Pr(Y=1|E=0,C=0) (default 0.05)")
    p.add_argument("--rre", type=_number, default=2.0, help="true exposure relative risk (default 2)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mcimbias", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bias", help="closed-form bias at one parameter point")
    _add_point_flags(p)
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("sweep", help="evaluate a parameter grid and summarize it")
    p.add_argument("--grid", help="grid file; defaults to the reference grid")
    p.add_argument("--records", help="write per-point records CSV here")
    p.add_argument("--summary", help="write the summary here (default: stdout)")
    p.add_argument("--format", choices=("csv", "markdown"), default="csv")
    p.add_argument("--threshold-mode", choices=("signed", "absolute"), default=DEFAULT_THRESHOLD_MODE)
    p.add_argument("--quantile", choices=("interp", "nearest"), default=DEFAULT_QUANTILE)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table3", help="reproduce the reference summary table")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    p.set_defaults(func=cmd_table3)

    p = sub.add_parser("simulate", help="Monte Carlo check of the closed-form bias")
    _add_point_flags(p, pmiss_required=False)
    _add_outcome_flags(p)
    p.add_argument("--n", type=int, default=100_000, help="subjects per replicate")
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mechanism", default="mcar", help="'mcar' (uses --pmiss) or a mechanism file")
    p.add_argument("--estimator", default="mcim_rr",
                   choices=("mcim_rr", "mcim_mh_rr", "pooled_complete_rr", "crude_rr_complete"))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="per-replicate CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mar-limit", help="large-sample limits under a MAR mechanism")
    _add_point_flags(p, pmiss_required=False)
    _add_outcome_flags(p)
    p.add_argument("--mechanism", required=True, help="mechanism file")
    p.set_defaults(func=cmd_mar_limit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mcimbias: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidCombination, RiskOutOfRange) as exc:
        print(f"mcimbias: invalid parameter combination: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DegenerateMechanism, DegenerateEstimate) as exc:
        print(f"mcimbias: degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
