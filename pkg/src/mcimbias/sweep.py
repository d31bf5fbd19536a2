"""Grid evaluation of the MCIM bias and per-parameter summaries.

The default grid has 6 values for each probability parameter and 13 for
each relative-risk parameter.  Combinations whose conditional
probabilities leave (0, 1) are skipped; the rest are summarized overall
and by each value of each parameter.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .analytic import bias_percent
from .errors import EmptyInput
from .params import ParameterPoint, format_number, is_valid, parse_number

ThresholdMode = Literal["signed", "absolute"]
QuantileMethod = Literal["interp", "nearest"]

PARAMETERS = ("p_e", "p_c", "p_miss", "rr_c", "rr_ec")
RR_PARAMETERS = frozenset({"rr_c", "rr_ec"})
DISPLAY_NAMES = {
    "p_e": "Pr(E)",
    "p_c": "Pr(C)",
    "p_miss": "Pr(C_miss)",
    "rr_c": "RR(C)",
    "rr_ec": "RR(E|C)",
}
DEFAULT_THRESHOLD_MODE: ThresholdMode = "signed"
DEFAULT_QUANTILE: QuantileMethod = "interp"

# numpy method names behind each quantile convention
_NUMPY_METHOD = {"interp": "linear", "nearest": "inverted_cdf"}

_RR_LABELS = ("1/5", "1/3", "1/2", "1/1.5", "1/1.25", "1/1.15", "1", "1.15", "1.25", "1.5", "2", "3", "5")
_PROB_LABELS = ("0.01", "0.05", "0.1", "0.25", "0.50", "0.75")
_MISS_LABELS = ("0.005", "0.01", "0.05", "0.10", "0.25", "0.50")


@dataclass(frozen=True)
class GridSpec:
    values_p_miss: tuple[float, ...]
    values_p_e: tuple[float, ...]
    values_p_c: tuple[float, ...]
    values_rr_c: tuple[float, ...]
    values_rr_ec: tuple[float, ...]

    def __post_init__(self):
        for name in PARAMETERS:
            vals = tuple(float(v) for v in getattr(self, f"values_{name}"))
            object.__setattr__(self, f"values_{name}", vals)
            if not vals:
                raise ValueError(f"grid has no values for {name}")
            for v in vals:
                if name == "p_miss":
                    ok = 0.0 <= v < 1.0
                elif name in RR_PARAMETERS:
                    ok = v > 0.0
                else:
                    ok = 0.0 < v < 1.0
                if not ok:
                    raise ValueError(f"grid value {v!r} not admissible for {name}")

    def values(self, name: str) -> tuple[float, ...]:
        return getattr(self, f"values_{name}")

    @property
    def size(self) -> int:
        return int(np.prod([len(self.values(p)) for p in PARAMETERS]))

    def to_text(self) -> str:
        """Render in the ``name = v1, v2, ...`` grid-file format."""
        lines = []
        for name in ("p_miss", "p_e", "p_c", "rr_c", "rr_ec"):
            labels = (label_value(name, v) for v in self.values(name))
            lines.append(f"{name} = {', '.join(labels)}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()


def label_value(name: str, value: float) -> str:
    return format_number(value, fraction=name in RR_PARAMETERS)


def default_grid() -> GridSpec:
    """The reference grid: 6 x 6 x 6 probability values and 13 x 13 relative risks."""
    rr = tuple(parse_number(s) for s in _RR_LABELS)
    probs = tuple(parse_number(s) for s in _PROB_LABELS)
    return GridSpec(
        values_p_miss=tuple(parse_number(s) for s in _MISS_LABELS),
        values_p_e=probs,
        values_p_c=probs,
        values_rr_c=rr,
        values_rr_ec=rr,
    )


def parse_grid(text: str, base: GridSpec | None = None) -> GridSpec:
    """Parse grid-file text; parameters not mentioned keep their ``base`` values.

    Blank lines and ``#`` comments are ignored.
    """
    base = base or default_grid()
    values = {name: base.values(name) for name in PARAMETERS}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, rest = line.partition("=")
        name = name.strip()
        if not sep:
            raise ValueError(f"line {lineno}: expected 'name = v1, v2, ...', got {raw!r}")
        if name not in values:
            raise ValueError(f"line {lineno}: unknown parameter {name!r}")
        if name in seen:
            raise ValueError(f"line {lineno}: {name} given twice")
        seen.add(name)
        items = [s for s in (t.strip() for t in rest.split(",")) if s]
        if not items:
            raise ValueError(f"line {lineno}: no values for {name}")
        values[name] = tuple(parse_number(s) for s in items)
    return GridSpec(**{f"values_{k}": v for k, v in values.items()})


@dataclass(frozen=True)
class SweepRecord:
    point: ParameterPoint
    p_bias_percent: float


def enumerate_valid(grid: GridSpec) -> list[SweepRecord]:
    """Evaluate the bias at every admissible grid point.

    Order is lexicographic in (p_e, p_c, p_miss, rr_c, rr_ec), following
    each parameter's value order in ``grid``.
    """
    records = []
    for p_e, p_c in itertools.product(grid.values_p_e, grid.values_p_c):
        ok_rr_ec = {
            r: is_valid(ParameterPoint(p_e, p_c, 0.0, 1.0, r)) for r in grid.values_rr_ec
        }
        for p_miss, rr_c, rr_ec in itertools.product(
            grid.values_p_miss, grid.values_rr_c, grid.values_rr_ec
        ):
            if not ok_rr_ec[rr_ec]:
                continue
            point = ParameterPoint(p_e, p_c, p_miss, rr_c, rr_ec)
            records.append(SweepRecord(point, bias_percent(point).p_bias_percent))
    return records


@dataclass(frozen=True)
class SummaryRow:
    parameter: str
    value: float | None
    median: float
    q25: float
    q75: float
    pct_gt_10: float
    pct_gt_5: float
    count: int = 0

    @property
    def label(self) -> str:
        if self.value is None:
            return ""
        return label_value(self.parameter, self.value)


def _summary_row(parameter: str, value, biases: np.ndarray, mode: ThresholdMode, method: str) -> SummaryRow:
    x = np.abs(biases) if mode == "absolute" else biases
    q25, med, q75 = np.percentile(biases, [25, 50, 75], method=method)
    n = biases.size
    return SummaryRow(
        parameter=parameter,
        value=value,
        median=float(med),
        q25=float(q25),
        q75=float(q75),
        pct_gt_10=float(np.count_nonzero(x > 10.0)) / n * 100.0,
        pct_gt_5=float(np.count_nonzero(x > 5.0)) / n * 100.0,
        count=int(n),
    )


def summarize(
    records: list[SweepRecord],
    threshold_mode: ThresholdMode = DEFAULT_THRESHOLD_MODE,
    quantile: QuantileMethod = DEFAULT_QUANTILE,
) -> list[SummaryRow]:
    """Overall row, then one row per value of each parameter.

    Parameter blocks come in the order p_e, p_c, p_miss, rr_c, rr_ec and
    values in ascending order.  Tail columns give the percentage of
    records whose bias (or its magnitude, in ``absolute`` mode) is
    strictly above 10 and 5.
    """
    if not records:
        raise EmptyInput("no records to summarize")
    if threshold_mode not in ("signed", "absolute"):
        raise ValueError(f"unknown threshold mode {threshold_mode!r}")
    if quantile not in _NUMPY_METHOD:
        raise ValueError(f"unknown quantile convention {quantile!r}")
    method = _NUMPY_METHOD[quantile]
    biases = np.array([r.p_bias_percent for r in records])
    rows = [_summary_row("Overall", None, biases, threshold_mode, method)]
    for name in PARAMETERS:
        column = np.array([getattr(r.point, name) for r in records])
        for v in sorted(set(column.tolist())):
            rows.append(_summary_row(name, v, biases[column == v], threshold_mode, method))
    return rows


def _fmt2(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


SUMMARY_COLUMNS = ("parameter", "value", "median", "q25", "q75", "pct_gt_10", "pct_gt_5")


def render_summary(rows: list[SummaryRow], format: str = "csv", metadata: dict | None = None) -> str:
    """Render summary rows as CSV or as a markdown table.

    Numbers are rounded to two decimals (round-half-even on the binary
    value).  ``metadata`` entries become leading ``# key: value`` lines.
    """
    if not rows:
        raise EmptyInput("no summary rows to render")
    out = io.StringIO()
    for k, v in (metadata or {}).items():
        out.write(f"# {k}: {v}\n")
    if format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for r in rows:
            writer.writerow([
                r.parameter, r.label, _fmt2(r.median), _fmt2(r.q25), _fmt2(r.q75),
                _fmt2(r.pct_gt_10), _fmt2(r.pct_gt_5),
            ])
    elif format == "markdown":
        out.write("| Parameter value | Median | Percentile 25 | Percentile 75 "
                  "| % P_bias > 10% | % P_bias > 5% |\n")
        out.write("|---|---:|---:|---:|---:|---:|\n")
        current = None
        for r in rows:
            if r.parameter != "Overall" and r.parameter != current:
                current = r.parameter
                out.write(f"| **{DISPLAY_NAMES.get(current, current)}** | | | | | |\n")
            label = "Overall" if r.parameter == "Overall" else r.label
            cells = [_fmt2(v) for v in (r.median, r.q25, r.q75, r.pct_gt_10, r.pct_gt_5)]
            out.write(f"| {label} | " + " | ".join(cells) + " |\n")
    else:
        raise ValueError(f"unknown format {format!r}; use 'csv' or 'markdown'")
    return out.getvalue()


RECORD_COLUMNS = ("p_e", "p_c", "p_miss", "rr_c", "rr_ec", "p_bias_percent")


def write_records_csv(records: Iterable[SweepRecord], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(RECORD_COLUMNS)
    for r in records:
        p = r.point
        writer.writerow([f"{v:.17g}" for v in (p.p_e, p.p_c, p.p_miss, p.rr_c, p.rr_ec, r.p_bias_percent)])


def read_records_csv(fh) -> list[SweepRecord]:
    reader = csv.DictReader(row for row in fh if not row.startswith("#"))
    out = []
    for row in reader:
        point = ParameterPoint(*(float(row[k]) for k in PARAMETERS))
        out.append(SweepRecord(point, float(row["p_bias_percent"])))
    return out
