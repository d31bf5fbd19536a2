"""Relative risk and odds ratio estimators over stratified 2x2 tables.

Zero cells raise :class:`~mcimbias.errors.DegenerateEstimate` by default.
Passing ``correction=0.5`` adds that amount to every cell of an affected
table instead, and the result is flagged ``degenerate=True``.  Oracle
comparisons never use the correction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateEstimate
from .tables import StratifiedTables, TwoByTwo


@dataclass(frozen=True)
class EstimateResult:
    value: float
    estimator_name: str
    degenerate: bool = False
    reason: str | None = None


def _rr_problem(t: TwoByTwo) -> str | None:
    if t.a + t.c == 0:
        return "no exposed subjects"
    if t.b + t.d == 0:
        return "no unexposed subjects"
    if t.b == 0:
        return "no cases among unexposed"
    if t.a == 0:
        return "no cases among exposed"
    return None


def _corrected(t: TwoByTwo, correction: float) -> TwoByTwo:
    return TwoByTwo(t.a + correction, t.b + correction, t.c + correction, t.d + correction)


def stratum_rr(t: TwoByTwo, correction: float = 0.0) -> EstimateResult:
    """Risk ratio (a/(a+c)) / (b/(b+d))."""
    problem = _rr_problem(t)
    degenerate = False
    if problem is not None:
        if correction <= 0:
            raise DegenerateEstimate(f"risk ratio undefined: {problem}")
        t = _corrected(t, correction)
        degenerate = True
    value = (t.a / (t.a + t.c)) / (t.b / (t.b + t.d))
    return EstimateResult(value, "stratum_rr", degenerate, problem)


def stratum_or(t: TwoByTwo, correction: float = 0.0) -> EstimateResult:
    """Odds ratio (a*d) / (b*c)."""
    problem = None
    if t.b * t.c == 0:
        problem = "zero cell in b or c"
    elif t.a * t.d == 0:
        problem = "zero cell in a or d"
    degenerate = False
    if problem is not None:
        if correction <= 0:
            raise DegenerateEstimate(f"odds ratio undefined: {problem}")
        t = _corrected(t, correction)
        degenerate = True
    return EstimateResult((t.a * t.d) / (t.b * t.c), "stratum_or", degenerate, problem)


def mantel_haenszel_rr(tables, correction: float = 0.0, name: str = "mantel_haenszel_rr") -> EstimateResult:
    """Mantel-Haenszel risk ratio pooled over any number of strata.

    Empty strata contribute nothing.
    """
    num = den = 0.0
    degenerate = False
    reasons = []
    for t in tables:
        if t.total == 0:
            continue
        if correction > 0 and _rr_problem(t) is not None:
            reasons.append(_rr_problem(t))
            t = _corrected(t, correction)
            degenerate = True
        n = t.total
        num += t.a * (t.b + t.d) / n
        den += t.b * (t.a + t.c) / n
    if num == 0 or den == 0:
        raise DegenerateEstimate(f"{name} undefined: every stratum lacks exposed or unexposed cases")
    return EstimateResult(num / den, name, degenerate, "; ".join(reasons) or None)


def pooled_complete_rr(s: StratifiedTables, correction: float = 0.0) -> EstimateResult:
    """Mantel-Haenszel risk ratio over the two complete-data strata."""
    return mantel_haenszel_rr((s.c1, s.c0), correction, name="pooled_complete_rr")


def crude_rr_complete(s: StratifiedTables, correction: float = 0.0) -> EstimateResult:
    """Risk ratio of the complete-data strata collapsed over C."""
    r = stratum_rr(s.c1 + s.c0, correction)
    return EstimateResult(r.value, "crude_rr_complete", r.degenerate, r.reason)


def missing_stratum_rr(s: StratifiedTables, correction: float = 0.0) -> EstimateResult:
    r = stratum_rr(s.miss, correction)
    return EstimateResult(r.value, "missing_stratum_rr", r.degenerate, r.reason)


def mcim_rr(s: StratifiedTables, correction: float = 0.0) -> EstimateResult:
    """Indicator-method summary relative risk.

    ``(1 - w) * pooled_complete_rr + w * RR_miss`` where ``w`` is the share
    of subjects in the missing stratum.  With no missing subjects this is
    just the pooled complete-data estimate.
    """
    pooled = pooled_complete_rr(s, correction)
    total = s.total
    w = s.miss.total / total if total > 0 else 0.0
    if w == 0:
        return EstimateResult(pooled.value, "mcim_rr", pooled.degenerate, pooled.reason)
    miss = stratum_rr(s.miss, correction)
    value = (1.0 - w) * pooled.value + w * miss.value
    reasons = [r for r in (pooled.reason, miss.reason) if r]
    return EstimateResult(value, "mcim_rr", pooled.degenerate or miss.degenerate, "; ".join(reasons) or None)


def mcim_mh_rr(s: StratifiedTables, correction: float = 0.0) -> EstimateResult:
    """Mantel-Haenszel pool over all three strata, missing stratum included.

    Offered for comparison with :func:`mcim_rr`; it is not the weighting
    the closed-form bias refers to.
    """
    return mantel_haenszel_rr(s.strata(), correction, name="mcim_mh_rr")


ESTIMATORS = {
    "mcim_rr": mcim_rr,
    "mcim_mh_rr": mcim_mh_rr,
    "pooled_complete_rr": pooled_complete_rr,
    "crude_rr_complete": crude_rr_complete,
    "missing_stratum_rr": missing_stratum_rr,
}
