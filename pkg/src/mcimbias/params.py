"""Bias-determining parameters and the conditional probabilities they imply.

A point in the parameter space is the five quantities that fully determine
the relative bias of the indicator method: exposure prevalence, covariate
prevalence, covariate missingness, the covariate-outcome relative risk and
the exposure-covariate relative risk.  Not every combination describes a
real population; :func:`derive_conditionals` rejects those that do not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidCombination, RiskOutOfRange

# Distance from 0 or 1 below which a derived probability counts as touching
# the boundary.
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class ParameterPoint:
    """The five parameters that determine the MCIM relative bias.

    Attributes
    ----------
    p_e : float
        Prevalence of exposure, Pr(E=1).
    p_c : float
        Prevalence of the covariate, Pr(C=1).
    p_miss : float
        Proportion of subjects whose covariate is missing.
    rr_c : float
        Relative risk of the outcome for C=1 versus C=0.
    rr_ec : float
        Relative risk of exposure for C=1 versus C=0, Pr(E=1|C=1) / Pr(E=1|C=0).
    """

    p_e: float
    p_c: float
    p_miss: float
    rr_c: float
    rr_ec: float

    def __post_init__(self):
        for name in ("p_e", "p_c"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v!r}")
        if not 0.0 <= self.p_miss < 1.0:
            raise ValueError(f"p_miss must lie in [0, 1), got {self.p_miss!r}")
        for name in ("rr_c", "rr_ec"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")

    def replace(self, **changes) -> "ParameterPoint":
        fields = {k: getattr(self, k) for k in ("p_e", "p_c", "p_miss", "rr_c", "rr_ec")}
        fields.update(changes)
        return ParameterPoint(**fields)


@dataclass(frozen=True)
class DerivedConditionals:
    p_e_given_c1: float
    p_e_given_c0: float
    p_c_given_e1: float
    p_c_given_e0: float


def _raw_conditionals(p_e: float, p_c: float, rr_ec: float) -> tuple[float, float, float, float]:
    scale = rr_ec * p_c + 1.0 - p_c
    p_e_given_c0 = p_e / scale
    p_e_given_c1 = rr_ec * p_e / scale
    p_c_given_e1 = rr_ec * p_c / scale
    p_c_given_e0 = (p_c - p_c_given_e1 * p_e) / (1.0 - p_e)
    return p_e_given_c1, p_e_given_c0, p_c_given_e1, p_c_given_e0


def _inside(v: float) -> bool:
    return BOUNDARY_TOL < v < 1.0 - BOUNDARY_TOL


def derive_conditionals(point: ParameterPoint) -> DerivedConditionals:
    """Conditional probabilities of E given C and of C given E.

    Raises :class:`InvalidCombination` when Pr(E=1|C=0), Pr(E=1|C=1) or
    Pr(C=1|E=0) falls outside the open interval (0, 1).  A value sitting
    on 0 or 1 (to within ``BOUNDARY_TOL``) is rejected too: such a
    population has an empty exposure-by-covariate cell.
    """
    e1, e0, c1, c0 = _raw_conditionals(point.p_e, point.p_c, point.rr_ec)
    checked = {
        "Pr(C=1|E=0)": c0,
        "Pr(E=1|C=0)": e0,
        "Pr(E=1|C=1)": e1,
    }
    bad = {k: v for k, v in checked.items() if not _inside(v)}
    if bad:
        shown = ", ".join(f"{k}={v:.6g}" for k, v in checked.items())
        raise InvalidCombination(
            f"parameters imply probabilities outside (0, 1): {shown}", checked
        )
    return DerivedConditionals(e1, e0, c1, c0)


def is_valid(point: ParameterPoint) -> bool:
    # Only p_e, p_c and rr_ec enter the conditionals.
    e1, e0, _, c0 = _raw_conditionals(point.p_e, point.p_c, point.rr_ec)
    return _inside(e1) and _inside(e0) and _inside(c0)


@dataclass(frozen=True)
class JointDistribution:
    """Joint law of (C, E, Y) under a homogeneous multiplicative risk model.

    ``probs[c, e, y]`` is Pr(C=c, E=e, Y=y) and ``risks[c, e]`` is
    Pr(Y=1 | E=e, C=c).
    """

    probs: np.ndarray
    risks: np.ndarray

    def risk(self, e: int, c: int) -> float:
        return float(self.risks[c, e])

    def marginal_e(self) -> float:
        return float(self.probs[:, 1, :].sum())

    def marginal_c(self) -> float:
        return float(self.probs[1].sum())


def cell_risks(baseline_risk: float, rr_e: float, rr_c: float) -> np.ndarray:
    """Return ``risks[c, e] = baseline_risk * rr_e**e * rr_c**c``."""
    if not 0.0 < baseline_risk < 1.0:
        raise ValueError(f"baseline_risk must lie in (0, 1), got {baseline_risk!r}")
    if not rr_e > 0.0:
        raise ValueError(f"rr_e must be positive, got {rr_e!r}")
    risks = np.array(
        [
            [baseline_risk, baseline_risk * rr_e],
            [baseline_risk * rr_c, baseline_risk * rr_e * rr_c],
        ]
    )
    if risks.max() > 1.0:
        raise RiskOutOfRange(
            f"cell risk {risks.max():.6g} exceeds 1 "
            f"(baseline={baseline_risk}, rr_e={rr_e}, rr_c={rr_c})"
        )
    return risks


def joint_distribution(point: ParameterPoint, baseline_risk: float, rr_e: float) -> JointDistribution:
    """Build Pr(C, E, Y) from a parameter point and an outcome model.

    ``baseline_risk`` is Pr(Y=1 | E=0, C=0).  The risk in every other cell
    is obtained by multiplying in ``rr_e`` for exposure and ``point.rr_c``
    for the covariate, so the exposure effect is the same in both strata.
    """
    cond = derive_conditionals(point)
    risks = cell_risks(baseline_risk, rr_e, point.rr_c)
    p_c = np.array([1.0 - point.p_c, point.p_c])
    p_e1 = np.array([cond.p_e_given_c0, cond.p_e_given_c1])
    p_e = np.stack([1.0 - p_e1, p_e1], axis=1)  # [c, e]
    p_y1 = risks
    p_y = np.stack([1.0 - p_y1, p_y1], axis=2)  # [c, e, y]
    probs = p_c[:, None, None] * p_e[:, :, None] * p_y
    return JointDistribution(probs=probs, risks=risks)


def parse_number(text: str) -> float:
    """Parse a decimal like ``0.25`` or a fraction like ``1/1.15``."""
    s = text.strip()
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            value = float(num) / float(den)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {text!r}") from None
    else:
        value = float(s)
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text!r}")
    return value


def format_number(value: float, fraction: bool = False) -> str:
    """Short label for a grid value; reciprocals render as ``1/x`` if asked."""
    if fraction and 0.0 < value < 1.0:
        return f"1/{1.0 / value:.12g}"
    return f"{value:.12g}"
