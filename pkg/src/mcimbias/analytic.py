"""Closed-form bias of the missing covariate indicator method.

Two routes give the percent bias ``P_bias%``: the direct five-parameter
expression (:func:`bias_percent`) and the route through the conditional
covariate prevalences among exposed and unexposed subjects
(:func:`bias_percent_stratum_route`).  The remaining functions give the
large-sample limits of the stratum estimates, including under
missingness that depends on outcome and exposure.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateMechanism
from .params import ParameterPoint, cell_risks, derive_conditionals

# Equality tolerance for mechanism entries.
MECHANISM_TOL = 1e-12


@dataclass(frozen=True)
class Mechanism:
    """Probability that the covariate is *observed*, given (Y, E).

    ``f_ye`` is Pr(C observed | Y=y, E=e).  Missingness that does not
    depend on C is missing at random here, since Y and E are always
    recorded.
    """

    f00: float
    f01: float
    f10: float
    f11: float

    def __post_init__(self):
        for name in ("f00", "f01", "f10", "f11"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")

    @classmethod
    def mcar(cls, p_miss: float) -> "Mechanism":
        f = 1.0 - p_miss
        return cls(f, f, f, f)

    @classmethod
    def from_mapping(cls, f_obs: dict[tuple[int, int], float]) -> "Mechanism":
        """Build from ``{(y, e): prob}`` with all four keys present."""
        missing = {(0, 0), (0, 1), (1, 0), (1, 1)} - set(f_obs)
        if missing:
            raise ValueError(f"mechanism is missing entries for (y, e) = {sorted(missing)}")
        return cls(f_obs[0, 0], f_obs[0, 1], f_obs[1, 0], f_obs[1, 1])

    def observed(self, y: int, e: int) -> float:
        return getattr(self, f"f{y}{e}")

    def as_mapping(self) -> dict[tuple[int, int], float]:
        return {(y, e): self.observed(y, e) for y in (0, 1) for e in (0, 1)}


@dataclass(frozen=True)
class BiasResult:
    p_bias_percent: float
    rr_miss_over_rr_e: float


def bias_percent(point: ParameterPoint) -> BiasResult:
    """Percent relative bias of the MCIM summary relative risk.

    The result depends only on the five parameters in ``point``; neither
    the outcome rate nor the true exposure effect enters.  Raises
    :class:`~mcimbias.errors.InvalidCombination` for points outside the
    admissible region.
    """
    derive_conditionals(point)
    p_c, rr_c, rr_ec = point.p_c, point.rr_c, point.rr_ec
    num = p_c * (1.0 - p_c) * (rr_c - 1.0) * (rr_ec - 1.0)
    den = (1.0 - point.p_e) * (1.0 - p_c + p_c * rr_c * rr_ec) - num
    ratio = num / den
    # p_miss * (ratio) * 100 in this order: the tail counts of the full grid
    # sweep hinge on how exact ties at 5% and 10% round.
    return BiasResult(point.p_miss * ratio * 100.0, 1.0 + ratio)


def bias_percent_stratum_route(point: ParameterPoint) -> BiasResult:
    """Same quantity as :func:`bias_percent`, via Pr(C=1|E=1) and Pr(C=1|E=0)."""
    cond = derive_conditionals(point)
    q1, q0 = cond.p_c_given_e1, cond.p_c_given_e0
    rr_c = point.rr_c
    excess = (rr_c - 1.0) * (q1 - q0) / (rr_c * q0 + 1.0 - q0)
    return BiasResult(point.p_miss * excess * 100.0, 1.0 + excess)


def rr_miss_limit(point: ParameterPoint, rr_e: float) -> float:
    """Limit of the crude relative risk in the missing-covariate stratum."""
    if not rr_e > 0.0:
        raise ValueError(f"rr_e must be positive, got {rr_e!r}")
    cond = derive_conditionals(point)
    q1, q0 = cond.p_c_given_e1, cond.p_c_given_e0
    rr_c = point.rr_c
    return rr_e * (rr_c * q1 + 1.0 - q1) / (rr_c * q0 + 1.0 - q0)


def rr_e_limit(point: ParameterPoint, rr_e: float) -> float:
    """Limit of the MCIM summary relative risk.

    A person-weighted average of the true effect (carried by the two
    complete strata) and the confounded missing-stratum limit.
    """
    return (1.0 - point.p_miss) * rr_e + point.p_miss * rr_miss_limit(point, rr_e)


def mar_condition_holds(mech: Mechanism) -> bool:
    """True when observation does not depend on outcome within exposure levels."""
    return (
        abs(mech.f10 - mech.f00) <= MECHANISM_TOL
        and abs(mech.f11 - mech.f01) <= MECHANISM_TOL
    )


def mar_stratum_rr_limit(
    point: ParameterPoint,
    baseline_risk: float,
    rr_e: float,
    mech: Mechanism,
    stratum: int,
) -> float:
    """Large-sample observed relative risk in complete stratum C=``stratum``.

    Raises :class:`~mcimbias.errors.DegenerateMechanism` if any
    observation probability is zero.
    """
    if stratum not in (0, 1):
        raise ValueError(f"stratum must be 0 or 1, got {stratum!r}")
    derive_conditionals(point)
    risks = cell_risks(baseline_risk, rr_e, point.rr_c)
    f00, f01, f10, f11 = mech.f00, mech.f01, mech.f10, mech.f11
    if min(f00, f01, f10, f11) <= 0.0:
        raise DegenerateMechanism(
            f"observation probabilities must all be positive, got {mech.as_mapping()}"
        )
    r0 = float(risks[stratum, 0])
    r1 = float(risks[stratum, 1])
    return (
        (r1 / r0)
        * (f11 / f10)
        * (r0 * (f10 - f00) + f00)
        / (r1 * (f11 - f01) + f01)
    )
