"""
When missingness depends on the outcome
=======================================

If whether C is recorded depends only on exposure, the complete strata
still estimate the true effect.  Once it depends on the outcome too, they
do not.
"""

from mcimbias import Mechanism, ParameterPoint
from mcimbias.analytic import mar_condition_holds, mar_stratum_rr_limit

point = ParameterPoint(p_e=0.1, p_c=0.25, p_miss=0.25, rr_c=2.0, rr_ec=2.0)
baseline, rr_e = 0.05, 2.0

mechanisms = {
    "exposure only": Mechanism(f00=0.8, f01=0.6, f10=0.8, f11=0.6),
    "cases seen less": Mechanism(f00=0.9, f01=0.9, f10=0.5, f11=0.5),
    "exposed cases seen more": Mechanism(f00=0.6, f01=0.6, f10=0.6, f11=0.9),
}

for name, mech in mechanisms.items():
    limits = [mar_stratum_rr_limit(point, baseline, rr_e, mech, s) for s in (1, 0)]
    print(f"{name:24s} outcome-free: {mar_condition_holds(mech)!s:5s} "
          f"RR(C=1) {limits[0]:.4f}  RR(C=0) {limits[1]:.4f}  (truth {rr_e})")
