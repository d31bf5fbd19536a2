"""
Simulating the indicator method
===============================

Finite samples drawn from the multiplicative risk model should scatter
around the closed-form bias.  Each replicate has its own derived seed,
so any one of them can be rerun alone.
"""

from mcimbias import Mechanism, ParameterPoint, bias_percent
from mcimbias.montecarlo import SimConfig, asymptotic_mcim_bias, replicate_bias, simulate

point = ParameterPoint(p_e=0.1, p_c=0.25, p_miss=0.25, rr_c=2.0, rr_ec=2.0)
mech = Mechanism.mcar(point.p_miss)
config = SimConfig(point, baseline_risk=0.05, rr_e=2.0, mech=mech, n=200_000, seed=1)

# %%
# One data set, tallied into the C=1, C=0 and missing strata.
tables = simulate(config)
for name, t in zip(("C=1", "C=0", "missing"), tables.strata()):
    print(f"{name:8s} a={t.a:6d} b={t.b:6d} c={t.c:6d} d={t.d:6d}")

# %%
# Twenty replicates.  The infinite-sample value is the closed form.
result = replicate_bias(config, reps=20)
print(f"closed form  {bias_percent(point).p_bias_percent:.3f}")
print(f"asymptotic   {asymptotic_mcim_bias(point, 0.05, 2.0, mech):.3f}")
print(f"simulated    {result.mean:.3f} +/- {result.se:.3f}")
