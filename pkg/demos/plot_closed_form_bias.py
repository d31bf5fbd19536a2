"""
Closed-form bias at a single point
==================================

The relative bias of the indicator method depends on five numbers only.
We evaluate it for a moderately confounded covariate and check it against
the second route through the conditional covariate prevalences.
"""

from mcimbias import ParameterPoint, bias_percent, bias_percent_stratum_route, derive_conditionals

# 10% exposed, a quarter carry the covariate, a quarter lack it in the data
point = ParameterPoint(p_e=0.1, p_c=0.25, p_miss=0.25, rr_c=2.0, rr_ec=2.0)

cond = derive_conditionals(point)
print(f"Pr(C=1|E=1) = {cond.p_c_given_e1:.4f}, Pr(C=1|E=0) = {cond.p_c_given_e0:.4f}")

direct = bias_percent(point).p_bias_percent
via_strata = bias_percent_stratum_route(point).p_bias_percent
print(f"P_bias% = {direct:.4f} (second route {via_strata:.4f}; exact value 125/37 = {125 / 37:.4f})")

# %%
# Bias grows linearly with the missing share, so halving missingness halves it.
for p_miss in (0.05, 0.10, 0.25, 0.50):
    print(f"p_miss={p_miss:<5} P_bias%={bias_percent(point.replace(p_miss=p_miss)).p_bias_percent:7.3f}")

# %%
# Without an outcome effect of the covariate (rr_c = 1) or without
# confounding (rr_ec = 1) there is nothing to leak through the missing
# stratum.
print(bias_percent(point.replace(rr_c=1.0)).p_bias_percent, bias_percent(point.replace(rr_ec=1.0)).p_bias_percent)
