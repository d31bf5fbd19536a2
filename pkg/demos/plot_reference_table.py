"""
Sweeping the reference grid
===========================

33,540 admissible combinations of the five parameters are evaluated and
summarized overall and per parameter value.
"""

import numpy as np

from mcimbias.sweep import default_grid, enumerate_valid, render_summary, summarize

grid = default_grid()
records = enumerate_valid(grid)
print(f"{grid.size} grid points, {len(records)} admissible")

biases = np.array([r.p_bias_percent for r in records])
print(f"range of P_bias%: {biases.min():.2f} .. {biases.max():.2f}")

# %%
# The summary table: median and quartiles, then the share of points whose
# bias is above 10% and 5%.
rows = summarize(records)
print(render_summary(rows, "markdown"))

# %%
# Where are the large biases?  Mostly at high missingness combined with
# strong covariate effects.
big = [r.point for r in records if r.p_bias_percent > 10]
print(f"{len(big)} points above 10%; missing share among them:",
      sorted({p.p_miss for p in big}))
