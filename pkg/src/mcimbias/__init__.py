"""Relative bias of the missing covariate indicator method (MCIM).

Closed-form bias, grid sweeps and summaries, expected and simulated
stratified tables, and the relative-risk estimators used to check them.
"""

__version__ = "0.1.0"

from .analytic import (
    BiasResult,
    Mechanism,
    bias_percent,
    bias_percent_stratum_route,
    mar_condition_holds,
    mar_stratum_rr_limit,
    rr_e_limit,
    rr_miss_limit,
)
from .errors import (
    DegenerateEstimate,
    DegenerateMechanism,
    EmptyInput,
    InvalidCombination,
    MCIMError,
    RiskOutOfRange,
)
from .estimators import (
    EstimateResult,
    crude_rr_complete,
    mcim_mh_rr,
    mcim_rr,
    pooled_complete_rr,
    stratum_or,
    stratum_rr,
)
from .montecarlo import (
    SimConfig,
    asymptotic_mcim_bias,
    expected_tables,
    replicate_bias,
    simulate,
)
from .params import (
    DerivedConditionals,
    JointDistribution,
    ParameterPoint,
    derive_conditionals,
    is_valid,
    joint_distribution,
)
from .sweep import GridSpec, SummaryRow, SweepRecord, default_grid, enumerate_valid, render_summary, summarize
from .tables import StratifiedTables, TwoByTwo
