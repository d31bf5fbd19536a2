"""Expected and simulated stratified tables under MCAR/MAR missingness.

The data-generating process draws the covariate C, then exposure given C,
then the outcome from the homogeneous multiplicative risk model, and
finally whether C is observed given (Y, E).  :func:`expected_tables` gives
the exact cell proportions of that process; :func:`simulate` gives a
finite, seeded realization of it.

Random numbers come from numpy's PCG64 generator.  Replicate ``r`` of a
run with base seed ``s`` uses the seed ``replicate_seed(s, r)``, a
64-bit value drawn from ``numpy.random.SeedSequence([s, r])``, so any
replicate can be rerun on its own.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytic import Mechanism
from .errors import DegenerateEstimate
from .estimators import ESTIMATORS, mcim_rr
from .params import ParameterPoint, derive_conditionals, joint_distribution
from .tables import StratifiedTables, TwoByTwo

PRNG_NAME = "numpy.random.PCG64"
SEED_MIXER = "numpy.random.SeedSequence([base_seed, rep]).generate_state(1, uint64)"


@dataclass(frozen=True)
class SimConfig:
    point: ParameterPoint
    baseline_risk: float
    rr_e: float
    mech: Mechanism
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be at least 1, got {self.n!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


def _observation_probs(mech: Mechanism) -> np.ndarray:
    # indexed [e, y]
    return np.array([[mech.f00, mech.f10], [mech.f01, mech.f11]])


def expected_tables(
    point: ParameterPoint, baseline_risk: float, rr_e: float, mech: Mechanism
) -> StratifiedTables:
    """Cell proportions of the three strata in an infinite sample."""
    joint = joint_distribution(point, baseline_risk, rr_e).probs  # [c, e, y]
    f = _observation_probs(mech)
    observed = joint * f[None, :, :]
    missing = (joint * (1.0 - f)[None, :, :]).sum(axis=0)
    return StratifiedTables(
        c1=TwoByTwo.from_cells(observed[1]),
        c0=TwoByTwo.from_cells(observed[0]),
        miss=TwoByTwo.from_cells(missing),
        kind="expected-proportions",
    )


def asymptotic_mcim_bias(
    point: ParameterPoint, baseline_risk: float, rr_e: float, mech: Mechanism
) -> float:
    """Percent deviation of the MCIM estimate from ``rr_e`` on expected tables."""
    est = mcim_rr(expected_tables(point, baseline_risk, rr_e, mech)).value
    return (est - rr_e) / rr_e * 100.0


def replicate_seed(base_seed: int, rep: int) -> int:
    """Seed for replicate ``rep``; depends only on the base seed and the index."""
    return int(np.random.SeedSequence([base_seed, rep]).generate_state(1, np.uint64)[0])


def simulate(config: SimConfig) -> StratifiedTables:
    """Draw ``config.n`` subjects and tally them into the three strata."""
    point = config.point
    cond = derive_conditionals(point)
    risks = joint_distribution(point, config.baseline_risk, config.rr_e).risks  # [c, e]
    f = _observation_probs(config.mech)
    rng = np.random.Generator(np.random.PCG64(config.seed))
    n = config.n

    c = (rng.random(n) < point.p_c).astype(np.intp)
    p_e = np.where(c == 1, cond.p_e_given_c1, cond.p_e_given_c0)
    e = (rng.random(n) < p_e).astype(np.intp)
    y = (rng.random(n) < risks[c, e]).astype(np.intp)
    seen = rng.random(n) < f[e, y]

    # stratum 0 = C=1, 1 = C=0, 2 = missing
    stratum = np.where(seen, 1 - c, 2)
    counts = np.bincount(stratum * 4 + e * 2 + y, minlength=12).reshape(3, 2, 2)
    tables = [TwoByTwo.from_cells(counts[k].astype(np.int64).tolist()) for k in range(3)]
    return StratifiedTables(*tables, kind="counts")


@dataclass(frozen=True)
class ReplicateRecord:
    rep: int
    seed: int
    n: int
    estimator: str
    estimate: float | None
    bias_percent: float | None
    error: str | None = None


@dataclass
class ReplicationResult:
    records: list[ReplicateRecord]
    rr_e: float
    estimator: str = "mcim_rr"
    meta: dict = field(default_factory=dict)

    @property
    def biases(self) -> np.ndarray:
        return np.array([r.bias_percent for r in self.records if r.bias_percent is not None])

    @property
    def n_degenerate(self) -> int:
        return sum(1 for r in self.records if r.bias_percent is None)

    @property
    def mean(self) -> float:
        b = self.biases
        return float(b.mean()) if b.size else math.nan

    @property
    def se(self) -> float:
        b = self.biases
        if b.size < 2:
            return math.nan
        return float(b.std(ddof=1) / math.sqrt(b.size))


def _one_replicate(config: SimConfig, rep: int, estimator: str) -> ReplicateRecord:
    seed = replicate_seed(config.seed, rep)
    tables = simulate(SimConfig(config.point, config.baseline_risk, config.rr_e, config.mech, config.n, seed))
    try:
        est = ESTIMATORS[estimator](tables).value
    except DegenerateEstimate as exc:
        return ReplicateRecord(rep, seed, config.n, estimator, None, None, str(exc))
    return ReplicateRecord(rep, seed, config.n, estimator, est, (est - config.rr_e) / config.rr_e * 100.0)


def replicate_bias(
    config: SimConfig, reps: int, estimator: str = "mcim_rr", workers: int = 1
) -> ReplicationResult:
    """Simulate ``reps`` independent data sets and record the estimator's percent bias.

    ``config.seed`` is the base seed.  Degenerate replicates are kept in the
    output with the reason, not dropped silently.  Output order is by
    replicate index whatever ``workers`` is.
    """
    if reps < 1:
        raise ValueError(f"reps must be at least 1, got {reps!r}")
    if estimator not in ESTIMATORS:
        raise ValueError(f"unknown estimator {estimator!r}; choose from {sorted(ESTIMATORS)}")
    # fail fast on invalid parameters before spinning up replicates
    joint_distribution(config.point, config.baseline_risk, config.rr_e)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda r: _one_replicate(config, r, estimator), range(reps)))
    else:
        records = [_one_replicate(config, r, estimator) for r in range(reps)]
    meta = {"prng": PRNG_NAME, "seed_mixer": SEED_MIXER, "base_seed": config.seed}
    return ReplicationResult(records, config.rr_e, estimator, meta)


def write_replicates_csv(result: ReplicationResult, fh) -> None:
    """Per-replicate rows followed by a ``#``-prefixed summary block."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["rep", "seed", "n", "estimator", "estimate", "bias_percent"])
    for r in result.records:
        writer.writerow([
            r.rep,
            r.seed,
            r.n,
            r.estimator,
            "" if r.estimate is None else f"{r.estimate:.17g}",
            "" if r.bias_percent is None else f"{r.bias_percent:.17g}",
        ])
    fh.write(f"# mean_bias_percent: {result.mean:.17g}\n")
    fh.write(f"# standard_error: {result.se:.17g}\n")
    fh.write(f"# replicates: {len(result.records)}\n")
    fh.write(f"# degenerate: {result.n_degenerate}\n")
