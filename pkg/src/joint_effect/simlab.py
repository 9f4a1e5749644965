"""Seeded Monte Carlo harness for type-I error, power and coverage studies.

Replication streams derive from (master_seed, experiment-kind id, grid index,
replication index); type1 and power share a kind id so a power run with equal
distributions reproduces the type1 numbers bit for bit. Coverage counts a
region as covering when both true coordinates lie inside its rectangle, and
reports mean Euclidean lengths alongside abort counts.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .bootstrap import (
    ci_bonf_normal,
    ci_bonf_quantile,
    ci_gkl,
    ci_mandel_betensky,
    ci_mvn,
    resample_effects,
)
from .distributions import DistributionSpec, RngStream, exponential, normal, sample, uniform
from .errors import MethodInapplicableError, ParameterError, SeparationError
from .inference import (
    METHOD_ADJUSTED,
    METHOD_CVM,
    METHOD_KS,
    METHOD_NEW,
    METHOD_WMW,
    adjusted_joint_test,
    cvm_test,
    ks_test,
    new_joint_test,
    wmw_test,
)
from .oracle import exact_i2, exact_theta

__all__ = [
    "SETTINGS",
    "ExperimentConfig",
    "ResultRow",
    "ResultTable",
    "run_type1",
    "run_power",
    "run_coverage",
]

# distribution pairs of the simulation study, keyed as in the coverage tables
SETTINGS: dict[str, tuple[DistributionSpec, DistributionSpec]] = {
    "I": (normal(0.0, 1.0), normal(1.0, 1.0)),
    "II": (normal(0.0, 2.0), uniform(-0.5, 0.5)),
    "III": (normal(1.0, 1.0), exponential(1.0)),
    "IV": (normal(2.0, 1.0), exponential(1.0)),
}

_TEST_FUNS = {
    METHOD_NEW: new_joint_test,
    METHOD_ADJUSTED: adjusted_joint_test,
    METHOD_WMW: wmw_test,
    METHOD_KS: ks_test,
    METHOD_CVM: cvm_test,
}

_CI_FUNS = {
    "mvn": ci_mvn,
    "bonf-quantile": ci_bonf_quantile,
    "bonf-normal": ci_bonf_normal,
    "mb": ci_mandel_betensky,
    "gkl": ci_gkl,
}

_KIND_ID = {"type1": 1, "power": 1, "coverage": 2}


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str  # "type1" | "power" | "coverage"
    dist_x: DistributionSpec
    dist_y: DistributionSpec
    n_grid: tuple[tuple[int, int], ...]
    reps: int = 1000
    alpha: float = 0.05
    methods: tuple[str, ...] = ()
    B: int = 1000
    master_seed: int = 1

    def __post_init__(self):
        if self.kind not in _KIND_ID:
            raise ParameterError(f"unknown experiment kind {self.kind!r}")
        if self.reps < 1:
            raise ParameterError("reps must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError("alpha must be in (0, 1)")
        if self.kind == "type1" and self.dist_x != self.dist_y:
            raise ParameterError("type1 experiments require dist_x == dist_y")
        known = _TEST_FUNS if self.kind in ("type1", "power") else _CI_FUNS
        for mth in self.methods:
            if mth not in known:
                raise ParameterError(f"unknown method {mth!r} for kind {self.kind!r}")
        if not self.methods:
            raise ParameterError("at least one method is required")


@dataclass(frozen=True)
class ResultRow:
    method: str
    n: int
    m: int
    metric: str
    value: float
    se: float
    failures: int


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["method", "n", "m", "metric", "value", "se", "failures"])
        for r in self.rows:
            w.writerow([r.method, r.n, r.m, r.metric, repr(r.value), repr(r.se), r.failures])
        return buf.getvalue()

    def to_json(self) -> str:
        def clean(v: float):
            return None if math.isnan(v) else v

        return json.dumps(
            [
                {
                    "method": r.method,
                    "n": r.n,
                    "m": r.m,
                    "metric": r.metric,
                    "value": clean(r.value),
                    "se": clean(r.se),
                    "failures": r.failures,
                }
                for r in self.rows
            ],
            indent=2,
        )

    def value(self, method: str, n: int, metric: str) -> float:
        for r in self.rows:
            if r.method == method and r.n == n and r.metric == metric:
                return r.value
        raise KeyError((method, n, metric))


def _proportion_se(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials) if trials else float("nan")


def _rep_stream(config: ExperimentConfig, grid_index: int, rep_index: int) -> RngStream:
    return RngStream(config.master_seed).child(_KIND_ID[config.kind], grid_index, rep_index)


def _rejection_rates(config: ExperimentConfig) -> ResultTable:
    table = ResultTable()
    for gi, (n, m) in enumerate(config.n_grid):
        hits = {mth: 0 for mth in config.methods}
        completed = {mth: 0 for mth in config.methods}
        failures = {mth: 0 for mth in config.methods}
        for ri in range(config.reps):
            rep = _rep_stream(config, gi, ri)
            x = sample(config.dist_x, n, rep.child(0))
            y = sample(config.dist_y, m, rep.child(1))
            for mth in config.methods:
                try:
                    report = _TEST_FUNS[mth](x, y, config.alpha)
                except MethodInapplicableError:
                    failures[mth] += 1
                    continue
                completed[mth] += 1
                hits[mth] += report.reject
        for mth in config.methods:
            done = completed[mth]
            rate = hits[mth] / done if done else float("nan")
            table.rows.append(
                ResultRow(mth, n, m, "rejection_rate", rate, _proportion_se(rate, done), failures[mth])
            )
    return table


def run_type1(config: ExperimentConfig) -> ResultTable:
    """Rejection rates with both samples drawn from the same distribution."""
    if config.kind != "type1":
        raise ParameterError("config.kind must be 'type1'")
    return _rejection_rates(config)


def run_power(config: ExperimentConfig) -> ResultTable:
    """Rejection rates under an alternative (same engine and seed path as type1)."""
    if config.kind != "power":
        raise ParameterError("config.kind must be 'power'")
    return _rejection_rates(config)


def _is_separated(x, y) -> bool:
    return float(x.max()) < float(y.min()) or float(y.max()) < float(x.min())


def run_coverage(config: ExperimentConfig) -> ResultTable:
    """Joint coverage and mean Euclidean length of simultaneous CI methods.

    The true (theta, i2) comes from the numerical oracle. Perfectly separated
    samples abort the mvn method (counted, excluded from its denominator), as
    do singular bootstrap covariances.
    """
    if config.kind != "coverage":
        raise ParameterError("config.kind must be 'coverage'")
    if config.B < 100:
        raise ParameterError("coverage runs need B >= 100")
    truth = (exact_theta(config.dist_x, config.dist_y), exact_i2(config.dist_x, config.dist_y))
    table = ResultTable()
    for gi, (n, m) in enumerate(config.n_grid):
        covered = {mth: 0 for mth in config.methods}
        lengths = {mth: 0.0 for mth in config.methods}
        completed = {mth: 0 for mth in config.methods}
        failures = {mth: 0 for mth in config.methods}
        for ri in range(config.reps):
            rep = _rep_stream(config, gi, ri)
            x = sample(config.dist_x, n, rep.child(0))
            y = sample(config.dist_y, m, rep.child(1))
            draws = resample_effects(x, y, config.B, rep.child(2))
            separated = _is_separated(x, y)
            for mth in config.methods:
                if mth == "mvn" and separated:
                    failures[mth] += 1
                    continue
                try:
                    region = _CI_FUNS[mth](draws, config.alpha)
                except MethodInapplicableError:
                    failures[mth] += 1
                    continue
                completed[mth] += 1
                covered[mth] += region.contains(*truth)
                lengths[mth] += region.euclidean_length()
        for mth in config.methods:
            done = completed[mth]
            cov = covered[mth] / done if done else float("nan")
            mean_len = lengths[mth] / done if done else float("nan")
            table.rows.append(
                ResultRow(mth, n, m, "coverage", cov, _proportion_se(cov, done), failures[mth])
            )
            table.rows.append(
                ResultRow(mth, n, m, "mean_length", mean_len, float("nan"), failures[mth])
            )
    return table


def separation_check(x, y) -> None:
    """Raise SeparationError when the samples do not overlap at all."""
    import numpy as np

    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if _is_separated(xa, ya):
        raise SeparationError("samples are perfectly separated")
