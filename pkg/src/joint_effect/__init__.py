"""Joint nonparametric inference for the Mann-Whitney relative effect and the
distribution overlap index: estimation, tests of distribution equality,
bootstrap simultaneous confidence regions, an exact numerical oracle, and a
seeded Monte Carlo harness."""

__version__ = "0.1.0"

from .bootstrap import (
    BootstrapDraws,
    ConfidenceRegion,
    bvn_rect,
    ci_bonf_normal,
    ci_bonf_quantile,
    ci_gkl,
    ci_mandel_betensky,
    ci_mvn,
    equicoordinate_quantile,
    range_preserve,
    resample_effects,
)
from .distributions import (
    DistributionSpec,
    Family,
    RngStream,
    beta,
    cauchy,
    cdf,
    chi_square,
    exponential,
    format_dist,
    normal,
    parse_dist,
    pdf,
    quantile,
    sample,
    uniform,
)
from .effects import (
    EffectEstimates,
    adjusted_effects,
    i1_hat,
    i2_hat,
    point_estimates,
    theta_hat,
    theta_i2_hat,
)
from .inference import (
    AdjustedCov,
    NullCov,
    TestReport,
    adjusted_covariance,
    adjusted_joint_test,
    cvm_test,
    ks_test,
    new_joint_test,
    null_covariance,
    wmw_test,
)
from .oracle import (
    AsymptoticCov,
    ExactFunctionals,
    asymptotic_cov,
    exact_functionals,
    exact_i1,
    exact_i2,
    exact_theta,
    functional_grid,
)
from .ranks import (
    RankedPool,
    SplitSamples,
    midranks,
    pool_and_rank,
    split_at_joint_median,
)
from .region import (
    Rectangle,
    UniformPair,
    clip_to_region,
    envelope,
    in_region,
    uniform_pair_for,
)
from .simlab import (
    SETTINGS,
    ExperimentConfig,
    ResultRow,
    ResultTable,
    run_coverage,
    run_power,
    run_type1,
)
