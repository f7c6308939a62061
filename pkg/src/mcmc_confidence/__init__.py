"""Honest Monte Carlo error assessment for MCMC output.

Batch-means and overlapping-batch-means standard errors, subsampling
errors for quantiles, fixed-width sequential stopping rules, running
diagnostics, kernel density estimation, and the example samplers that
exercise them, all behind a deterministic seeded random source.
"""

from .diagnostics import (
    Kde1D,
    Kde2D,
    acf,
    kde_1d,
    kde_2d,
    rb_marginal_mu,
    rb_second_moment,
    running_mcse,
    running_mean,
    running_quantile_se,
    running_quantiles,
    silverman_bandwidth,
)
from .distributions import (
    ln_gamma,
    normal_cdf,
    normal_pdf,
    normal_quantile,
    reg_inc_beta,
    t4_pdf,
    t_cdf,
    t_quantile,
)
from .mcse import (
    Interval,
    McseEstimate,
    QuantileSeSet,
    batch_layout,
    ci_mean,
    ci_quantiles,
    mcse_bm,
    mcse_obm,
    quantile_type1,
    quantiles_type1,
    subsample_quantile_se,
)
from .rng import Rng
from .samplers import (
    Ar1Params,
    Ar1Source,
    Chain,
    NormalPosteriorParams,
    TdaState,
    ar1_extend,
    ar1_run,
    ar1_step,
    nv_gibbs_run,
    nv_gibbs_step,
    tda_run,
    tda_step,
)
from .stopping import StoppingConfig, StoppingResult, fixed_width_mean, fixed_width_quantiles

__version__ = "0.1.0"
