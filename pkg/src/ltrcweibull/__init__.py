"""Weibull competing-risks inference for left-truncated right-censored data.

Lifetimes are minima of two latent Weibull failure times observed subject to
left truncation and right censoring. The package provides maximum likelihood
fits with a common or per-cause shape, a likelihood-ratio test between the
two, parametric bootstrap confidence intervals, conjugate and sampled
posterior inference with credible intervals, and a Monte Carlo harness for
studying the operating characteristics of all of the above.
"""

__version__ = "0.1.0"

from .bayes import (
    DGParams,
    GammaPrior,
    PosteriorDraws,
    PriorSpec,
    SeparatePriorSpec,
    bayes_estimates_mc,
    bayes_known_alpha,
    credible_trapezoid,
    d_tilde_alpha,
    dg_moments,
    dg_sample,
    hpd_interval,
    log_posterior_alpha,
    posterior_dg,
    sample_posterior,
    sample_posterior_separate,
    symmetric_interval,
)
from .bootstrap import (
    BootstrapDistribution,
    bc_interval,
    bootstrap_distribution,
    percentile_interval,
    resample_dataset,
)
from .data_model import (
    CAUSE_1,
    CAUSE_2,
    CENSORED,
    Dataset,
    Observation,
    RawTransformerRecord,
    load_transformer_dataset,
    parse_transformer_csv,
    to_dataset,
)
from .errors import (
    ConsistencyError,
    ConvergenceError,
    DegenerateDataError,
    FallbackSamplerWarning,
    InvalidParameterError,
    LtrcError,
    ParseError,
    UnstableBootstrapError,
)
from .intervals import ConfidenceInterval, floor_at_zero, normal_quantile
from .mle_common import (
    CommonShapeFit,
    d_alpha,
    log_likelihood,
    profile_loglik,
    solve_alpha,
    unimodality_certificate,
    w_functions,
)
from .mle_separate import (
    LrtEqualShapes,
    SeparateShapeFit,
    fit_separate,
    log_likelihood_separate,
    lrt_equal_shapes,
)
from .simstudy import SimConfig, SimResult, generate_unit, run_study, to_rows

__all__ = [
    "__version__",
    "CAUSE_1",
    "CAUSE_2",
    "CENSORED",
    "BootstrapDistribution",
    "CommonShapeFit",
    "ConfidenceInterval",
    "ConsistencyError",
    "ConvergenceError",
    "DGParams",
    "Dataset",
    "DegenerateDataError",
    "FallbackSamplerWarning",
    "GammaPrior",
    "InvalidParameterError",
    "LrtEqualShapes",
    "LtrcError",
    "Observation",
    "ParseError",
    "PosteriorDraws",
    "PriorSpec",
    "RawTransformerRecord",
    "SeparatePriorSpec",
    "SeparateShapeFit",
    "SimConfig",
    "SimResult",
    "UnstableBootstrapError",
    "bayes_estimates_mc",
    "bayes_known_alpha",
    "bc_interval",
    "bootstrap_distribution",
    "credible_trapezoid",
    "d_alpha",
    "d_tilde_alpha",
    "dg_moments",
    "dg_sample",
    "fit_separate",
    "floor_at_zero",
    "generate_unit",
    "hpd_interval",
    "load_transformer_dataset",
    "log_likelihood",
    "log_likelihood_separate",
    "log_posterior_alpha",
    "lrt_equal_shapes",
    "normal_quantile",
    "parse_transformer_csv",
    "percentile_interval",
    "posterior_dg",
    "profile_loglik",
    "resample_dataset",
    "run_study",
    "sample_posterior",
    "sample_posterior_separate",
    "solve_alpha",
    "symmetric_interval",
    "to_dataset",
    "to_rows",
    "unimodality_certificate",
    "w_functions",
]
