"""Outage and throughput statistics for opportunistic full-duplex relay
selection in cognitive underlay networks under Nakagami-m fading.

Closed-form end-to-end SINR CDFs, feasibility probabilities under a
primary-receiver interference constraint, a seeded Monte Carlo
cross-validator, and diversity-order slope fitting.
"""
from fdrs.specfun import (
    Accuracy,
    NonConvergenceError,
    beta_fn,
    compositions,
    kummer_m,
    ln_gamma,
    reg_lower_gamma,
    reg_upper_gamma,
    tricomi_u,
    whittaker_w,
)
from fdrs.channel import (
    ConfigError,
    LinkSpec,
    NetworkConfig,
    Protocol,
    Realization,
    sample_gamma,
    sample_realization,
    validate_config,
)
from fdrs.analytic import (
    FeasibilityDist,
    RatioParams,
    cdf_cognitive,
    cdf_idl,
    cdf_idl_dt,
    cdf_ndl,
    cdf_ratio_gamma,
    cdf_ratio_gamma_quad,
    cdf_sdf,
    feasibility_dist,
    outage,
    outage_threshold,
    throughput,
)
from fdrs.montecarlo import OutageEstimate, e2e_sinr, estimate_feasibility, estimate_outage
from fdrs.analysis import DiversityFit, SweepSpec, diversity_fit, run_sweep, validate_report

__version__ = "0.1.0"
