"""
Estimation Module
Kernels with vanishing moments and the drift / multiplier estimators
"""

from .kernels import (
    Kernel,
    make_kernel,
    build_kernel,
    kernel_moment,
    kernel_alpha_integrals,
    kernel_roots,
    rescaled_moment,
)
from .estimators import (
    DriftEstimate,
    MultiplierEstimate,
    YPath,
    valid_band,
    estimate_drift,
    estimate_theta_hat,
    estimate_drift_curve,
    build_y_path,
    estimate_multiplier,
    drift_bandwidth,
    drift_rate_exponent,
    multiplier_bandwidth,
    multiplier_rate_exponent,
    drift_error_bound_terms,
    multiplier_error_bound_terms,
    complement_probability_bound,
    estimates_frame,
)

__all__ = [
    'Kernel',
    'make_kernel',
    'build_kernel',
    'kernel_moment',
    'kernel_alpha_integrals',
    'kernel_roots',
    'rescaled_moment',
    'DriftEstimate',
    'MultiplierEstimate',
    'YPath',
    'valid_band',
    'estimate_drift',
    'estimate_theta_hat',
    'estimate_drift_curve',
    'build_y_path',
    'estimate_multiplier',
    'drift_bandwidth',
    'drift_rate_exponent',
    'multiplier_bandwidth',
    'multiplier_rate_exponent',
    'drift_error_bound_terms',
    'multiplier_error_bound_terms',
    'complement_probability_bound',
    'estimates_frame',
]
