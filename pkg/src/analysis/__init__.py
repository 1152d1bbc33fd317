"""
Analysis Module
Limit law of the drift estimator and distribution checks
"""

from .asymptotics import (
    LimitLawSpec,
    KsReport,
    bias_constant_m,
    drift_derivative,
    limit_law_sample,
    limit_law_reference,
    ks_critical_value,
    ks_two_sample,
    ks_test,
    kernel_integral_samples,
    time_change_check,
    ks_table,
)

__all__ = [
    'LimitLawSpec',
    'KsReport',
    'bias_constant_m',
    'drift_derivative',
    'limit_law_sample',
    'limit_law_reference',
    'ks_critical_value',
    'ks_two_sample',
    'ks_test',
    'kernel_integral_samples',
    'time_change_check',
    'ks_table',
]
