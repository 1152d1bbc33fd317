"""
Stable Module
Stable laws, characteristic functions and Levy path generation
"""

from .random_streams import StreamFactory, make_stream
from .stable_core import (
    StableParams,
    TimeGrid,
    SamplePath,
    sample_standard_stable,
    sample_stable,
    stable_cf,
    simulate_levy_path,
    empirical_cf,
    running_sup_abs,
    moment_bound_profile,
)

__all__ = [
    'StreamFactory',
    'make_stream',
    'StableParams',
    'TimeGrid',
    'SamplePath',
    'sample_standard_stable',
    'sample_stable',
    'stable_cf',
    'simulate_levy_path',
    'empirical_cf',
    'running_sup_abs',
    'moment_bound_profile',
]
