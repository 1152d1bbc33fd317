"""
SDE Module
Linear multipliers and small-noise SDE simulation
"""

from .multipliers import (
    Multiplier,
    constant_multiplier,
    sine_multiplier,
    rational_multiplier,
    make_multiplier,
)
from .sde_sim import (
    SdeConfig,
    GronwallReport,
    resolution_grid,
    euler_path,
    simulate_sde,
    deterministic_solution,
    gronwall_check,
    deviation_bound,
)

__all__ = [
    'Multiplier',
    'constant_multiplier',
    'sine_multiplier',
    'rational_multiplier',
    'make_multiplier',
    'SdeConfig',
    'GronwallReport',
    'resolution_grid',
    'euler_path',
    'simulate_sde',
    'deterministic_solution',
    'gronwall_check',
    'deviation_bound',
]
