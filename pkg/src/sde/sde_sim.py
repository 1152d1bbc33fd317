"""
Small-noise SDE simulation: dX_t = theta(t) X_t dt + eps dZ_t.

The observed path X comes from the Euler scheme with left-endpoint drift,
the limit x_t = x0 exp(int_0^t theta) from Simpson quadrature on the same
grid, and gronwall_check compares |X_t - x_t| with e^{Lt} eps sup|Z_s|.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import cumulative_simpson

from config.settings import SimulationConfig
from src.sde.multipliers import Multiplier
from src.stable.stable_core import (
    SamplePath,
    StableParams,
    TimeGrid,
    running_sup_abs,
    simulate_levy_path,
)
from src.utils.errors import DomainError
from src.utils.smart_logger import StudyLogger

logger = StudyLogger(__name__)


@dataclass
class SdeConfig:
    """Model inputs for one simulated observation"""
    multiplier: Multiplier
    x0: float
    eps: float
    stable: StableParams
    grid: TimeGrid
    bound: Optional[float] = None  # L; defaults to the multiplier's own bound

    def __post_init__(self):
        self.stable.require_model_regime()
        if self.stable.sigma != 1.0 or self.stable.mu != 0.0:
            raise DomainError(
                f"the driving noise is standard: sigma = 1 and mu = 0, got {self.stable.to_dict()}"
            )
        if self.eps < 0.0:
            raise DomainError(f"noise level eps must be nonnegative, got {self.eps}")
        if self.bound is None:
            self.bound = self.multiplier.bound
        max_abs, ok = self.multiplier.check_bound(self.grid.horizon, self.bound)
        if not ok:
            logger.config_warning(
                f"multiplier '{self.multiplier.name}' reaches |theta| = {max_abs:.4g} on "
                f"[0, {self.grid.horizon}], above the declared bound L = {self.bound}"
            )

    @property
    def alpha(self) -> float:
        return self.stable.alpha

    @property
    def beta(self) -> float:
        return self.stable.beta


@dataclass
class GronwallReport:
    """Pointwise comparison of |X_t - x_t| with e^{Lt} eps sup_{s<=t}|Z_s|"""
    times: np.ndarray
    deviation: np.ndarray
    bound: np.ndarray
    tolerance: np.ndarray
    holds: bool

    @property
    def worst_excess(self) -> float:
        """max of deviation - bound - tolerance; nonpositive when the bound holds"""
        return float(np.max(self.deviation - self.bound - self.tolerance))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            't': self.times,
            'deviation': self.deviation,
            'bound': self.bound,
        })


def resolution_grid(horizon: float, phi: float, support_width: float,
                    points: int = SimulationConfig.MIN_WINDOW_POINTS) -> TimeGrid:
    """Grid with step <= phi * (B - A) / points, so every kernel window holds >= points nodes"""
    if phi <= 0.0 or support_width <= 0.0:
        raise DomainError(f"bandwidth and support width must be positive, got {phi}, {support_width}")
    n_steps = int(np.ceil(horizon * (points + 1) / (phi * support_width)))
    return TimeGrid(horizon, max(n_steps, 2))


def euler_path(multiplier: Multiplier, x0: float, eps: float, noise: SamplePath) -> SamplePath:
    """X_{i+1} = X_i + theta(t_i) X_i dt + eps (Z_{i+1} - Z_i), X_0 = x0

    The path is the Euler growth of x0 plus eps times a noise response that
    does not depend on eps, so eps -> X - x is linear up to the rounding of
    that one addition. With theta == 0 the path is x0 + eps (Z - Z_0) directly.
    """
    grid = noise.grid
    growth = 1.0 + multiplier(grid.times[:-1]) * grid.step

    if np.all(growth == 1.0):
        values = x0 + eps * (noise.values - noise.values[0])
    elif np.all(growth != 0.0):
        # closed form of the linear recursion: X_i = P_i x0 + eps P_i sum_{j<i} dZ_j / P_{j+1}
        products = np.concatenate(([1.0], np.cumprod(growth)))
        response = products * np.concatenate(([0.0], np.cumsum(noise.increments / products[1:])))
        values = products * x0 + eps * response
        values[0] = x0
    else:
        shocks = eps * noise.increments
        values = np.empty(grid.n_steps + 1)
        values[0] = x0
        for i in range(grid.n_steps):
            values[i + 1] = growth[i] * values[i] + shocks[i]

    return SamplePath(grid, values, label='X', metadata={'x0': x0, 'eps': eps})


def simulate_sde(cfg: SdeConfig, rng: np.random.Generator) -> Tuple[SamplePath, SamplePath]:
    """Simulate (X, Z) sharing one noise realisation"""
    noise = simulate_levy_path(cfg.alpha, cfg.beta, cfg.grid, rng)
    path = euler_path(cfg.multiplier, cfg.x0, cfg.eps, noise)
    return path, noise


def deterministic_solution(multiplier: Multiplier, x0: float, grid: TimeGrid) -> SamplePath:
    """x_t = x0 exp(int_0^t theta(s) ds), integral by composite Simpson on the grid"""
    theta = multiplier(grid.times)
    integral = cumulative_simpson(theta, dx=grid.step, initial=0.0)
    return SamplePath(grid, x0 * np.exp(integral), label='x', metadata={'x0': x0})


def gronwall_check(X: SamplePath, x: SamplePath, Z: SamplePath, L: float, eps: float) -> GronwallReport:
    """Check |X_t - x_t| <= e^{Lt} eps sup_{s<=t}|Z_s| at every grid point"""
    X.require_same_grid(x, Z)
    if L < 0.0 or eps < 0.0:
        raise DomainError(f"L and eps must be nonnegative, got L = {L}, eps = {eps}")
    times = X.times
    deviation = np.abs(X.values - x.values)
    bound = np.exp(L * times) * eps * running_sup_abs(Z)
    tolerance = SimulationConfig.EULER_RTOL * (1.0 + np.abs(X.values))
    holds = bool(np.all(deviation <= bound + tolerance))
    return GronwallReport(times, deviation, bound, tolerance, holds)


def deviation_bound(L: float, horizon: float, eps: float, alpha: float) -> float:
    """e^{LT} eps T^(1/alpha): the bound on sup_t E|X_t - x_t| up to the moment constant"""
    return float(np.exp(L * horizon) * eps * horizon ** (1.0 / alpha))
