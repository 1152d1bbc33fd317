"""
Study configuration: flat `key = value` files parsed with python-dotenv.

Lists are comma separated; `#` starts a comment. Validation runs before any
simulation and raises ConfigError naming the offending key.
"""

from dataclasses import dataclass, field, fields, replace
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from dotenv import dotenv_values

from config.settings import KernelConfig, SimulationConfig, StudyDefaults, StudyKind
from src.estimation.estimators import (
    drift_bandwidth,
    drift_rate_exponent,
    multiplier_bandwidth,
    multiplier_rate_exponent,
    valid_band,
)
from src.estimation.kernels import Kernel, make_kernel
from src.sde.multipliers import MULTIPLIER_BUILDERS, Multiplier, make_multiplier
from src.sde.sde_sim import resolution_grid
from src.stable.stable_core import TimeGrid
from src.utils.errors import ConfigError, StableDriftError
from src.utils.smart_logger import get_study_logger

logger = get_study_logger(__name__)

REQUIRED_KEYS: Dict[StudyKind, Tuple[str, ...]] = {
    StudyKind.CONSISTENCY: ('kind', 'multiplier', 'alpha', 'eps_list', 'bandwidth_power'),
    StudyKind.DRIFT_RATE: ('kind', 'multiplier', 'alpha', 'k', 'eps_list'),
    StudyKind.LIMIT_LAW: ('kind', 'multiplier', 'alpha', 'k', 'eps_list'),
    StudyKind.MULTIPLIER_RATE: ('kind', 'multiplier', 'alpha', 'rho', 'x0', 'eps_list'),
    StudyKind.GRONWALL: ('kind', 'multiplier', 'alpha', 'eps_list'),
}


def _as_float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"config key '{key}' must be a number, got {raw!r}", key) from None


def _as_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"config key '{key}' must be an integer, got {raw!r}", key) from None


def _as_float_list(key: str, raw: str) -> Tuple[float, ...]:
    items = [item.strip() for item in raw.split(',') if item.strip()]
    if not items:
        raise ConfigError(f"config key '{key}' must list at least one number", key)
    return tuple(_as_float(key, item) for item in items)


def _as_str(key: str, raw: str) -> str:
    return raw.strip().lower()


PARSERS: Dict[str, Callable[[str, str], object]] = {
    'multiplier': _as_str,
    'multiplier_a': _as_float,
    'multiplier_b': _as_float,
    'bound_L': _as_float,
    'x0': _as_float,
    'alpha': _as_float,
    'beta': _as_float,
    'k': _as_int,
    'rho': _as_float,
    'kernel': _as_str,
    'eps_list': _as_float_list,
    'eps': _as_float,
    'n_reps': _as_int,
    'horizon': _as_float,
    'points_per_window': _as_int,
    'n_steps': _as_int,
    't_eval': _as_float_list,
    'seed': _as_int,
    'bandwidth_power': _as_float,
    'bias_bandwidth': _as_float,
    'slope_tolerance': _as_float,
    'ks_target': _as_float,
    'estimator': _as_str,
    'bandwidth': _as_float,
}


@dataclass(frozen=True)
class StudyConfig:
    """One Monte-Carlo study: model, estimator, eps ladder and replication"""
    kind: StudyKind
    multiplier: str = 'sine'
    multiplier_a: float = 1.0
    multiplier_b: float = 1.0
    bound_L: Optional[float] = None
    x0: float = 1.0
    alpha: float = 1.5
    beta: float = 0.0
    k: int = 0
    rho: Optional[float] = None
    kernel: str = StudyDefaults.KERNEL
    eps_list: Tuple[float, ...] = ()
    eps: Optional[float] = None
    n_reps: int = StudyDefaults.N_REPS_RATE
    horizon: float = SimulationConfig.DEFAULT_HORIZON
    points_per_window: int = SimulationConfig.MIN_WINDOW_POINTS
    n_steps: Optional[int] = None
    t_eval: Tuple[float, ...] = ()
    seed: int = 0
    bandwidth_power: Optional[float] = None
    bias_bandwidth: float = StudyDefaults.BIAS_BANDWIDTH
    slope_tolerance: Optional[float] = None
    ks_target: float = StudyDefaults.KS_TARGET
    estimator: str = 'drift'
    bandwidth: Optional[float] = None
    source: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        self.validate()

    # -- derived model objects -------------------------------------------------

    def make_multiplier(self) -> Multiplier:
        return make_multiplier(self.multiplier, self.multiplier_a, self.multiplier_b)

    @property
    def bound(self) -> float:
        """The known bound L; defaults to the multiplier's documented bound"""
        if self.bound_L is not None:
            return self.bound_L
        return self.make_multiplier().bound

    @property
    def kernel_order(self) -> int:
        """k for the drift studies; ceil(rho) - 1 vanishing moments for the multiplier study"""
        if self.kind == StudyKind.MULTIPLIER_RATE and self.rho is not None:
            return max(int(np.ceil(self.rho)) - 1, 0)
        return self.k

    def make_kernel(self) -> Kernel:
        return make_kernel(self.kernel_order, self.kernel)

    @property
    def uses_multiplier_estimator(self) -> bool:
        return self.kind == StudyKind.MULTIPLIER_RATE or self.estimator == 'multiplier'

    @property
    def simulation_eps(self) -> float:
        """Noise level for single-path commands: eps, else the smallest entry of eps_list"""
        if self.eps is not None:
            return self.eps
        return self.eps_list[-1]

    # -- bandwidths, targets and grids ----------------------------------------

    def bandwidth_for(self, eps: float) -> float:
        """phi_eps by the study's rule; an explicit `bandwidth` key wins"""
        if self.bandwidth is not None:
            return self.bandwidth
        if eps == 0.0:
            return self.bias_bandwidth
        if self.kind == StudyKind.CONSISTENCY:
            return float(eps ** self.bandwidth_power)
        if self.uses_multiplier_estimator:
            return multiplier_bandwidth(eps, self.alpha, self.rho)
        return drift_bandwidth(eps, self.k, self.alpha)

    def bandwidths(self) -> List[float]:
        ladder = self.eps_list or (self.simulation_eps,)
        return [self.bandwidth_for(eps) for eps in ladder]

    @property
    def target_exponent(self) -> float:
        if self.kind == StudyKind.MULTIPLIER_RATE:
            return multiplier_rate_exponent(self.alpha, self.rho)
        return drift_rate_exponent(self.k, self.alpha)

    @property
    def tolerance(self) -> float:
        if self.slope_tolerance is not None:
            return self.slope_tolerance
        if self.kind == StudyKind.MULTIPLIER_RATE:
            return StudyDefaults.MULTIPLIER_SLOPE_TOLERANCE
        return StudyDefaults.DRIFT_SLOPE_TOLERANCE

    def make_grid(self, phi: Optional[float] = None) -> TimeGrid:
        """Shared grid of the study, sized by the resolution rule for the smallest bandwidth"""
        if self.n_steps is not None:
            return TimeGrid(self.horizon, self.n_steps)
        if phi is None:
            if self.kind == StudyKind.GRONWALL:
                return TimeGrid(self.horizon, SimulationConfig.DEFAULT_N_STEPS)
            phi = min(self.bandwidths())
        return self.make_grid_for_rule(phi)

    def evaluation_times(self) -> Tuple[float, ...]:
        """t_eval, or BAND_POINTS equispaced points of [0.2T, 0.8T] clipped to the valid band"""
        if self.t_eval:
            return self.t_eval
        lo_frac, hi_frac = StudyDefaults.BAND_FRACTIONS
        lo, hi = lo_frac * self.horizon, hi_frac * self.horizon
        lower, upper = KernelConfig.SUPPORT
        phi = max(self.bandwidths())
        lo = max(lo, -lower * phi, upper * phi)
        hi = min(hi, self.horizon - upper * phi, self.horizon + lower * phi)
        return tuple(float(t) for t in np.linspace(lo, hi, StudyDefaults.BAND_POINTS))

    # -- validation -------------------------------------------------------------

    def validate(self) -> None:
        if self.multiplier not in MULTIPLIER_BUILDERS:
            raise ConfigError(
                f"unknown multiplier '{self.multiplier}', expected one of {sorted(MULTIPLIER_BUILDERS)}",
                'multiplier',
            )
        if self.kernel not in KernelConfig.FAMILIES:
            raise ConfigError(f"unknown kernel '{self.kernel}', expected one of {KernelConfig.FAMILIES}", 'kernel')
        if self.estimator not in ('drift', 'multiplier'):
            raise ConfigError(f"estimator must be 'drift' or 'multiplier', got '{self.estimator}'", 'estimator')
        if not (1.0 < self.alpha < 2.0 or self.alpha == 2.0):
            raise ConfigError(f"alpha must lie in (1, 2) or equal 2, got {self.alpha}", 'alpha')
        if self.alpha == 2.0 and self.kind in (StudyKind.DRIFT_RATE, StudyKind.MULTIPLIER_RATE):
            raise ConfigError("rate studies need 1 < alpha < 2", 'alpha')
        if not (-1.0 <= self.beta <= 1.0):
            raise ConfigError(f"beta must lie in [-1, 1], got {self.beta}", 'beta')
        if self.k < 0:
            raise ConfigError(f"k must be nonnegative, got {self.k}", 'k')
        if not self.horizon > 0.0:
            raise ConfigError(f"horizon must be positive, got {self.horizon}", 'horizon')
        if self.n_reps < StudyDefaults.MIN_REPLICATES:
            raise ConfigError(
                f"n_reps must be at least {StudyDefaults.MIN_REPLICATES}, got {self.n_reps}", 'n_reps'
            )
        if self.points_per_window < 1:
            raise ConfigError(f"points_per_window must be positive, got {self.points_per_window}",
                              'points_per_window')
        if self.bound_L is not None and self.bound_L < 0.0:
            raise ConfigError(f"bound_L must be nonnegative, got {self.bound_L}", 'bound_L')
        if self.bandwidth is not None and not self.bandwidth > 0.0:
            raise ConfigError(f"bandwidth must be positive, got {self.bandwidth}", 'bandwidth')
        if not self.bias_bandwidth > 0.0:
            raise ConfigError(f"bias_bandwidth must be positive, got {self.bias_bandwidth}", 'bias_bandwidth')

        self._validate_eps_list()

        if self.kind == StudyKind.CONSISTENCY:
            q = self.bandwidth_power
            if q is None or not (0.0 < q < 1.0):
                # phi_eps = eps^q needs phi -> 0 and eps / phi -> 0
                raise ConfigError(f"bandwidth_power q must satisfy 0 < q < 1, got {q}", 'bandwidth_power')
        if self.kind in (StudyKind.DRIFT_RATE, StudyKind.MULTIPLIER_RATE):
            if len(self.eps_list) < StudyDefaults.MIN_SLOPE_POINTS:
                raise ConfigError(
                    f"a slope fit needs at least {StudyDefaults.MIN_SLOPE_POINTS} eps values, "
                    f"got {len(self.eps_list)}",
                    'eps_list',
                )
        if self.uses_multiplier_estimator:
            if self.rho is None or not self.rho > self.alpha - 1.0:
                raise ConfigError(f"rho must exceed alpha - 1 = {self.alpha - 1.0}, got {self.rho}", 'rho')
            if not self.x0 > 0.0:
                raise ConfigError(f"the multiplier estimator needs x0 > 0, got {self.x0}", 'x0')

        multiplier = self.make_multiplier()
        try:
            self.make_kernel()
        except StableDriftError as e:
            raise ConfigError(str(e), 'kernel') from e

        self._validate_smoothness(multiplier)
        if self.kind != StudyKind.GRONWALL and self.eps_list:
            self._validate_grid_and_band()

        if self.bound_L is not None:
            max_abs, ok = multiplier.check_bound(self.horizon, self.bound_L)
            if not ok:
                logger.config_warning(
                    f"multiplier '{self.multiplier}' reaches |theta| = {max_abs:.4g}, above bound_L = {self.bound_L}"
                )

    def _validate_eps_list(self) -> None:
        if not self.eps_list:
            if self.eps is None:
                raise ConfigError("config needs eps_list (or eps for single-path commands)", 'eps_list')
            return
        eps = np.asarray(self.eps_list)
        if np.any(np.diff(eps) >= 0.0):
            raise ConfigError(f"eps_list must be strictly decreasing, got {list(self.eps_list)}", 'eps_list')
        smallest = eps[-1]
        if self.kind == StudyKind.CONSISTENCY:
            if smallest < 0.0:
                raise ConfigError(f"eps values must be nonnegative, got {list(self.eps_list)}", 'eps_list')
        elif not smallest > 0.0:
            raise ConfigError(f"eps values must be positive, got {list(self.eps_list)}", 'eps_list')
        if self.eps is not None and self.eps < 0.0:
            raise ConfigError(f"eps must be nonnegative, got {self.eps}", 'eps')

    def _validate_smoothness(self, multiplier: Multiplier) -> None:
        if self.kind == StudyKind.LIMIT_LAW and multiplier.k_max < self.k + 1:
            raise ConfigError(
                f"bias constant needs theta^({self.k + 1}), '{self.multiplier}' stops at order {multiplier.k_max}",
                'k',
            )

    def _validate_grid_and_band(self) -> None:
        phi_min = min(self.bandwidths())
        if self.n_steps is not None:
            needed = self.make_grid_for_rule(phi_min).n_steps
            if self.n_steps < needed:
                raise ConfigError(
                    f"n_steps = {self.n_steps} is too coarse for bandwidth {phi_min:.4g}; "
                    f"the resolution rule needs at least {needed}",
                    'n_steps',
                )
        lower, upper = valid_band(self.make_kernel(), max(self.bandwidths()), self.horizon)
        if lower > upper:
            raise ConfigError(
                f"bandwidth {max(self.bandwidths()):.4g} leaves no valid evaluation band in [0, {self.horizon}]",
                'eps_list',
            )
        for t in self.t_eval:
            if not (lower - SimulationConfig.WINDOW_EDGE_TOL <= t <= upper + SimulationConfig.WINDOW_EDGE_TOL):
                raise ConfigError(
                    f"t_eval point {t} lies outside the valid band [{lower:.4g}, {upper:.4g}] "
                    f"for the largest bandwidth",
                    't_eval',
                )

    def make_grid_for_rule(self, phi: float) -> TimeGrid:
        width = KernelConfig.SUPPORT[1] - KernelConfig.SUPPORT[0]
        return resolution_grid(self.horizon, phi, width, self.points_per_window)

    def with_overrides(self, **overrides) -> "StudyConfig":
        return replace(self, **{key: value for key, value in overrides.items() if value is not None})


def parse_study_config(values: Dict[str, Optional[str]], source: Optional[str] = None) -> StudyConfig:
    """Build a StudyConfig from raw key/value strings"""
    raw = {key.strip(): (value or '').strip() for key, value in values.items()}
    if not raw.get('kind'):
        raise ConfigError("config is missing required key 'kind'", 'kind')
    try:
        kind = StudyKind.parse(raw['kind'])
    except ValueError:
        raise ConfigError(
            f"unknown study kind '{raw['kind']}', expected one of {[k.value for k in StudyKind]}", 'kind'
        ) from None

    for key in REQUIRED_KEYS[kind]:
        if not raw.get(key):
            if key == 'eps_list' and raw.get('eps'):
                continue
            raise ConfigError(f"config is missing required key '{key}' for kind '{kind.value}'", key)

    known = {f.name for f in fields(StudyConfig)}
    kwargs = {'kind': kind, 'source': source}
    for key, value in raw.items():
        if key == 'kind':
            continue
        if key not in known or key == 'source':
            logger.config_warning(f"ignoring unknown config key '{key}'")
            continue
        if value == '':
            continue
        kwargs[key] = PARSERS[key](key, value)

    if 'n_reps' not in kwargs and kind == StudyKind.LIMIT_LAW:
        kwargs['n_reps'] = StudyDefaults.N_REPS_DIST
    return StudyConfig(**kwargs)


def load_study_config(path: str) -> StudyConfig:
    """Read a flat `key = value` file"""
    try:
        with open(path, encoding='utf-8') as handle:
            handle.read(1)
    except OSError as e:
        raise ConfigError(f"cannot read config file '{path}': {e}", 'config') from e
    values = dotenv_values(path)
    logger.debug(f"Loaded {len(values)} keys from {path}")
    return parse_study_config(values, source=path)
