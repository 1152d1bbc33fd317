"""
Kernel estimators of the drift theta(t) x_t and of the multiplier theta(t).

Both are left-endpoint Riemann-Stieltjes sums over path increments:

    drift:       (1/phi) sum_i G((t_i - t)/phi) (X_{i+1} - X_i)
    multiplier:  I(A) (1/phi) sum_i G((t - t_i)/phi) (Y_{i+1} - Y_i)

where dY = I(A_t) X_t^{-1} dX_t is built from the observed path and
A_t = {inf_{s<=t} X_s >= x0 e^{-Lt} / 2}.
"""

from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np
import pandas as pd

from config.settings import SimulationConfig
from src.estimation.kernels import Kernel
from src.stable.stable_core import SamplePath
from src.utils.errors import DomainError, ResolutionError, WindowError


@dataclass(frozen=True)
class DriftEstimate:
    """Estimate of theta(t) x_t"""
    t: float
    value: float
    bandwidth: float
    window: Tuple[float, float]

    def to_dict(self) -> dict:
        return {'t': self.t, 'estimate': self.value, 'bandwidth': self.bandwidth}


@dataclass(frozen=True)
class MultiplierEstimate:
    """Estimate of theta(t); zero whenever the event A fails"""
    t: float
    value: float
    event_A_holds: bool
    bandwidth: float

    def to_dict(self) -> dict:
        return {'t': self.t, 'estimate': self.value, 'bandwidth': self.bandwidth,
                'event_A_holds': self.event_A_holds}


@dataclass
class YPath:
    """The transformed process Y with its good-event indicator"""
    path: SamplePath
    indicator: np.ndarray
    holds: bool


def valid_band(G: Kernel, phi: float, horizon: float) -> Tuple[float, float]:
    """[c_eps, d_eps] = [-A phi, T - B phi]: the t for which the drift window stays inside [0, T]"""
    if phi <= 0.0:
        raise DomainError(f"bandwidth must be positive, got {phi}")
    return -G.lower * phi, horizon - G.upper * phi


def _window_indices(path: SamplePath, lo: float, hi: float, t: float, phi: float,
                    min_points: int) -> np.ndarray:
    horizon = path.grid.horizon
    slack = SimulationConfig.WINDOW_EDGE_TOL * max(1.0, horizon)
    if lo < -slack or hi > horizon + slack:
        raise WindowError(
            f"kernel window [{lo:.6g}, {hi:.6g}] at t = {t} with phi = {phi} leaves [0, {horizon}]"
        )
    indices = path.grid.window_indices(lo, hi)
    if indices.size < min_points:
        raise ResolutionError(
            f"only {indices.size} grid points inside the kernel window at t = {t} "
            f"(phi = {phi}, step = {path.grid.step:.3g}); need at least {min_points}"
        )
    return indices


def estimate_drift(X: SamplePath, G: Kernel, phi: float, t: float,
                   min_points: int = SimulationConfig.MIN_WINDOW_POINTS) -> DriftEstimate:
    """(1/phi) int_0^T G((tau - t)/phi) dX_tau, discretised at left endpoints"""
    if phi <= 0.0:
        raise DomainError(f"bandwidth must be positive, got {phi}")
    lo, hi = t + G.lower * phi, t + G.upper * phi
    indices = _window_indices(X, lo, hi, t, phi, min_points)
    times = X.times[indices]
    increments = X.values[indices + 1] - X.values[indices]
    value = float(np.sum(G((times - t) / phi) * increments) / phi)
    return DriftEstimate(t=float(t), value=value, bandwidth=float(phi), window=(lo, hi))


def estimate_theta_hat(X: SamplePath, G: Kernel, phi: float, t: float,
                       min_points: int = SimulationConfig.MIN_WINDOW_POINTS) -> float:
    """theta_hat_t = (theta_hat_t X_t) / X_t with X_t read off the observed path"""
    level = X.value_at(t)
    if level == 0.0:
        raise DomainError(f"observed path is zero at t = {t}; theta_hat is undefined")
    return estimate_drift(X, G, phi, t, min_points).value / level


def estimate_drift_curve(X: SamplePath, G: Kernel, phi: float, ts: Iterable[float],
                         min_points: int = SimulationConfig.MIN_WINDOW_POINTS) -> List[DriftEstimate]:
    return [estimate_drift(X, G, phi, t, min_points) for t in ts]


def build_y_path(X: SamplePath, x0: float, L: float) -> YPath:
    """
    Build Y from the observed path via dY = I(A_t) X_t^{-1} dX_t.

    Args:
        X: observed path
        x0: initial value, must be positive
        L: known bound on |theta|

    Returns:
        YPath with Y_0 = 0, the per-grid-point indicator of A_t and I(A_T)
    """
    if not x0 > 0.0:
        raise DomainError(f"the multiplier estimator needs x0 > 0, got {x0}")
    if L < 0.0:
        raise DomainError(f"bound L must be nonnegative, got {L}")

    times = X.times
    threshold = 0.5 * x0 * np.exp(-L * times)
    indicator = np.minimum.accumulate(X.values) >= threshold

    left = X.values[:-1]
    active = indicator[:-1]
    ratios = np.zeros(X.grid.n_steps)
    np.divide(X.increments, left, out=ratios, where=active)
    values = np.concatenate(([0.0], np.cumsum(ratios)))

    path = SamplePath(X.grid, values, label='Y', metadata={'x0': x0, 'L': L})
    return YPath(path=path, indicator=indicator, holds=bool(indicator[-1]))


def estimate_multiplier(Y: SamplePath, A_holds: bool, G: Kernel, phi: float, t: float,
                        min_points: int = SimulationConfig.MIN_WINDOW_POINTS) -> MultiplierEstimate:
    """I(A) (1/phi) int_0^T G((t - s)/phi) dY_s, discretised at left endpoints"""
    if phi <= 0.0:
        raise DomainError(f"bandwidth must be positive, got {phi}")
    lo, hi = t - G.upper * phi, t - G.lower * phi
    indices = _window_indices(Y, lo, hi, t, phi, min_points)
    if not A_holds:
        return MultiplierEstimate(t=float(t), value=0.0, event_A_holds=False, bandwidth=float(phi))
    times = Y.times[indices]
    increments = Y.values[indices + 1] - Y.values[indices]
    value = float(np.sum(G((t - times) / phi) * increments) / phi)
    return MultiplierEstimate(t=float(t), value=value, event_A_holds=True, bandwidth=float(phi))


def _check_regime(eps: float, alpha: float, gaussian_edge: bool = False) -> None:
    if not eps > 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    if gaussian_edge and alpha == 2.0:
        return
    if not (1.0 < alpha < 2.0):
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")


def drift_bandwidth(eps: float, k: int, alpha: float) -> float:
    """phi_eps = eps^(1 / (k + 2 - 1/alpha)), alpha = 2 included"""
    _check_regime(eps, alpha, gaussian_edge=True)
    if k < 0:
        raise DomainError(f"kernel order must be nonnegative, got {k}")
    return float(eps ** (1.0 / (k + 2.0 - 1.0 / alpha)))


def drift_rate_exponent(k: int, alpha: float) -> float:
    """(k + 1) / (k + 2 - 1/alpha)"""
    if not (1.0 < alpha <= 2.0):
        raise DomainError(f"alpha must lie in (1, 2], got {alpha}")
    if k < 0:
        raise DomainError(f"kernel order must be nonnegative, got {k}")
    return (k + 1.0) / (k + 2.0 - 1.0 / alpha)


def multiplier_bandwidth(eps: float, alpha: float, rho: float) -> float:
    """phi_eps = eps^(alpha / rho)"""
    _check_regime(eps, alpha)
    if not rho > alpha - 1.0:
        raise DomainError(f"smoothness rho must exceed alpha - 1 = {alpha - 1.0}, got {rho}")
    return float(eps ** (alpha / rho))


def multiplier_rate_exponent(alpha: float, rho: float) -> float:
    """(rho - alpha + 1) / rho, the dominant exponent of the multiplier error"""
    if not (1.0 < alpha < 2.0):
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    if not rho > alpha - 1.0:
        raise DomainError(f"smoothness rho must exceed alpha - 1 = {alpha - 1.0}, got {rho}")
    return (rho - alpha + 1.0) / rho


def drift_error_bound_terms(eps: float, phi: float, k: int, alpha: float) -> dict:
    """Stochastic, bias and deviation terms of the drift error bound"""
    return {
        'stochastic': eps * phi ** (1.0 / alpha - 1.0),
        'bias': phi ** (k + 1),
        'deviation': eps,
    }


def multiplier_error_bound_terms(eps: float, phi: float, rho: float, alpha: float) -> dict:
    """Bias, bad-event and stochastic terms of the multiplier error bound"""
    return {
        'bias': phi ** rho,
        'bad_event': eps ** alpha,
        'stochastic': eps * phi ** (1.0 / alpha - 1.0),
    }


def complement_probability_bound(x0: float, eps: float, L: float, horizon: float, alpha: float) -> float:
    """Shape T (x0 e^{-2LT} / (2 eps))^(-alpha) / (alpha (2 - alpha)) of the bound on P(not A)

    The maximal-inequality constant is unknown and taken as 1, so only the
    dependence on eps is meaningful.
    """
    _check_regime(eps, alpha)
    level = x0 * np.exp(-2.0 * L * horizon) / (2.0 * eps)
    return float(horizon * level ** (-alpha) / (alpha * (2.0 - alpha)))


def estimates_frame(estimates: Iterable, truth: Iterable[float]) -> pd.DataFrame:
    """CSV-ready table (t, estimate, truth, abs_error, bandwidth)"""
    rows = []
    for estimate, true_value in zip(estimates, truth):
        rows.append({
            't': estimate.t,
            'estimate': estimate.value,
            'truth': float(true_value),
            'abs_error': abs(estimate.value - float(true_value)),
            'bandwidth': estimate.bandwidth,
        })
    return pd.DataFrame(rows, columns=['t', 'estimate', 'truth', 'abs_error', 'bandwidth'])
