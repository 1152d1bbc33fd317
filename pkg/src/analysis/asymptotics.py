"""
Limit law of the normalised drift-estimator error and distribution checks.

The rescaled error phi^-(k+1) (theta_hat_t X_t - theta(t) x_t) converges in
law to

    W = (int G_+^a)^(1/a) U_1 - (int G_-^a)^(1/a) U_2 + m

with U_1, U_2 independent S_a(1, beta, 0) and m the kernel bias constant.
Integrals run over the kernel support.
"""

from dataclasses import dataclass
from math import comb, factorial
from typing import Optional

import numpy as np
import pandas as pd
from scipy import stats

from config.settings import StudyDefaults
from src.estimation.kernels import Kernel, kernel_alpha_integrals
from src.sde.multipliers import Multiplier
from src.stable.random_streams import DIRECT_CHANNEL, LIMIT_LAW_CHANNEL, PATH_CHANNEL, StreamFactory
from src.stable.stable_core import TimeGrid, levy_increments, sample_standard_stable
from src.utils.errors import DomainError, EmptyInputError, WindowError
from src.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class LimitLawSpec:
    """pos_weight U_1 - neg_weight U_2 + shift"""
    pos_weight: float
    neg_weight: float
    shift: float
    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if self.pos_weight < 0.0 or self.neg_weight < 0.0:
            raise DomainError(f"limit-law weights must be nonnegative, got {self.pos_weight}, {self.neg_weight}")
        if not (0.0 < self.alpha <= 2.0):
            raise DomainError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not (-1.0 <= self.beta <= 1.0):
            raise DomainError(f"beta must lie in [-1, 1], got {self.beta}")

    @classmethod
    def from_kernel(cls, G: Kernel, alpha: float, beta: float = 0.0, shift: float = 0.0) -> "LimitLawSpec":
        _, pos, neg = kernel_alpha_integrals(G, alpha)
        return cls(
            pos_weight=pos ** (1.0 / alpha),
            neg_weight=neg ** (1.0 / alpha),
            shift=float(shift),
            alpha=alpha,
            beta=beta,
        )


@dataclass(frozen=True)
class KsReport:
    """Two-sample Kolmogorov-Smirnov comparison against the asymptotic critical value"""
    statistic: float
    threshold: float
    passed: bool
    pvalue: float
    n_a: int
    n_b: int

    def to_dict(self) -> dict:
        return {
            'ks_statistic': self.statistic,
            'threshold': self.threshold,
            'pass': self.passed,
            'pvalue': self.pvalue,
        }


def _path_derivatives(mult: Multiplier, x0: float, t: float, order: int) -> np.ndarray:
    """x, x', ..., x^(order) at t for x_s = x0 exp(int_0^s theta).

    x^(n) = x B_n(g', ..., g^(n)) with g' = theta, and the complete Bell
    polynomials obey B_{n+1} = sum_i C(n, i) B_{n-i} g^(i+1).
    """
    theta_derivs = [float(mult.deriv(t, j)) for j in range(order)]
    bell = [1.0]
    for n in range(order):
        bell.append(sum(comb(n, i) * bell[n - i] * theta_derivs[i] for i in range(n + 1)))
    x_t = x0 * float(np.exp(mult.integral(t)))
    return x_t * np.array(bell)


def drift_derivative(mult: Multiplier, x0: float, t: float, order: int) -> float:
    """J^(order)(t) for J(s) = theta(s) x_s, by the Leibniz rule"""
    if order < 0:
        raise DomainError(f"derivative order must be nonnegative, got {order}")
    theta_derivs = [float(mult.deriv(t, j)) for j in range(order + 1)]
    x_derivs = _path_derivatives(mult, x0, t, order)
    return float(sum(comb(order, j) * theta_derivs[j] * x_derivs[order - j] for j in range(order + 1)))


def bias_constant_m(mult: Multiplier, x0: float, G: Kernel, k: int, t: float) -> float:
    """m = J^(k+1)(t) / (k+1)! * M_{k+1}"""
    if k < 0:
        raise DomainError(f"kernel order must be nonnegative, got {k}")
    moment = G.moment(k + 1)
    derivative = drift_derivative(mult, x0, t, k + 1)
    return derivative / factorial(k + 1) * moment


def limit_law_sample(spec: LimitLawSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """n draws of pos_weight U_1 - neg_weight U_2 + m"""
    if n < 0:
        raise DomainError(f"sample size must be nonnegative, got {n}")
    u1 = sample_standard_stable(spec.alpha, spec.beta, rng, size=n)
    u2 = sample_standard_stable(spec.alpha, spec.beta, rng, size=n)
    return spec.pos_weight * u1 - spec.neg_weight * u2 + spec.shift


def ks_critical_value(n_a: int, n_b: int, coefficient: float = StudyDefaults.KS_CRITICAL_1PCT) -> float:
    """c sqrt((n + m) / (n m)); c = 1.628 is the 1% level"""
    if n_a < 1 or n_b < 1:
        raise EmptyInputError(f"KS critical value needs nonempty samples, got sizes {n_a}, {n_b}")
    return coefficient * float(np.sqrt((n_a + n_b) / (n_a * n_b)))


def ks_two_sample(a, b) -> float:
    """sup_x |F_a(x) - F_b(x)|"""
    return ks_test(a, b).statistic


def ks_test(a, b, threshold: Optional[float] = None) -> KsReport:
    """Two-sample KS statistic with the asymptotic p-value and a pass/fail verdict"""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size == 0 or b.size == 0:
        raise EmptyInputError(f"KS test needs nonempty samples, got sizes {a.size}, {b.size}")
    result = stats.ks_2samp(a, b, method='asymp')
    if threshold is None:
        threshold = ks_critical_value(a.size, b.size)
    statistic = float(result.statistic)
    return KsReport(
        statistic=statistic,
        threshold=float(threshold),
        passed=statistic < threshold,
        pvalue=float(result.pvalue),
        n_a=int(a.size),
        n_b=int(b.size),
    )


def kernel_integral_samples(G: Kernel, phi: float, t: float, grid: TimeGrid, alpha: float, beta: float,
                            n_reps: int, streams: StreamFactory) -> np.ndarray:
    """n_reps draws of sum_i G((t_i - t)/phi) (Z_{i+1} - Z_i), one Levy path per replicate"""
    weights = np.zeros(grid.n_steps)
    indices = grid.window_indices(t + G.lower * phi, t + G.upper * phi)
    weights[indices] = G((grid.times[indices] - t) / phi)
    samples = np.empty(n_reps)
    for rep in range(n_reps):
        increments = levy_increments(alpha, beta, grid, streams.stream(rep, PATH_CHANNEL))
        samples[rep] = float(np.dot(weights, increments))
    return samples


def time_change_check(G: Kernel, phi: float, t: float, grid: TimeGrid, alpha: float, n_reps: int,
                      streams: StreamFactory, beta: float = 0.0,
                      threshold: Optional[float] = None) -> KsReport:
    """
    Compare the discretised integral int_0^T G((tau - t)/phi) dZ_tau with its
    time-change representation.

    Symmetric noise (beta = 0) uses (phi int |G|^a)^(1/a) U; otherwise
    phi^(1/a) [(int G_+^a)^(1/a) U_1 - (int G_-^a)^(1/a) U_2].

    Args:
        G: kernel
        phi: bandwidth
        t: centre of the kernel window
        grid: simulation grid on [0, T]
        alpha, beta: stable parameters of Z
        n_reps: replicates on each side
        streams: per-replicate random streams

    Returns:
        KsReport against the 1% asymptotic critical value
    """
    if phi <= 0.0:
        raise DomainError(f"bandwidth must be positive, got {phi}")
    if n_reps < 1:
        raise DomainError(f"n_reps must be positive, got {n_reps}")

    lo, hi = t + G.lower * phi, t + G.upper * phi
    outside = hi < 0.0 or lo > grid.horizon
    if not outside and (lo < 0.0 or hi > grid.horizon):
        raise WindowError(f"kernel window [{lo:.6g}, {hi:.6g}] straddles the edge of [0, {grid.horizon}]")

    integrals = kernel_integral_samples(G, phi, t, grid, alpha, beta, n_reps, streams)

    rng = streams.stream(0, DIRECT_CHANNEL)
    if outside:
        representation = np.zeros(n_reps)
    elif beta == 0.0:
        total, _, _ = kernel_alpha_integrals(G, alpha)
        representation = (phi * total) ** (1.0 / alpha) * sample_standard_stable(alpha, 0.0, rng, size=n_reps)
    else:
        spec = LimitLawSpec.from_kernel(G, alpha, beta)
        representation = phi ** (1.0 / alpha) * limit_law_sample(spec, n_reps, rng)

    report = ks_test(integrals, representation, threshold)
    logger.debug(f"time-change check: alpha={alpha}, beta={beta}, phi={phi}, KS={report.statistic:.4f}")
    return report


def limit_law_reference(spec: LimitLawSpec, n: int, streams: StreamFactory) -> np.ndarray:
    """Reference draws for the limit law on their own channel"""
    return limit_law_sample(spec, n, streams.stream(0, LIMIT_LAW_CHANNEL))


def ks_table(rows) -> pd.DataFrame:
    """(eps, ks_statistic, threshold, pass) table from (eps, KsReport) pairs"""
    return pd.DataFrame(
        [{'eps': eps, **report.to_dict()} for eps, report in rows],
        columns=['eps', 'ks_statistic', 'threshold', 'pass', 'pvalue'],
    )
