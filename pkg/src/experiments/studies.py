"""
Monte-Carlo studies over an eps ladder.

Every study simulates one Levy path per replicate on a shared grid (sized
for the smallest bandwidth) and reuses it across the whole ladder, so the
eps values are compared on common random numbers. Replicate i draws from
stream i of the study seed.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from config.settings import StudyDefaults, StudyKind
from src.analysis.asymptotics import LimitLawSpec, bias_constant_m, ks_test, limit_law_reference
from src.estimation.estimators import (
    build_y_path,
    complement_probability_bound,
    drift_error_bound_terms,
    estimate_drift,
    estimate_multiplier,
    multiplier_error_bound_terms,
)
from src.estimation.kernels import Kernel
from src.experiments.runner import ReplicateRunner
from src.experiments.study_config import StudyConfig
from src.sde.multipliers import Multiplier
from src.sde.sde_sim import deterministic_solution, deviation_bound, euler_path, gronwall_check
from src.stable.random_streams import StreamFactory
from src.stable.stable_core import TimeGrid, simulate_levy_path
from src.utils.errors import ConfigError, DomainError
from src.utils.logger import PerformanceLogger
from src.utils.smart_logger import get_study_logger

logger = get_study_logger(__name__)
perf_logger = PerformanceLogger(logger.logger)


def monotone_verdict(values: Sequence[float], max_inversions: int = StudyDefaults.MAX_INVERSIONS,
                     ratio: float = StudyDefaults.INVERSION_RATIO) -> Tuple[bool, int]:
    """Whether values decrease, allowing a few small inversions; returns (verdict, inversions)"""
    inversions = 0
    for previous, current in zip(values[:-1], values[1:]):
        if current > previous:
            inversions += 1
            if current > ratio * previous:
                return False, inversions
    return inversions <= max_inversions, inversions


def frequencies_nonincreasing(frequencies: Sequence[float], n: int) -> bool:
    """No step up larger than two binomial standard errors (plus one count)"""
    for previous, current in zip(frequencies[:-1], frequencies[1:]):
        p = max(previous, current)
        noise = 2.0 * np.sqrt(p * (1.0 - p) / n) + 1.0 / n
        if current - previous > noise:
            return False
    return True


def _require_kind(cfg: StudyConfig, *kinds: StudyKind) -> None:
    if cfg.kind not in kinds:
        raise ConfigError(
            f"study kind '{cfg.kind.value}' cannot run here, expected one of {[k.value for k in kinds]}", 'kind'
        )


def _truth(cfg: StudyConfig, mult: Multiplier, ts: np.ndarray) -> np.ndarray:
    """theta(t) for the multiplier estimator, theta(t) x_t for the drift estimator"""
    if cfg.uses_multiplier_estimator:
        return np.asarray(mult(ts), dtype=float)
    return np.asarray(mult(ts) * cfg.x0 * np.exp(mult.integral(ts)), dtype=float)


class _LadderReplicate:
    """One replicate: a Levy path, then the estimator at every (eps, t)"""

    def __init__(self, cfg: StudyConfig, mult: Multiplier, G: Kernel, grid: TimeGrid,
                 phis: Sequence[float], ts: np.ndarray, streams: StreamFactory):
        self.cfg = cfg
        self.mult = mult
        self.G = G
        self.grid = grid
        self.phis = list(phis)
        self.ts = ts
        self.streams = streams
        self.bound = cfg.bound

    def estimates(self, rep: int) -> Tuple[np.ndarray, np.ndarray]:
        """(n_eps, n_t) estimates and per-eps failure of the event A"""
        noise = simulate_levy_path(self.cfg.alpha, self.cfg.beta, self.grid, self.streams.stream(rep))
        values = np.empty((len(self.phis), len(self.ts)))
        complements = np.zeros(len(self.phis), dtype=bool)
        min_points = self.cfg.points_per_window
        for j, (eps, phi) in enumerate(zip(self.cfg.eps_list, self.phis)):
            path = euler_path(self.mult, self.cfg.x0, eps, noise)
            if self.cfg.uses_multiplier_estimator:
                y = build_y_path(path, self.cfg.x0, self.bound)
                complements[j] = not y.holds
                values[j] = [estimate_multiplier(y.path, y.holds, self.G, phi, t, min_points).value
                             for t in self.ts]
            else:
                values[j] = [estimate_drift(path, self.G, phi, t, min_points).value for t in self.ts]
        return values, complements


def _run_ladder(cfg: StudyConfig, ts: np.ndarray, label: str,
                runner: Optional[ReplicateRunner]) -> Tuple[np.ndarray, np.ndarray, List[float]]:
    mult, G = cfg.make_multiplier(), cfg.make_kernel()
    phis = cfg.bandwidths()
    grid = cfg.make_grid()
    logger.study_event(
        f"{label}: {cfg.n_reps} replicates x {len(cfg.eps_list)} eps on {grid.n_steps} steps, "
        f"kernel {G.family} k={G.order}, seed {cfg.seed}"
    )
    replicate = _LadderReplicate(cfg, mult, G, grid, phis, ts, StreamFactory(cfg.seed))
    runner = runner or ReplicateRunner(study_logger=logger)
    with perf_logger.time_operation(label):
        outcomes = runner.run(replicate.estimates, cfg.n_reps, label=label)
    values = np.stack([outcome[0] for outcome in outcomes])
    complements = np.stack([outcome[1] for outcome in outcomes])
    return values, complements, phis


@dataclass
class RateStudyResult:
    """Per-eps error table and the fitted log-log slope"""
    kind: StudyKind
    table: pd.DataFrame
    slope: float
    slope_stderr: float
    intercept: float
    target: float
    tolerance: float
    complement_decreasing: Optional[bool] = None

    @property
    def slope_ok(self) -> bool:
        return abs(self.slope - self.target) <= self.tolerance

    @property
    def accepted(self) -> bool:
        return self.slope_ok and self.complement_decreasing is not False

    def summary(self) -> dict:
        return {
            'row': 'summary',
            'slope': self.slope,
            'slope_stderr': self.slope_stderr,
            'target': self.target,
            'tolerance': self.tolerance,
            'pass': self.accepted,
        }

    def to_frame(self) -> pd.DataFrame:
        rows = self.table.assign(row='eps')
        frame = pd.concat([rows, pd.DataFrame([self.summary()])], ignore_index=True)
        return frame[['row'] + [c for c in frame.columns if c != 'row']]


def run_rate_study(cfg: StudyConfig, runner: Optional[ReplicateRunner] = None) -> RateStudyResult:
    """
    Error-rate study for the drift estimator or the multiplier estimator.

    For each eps the per-replicate error is the sup over the evaluation
    times; the slope is the OLS fit of log(median error) on log(eps).
    """
    _require_kind(cfg, StudyKind.DRIFT_RATE, StudyKind.MULTIPLIER_RATE)
    ts = np.asarray(cfg.evaluation_times())
    mult = cfg.make_multiplier()
    truth = _truth(cfg, mult, ts)

    values, complements, phis = _run_ladder(cfg, ts, cfg.kind.value, runner)
    errors = np.max(np.abs(values - truth), axis=2)

    rows = []
    for j, (eps, phi) in enumerate(zip(cfg.eps_list, phis)):
        row = {
            'eps': eps,
            'bandwidth': phi,
            'median_abs_error': float(np.median(errors[:, j])),
            'mean_abs_error': float(np.mean(errors[:, j])),
            'n_reps': cfg.n_reps,
        }
        if cfg.kind == StudyKind.MULTIPLIER_RATE:
            row['complement_frequency'] = float(np.mean(complements[:, j]))
            row['complement_bound'] = complement_probability_bound(cfg.x0, eps, cfg.bound, cfg.horizon, cfg.alpha)
            terms = multiplier_error_bound_terms(eps, phi, cfg.rho, cfg.alpha)
        else:
            terms = drift_error_bound_terms(eps, phi, cfg.k, cfg.alpha)
        row.update({f'bound_{name}': value for name, value in terms.items()})
        rows.append(row)
        logger.study_event(
            f"eps={eps:g} phi={phi:.4g}: median |err| = {row['median_abs_error']:.4g}, "
            f"mean |err| = {row['mean_abs_error']:.4g}"
        )
    table = pd.DataFrame(rows)

    medians = table['median_abs_error'].to_numpy()
    if np.any(medians <= 0.0):
        raise DomainError(f"median errors must be positive for a log-log fit, got {medians.tolist()}")
    fit = stats.linregress(np.log(table['eps'].to_numpy()), np.log(medians))

    complement_decreasing = None
    if cfg.kind == StudyKind.MULTIPLIER_RATE:
        complement_decreasing = frequencies_nonincreasing(table['complement_frequency'].tolist(), cfg.n_reps)

    result = RateStudyResult(
        kind=cfg.kind,
        table=table,
        slope=float(fit.slope),
        slope_stderr=float(fit.stderr),
        intercept=float(fit.intercept),
        target=cfg.target_exponent,
        tolerance=cfg.tolerance,
        complement_decreasing=complement_decreasing,
    )
    logger.acceptance_event(
        cfg.kind.value, result.accepted,
        f"slope {result.slope:.3f} +/- {result.slope_stderr:.3f}, target {result.target:.3f} +/- {result.tolerance}"
    )
    return result


@dataclass
class ConsistencyReport:
    """Mean abs error per eps and the monotone-decrease verdict"""
    table: pd.DataFrame
    decreasing: Optional[bool]
    inversions: int

    @property
    def accepted(self) -> bool:
        return self.decreasing is not False

    def to_frame(self) -> pd.DataFrame:
        summary = {
            'row': 'summary',
            'decreasing': self.decreasing,
            'inversions': self.inversions,
            'pass': self.accepted,
        }
        frame = pd.concat([self.table.assign(row='eps'), pd.DataFrame([summary])], ignore_index=True)
        return frame[['row'] + [c for c in frame.columns if c != 'row']]


def run_consistency_study(cfg: StudyConfig, runner: Optional[ReplicateRunner] = None) -> ConsistencyReport:
    """Mean sup-over-t error of the drift estimator for phi_eps = eps^q"""
    _require_kind(cfg, StudyKind.CONSISTENCY)
    ts = np.asarray(cfg.evaluation_times())
    truth = _truth(cfg, cfg.make_multiplier(), ts)

    values, _, phis = _run_ladder(cfg, ts, cfg.kind.value, runner)
    errors = np.max(np.abs(values - truth), axis=2)

    table = pd.DataFrame({
        'eps': list(cfg.eps_list),
        'bandwidth': phis,
        'mean_abs_error': errors.mean(axis=0),
        'median_abs_error': np.median(errors, axis=0),
        'n_reps': cfg.n_reps,
    })

    positive = table[table['eps'] > 0.0]['mean_abs_error'].tolist()
    if len(positive) < 2:
        decreasing, inversions = None, 0
        logger.study_event("fewer than two positive eps values: error table reported without a verdict")
    else:
        decreasing, inversions = monotone_verdict(positive)
        logger.acceptance_event('consistency', decreasing, f"{inversions} inversion(s)")
    return ConsistencyReport(table=table, decreasing=decreasing, inversions=inversions)


@dataclass
class DistCheckResult:
    """KS distance between normalised estimator errors and the limit law, per eps"""
    table: pd.DataFrame
    t: float
    shift: float
    decreasing: bool
    ks_target: float

    @property
    def final_statistic(self) -> float:
        return float(self.table['ks_statistic'].iloc[-1])

    @property
    def accepted(self) -> bool:
        return self.decreasing and self.final_statistic < self.ks_target

    def to_frame(self) -> pd.DataFrame:
        summary = {
            'row': 'summary',
            'decreasing': self.decreasing,
            'ks_target': self.ks_target,
            'shift': self.shift,
            'pass': self.accepted,
        }
        frame = pd.concat([self.table.assign(row='eps'), pd.DataFrame([summary])], ignore_index=True)
        return frame[['row'] + [c for c in frame.columns if c != 'row']]


def run_dist_check(cfg: StudyConfig, runner: Optional[ReplicateRunner] = None) -> DistCheckResult:
    """
    Compare phi^-(k+1) (theta_hat_t X_t - theta(t) x_t) with the limit law.

    The evaluation time is the first t_eval entry, else the middle of [0, T].
    """
    _require_kind(cfg, StudyKind.LIMIT_LAW)
    t = float(cfg.t_eval[0]) if cfg.t_eval else 0.5 * cfg.horizon
    ts = np.array([t])
    mult, G = cfg.make_multiplier(), cfg.make_kernel()
    truth = _truth(cfg, mult, ts)

    shift = bias_constant_m(mult, cfg.x0, G, cfg.k, t)
    spec = LimitLawSpec.from_kernel(G, cfg.alpha, cfg.beta, shift)
    reference = limit_law_reference(spec, cfg.n_reps, StreamFactory(cfg.seed))
    logger.study_event(
        f"limit law at t={t:g}: weights ({spec.pos_weight:.4g}, {spec.neg_weight:.4g}), m = {shift:.4g}"
    )

    values, _, phis = _run_ladder(cfg, ts, cfg.kind.value, runner)
    rows = []
    for j, (eps, phi) in enumerate(zip(cfg.eps_list, phis)):
        normalized = (values[:, j, 0] - truth[0]) / phi ** (cfg.k + 1)
        report = ks_test(normalized, reference)
        rows.append({'eps': eps, 'bandwidth': phi, **report.to_dict()})
        logger.study_event(f"eps={eps:g}: KS = {report.statistic:.4f} (1% critical {report.threshold:.4f})")
    table = pd.DataFrame(rows, columns=['eps', 'bandwidth', 'ks_statistic', 'threshold', 'pass', 'pvalue'])

    decreasing, _ = monotone_verdict(table['ks_statistic'].tolist())
    result = DistCheckResult(table=table, t=t, shift=shift, decreasing=decreasing, ks_target=cfg.ks_target)
    logger.acceptance_event(
        'limit_law', result.accepted, f"final KS {result.final_statistic:.4f} vs target {cfg.ks_target}"
    )
    return result


@dataclass
class GronwallStudyResult:
    """Per-eps frequency of the pathwise bound and the deviation profile"""
    table: pd.DataFrame

    @property
    def accepted(self) -> bool:
        return bool(np.all(self.table['holds_fraction'] == 1.0))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.concat(
            [self.table.assign(row='eps'), pd.DataFrame([{'row': 'summary', 'pass': self.accepted}])],
            ignore_index=True,
        )
        return frame[['row'] + [c for c in frame.columns if c != 'row']]


def run_gronwall_study(cfg: StudyConfig, runner: Optional[ReplicateRunner] = None) -> GronwallStudyResult:
    """Check |X_t - x_t| <= e^{Lt} eps sup|Z| on every replicate and record sup|X - x|"""
    _require_kind(cfg, StudyKind.GRONWALL)
    mult = cfg.make_multiplier()
    grid = cfg.make_grid()
    limit = deterministic_solution(mult, cfg.x0, grid)
    streams = StreamFactory(cfg.seed)
    bound = cfg.bound

    def replicate(rep: int) -> np.ndarray:
        noise = simulate_levy_path(cfg.alpha, cfg.beta, grid, streams.stream(rep))
        out = np.empty((len(cfg.eps_list), 3))
        for j, eps in enumerate(cfg.eps_list):
            path = euler_path(mult, cfg.x0, eps, noise)
            report = gronwall_check(path, limit, noise, bound, eps)
            out[j] = (float(report.holds), report.worst_excess, float(np.max(report.deviation)))
        return out

    logger.study_event(f"gronwall: {cfg.n_reps} replicates on {grid.n_steps} steps, L = {bound}")
    runner = runner or ReplicateRunner(study_logger=logger)
    with perf_logger.time_operation('gronwall'):
        outcomes = np.stack(runner.run(replicate, cfg.n_reps, label='gronwall'))

    rows = []
    for j, eps in enumerate(cfg.eps_list):
        sup_deviation = outcomes[:, j, 2]
        rows.append({
            'eps': eps,
            'n_reps': cfg.n_reps,
            'holds_fraction': float(np.mean(outcomes[:, j, 0])),
            'worst_excess': float(np.max(outcomes[:, j, 1])),
            'mean_sup_deviation': float(np.mean(sup_deviation)),
            'mean_scaled_deviation': float(np.mean(sup_deviation) / eps) if eps > 0.0 else float('nan'),
            'deviation_bound': deviation_bound(bound, cfg.horizon, eps, cfg.alpha),
        })
    result = GronwallStudyResult(table=pd.DataFrame(rows))
    logger.acceptance_event('gronwall', result.accepted,
                            f"min holds fraction {result.table['holds_fraction'].min():.4f}")
    return result


STUDY_RUNNERS = {
    StudyKind.DRIFT_RATE: run_rate_study,
    StudyKind.MULTIPLIER_RATE: run_rate_study,
    StudyKind.CONSISTENCY: run_consistency_study,
    StudyKind.LIMIT_LAW: run_dist_check,
    StudyKind.GRONWALL: run_gronwall_study,
}


def run_study(cfg: StudyConfig, runner: Optional[ReplicateRunner] = None):
    """Dispatch on the study kind"""
    return STUDY_RUNNERS[cfg.kind](cfg, runner)
