"""
Command-line interface.

Exit codes: 0 success, 1 validation or usage error, 2 acceptance failure
(the result file is still written).
"""

import argparse
import os
import sys
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from config.settings import KernelConfig, SystemConfig
from src.estimation.estimators import (
    build_y_path,
    estimate_drift,
    estimate_multiplier,
    estimates_frame,
)
from src.estimation.kernels import kernel_alpha_integrals, make_kernel
from src.experiments.csv_io import write_csv
from src.experiments.studies import (
    run_consistency_study,
    run_dist_check,
    run_gronwall_study,
    run_rate_study,
)
from src.experiments.study_config import StudyConfig, load_study_config
from src.sde.sde_sim import SdeConfig, deterministic_solution, simulate_sde
from src.stable.random_streams import StreamFactory
from src.stable.stable_core import StableParams
from src.utils.errors import AcceptanceError, StableDriftError
from src.utils.logger import get_logger, setup_logging

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_ACCEPTANCE = 2

logger = get_logger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to the validation exit code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _parse_times(raw: str) -> List[float]:
    try:
        return [float(item) for item in raw.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--t expects a comma-separated list of numbers, got {raw!r}")


def _load(args) -> StudyConfig:
    cfg = load_study_config(args.config)
    return cfg.with_overrides(seed=args.seed)


def _simulate(cfg: StudyConfig, eps: float):
    """One observed path (X, Z) on the grid the resolution rule gives for eps"""
    mult = cfg.make_multiplier()
    grid = cfg.make_grid(cfg.bandwidth_for(eps))
    sde = SdeConfig(mult, cfg.x0, eps, StableParams(cfg.alpha, cfg.beta), grid, bound=cfg.bound)
    path, noise = simulate_sde(sde, StreamFactory(cfg.seed).stream(0))
    return mult, path, noise


def _path_outputs(out: str) -> Dict[str, str]:
    """One (t, value) file per path: <root>_X, <root>_Z and <root>_limit"""
    root, ext = os.path.splitext(out)
    ext = ext or '.csv'
    return {label: f"{root}_{suffix}{ext}" for label, suffix in (('X', 'X'), ('Z', 'Z'), ('x', 'limit'))}


def _cmd_simulate(args) -> int:
    cfg = _load(args)
    eps = args.eps if args.eps is not None else cfg.simulation_eps
    mult, path, noise = _simulate(cfg, eps)
    limit = deterministic_solution(mult, cfg.x0, path.grid)
    outputs = _path_outputs(args.out)
    for sample_path in (path, noise, limit):
        write_csv(sample_path.to_frame(), outputs[sample_path.label])
    logger.info(f"simulated eps={eps:g} on {path.grid.n_steps} steps: {', '.join(outputs.values())}")
    return EXIT_OK


def _cmd_estimate(args) -> int:
    cfg = _load(args)
    eps = cfg.simulation_eps
    phi = cfg.bandwidth_for(eps)
    mult, path, _ = _simulate(cfg, eps)
    ts = np.asarray(args.t if args.t else cfg.evaluation_times(), dtype=float)

    if cfg.uses_multiplier_estimator:
        y = build_y_path(path, cfg.x0, cfg.bound)
        estimates = [estimate_multiplier(y.path, y.holds, cfg.make_kernel(), phi, t, cfg.points_per_window)
                     for t in ts]
        truth = mult(ts)
    else:
        G = cfg.make_kernel()
        estimates = [estimate_drift(path, G, phi, t, cfg.points_per_window) for t in ts]
        truth = mult(ts) * cfg.x0 * np.exp(mult.integral(ts))
    write_csv(estimates_frame(estimates, truth), args.out)
    return EXIT_OK


def _cmd_kernel_info(args) -> int:
    G = make_kernel(args.k, args.family)
    row = G.describe()
    row['abs_moment_next'] = G.abs_moment_next
    u = np.linspace(G.lower, G.upper, KernelConfig.ROOT_SCAN_POINTS)
    row['min_value'] = float(np.min(G(u)))
    total, pos, neg = kernel_alpha_integrals(G, args.alpha)
    row.update({'alpha': args.alpha, 'int_abs_alpha': total, 'int_pos_alpha': pos, 'int_neg_alpha': neg})
    write_csv(pd.DataFrame([row]), args.out)
    return EXIT_OK


def _finish(result, out: str, study: str) -> int:
    write_csv(result.to_frame(), out)
    if not result.accepted:
        raise AcceptanceError(f"{study} failed its acceptance check; results written to {out}")
    return EXIT_OK


def _cmd_rate_study(args) -> int:
    return _finish(run_rate_study(_load(args)), args.out, 'rate study')


def _cmd_consistency(args) -> int:
    return _finish(run_consistency_study(_load(args)), args.out, 'consistency study')


def _cmd_dist_check(args) -> int:
    return _finish(run_dist_check(_load(args)), args.out, 'limit-law check')


def _cmd_gronwall(args) -> int:
    return _finish(run_gronwall_study(_load(args)), args.out, 'gronwall study')


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='stabledrift',
        description='Small-noise drift estimation for SDEs driven by alpha-stable Levy motion',
    )
    parser.add_argument('--log-level', default=None,
                        help='DEBUG, INFO, WARNING or ERROR (default: STABLEDRIFT_LOG_LEVEL or INFO)')
    parser.add_argument('--log-file', default=SystemConfig.LOG_FILE, help='optional rotating log file')
    commands = parser.add_subparsers(dest='command', required=True)

    def study_command(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument('--config', required=True, help='flat key = value study file')
        sub.add_argument('--seed', type=int, default=None, help='overrides the seed key')
        sub.add_argument('--out', required=True, help='CSV output path')
        sub.set_defaults(handler=handler)
        return sub

    simulate = study_command('simulate', _cmd_simulate, 'simulate one observed path')
    simulate.add_argument('--eps', type=float, default=None, help='noise level (default: eps, else smallest eps_list)')

    estimate = study_command('estimate', _cmd_estimate, 'estimate on one simulated path')
    estimate.add_argument('--t', type=_parse_times, default=None, help='comma-separated evaluation times')

    kernel = commands.add_parser('kernel-info', help='moments and alpha-integrals of a kernel')
    kernel.add_argument('--k', type=int, default=0, help='kernel order')
    kernel.add_argument('--family', default='polynomial', choices=KernelConfig.FAMILIES + ('polynomial_order_k',))
    kernel.add_argument('--alpha', type=float, default=KernelConfig.INFO_ALPHA,
                        help=f'stability index for the alpha-integrals (default {KernelConfig.INFO_ALPHA})')
    kernel.add_argument('--out', required=True, help='CSV output path')
    kernel.set_defaults(handler=_cmd_kernel_info)

    study_command('rate-study', _cmd_rate_study, 'drift or multiplier error-rate study')
    study_command('consistency', _cmd_consistency, 'consistency of the drift estimator')
    study_command('dist-check', _cmd_dist_check, 'limit-law comparison by two-sample KS')
    study_command('gronwall', _cmd_gronwall, 'pathwise deviation bound check')
    return parser


def cli_main(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run the subcommand and map the outcome to an exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        setup_logging(args.log_level or SystemConfig.log_level(), log_file=args.log_file)
        return args.handler(args)
    except AcceptanceError as e:
        logger.warning(str(e))
        print(f"stabledrift: {e}", file=sys.stderr)
        return EXIT_ACCEPTANCE
    except (StableDriftError, ValueError, OSError) as e:
        print(f"stabledrift: error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
