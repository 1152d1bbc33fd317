"""
Experiments Module
Study configuration, replicate runner, Monte-Carlo studies and the CLI
"""

from .study_config import StudyConfig, load_study_config, parse_study_config
from .runner import ReplicateRunner
from .studies import (
    RateStudyResult,
    ConsistencyReport,
    DistCheckResult,
    GronwallStudyResult,
    run_rate_study,
    run_consistency_study,
    run_dist_check,
    run_gronwall_study,
    run_study,
    monotone_verdict,
)
from .csv_io import write_csv, read_csv

__all__ = [
    'StudyConfig',
    'load_study_config',
    'parse_study_config',
    'ReplicateRunner',
    'RateStudyResult',
    'ConsistencyReport',
    'DistCheckResult',
    'GronwallStudyResult',
    'run_rate_study',
    'run_consistency_study',
    'run_dist_check',
    'run_gronwall_study',
    'run_study',
    'monotone_verdict',
    'write_csv',
    'read_csv',
]
