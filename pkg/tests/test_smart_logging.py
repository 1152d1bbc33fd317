"""
Tests for logging setup, the rate-limited study logger and environment settings
"""

import logging

import pytest

from config.settings import StudyKind, SystemConfig
from src.utils.logger import ROOT_LOGGER, PerformanceLogger, get_logger, setup_logging
from src.utils.smart_logger import StudyLogger, get_study_logger


def test_setup_logging_writes_to_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    logger = setup_logging("DEBUG", log_file=str(log_file), console_output=False)
    get_logger("src.experiments.studies").info("study started")
    for handler in logger.handlers:
        handler.flush()
    assert "stabledrift.experiments.studies" in log_file.read_text()
    assert "study started" in log_file.read_text()

    # a second setup replaces handlers instead of stacking them
    setup_logging("INFO", log_file=None, console_output=True)
    assert len(logging.getLogger(ROOT_LOGGER).handlers) == 1


def test_module_loggers_hang_off_the_package_logger():
    assert get_logger("src.sde.sde_sim").name == "stabledrift.sde.sde_sim"
    assert get_logger("scripts").name == "stabledrift.scripts"


def test_progress_messages_are_rate_limited(mocker):
    study_logger = StudyLogger("test_progress", min_interval=60.0)
    info = mocker.patch.object(study_logger.logger, 'info')
    for done in range(1, 10):
        study_logger.progress("rate", done, 10)
    assert info.call_count == 1
    study_logger.progress("rate", 10, 10)
    assert info.call_count == 2

    stats = study_logger.get_stats()
    assert stats['suppressed_messages'] == 8
    assert stats['total_messages'] == 2
    assert stats['message_types'] == 1


def test_events_follow_configuration(mocker):
    study_logger = get_study_logger("test_events")
    info = mocker.patch.object(study_logger.logger, 'info')
    warning = mocker.patch.object(study_logger.logger, 'warning')

    study_logger.acceptance_event("drift_rate", True, "slope 0.74")
    study_logger.acceptance_event("drift_rate", False)
    assert "accepted (slope 0.74)" in info.call_args[0][0]
    assert "rejected" in warning.call_args[0][0]

    mocker.patch.dict(SystemConfig.LOG_EVENTS, {'config_warnings': False})
    study_logger.config_warning("ignored")
    assert warning.call_count == 1


def test_performance_logger_reports_milliseconds(mocker):
    logger = get_logger("test_perf")
    log = mocker.patch.object(logger, 'log')
    perf = PerformanceLogger(logger)
    with perf.time_operation("ladder"):
        pass
    assert perf.durations_ms["ladder"] >= 0.0
    assert log.call_count == 1
    assert perf.end_timer("never-started") is None


def test_worker_count_from_environment(monkeypatch):
    monkeypatch.setenv("STABLEDRIFT_THREADS", "3")
    assert SystemConfig.worker_count() == 3
    monkeypatch.setenv("STABLEDRIFT_THREADS", "many")
    with pytest.raises(ValueError):
        SystemConfig.worker_count()
    monkeypatch.setenv("STABLEDRIFT_THREADS", "0")
    with pytest.raises(ValueError):
        SystemConfig.worker_count()


def test_log_level_from_environment(monkeypatch):
    monkeypatch.setenv("STABLEDRIFT_LOG_LEVEL", "DEBUG")
    assert SystemConfig.log_level() == "DEBUG"


def test_study_kind_aliases():
    assert StudyKind.parse("rate42") == StudyKind.DRIFT_RATE
    assert StudyKind.parse(" Dist43 ") == StudyKind.LIMIT_LAW
    assert StudyKind.parse("rate61") == StudyKind.MULTIPLIER_RATE
    assert StudyKind.parse("gronwall") == StudyKind.GRONWALL
    with pytest.raises(ValueError):
        StudyKind.parse("rate99")
