"""
Smart logging utility for Monte-Carlo studies.
Event-based logging that rate-limits repetitive progress messages.
"""

import logging
import time
from typing import Dict, Optional

from config.settings import SystemConfig
from src.utils.logger import get_logger


class StudyLogger:
    """Smart logger that suppresses repetitive messages and only logs events"""

    def __init__(self, name: str, min_interval: float = SystemConfig.PROGRESS_LOG_INTERVAL):
        self.logger: logging.Logger = get_logger(name)
        self.name = name
        self.min_interval = min_interval

        # Track last logged messages to prevent spam
        self.last_messages: Dict[str, float] = {}
        self.message_counts: Dict[str, int] = {}
        self.suppressed_counts: Dict[str, int] = {}
        self.suppressed_total = 0

    def should_log_event(self, event_type: str) -> bool:
        """Check if this event type should be logged based on configuration"""
        return SystemConfig.LOG_EVENTS.get(event_type, True)

    def should_log_message(self, message_key: str, force: bool = False) -> bool:
        """Determine if a keyed message should be logged based on timing"""
        current_time = time.monotonic()

        if not force and message_key in self.last_messages:
            if current_time - self.last_messages[message_key] < self.min_interval:
                self.suppressed_counts[message_key] = self.suppressed_counts.get(message_key, 0) + 1
                self.suppressed_total += 1
                return False

        self.last_messages[message_key] = current_time
        self.message_counts[message_key] = self.message_counts.get(message_key, 0) + 1

        suppressed = self.suppressed_counts.get(message_key, 0)
        if suppressed:
            self.logger.debug(f"[Suppressed {suppressed} similar messages]")
            self.suppressed_counts[message_key] = 0

        return True

    def study_event(self, message: str):
        """Study start/finish and per-eps summaries"""
        if self.should_log_event('study_events'):
            self.logger.info(message)

    def progress(self, message_key: str, done: int, total: int, force: bool = False):
        """Replicate counters, at most one per key per interval"""
        if not self.should_log_event('replicate_progress'):
            return
        if done >= total:
            force = True
        if self.should_log_message(message_key, force):
            self.logger.info(f"{message_key}: {done}/{total} replicates")

    def acceptance_event(self, study: str, passed: bool, detail: str = ""):
        """Log a verdict (always important)"""
        if self.should_log_event('acceptance'):
            detail_text = f" ({detail})" if detail else ""
            if passed:
                self.logger.info(f"✅ {study}: accepted{detail_text}")
            else:
                self.logger.warning(f"❌ {study}: rejected{detail_text}")

    def config_warning(self, message: str):
        if self.should_log_event('config_warnings'):
            self.logger.warning(f"⚠️  {message}")

    def debug(self, message: str):
        self.logger.debug(message)

    def info(self, message: str):
        self.logger.info(message)

    def warning(self, message: str):
        self.logger.warning(message)

    def error(self, message: str):
        self.logger.error(message)

    def get_stats(self) -> Dict:
        """Get logging statistics"""
        return {
            'total_messages': sum(self.message_counts.values()),
            'suppressed_messages': self.suppressed_total,
            'message_types': len(self.message_counts),
        }


def get_study_logger(name: str, min_interval: Optional[float] = None) -> StudyLogger:
    """Get a study logger instance"""
    if min_interval is None:
        return StudyLogger(name)
    return StudyLogger(name, min_interval)
