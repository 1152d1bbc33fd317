"""
Replicate runner.

Replicate i always draws from stream i, and ThreadPoolExecutor.map hands
results back in submission order, so the reduction is independent of how
many workers ran it.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

from config.settings import SystemConfig
from src.utils.smart_logger import StudyLogger, get_study_logger

T = TypeVar('T')

logger = get_study_logger(__name__)


class ReplicateRunner:
    """Runs replicate functions over a pool of worker threads"""

    def __init__(self, workers: Optional[int] = None, study_logger: Optional[StudyLogger] = None):
        self.workers = workers if workers is not None else SystemConfig.worker_count()
        if self.workers < 1:
            raise ValueError(f"worker count must be >= 1, got {self.workers}")
        self.logger = study_logger or logger

    def run(self, replicate: Callable[[int], T], n_reps: int, label: str = "replicates") -> List[T]:
        """[replicate(0), ..., replicate(n_reps - 1)] in index order"""
        if n_reps < 0:
            raise ValueError(f"n_reps must be nonnegative, got {n_reps}")
        results: List[T] = []
        if self.workers == 1:
            for index in range(n_reps):
                results.append(replicate(index))
                self.logger.progress(label, index + 1, n_reps)
            return results

        with ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix='stabledrift') as pool:
            for result in pool.map(replicate, range(n_reps)):
                results.append(result)
                self.logger.progress(label, len(results), n_reps)
        return results
