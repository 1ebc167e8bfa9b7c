"""
Task runner.

Tasks are independent; the pool's map keeps report order equal to task order
whatever order the workers finish in.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from qcong.models.schemas import CheckResult, CheckTask
from qcong.services.cyclotomic import CyclotomicCache
from qcong.services.registry import run_task

logger = logging.getLogger(__name__)

# Frozen cache installed in each worker process
_worker_cache: Optional[CyclotomicCache] = None


def _init_worker(snapshot: Dict[int, Tuple[int, ...]], log_level: int) -> None:
    global _worker_cache
    logging.getLogger().setLevel(log_level)
    _worker_cache = CyclotomicCache.from_snapshot(snapshot)


def _run_in_worker(task: CheckTask) -> List[CheckResult]:
    return run_task(task, _worker_cache)


def _stop_after_failure(batches: Iterable[List[CheckResult]], fail_fast: bool) -> Iterator[CheckResult]:
    for batch in batches:
        for result in batch:
            yield result
            if fail_fast and not result.holds:
                return


def run_tasks(
    tasks: List[CheckTask],
    parallelism: int = 1,
    cache: Optional[CyclotomicCache] = None,
    fail_fast: bool = False,
) -> List[CheckResult]:
    """
    Run tasks and return their results in task order.

    With fail_fast the output ends at the first failing result in report
    order, so the same prefix comes back for any parallelism.

    Args:
        tasks: Expanded task list
        parallelism: Worker processes; 1 runs in-process
        cache: Cyclotomic cache, frozen and shipped to workers as a snapshot
        fail_fast: Stop after the first failure
    """
    if cache is None:
        cache = CyclotomicCache()
    if parallelism <= 1 or len(tasks) <= 1:
        logger.info(f"Running {len(tasks)} tasks in-process")
        return list(_stop_after_failure((run_task(task, cache) for task in tasks), fail_fast))

    workers = min(parallelism, len(tasks))
    logger.info(f"Running {len(tasks)} tasks on {workers} workers")
    snapshot = cache.snapshot()
    executor = ProcessPoolExecutor(
        max_workers=workers,
        initializer=_init_worker,
        initargs=(snapshot, logging.getLogger().getEffectiveLevel()),
    )
    try:
        batches = executor.map(_run_in_worker, tasks, chunksize=1)
        results = list(_stop_after_failure(batches, fail_fast))
    except Exception as e:
        logger.error(f"Worker pool failed: {e}")
        executor.shutdown(wait=False, cancel_futures=True)
        raise
    executor.shutdown(wait=True, cancel_futures=True)
    return results
