# src/l1sections/utils/concurrency.py
import concurrent.futures
import logging
from typing import Any, Callable, List, Sequence

import numpy as np

logger = logging.getLogger(__name__)


def shutdown_executor(executor: concurrent.futures.Executor, wait: bool = True):
    """Gracefully shuts down a concurrent.futures.Executor."""
    if isinstance(executor, (concurrent.futures.ThreadPoolExecutor, concurrent.futures.ProcessPoolExecutor)):
        logger.debug(f"Shutting down {type(executor).__name__}...")
        executor.shutdown(wait=wait, cancel_futures=not wait)
    else:
        logger.warning(f"Unsupported executor type for shutdown: {type(executor)}")


def run_parallel_tasks(tasks_with_args: Sequence[tuple[Callable, tuple]], max_workers: int) -> List[Any]:
    """
    Runs a list of tasks in parallel using ThreadPoolExecutor.
    Each item in tasks_with_args should be a tuple: (function, (arg1, arg2, ...)).

    Results come back in submission order, so reductions over them do not
    depend on scheduling. The first task exception is re-raised.
    """
    if not tasks_with_args:
        return []
    if max_workers <= 1 or len(tasks_with_args) == 1:
        return [func(*args) for func, args in tasks_with_args]

    results: List[Any] = [None] * len(tasks_with_args)
    executor = concurrent.futures.ThreadPoolExecutor(max_workers=max_workers)
    try:
        future_to_index = {
            executor.submit(func, *args): idx for idx, (func, args) in enumerate(tasks_with_args)
        }
        for future in concurrent.futures.as_completed(future_to_index):
            idx = future_to_index[future]
            try:
                results[idx] = future.result()
            except Exception as exc:
                task_func, task_args = tasks_with_args[idx]
                logger.error(f"Task {task_func.__name__} (block {idx}) generated an exception: {exc}")
                shutdown_executor(executor, wait=False)
                raise
    finally:
        shutdown_executor(executor, wait=True)
    return results


def block_seeds(seed: int, blocks: int) -> List[np.random.SeedSequence]:
    """Independent per-block seed streams; block i always gets the same stream."""
    return np.random.SeedSequence(seed).spawn(blocks)


def split_blocks(total: int, block_size: int) -> List[int]:
    """Sizes of consecutive fixed-size blocks covering `total` items."""
    if total <= 0:
        return []
    full, rest = divmod(total, block_size)
    return [block_size] * full + ([rest] if rest else [])
