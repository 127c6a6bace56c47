# tests/unit/utils/test_concurrency.py
import time

import numpy as np
import pytest

from l1sections.utils.concurrency import block_seeds, run_parallel_tasks, split_blocks


def _slow_square(x, delay):
    time.sleep(delay)
    return x * x


def _boom(x):
    raise RuntimeError(f"block {x} failed")


def test_results_keep_submission_order():
    tasks = [(_slow_square, (i, 0.02 * (5 - i))) for i in range(5)]
    assert run_parallel_tasks(tasks, max_workers=5) == [0, 1, 4, 9, 16]


def test_single_worker_runs_inline():
    assert run_parallel_tasks([(_slow_square, (3, 0.0))], max_workers=4) == [9]
    assert run_parallel_tasks([], max_workers=4) == []


def test_task_exceptions_propagate(caplog):
    tasks = [(_slow_square, (1, 0.0)), (_boom, (7,))]
    with pytest.raises(RuntimeError, match="block 7 failed"):
        run_parallel_tasks(tasks, max_workers=2)
    assert "_boom" in caplog.text


def test_split_blocks():
    assert split_blocks(10, 4) == [4, 4, 2]
    assert split_blocks(8, 4) == [4, 4]
    assert split_blocks(0, 4) == []


def test_block_seeds_are_stable_and_distinct():
    first = [np.random.default_rng(s).integers(1 << 30) for s in block_seeds(11, 3)]
    again = [np.random.default_rng(s).integers(1 << 30) for s in block_seeds(11, 3)]
    assert first == again
    assert len(set(first)) == 3
