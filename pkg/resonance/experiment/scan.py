"""素数模扫描。任务按 (q, sigma, theta) 固定顺序排列，由单一写入者按顺序落盘。"""
"""EN: Scans over prime moduli. Tasks run in fixed (q, sigma, theta) order and one writer persists them in that order."""


import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..arith import PrimeSieve, next_prime, sieve
from ..config import SCHEMA_VERSION
from ..records import RecordStore, ScanRecord, write_summary
from ..run_config import RunConfig
from .resonate import compute_record

logger = logging.getLogger(__name__)

Task = tuple[int, float, float]

# 每个工作进程只建一次筛表。
# EN: Each worker process builds its sieve once.
_WORKER_STATE: dict = {}


@dataclass(frozen=True)
class ScanOutcome:
    written: int
    skipped: int
    total_records: int
    summary_path: Path


def select_primes(q_min: int, q_max: int, targets: int = 0) -> list[int]:
    """targets > 0 时取对数等距目标并上取到素数；否则取区间内全部奇素数。"""
    """EN: With targets > 0, take log-spaced targets rounded up to primes; otherwise every odd prime in range."""
    lo, hi = max(3, int(q_min)), int(q_max)
    if lo > hi:
        return []
    if targets <= 0:
        return [int(p) for p in sieve(max(hi, 2)).primes if p >= lo]
    points = np.geomspace(lo, hi, int(targets)) if targets > 1 else np.array([float(lo)])
    chosen: list[int] = []
    for point in points:
        prime = next_prime(math.ceil(point))
        # 上取后超出区间的目标丢弃，重复的合并。
        # EN: Targets pushed past q_max are dropped and duplicates collapse.
        if prime > hi or (chosen and prime == chosen[-1]):
            continue
        chosen.append(prime)
    return chosen


def build_tasks(config: RunConfig) -> list[Task]:
    return [
        (q, float(sigma), float(theta))
        for q in select_primes(config.q_min, config.q_max, config.targets)
        for sigma in config.sigma_list
        for theta in config.theta_list
    ]


def _init_worker(config: RunConfig):
    _WORKER_STATE["config"] = config
    _WORKER_STATE["table"] = sieve(config.Y_cap)


def _run_task(task: Task) -> ScanRecord:
    q, sigma, theta = task
    return compute_record(q, sigma, theta, _WORKER_STATE["config"], table=_WORKER_STATE["table"])


def _run_inline(tasks: list[Task], config: RunConfig):
    table: PrimeSieve | None = sieve(config.Y_cap) if tasks else None
    for q, sigma, theta in tasks:
        yield compute_record(q, sigma, theta, config, table=table)


def cmd_scan(config: RunConfig, store: RecordStore | None = None) -> ScanOutcome:
    """扫描 [q_min, q_max] 内的素数，跳过输出文件中已有的记录，最后写出 CSV 汇总。"""
    """EN: Scan primes in [q_min, q_max], skip records already in the output, then write the CSV summary."""
    store = store or RecordStore(config.out_path)
    existing = store.load()
    store.touch()
    done = store.completed_keys(existing)
    all_tasks = build_tasks(config)
    pending = [task for task in all_tasks if (task[0], task[1], task[2], SCHEMA_VERSION) not in done]
    skipped = len(all_tasks) - len(pending)
    logger.info("扫描任务 %d 个，已完成 %d 个，待运行 %d 个", len(all_tasks), skipped, len(pending))

    written: list[ScanRecord] = []
    if config.workers > 1 and len(pending) > 1:
        with ProcessPoolExecutor(
            max_workers=config.workers, initializer=_init_worker, initargs=(config,)
        ) as executor:
            # map 按提交顺序返回结果，写入顺序与 workers 无关。
            # EN: map yields results in submission order, so write order is independent of worker count.
            for record in executor.map(_run_task, pending):
                store.append(record)
                written.append(record)
    else:
        for record in _run_inline(pending, config):
            store.append(record)
            written.append(record)

    records = existing + written
    write_summary(records, config.summary_path)
    return ScanOutcome(
        written=len(written), skipped=skipped, total_records=len(records), summary_path=config.summary_path
    )
