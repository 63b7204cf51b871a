"""实验编排导出。"""
"""EN: Experiment orchestration exports."""

from .resonate import cmd_resonate, compute_record, sieve_for
from .scan import ScanOutcome, build_tasks, cmd_scan, select_primes

__all__ = [
    "ScanOutcome",
    "build_tasks",
    "cmd_resonate",
    "cmd_scan",
    "compute_record",
    "select_primes",
    "sieve_for",
]
