"""该模块定义校验项结构与运行器。每个校验项是一个数据类条目，按级别筛选后依次执行。"""
"""EN: Check definitions and the runner. Each check is a dataclass entry; checks are filtered by level and run in order."""


import logging
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from ..arith import PrimeSieve, sieve
from ..characters import CharacterGroup
from ..config import DISCREPANCY_WARN_MEDIAN, SEED_DEFAULT
from ..errors import InvalidArgumentError, SoftCheckWarning

logger = logging.getLogger(__name__)

VerifyLevel = Literal["quick", "full"]
VERIFY_LEVELS: tuple[str, ...] = ("quick", "full")


@dataclass
class VerifyContext:
    """校验运行上下文。缓存特征群与筛表；group_factory 可替换以注入故障。"""
    """EN: Verification context caching groups and sieves; group_factory can be swapped to inject faults."""

    level: VerifyLevel = "quick"
    seed: int = SEED_DEFAULT
    group_factory: Callable[[int], CharacterGroup] = CharacterGroup.build
    # 截断差异软检查的中位数阈值。
    # EN: Median threshold of the truncation-discrepancy soft check.
    discrepancy_warn: float = DISCREPANCY_WARN_MEDIAN
    rng: np.random.Generator = field(init=False)
    _groups: dict[int, CharacterGroup] = field(default_factory=dict, init=False, repr=False)
    _sieve: PrimeSieve | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.rng = np.random.default_rng(self.seed)

    @property
    def full(self) -> bool:
        return self.level == "full"

    def group(self, q: int) -> CharacterGroup:
        if q not in self._groups:
            self._groups[q] = self.group_factory(q)
        return self._groups[q]

    def table(self, limit: int) -> PrimeSieve:
        if self._sieve is None or self._sieve.limit < limit:
            self._sieve = sieve(limit)
        return self._sieve


@dataclass(frozen=True)
class InvariantCheck:
    """单个校验项。"""
    """EN: A single check."""
    name: str                                        # 唯一标识
    module: str                                      # 所属模块
    levels: tuple[str, ...]                          # 运行级别
    run: Callable[[VerifyContext], tuple[bool, str]]
    soft: bool = False                               # 软检查只告警


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    soft: bool
    elapsed_ms: float


@dataclass
class VerifyReport:
    level: str
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if not r.soft)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed and not r.soft]

    @property
    def warnings(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed and r.soft]

    def format_text(self) -> str:
        width = max((len(r.name) for r in self.results), default=0)
        lines = []
        for r in self.results:
            status = "PASS" if r.passed else ("WARN" if r.soft else "FAIL")
            lines.append(f"{status}  {r.name.ljust(width)}  {r.elapsed_ms:8.0f} ms  {r.detail}")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"{verdict}: {len(self.results)} checks, {len(self.failures)} failed, {len(self.warnings)} warnings")
        return "\n".join(lines)


def run_checks(checks: list[InvariantCheck], context: VerifyContext) -> VerifyReport:
    """依次执行校验项。异常计为失败并记录异常类型。"""
    """EN: Run the checks in order; an exception counts as a failure and records its type."""
    if context.level not in VERIFY_LEVELS:
        raise InvalidArgumentError(f"未知的校验级别: {context.level}")
    results: list[CheckResult] = []
    for check in checks:
        if context.level not in check.levels:
            continue
        started = time.perf_counter()
        try:
            passed, detail = check.run(context)
        except Exception as exc:  # 任何异常都记为该项失败
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        elapsed = (time.perf_counter() - started) * 1000.0
        result = CheckResult(check.name, bool(passed), detail, check.soft, elapsed)
        results.append(result)
        if result.passed:
            logger.debug("校验通过 %s (%.0f ms)", check.name, elapsed)
        elif check.soft:
            logger.warning("软检查未通过 %s: %s", check.name, detail)
            warnings.warn(f"{check.name}: {detail}", SoftCheckWarning, stacklevel=2)
        else:
            logger.error("校验失败 %s: %s", check.name, detail)
    return VerifyReport(level=context.level, results=results)
