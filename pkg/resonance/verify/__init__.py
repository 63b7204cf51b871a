"""不变量自检。"""
"""EN: Invariant self-checks."""


from typing import Callable

from ..characters import CharacterGroup
from ..config import DISCREPANCY_WARN_MEDIAN, SEED_DEFAULT
from ..errors import InvalidArgumentError
from .checks import CHECKS
from .registry import VERIFY_LEVELS, CheckResult, InvariantCheck, VerifyContext, VerifyReport, run_checks


def run_verify(
    level: str = "quick",
    seed: int = SEED_DEFAULT,
    group_factory: Callable[[int], CharacterGroup] = CharacterGroup.build,
    names: list[str] | None = None,
    discrepancy_warn: float = DISCREPANCY_WARN_MEDIAN,
) -> VerifyReport:
    """按级别运行校验；names 给出时只运行这些项。"""
    """EN: Run the checks for a level; when names is given only those run."""
    context = VerifyContext(
        level=level, seed=seed, group_factory=group_factory, discrepancy_warn=discrepancy_warn
    )
    if names is None:
        selected = list(CHECKS.values())
    else:
        unknown = [name for name in names if name not in CHECKS]
        if unknown:
            raise InvalidArgumentError(f"未知的校验项: {unknown}")
        selected = [CHECKS[name] for name in names]
    return run_checks(selected, context)


__all__ = [
    "CHECKS",
    "VERIFY_LEVELS",
    "CheckResult",
    "InvariantCheck",
    "VerifyContext",
    "VerifyReport",
    "run_checks",
    "run_verify",
]
