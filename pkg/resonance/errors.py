"""该模块定义统一异常体系。每类异常对应一个命令行退出码。"""
"""EN: Unified exception hierarchy. Each error class maps to one CLI exit code."""


from .config import EXIT_INVARIANT, EXIT_IO, EXIT_VALIDATION


class ResonanceError(Exception):
    """所有领域异常的基类。"""
    """EN: Base class for all domain errors."""

    exit_code = EXIT_VALIDATION


class InvalidArgumentError(ResonanceError, ValueError):
    """参数不合法，例如模数不是奇素数。"""
    """EN: Invalid argument, e.g. a modulus that is not an odd prime."""


class OutOfRangeError(ResonanceError, IndexError):
    """查询超出预计算表的范围。"""
    """EN: A lookup beyond a precomputed table."""


class DomainError(ResonanceError, ValueError):
    """参数在函数定义域之外。"""
    """EN: Argument outside the function's domain."""


class PoleError(DomainError):
    """在 s = 1 处求值。"""
    """EN: Evaluation at the pole s = 1."""


class ConfigError(ResonanceError, ValueError):
    """配置文件或命令行参数无效。"""
    """EN: Invalid config file entry or command-line flag."""


class BranchFailureError(ResonanceError):
    """沿实轴延拓 log L 时遇到零点或近零点。"""
    """EN: Continuation of log L along the real segment hit a zero or near-zero."""

    exit_code = EXIT_INVARIANT

    def __init__(self, message: str, *, step: int, s: float, j: int | None = None):
        super().__init__(message)
        self.step = int(step)
        self.s = float(s)
        self.j = j


class DivisionGuardError(ResonanceError):
    """|L| 太小，无法安全计算 L'/L。"""
    """EN: |L| too small to form L'/L safely."""

    exit_code = EXIT_INVARIANT


class DegenerateFactorError(ResonanceError):
    """共振子欧拉因子模长退化为零。"""
    """EN: A resonator Euler factor degenerated to zero modulus."""

    exit_code = EXIT_INVARIANT


class EmptyDomainError(ResonanceError):
    """所有特征都被排除，无法取最大值。"""
    """EN: Every character was excluded, nothing to maximize over."""

    exit_code = EXIT_INVARIANT


class InvariantFailure(ResonanceError):
    """校验套件中的硬性不变量失败。"""
    """EN: A hard invariant of the verification suite failed."""

    exit_code = EXIT_INVARIANT


class PersistenceError(ResonanceError, OSError):
    """输出文件无法写入。"""
    """EN: Output file could not be written."""

    exit_code = EXIT_IO


class CorruptResumeError(PersistenceError):
    """断点文件中存在无法解析的行。"""
    """EN: The resume file contains an unparsable line."""

    def __init__(self, message: str, *, line_number: int):
        super().__init__(message)
        self.line_number = int(line_number)


class BoundInapplicableWarning(UserWarning):
    """cos(theta) < 0 时下界不成立，数值仍会返回。"""
    """EN: The bound does not apply when cos(theta) < 0; the value is still returned."""


class SoftCheckWarning(UserWarning):
    """软检查未通过，只告警不判失败。"""
    """EN: A soft check did not pass; reported as a warning only."""
