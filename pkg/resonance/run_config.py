"""该模块负责运行配置。解析 key = value 配置文件，并按 默认值 < 配置文件 < 命令行 的顺序合并。"""
"""EN: Run configuration: parses the flat key = value config file and merges defaults < config file < command-line flags."""


import math
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable

from .config import (
    DEFAULT_CONFIG_PATH,
    DEFAULT_OUT_PATH,
    DISCREPANCY_WARN_MEDIAN,
    EM_CUTOFF_DEFAULT,
    EM_ORDER_DEFAULT,
    SCAN_TARGETS_DEFAULT,
    SEED_DEFAULT,
    SIEVE_LIMIT_CAP,
    WORKERS_DEFAULT,
    Y_CAP_DEFAULT,
    ZERO_GUARD_DEFAULT,
)
from .constants import default_epsilon
from .errors import ConfigError, InvalidArgumentError
from .lfun import EvalParams

_TWO_PI = 2.0 * math.pi
# 支持 pi、pi/4、7pi/4、7*pi/4 这类角度写法。
# EN: Accepts angle spellings such as pi, pi/4, 7pi/4 and 7*pi/4.
_ANGLE_PATTERN = re.compile(r"^\s*([0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$", re.IGNORECASE)


@dataclass(frozen=True)
class RunConfig:
    """一次运行的全部参数。构造时校验，非法值抛出 ConfigError。"""
    """EN: Every parameter of one run; validated on construction, invalid values raise ConfigError."""

    q_min: int = 1000
    q_max: int = 100000
    sigma_list: tuple[float, ...] = (0.75,)
    theta_list: tuple[float, ...] = (0.0,)
    A: float | str = "auto"
    # None 表示按 sigma 取默认 epsilon。
    # EN: None means the per-sigma default epsilon.
    epsilon: float | None = None
    grh: bool = False
    Y_cap: int = Y_CAP_DEFAULT
    X_override: float | None = None
    workers: int = WORKERS_DEFAULT
    out_path: Path = field(default=DEFAULT_OUT_PATH)
    seed: int = SEED_DEFAULT
    targets: int = SCAN_TARGETS_DEFAULT
    em_cutoff: int = EM_CUTOFF_DEFAULT
    em_order: int = EM_ORDER_DEFAULT
    zero_guard: float = ZERO_GUARD_DEFAULT
    discrepancy_warn: float = DISCREPANCY_WARN_MEDIAN

    def __post_init__(self):
        if self.q_min > self.q_max:
            raise ConfigError(f"要求 q_min <= q_max: q_min={self.q_min}, q_max={self.q_max}")
        if not self.sigma_list:
            raise ConfigError("sigma 列表不能为空")
        for sigma in self.sigma_list:
            if not 0.5 < sigma < 1.0:
                raise ConfigError(f"sigma 须在 (1/2, 1) 内: sigma={sigma}")
            if self.epsilon is not None and not 0.0 <= self.epsilon < sigma - 0.5:
                raise ConfigError(f"epsilon 须满足 0 <= epsilon < sigma - 1/2: epsilon={self.epsilon}, sigma={sigma}")
        if not self.theta_list:
            raise ConfigError("theta 列表不能为空")
        for theta in self.theta_list:
            if not 0.0 <= theta <= _TWO_PI:
                raise ConfigError(f"theta 须在 [0, 2*pi] 内: theta={theta}")
        if isinstance(self.A, str):
            if self.A != "auto":
                raise ConfigError(f"A 必须是正数或 auto: {self.A}")
        elif not self.A > 0:
            raise ConfigError(f"A 必须为正: A={self.A}")
        if not 2 <= self.Y_cap <= SIEVE_LIMIT_CAP:
            raise ConfigError(f"Y_cap 须在 [2, {SIEVE_LIMIT_CAP}] 内: Y_cap={self.Y_cap}")
        if self.X_override is not None and not self.X_override > 0:
            raise ConfigError(f"X_override 必须为正: {self.X_override}")
        if self.workers < 1:
            raise ConfigError(f"workers 至少为 1: workers={self.workers}")
        if self.targets < 0:
            raise ConfigError(f"targets 不能为负: targets={self.targets}")
        if not self.discrepancy_warn > 0:
            raise ConfigError(f"discrepancy_warn 必须为正: {self.discrepancy_warn}")
        try:
            self.eval_params()
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from exc

    def eval_params(self) -> EvalParams:
        return EvalParams(em_cutoff=self.em_cutoff, em_order=self.em_order, zero_guard=self.zero_guard)

    def epsilon_for(self, sigma: float) -> float:
        return default_epsilon(sigma) if self.epsilon is None else self.epsilon

    @property
    def summary_path(self) -> Path:
        """汇总 CSV 与 JSONL 同目录同名。"""
        """EN: The summary CSV sits next to the JSONL with the same stem."""
        return self.out_path.with_suffix(".summary.csv")


def parse_angle(text: str) -> float:
    """解析角度。数字按弧度，也接受 pi 的倍数写法。"""
    """EN: Parse an angle in radians; multiples of pi are accepted too."""
    raw = str(text).strip()
    match = _ANGLE_PATTERN.match(raw)
    if match:
        numerator = float(match.group(1)) if match.group(1) not in ("", ".") else 1.0
        denominator = float(match.group(2)) if match.group(2) else 1.0
        if denominator == 0:
            raise ConfigError(f"角度分母不能为 0: {raw}")
        return numerator * math.pi / denominator
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"无法解析的角度: {raw}") from exc


def _read_int(text: str) -> int:
    try:
        value = float(str(text).strip())
    except ValueError as exc:
        raise ConfigError(f"需要整数: {text}") from exc
    # 允许 1e5 这类写法，但必须是整数值。
    # EN: Spellings like 1e5 are allowed as long as the value is integral.
    if not value.is_integer():
        raise ConfigError(f"需要整数: {text}")
    return int(value)


def _read_float(text: str) -> float:
    try:
        return float(str(text).strip())
    except ValueError as exc:
        raise ConfigError(f"需要实数: {text}") from exc


def _read_optional_float(text: str) -> float | None:
    if str(text).strip().lower() in {"", "none", "auto"}:
        return None
    return _read_float(text)


def _read_float_list(text: str) -> tuple[float, ...]:
    return tuple(_read_float(item) for item in str(text).split(",") if item.strip())


def _read_angle_list(text: str) -> tuple[float, ...]:
    return tuple(parse_angle(item) for item in str(text).split(",") if item.strip())


def _read_bool(text: str) -> bool:
    lowered = str(text).strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise ConfigError(f"需要布尔值: {text}")


def _read_A(text: str) -> float | str:
    lowered = str(text).strip().lower()
    return "auto" if lowered == "auto" else _read_float(text)


_KEY_READERS: dict[str, Callable[[str], Any]] = {
    "q_min": _read_int,
    "q_max": _read_int,
    "sigma_list": _read_float_list,
    "theta_list": _read_angle_list,
    "A": _read_A,
    "epsilon": _read_optional_float,
    "grh": _read_bool,
    "Y_cap": _read_int,
    "X_override": _read_optional_float,
    "workers": _read_int,
    "out_path": lambda text: Path(str(text).strip()),
    "seed": _read_int,
    "targets": _read_int,
    "em_cutoff": _read_int,
    "em_order": _read_int,
    "zero_guard": _read_float,
    "discrepancy_warn": _read_float,
}

# 单值写法 sigma / theta 等价于只含一个元素的列表。
# EN: The singular keys sigma and theta are one-element lists.
_KEY_ALIASES = {"sigma": "sigma_list", "theta": "theta_list"}


def read_setting(key: str, text: str) -> tuple[str, Any]:
    """按配置项的读取器解析一个文本值，返回 (规范键名, 值)。命令行与配置文件共用。"""
    """EN: Parse one text value with the key's reader and return (canonical key, value); shared by the CLI and the config file."""
    key = _KEY_ALIASES.get(key, key)
    reader = _KEY_READERS.get(key)
    if reader is None:
        raise ConfigError(f"未知配置项 {key}")
    return key, reader(text)


def parse_config_text(content: str, source: str = "<text>") -> dict[str, Any]:
    """解析 key = value 文本。空行与 # 注释跳过，未知键报错并给出行号。"""
    """EN: Parse key = value text. Blank lines and # comments are skipped; unknown keys fail with the line number."""
    result: dict[str, Any] = {}
    for line_number, raw_line in enumerate(str(content or "").splitlines(), start=1):
        stripped = raw_line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{line_number}: 缺少 '=': {raw_line.strip()}")
        key, raw_value = (part.strip() for part in stripped.split("=", 1))
        try:
            key, value = read_setting(key, raw_value)
            result[key] = value
        except ConfigError as exc:
            raise ConfigError(f"{source}:{line_number}: {exc}") from exc
    return result


def load_config_file(path: Path | None, required: bool = False) -> dict[str, Any]:
    """读取配置文件。显式指定但不存在时报错；默认路径不存在时返回空配置。"""
    """EN: Read a config file. An explicit path that is missing is an error; a missing default path yields no settings."""
    if path is None:
        path = DEFAULT_CONFIG_PATH
        required = False
    path = Path(path)
    if not path.exists():
        if required:
            raise ConfigError(f"配置文件不存在: {path}")
        return {}
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"无法读取配置文件 {path}: {exc}") from exc
    return parse_config_text(content, source=str(path))


def build_run_config(file_values: dict[str, Any] | None = None, overrides: dict[str, Any] | None = None) -> RunConfig:
    """合并顺序：默认值 < 配置文件 < 命令行。overrides 中为 None 的项不覆盖。"""
    """EN: Merge order defaults < config file < command line; None entries in overrides do not override."""
    known = {f.name for f in fields(RunConfig)}
    merged: dict[str, Any] = {}
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in known:
                raise ConfigError(f"未知配置项 {key}")
            merged[key] = value
    for key in ("sigma_list", "theta_list"):
        if key in merged:
            merged[key] = tuple(float(v) for v in merged[key])
    if "out_path" in merged:
        merged["out_path"] = Path(merged["out_path"])
    return RunConfig(**merged)


def with_overrides(config: RunConfig, **changes: Any) -> RunConfig:
    return replace(config, **{k: v for k, v in changes.items() if v is not None})
