"""该模块负责实验记录持久化。每行一个 JSON 对象，支持断点续跑，并生成 CSV 汇总。"""
from __future__ import annotations
"""EN: Experiment record persistence: one JSON object per line, resume support, and a CSV summary."""


import csv
import json
import logging
import math
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable

from .config import SCHEMA_VERSION
from .errors import CorruptResumeError, PersistenceError

logger = logging.getLogger(__name__)

ResumeKey = tuple[int, float, float, int]


@dataclass(frozen=True)
class ScanRecord:
    """一次 (q, sigma, theta) 实验的结果行。"""
    """EN: Result row of one (q, sigma, theta) experiment."""

    schema_version: int
    q: int
    sigma: float
    theta: float
    A: float
    X: float
    Y: float
    grh: bool
    Q1: float
    Q2: float
    ratio: float
    ratio_rhs: float
    argmax_j: int
    max_re_e_itheta_logL: float
    max_log_abs_L: float
    max_neg_re_logderiv: float
    # cos(theta) < 0 或 q 太小时下界不适用，记为 null。
    # EN: null when the bound does not apply (cos(theta) < 0 or q too small).
    predicted_logL_bound: float | None
    predicted_logderiv_bound: float | None
    excluded_count: int
    runtime_ms: float
    truncation_slack: float
    weighted_mean: float
    Y_source: str
    A_mode: str
    epsilon: float
    s1_over_q1: float
    excluded_weight_fraction: float
    median_truncation_gap: float
    # Q1、Q2 都已除以 exp(log_weight_scale) = |R(chi_0)|^2。
    # EN: Q1 and Q2 are both divided by exp(log_weight_scale) = |R(chi_0)|^2.
    log_weight_scale: float
    # 对数导数版本：最大化 -Re(e^{-i theta} L'/L)，矩用带 log p 权重的截断和。
    # EN: Log-derivative variant: maximizes -Re(e^{-i theta} L'/L) with moments over the log p weighted truncated sum.
    max_neg_re_e_itheta_logderiv: float
    logderiv_Q2: float
    logderiv_ratio: float
    logderiv_ratio_rhs: float
    logderiv_argmax_j: int
    logderiv_weighted_mean: float
    logderiv_truncation_slack: float
    logderiv_excluded_count: int
    asymptotic_terms_dropped: bool = True

    @property
    def resume_key(self) -> ResumeKey:
        return (int(self.q), float(self.sigma), float(self.theta), int(self.schema_version))

    def to_json(self) -> str:
        # nan 与 inf 写成 null，输出保持标准 JSON。
        # EN: nan and inf are written as null so the output stays standard JSON.
        payload = {
            key: None if isinstance(value, float) and not math.isfinite(value) else value
            for key, value in asdict(self).items()
        }
        return json.dumps(payload, ensure_ascii=False, allow_nan=False)

    @classmethod
    def from_json(cls, line: str) -> "ScanRecord":
        payload = json.loads(line)
        if not isinstance(payload, dict):
            raise ValueError("记录必须是 JSON 对象")
        expected = set(SCAN_RECORD_FIELDS)
        if set(payload) != expected:
            missing = sorted(expected - set(payload))
            extra = sorted(set(payload) - expected)
            raise ValueError(f"字段不匹配: 缺少 {missing}, 多余 {extra}")
        for key in _FLOAT_FIELDS:
            if payload[key] is None:
                payload[key] = float("nan")
        return cls(**payload)

    def numeric_fingerprint(self) -> dict:
        """用于确定性比较的字段；墙钟耗时除外。"""
        """EN: Fields compared for determinism; wall-clock runtime is left out."""
        payload = asdict(self)
        payload.pop("runtime_ms")
        return payload

    def check(self, slack: float = 1e-12) -> list[str]:
        """检查记录不变量，返回违反项列表。"""
        """EN: Check the record invariants and return the violations."""
        problems = _chain_problems(
            self.theta, self.Q1, self.Q2, self.ratio, self.max_re_e_itheta_logL, self.truncation_slack, self.weighted_mean, slack
        )
        problems += [
            f"logderiv {problem}"
            for problem in _chain_problems(
                self.theta,
                self.Q1,
                self.logderiv_Q2,
                self.logderiv_ratio,
                self.max_neg_re_e_itheta_logderiv,
                self.logderiv_truncation_slack,
                self.logderiv_weighted_mean,
                slack,
            )
        ]
        return problems


def _chain_problems(
    theta: float, Q1: float, Q2: float, ratio: float, maximum: float, truncation_slack: float, mean: float, slack: float
) -> list[str]:
    # max >= 加权平均 >= ratio - truncation_slack；cos(theta) < 0 时不检查后一半。
    # EN: max >= weighted mean >= ratio - truncation_slack; the second half is skipped when cos(theta) < 0.
    problems = []
    if not math.isclose(ratio, Q2 / Q1, rel_tol=1e-12, abs_tol=1e-300):
        problems.append("ratio != Q2/Q1")
    if math.cos(theta) >= -1e-15:
        scale = max(1.0, abs(ratio), abs(maximum))
        if maximum < ratio - truncation_slack - slack * scale:
            problems.append("max < ratio - truncation_slack")
    if maximum < mean - slack * max(1.0, abs(mean)):
        problems.append("max < weighted_mean")
    return problems


SCAN_RECORD_FIELDS = tuple(f.name for f in fields(ScanRecord))
_FLOAT_FIELDS = tuple(f.name for f in fields(ScanRecord) if f.type == "float")


class RecordStore:
    """JSONL 记录文件。只追加写入；读取时校验每一行。"""
    """EN: JSONL record file; append-only writes, every line validated on read."""

    def __init__(self, path: Path):
        self.path = Path(path)

    def load(self) -> list[ScanRecord]:
        """读取全部记录。中间的坏行直接报错；末尾未写完的半行视为中断写入并截掉。"""
        """EN: Read every record. A bad line in the middle aborts; an unterminated trailing fragment counts as an interrupted write and is truncated."""
        if not self.path.exists():
            return []
        try:
            text = self.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise PersistenceError(f"无法读取记录文件 {self.path}: {exc}") from exc

        lines = text.split("\n")
        tail = lines.pop()
        records: list[ScanRecord] = []
        for line_number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            records.append(self._parse(line, line_number))

        if tail.strip():
            try:
                records.append(ScanRecord.from_json(tail))
                self._write_raw("\n")
            except (ValueError, TypeError):
                logger.warning("记录文件 %s 第 %d 行未写完，已截断", self.path, len(lines) + 1)
                self._truncate(len(text.encode("utf-8")) - len(tail.encode("utf-8")))
        return records

    def _parse(self, line: str, line_number: int) -> ScanRecord:
        try:
            record = ScanRecord.from_json(line)
        except (ValueError, TypeError) as exc:
            raise CorruptResumeError(
                f"记录文件 {self.path} 第 {line_number} 行无法解析: {exc}",
                line_number=line_number,
            ) from exc
        return record

    def completed_keys(self, records: Iterable[ScanRecord] | None = None) -> set[ResumeKey]:
        records = self.load() if records is None else records
        return {record.resume_key for record in records if record.schema_version == SCHEMA_VERSION}

    def touch(self):
        """确保输出文件存在，空扫描也留下一个空文件。"""
        """EN: Make sure the output file exists, so an empty scan still leaves an empty file."""
        self._write_raw("")

    def append(self, record: ScanRecord):
        self._write_raw(record.to_json() + "\n")

    def _write_raw(self, text: str):
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(text)
                handle.flush()
                os.fsync(handle.fileno())
        except OSError as exc:
            raise PersistenceError(f"无法写入记录文件 {self.path}: {exc}") from exc

    def _truncate(self, size: int):
        try:
            with self.path.open("r+b") as handle:
                handle.truncate(size)
        except OSError as exc:
            raise PersistenceError(f"无法截断记录文件 {self.path}: {exc}") from exc


SUMMARY_COLUMNS = (
    "q",
    "sigma",
    "theta",
    "max_log_abs_L",
    "predicted_logL_bound",
    "logL_ratio",
    "max_neg_re_e_itheta_logderiv",
    "predicted_logderiv_bound",
    "logderiv_bound_ratio",
    "logderiv_ratio",
    "logderiv_ratio_rhs",
    "excluded_count",
)


def _ratio(value: float, bound: float | None) -> float | str:
    if bound is None or bound == 0 or not math.isfinite(value):
        return ""
    return value / bound


def write_summary(records: Iterable[ScanRecord], path: Path) -> int:
    """按 q 排序写出观测最大值与预测下界之比。返回写出的行数。"""
    """EN: Write observed maxima over predicted bounds, sorted by q. Returns the row count."""
    rows = sorted(records, key=lambda r: (r.q, r.sigma, r.theta))
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(SUMMARY_COLUMNS)
            for r in rows:
                writer.writerow(
                    [
                        r.q,
                        repr(r.sigma),
                        repr(r.theta),
                        repr(r.max_log_abs_L),
                        "" if r.predicted_logL_bound is None else repr(r.predicted_logL_bound),
                        _ratio(r.max_log_abs_L, r.predicted_logL_bound),
                        repr(r.max_neg_re_e_itheta_logderiv),
                        "" if r.predicted_logderiv_bound is None else repr(r.predicted_logderiv_bound),
                        _ratio(r.max_neg_re_e_itheta_logderiv, r.predicted_logderiv_bound),
                        repr(r.logderiv_ratio),
                        repr(r.logderiv_ratio_rhs),
                        r.excluded_count,
                    ]
                )
    except OSError as exc:
        raise PersistenceError(f"无法写入汇总文件 {path}: {exc}") from exc
    return len(rows)
