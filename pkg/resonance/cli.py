"""命令行入口。子命令 constants、chars、resonate、scan、verify，异常统一映射为退出码。"""
"""EN: Command-line front end. Subcommands constants, chars, resonate, scan and verify; errors map to exit codes in one place."""


import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any

from .characters import CharacterGroup, character_table
from .config import APP_NAME, CHARS_MAX_Q, EXIT_INVARIANT, EXIT_IO, EXIT_OK, EXIT_VALIDATION
from .constants import constant_bundle
from .errors import ConfigError, InvalidArgumentError, ResonanceError
from .experiment import cmd_resonate, cmd_scan
from .run_config import RunConfig, build_run_config, load_config_file, read_setting
from .verify import VERIFY_LEVELS, run_verify

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class _ArgumentParser(argparse.ArgumentParser):
    # 参数错误走 ConfigError，退出码与配置错误一致。
    # EN: Usage errors raise ConfigError so they share the validation exit code.
    def error(self, message: str):
        raise ConfigError(message)


def setup_logging(level: str = "INFO"):
    """安装唯一的控制台日志处理器，并把 warnings 转入日志。"""
    """EN: Install the single console handler and route warnings into logging."""
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT, stream=sys.stderr, force=True)
    logging.captureWarnings(True)


def _add_model_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--A", dest="A", help="共振子参数 A，数值或 auto / EN: resonator A, a number or auto")
    parser.add_argument("--X", dest="X_override", help="直接指定共振子长度 X / EN: explicit resonator length X")
    parser.add_argument("--epsilon", help="epsilon，默认 min(0.01, (sigma-1/2)/2)")
    parser.add_argument("--grh", action="store_true", help="按 GRH 取 a_max / EN: use the GRH a_max")
    parser.add_argument("--Y-cap", dest="Y_cap", help="截断长度 Y 的上限 / EN: cap on the truncation length Y")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog=APP_NAME, description="素数模 Dirichlet L 函数的共振法实验 / EN: resonance-method experiments for Dirichlet L-functions mod a prime")
    parser.add_argument("--config", type=Path, help="key = value 配置文件 / EN: key = value config file")
    parser.add_argument("--out", dest="out_path", help="JSONL 输出文件 / EN: JSONL output file")
    parser.add_argument("--workers", help="工作进程数 / EN: worker process count")
    parser.add_argument("--seed", help="校验用随机种子 / EN: seed for randomized checks")
    parser.add_argument("--log-level", default="INFO", type=str.upper, choices=LOG_LEVELS)
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    constants = subparsers.add_parser("constants", help="打印常数表 / EN: print the constant bundle")
    constants.add_argument("--sigma", required=True)
    constants.add_argument("--theta", default="0")
    constants.add_argument("--epsilon")
    constants.add_argument("--grh", action="store_true")
    constants.add_argument("--json", action="store_true", help="只输出 JSON / EN: JSON only")
    constants.set_defaults(handler=_run_constants)

    chars = subparsers.add_parser("chars", help="输出特征表 CSV / EN: dump the character table as CSV")
    chars.add_argument("--q", required=True)
    chars.set_defaults(handler=_run_chars)

    resonate = subparsers.add_parser("resonate", help="单个 (q, sigma, theta) 实验 / EN: one (q, sigma, theta) experiment")
    resonate.add_argument("--q", required=True)
    resonate.add_argument("--sigma", required=True)
    resonate.add_argument("--theta", default="0")
    _add_model_flags(resonate)
    resonate.set_defaults(handler=_run_resonate)

    scan = subparsers.add_parser("scan", help="扫描素数区间 / EN: scan a prime range")
    scan.add_argument("--q-min", dest="q_min")
    scan.add_argument("--q-max", dest="q_max")
    scan.add_argument("--sigma", help="逗号分隔 / EN: comma separated")
    scan.add_argument("--theta", help="逗号分隔，可写 pi/4 / EN: comma separated, pi/4 allowed")
    scan.add_argument("--targets", help="对数等距目标个数，0 表示全部素数 / EN: log-spaced target count, 0 means every prime")
    _add_model_flags(scan)
    scan.set_defaults(handler=_run_scan)

    verify = subparsers.add_parser("verify", help="运行不变量自检 / EN: run the invariant checks")
    verify.add_argument("--level", default="quick", choices=VERIFY_LEVELS)
    verify.set_defaults(handler=_run_verify)
    return parser


def _collect_overrides(args: argparse.Namespace, keys: tuple[str, ...]) -> dict[str, Any]:
    # 命令行文本与配置文件共用同一套读取器。
    # EN: Command-line text goes through the same readers as the config file.
    overrides: dict[str, Any] = {}
    for attr in keys:
        raw = getattr(args, attr, None)
        if raw is None or raw is False:
            continue
        if raw is True:
            overrides[attr] = True
            continue
        key, value = read_setting(attr, raw)
        overrides[key] = value
    return overrides


_GLOBAL_KEYS = ("out_path", "workers", "seed")
_MODEL_KEYS = ("A", "X_override", "epsilon", "grh", "Y_cap")
_SCAN_KEYS = ("q_min", "q_max", "sigma", "theta", "targets")


def _run_config(args: argparse.Namespace, keys: tuple[str, ...], **extra: Any) -> RunConfig:
    file_values = load_config_file(args.config, required=args.config is not None)
    overrides = {**_collect_overrides(args, _GLOBAL_KEYS + keys), **extra}
    return build_run_config(file_values, overrides)


def _single(key: str, raw: str) -> float:
    _, values = read_setting(key, raw)
    if len(values) != 1:
        raise ConfigError(f"{key} 只能给一个值: {raw}")
    return values[0]


def _run_constants(args: argparse.Namespace) -> int:
    sigma = _single("sigma", args.sigma)
    theta = _single("theta", args.theta)
    epsilon = read_setting("epsilon", args.epsilon)[1] if args.epsilon is not None else None
    bundle = constant_bundle(sigma, theta, epsilon=epsilon, grh=args.grh)
    if not args.json:
        print(bundle.format_text())
    print(json.dumps(bundle.to_dict(), ensure_ascii=False))
    return EXIT_OK


def _run_chars(args: argparse.Namespace) -> int:
    _, q = read_setting("q_min", args.q)
    if q > CHARS_MAX_Q:
        raise InvalidArgumentError(f"chars 只支持 q <= {CHARS_MAX_Q}: q={q}")
    G = CharacterGroup.build(q)
    table = character_table(G)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(("j", "n", "re", "im"))
    for j in range(G.m):
        for n in range(G.q):
            value = table[j, n]
            writer.writerow((j, n, repr(float(value.real)), repr(float(value.imag))))
    return EXIT_OK


def _run_resonate(args: argparse.Namespace) -> int:
    _, q = read_setting("q_min", args.q)
    sigma = _single("sigma", args.sigma)
    theta = _single("theta", args.theta)
    config = _run_config(args, _MODEL_KEYS, sigma_list=(sigma,), theta_list=(theta,))
    record = cmd_resonate(q, sigma, theta, config)
    print(record.to_json())
    return EXIT_OK


def _run_scan(args: argparse.Namespace) -> int:
    config = _run_config(args, _MODEL_KEYS + _SCAN_KEYS)
    outcome = cmd_scan(config)
    print(
        f"写入 {outcome.written} 条，跳过 {outcome.skipped} 条，共 {outcome.total_records} 条记录；"
        f"汇总: {outcome.summary_path}"
    )
    return EXIT_OK


def _run_verify(args: argparse.Namespace) -> int:
    config = _run_config(args, ())
    report = run_verify(args.level, seed=config.seed, discrepancy_warn=config.discrepancy_warn)
    print(report.format_text())
    return EXIT_OK if report.passed else EXIT_INVARIANT


def main(argv: list[str] | None = None) -> int:
    """解析参数并执行子命令，返回退出码：0 成功，1 参数错误，2 不变量失败，3 读写失败。"""
    """EN: Parse arguments and run the subcommand; exit codes are 0 success, 1 validation, 2 invariant failure, 3 I/O."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"参数错误: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SystemExit as exc:
        # --help 正常退出。
        # EN: --help exits normally.
        return int(exc.code or 0)

    setup_logging(args.log_level)
    try:
        return args.handler(args)
    except ResonanceError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("读写失败: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
