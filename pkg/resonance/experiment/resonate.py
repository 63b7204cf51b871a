"""单个 (q, sigma, theta) 共振实验。"""
"""EN: One (q, sigma, theta) resonance experiment."""


import logging
import math
import time

import numpy as np

from ..arith import PrimeSieve, sieve
from ..characters import CharacterGroup
from ..config import PREDICTED_BOUND_MIN_Q, SCHEMA_VERSION
from ..constants import predicted_bound, resolve_A, resolve_y, theta_cos
from ..errors import InvariantFailure
from ..lfun import (
    log_deriv_all,
    log_l_all,
    masked_weighted_gap,
    median_truncation_gap,
    truncated_log_l_all,
    weighted_gap,
)
from ..records import RecordStore, ScanRecord
from ..resonator import ResonatorParams, moment_report, weights_all
from ..run_config import RunConfig

logger = logging.getLogger(__name__)


def sieve_for(Y: float, table: PrimeSieve | None = None) -> PrimeSieve:
    """复用已有筛表；覆盖不到 Y 时重建。"""
    """EN: Reuse the given sieve; rebuild when it does not reach Y."""
    limit = max(2, math.floor(Y))
    if table is not None and table.limit >= limit:
        return table
    return sieve(limit)


def _admissible_max(values: np.ndarray, mask: np.ndarray) -> float:
    usable = mask & np.isfinite(values)
    return float(np.max(values[usable])) if usable.any() else float("nan")


def compute_record(
    q: int,
    sigma: float,
    theta: float,
    config: RunConfig,
    table: PrimeSieve | None = None,
    group: CharacterGroup | None = None,
) -> ScanRecord:
    """计算一条 ScanRecord：权重、矩、分支跟踪的 log L、证书与预测下界。"""
    """EN: Compute one ScanRecord: weights, moments, branch-tracked log L, the certificate and predicted bounds."""
    started = time.perf_counter()
    G = group if group is not None else CharacterGroup.build(q)
    params_eval = config.eval_params()
    epsilon = config.epsilon_for(sigma)
    A, A_mode = resolve_A(sigma, epsilon, config.grh, config.A)
    params = ResonatorParams.build(G.q, sigma, A, X=config.X_override)
    Y, Y_source = resolve_y(G.q, sigma, params.X, config.Y_cap)
    table = sieve_for(Y, table)

    weights = weights_all(G, params)
    if not weights.bound_holds:
        raise InvariantFailure(f"共振子权重超过上界: q={G.q}, gap={weights.bound_gap:.3e}")

    logs = log_l_all(G, sigma, params_eval)
    failed = [int(j) for j in np.flatnonzero(logs.failed) if j != 0]
    admissible = logs.admissible
    rotated_logs = np.real(np.exp(-1j * theta) * logs.values)

    truncated = truncated_log_l_all(G, sigma, Y, table)
    report = moment_report(
        G, params, Y, theta, weights, table, rotated_logs, exclude=failed, truncated=truncated
    )

    gap = weighted_gap(logs, truncated, weights.weights)
    slack = gap + abs(report.ratio - report.s_ratio)
    median_gap = median_truncation_gap(logs, truncated)
    if median_gap > config.discrepancy_warn:
        logger.warning(
            "q=%d sigma=%.4f: |log L - T| 中位数 %.3f 超过阈值 %.3f", G.q, sigma, median_gap, config.discrepancy_warn
        )

    derivs = log_deriv_all(G, sigma, params_eval)
    neg_re_deriv = -np.real(derivs.values)

    # 对数导数版本：-L'/L 对应带 log p 权重的截断和，|L| 过小的特征排除。
    # EN: Log-derivative variant: -L'/L pairs with the log p weighted truncated sum; characters with tiny |L| are excluded.
    neg_derivs = -derivs.values
    guarded = [int(j) for j in np.flatnonzero(derivs.guarded) if j != 0]
    truncated_log = truncated_log_l_all(G, sigma, Y, table, "log")
    deriv_report = moment_report(
        G,
        params,
        Y,
        theta,
        weights,
        table,
        np.real(np.exp(-1j * theta) * neg_derivs),
        exclude=guarded,
        prime_weight="log",
        truncated=truncated_log,
    )
    deriv_keep = ~derivs.guarded
    deriv_keep[0] = False
    deriv_slack = masked_weighted_gap(neg_derivs, truncated_log, weights.weights, deriv_keep) + abs(
        deriv_report.ratio - deriv_report.s_ratio
    )

    logl_bound = logderiv_bound = None
    if G.q >= PREDICTED_BOUND_MIN_Q and theta_cos(theta) >= 0:
        bound = predicted_bound(G.q, sigma, theta, A, grh=config.grh, epsilon=epsilon)
        logl_bound, logderiv_bound = bound.log_l, bound.log_deriv

    record = ScanRecord(
        schema_version=SCHEMA_VERSION,
        q=G.q,
        sigma=float(sigma),
        theta=float(theta),
        A=A,
        X=params.X,
        Y=float(Y),
        grh=bool(config.grh),
        Q1=report.Q1,
        Q2=report.Q2,
        ratio=report.ratio,
        ratio_rhs=report.rhs,
        argmax_j=report.argmax_j,
        max_re_e_itheta_logL=report.max_value,
        max_log_abs_L=_admissible_max(np.real(logs.values), admissible),
        max_neg_re_logderiv=_admissible_max(neg_re_deriv, admissible & ~derivs.guarded),
        predicted_logL_bound=logl_bound,
        predicted_logderiv_bound=logderiv_bound,
        excluded_count=report.excluded_count,
        runtime_ms=(time.perf_counter() - started) * 1000.0,
        truncation_slack=slack,
        weighted_mean=report.weighted_mean,
        Y_source=Y_source,
        A_mode=A_mode,
        epsilon=float(epsilon),
        s1_over_q1=report.s1 / report.Q1,
        excluded_weight_fraction=report.excluded_weight_fraction,
        median_truncation_gap=median_gap,
        log_weight_scale=weights.log_bound,
        max_neg_re_e_itheta_logderiv=deriv_report.max_value,
        logderiv_Q2=deriv_report.Q2,
        logderiv_ratio=deriv_report.ratio,
        logderiv_ratio_rhs=deriv_report.rhs,
        logderiv_argmax_j=deriv_report.argmax_j,
        logderiv_weighted_mean=deriv_report.weighted_mean,
        logderiv_truncation_slack=deriv_slack,
        logderiv_excluded_count=deriv_report.excluded_count,
    )
    problems = record.check()
    if problems:
        raise InvariantFailure(f"记录不变量失败 q={G.q}, sigma={sigma}, theta={theta}: {', '.join(problems)}")
    logger.info(
        "q=%d sigma=%.4f theta=%.4f: ratio=%.6f max=%.6f excluded=%d (%.0f ms)",
        record.q,
        record.sigma,
        record.theta,
        record.ratio,
        record.max_re_e_itheta_logL,
        record.excluded_count,
        record.runtime_ms,
    )
    return record


def cmd_resonate(q: int, sigma: float, theta: float, config: RunConfig, store: RecordStore | None = None) -> ScanRecord:
    """运行单个实验并追加到输出文件。"""
    """EN: Run one experiment and append it to the output file."""
    record = compute_record(q, sigma, theta, config)
    (store or RecordStore(config.out_path)).append(record)
    return record
