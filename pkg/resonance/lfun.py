"""该模块负责 L 函数数值计算。包含 Hurwitz zeta、L(sigma, chi)、分支跟踪的 log L、L'/L 以及截断素数和。"""
"""EN: Numerical L-function evaluation: Hurwitz zeta, L(sigma, chi), branch-tracked log L, L'/L and truncated prime sums."""


import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from scipy.special import bernoulli

from .arith import PrimeSieve
from .characters import CharacterGroup, CharacterIndex, char_values, transform_all
from .config import (
    CONTINUATION_INITIAL_STEPS,
    CONTINUATION_MAX_ARG_STEP,
    CONTINUATION_MIN_STEP,
    CONTINUATION_START,
    EM_CUTOFF_DEFAULT,
    EM_CUTOFF_MIN,
    EM_ORDER_DEFAULT,
    EM_ORDER_MAX,
    EM_ORDER_MIN,
    SIGMA_DIAGNOSTIC_MAX,
    ZERO_GUARD_DEFAULT,
)
from .errors import BranchFailureError, DivisionGuardError, DomainError, InvalidArgumentError, PoleError
from .reduction import chunked_complex_sum, chunked_sum

logger = logging.getLogger(__name__)

LogMethod = Literal["branch-tracked", "euler-region", "truncated"]
PrimeWeight = Literal["plain", "log"]

_EPS = float(np.finfo(np.float64).eps)
# 延拓路径避开 s = 1：各 Hurwitz 项在此有极点，非主特征的和虽解析但数值上不可直接求值。
# EN: The path avoids s = 1: every Hurwitz term has a pole there even though the non-principal sum is analytic.
_POLE_AVOIDANCE = 1e-6


@dataclass(frozen=True)
class EvalParams:
    """数值求值参数。sigma 逐次传入，这里只保存求值精度与零点阈值。"""
    """EN: Evaluation parameters. sigma is passed per call; this keeps accuracy knobs and the zero guard."""

    em_cutoff: int = EM_CUTOFF_DEFAULT
    em_order: int = EM_ORDER_DEFAULT
    zero_guard: float = ZERO_GUARD_DEFAULT
    sigma_max: float = SIGMA_DIAGNOSTIC_MAX

    def __post_init__(self):
        if int(self.em_cutoff) < EM_CUTOFF_MIN:
            raise InvalidArgumentError(f"Euler-Maclaurin 截断长度至少为 {EM_CUTOFF_MIN}: N={self.em_cutoff}")
        if not EM_ORDER_MIN <= int(self.em_order) <= EM_ORDER_MAX:
            raise InvalidArgumentError(f"Bernoulli 修正阶数须在 [{EM_ORDER_MIN}, {EM_ORDER_MAX}]: M={self.em_order}")
        if not self.zero_guard > 0:
            raise InvalidArgumentError(f"零点阈值必须为正: zero_guard={self.zero_guard}")

    def refined(self) -> "EvalParams":
        """N 加倍、M 加一，用于细化稳定性检查。"""
        """EN: Double N and bump M, for refinement-stability checks."""
        return EvalParams(
            em_cutoff=2 * self.em_cutoff,
            em_order=min(EM_ORDER_MAX, self.em_order + 1),
            zero_guard=self.zero_guard,
            sigma_max=self.sigma_max,
        )


DEFAULT_PARAMS = EvalParams()


@dataclass(frozen=True)
class LogLValue:
    value: complex
    method: LogMethod
    err_estimate: float
    path_steps: int = 0


@dataclass(frozen=True, eq=False)
class LogLBatch:
    """全体特征的 log L。失败或被跳过的位置为 nan，failed_step 记录失败的步号。"""
    """EN: log L for every character. Failed or skipped entries are nan; failed_step records the failing step."""

    values: np.ndarray
    failed_step: np.ndarray
    err_estimate: np.ndarray
    method: LogMethod
    path_steps: int

    @property
    def failed(self) -> np.ndarray:
        return self.failed_step >= 0

    @property
    def admissible(self) -> np.ndarray:
        # 主特征始终排除。
        # EN: The principal character is always excluded.
        mask = ~self.failed
        mask[0] = False
        return mask


@dataclass(frozen=True)
class TruncatedLogDeriv:
    full: complex
    prime_only: complex

    @property
    def difference(self) -> complex:
        """素数幂 p^k (k >= 2) 的贡献。"""
        """EN: Contribution of prime powers p^k with k >= 2."""
        return self.full - self.prime_only


@dataclass(frozen=True, eq=False)
class LogDerivBatch:
    values: np.ndarray
    l_values: np.ndarray
    guarded: np.ndarray = field(repr=False)


# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------


def _bernoulli_coefficients(order: int) -> np.ndarray:
    # c[k] = B_{2k} / (2k)!，k = 0..order+1；最后一项用于余项估计。
    # EN: c[k] = B_{2k} / (2k)! for k = 0..order+1; the last one bounds the remainder.
    b = bernoulli(2 * order + 2)
    return np.array([b[2 * k] / math.factorial(2 * k) for k in range(order + 2)], dtype=np.float64)


def _check_s(s: float):
    if s == 1:
        raise PoleError("Hurwitz zeta 在 s = 1 处有极点")
    if not s > 0.5:
        raise DomainError(f"要求 s > 1/2: s={s}")


def _check_a(a: np.ndarray):
    if a.size and (np.any(a <= 0) or np.any(a > 1)):
        raise DomainError("参数 a 必须在 (0, 1] 内")


def _euler_maclaurin(s: float, a, params: EvalParams, derivative: bool):
    """对向量 a 计算 zeta(s, a) 或其 s 导数，同时给出余项上界。"""
    """EN: zeta(s, a) or its s-derivative over a vector a, with a remainder bound."""
    s = float(s)
    _check_s(s)
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    _check_a(a)
    n_cut, order = int(params.em_cutoff), int(params.em_order)
    coeffs = _bernoulli_coefficients(order)

    total = np.zeros_like(a)
    for n in range(n_cut):
        x = n + a
        term = x ** (-s)
        total += -np.log(x) * term if derivative else term

    x = n_cut + a
    log_x = np.log(x)
    x_s = x ** (-s)
    tail = x * x_s / (s - 1.0)
    if derivative:
        total += -log_x * tail - tail / (s - 1.0) - log_x * x_s / 2.0
    else:
        total += tail + x_s / 2.0

    # 第 k 项：c_k * s(s+1)...(s+2k-2) * x^{-s-2k+1}
    # EN: Term k: c_k * s(s+1)...(s+2k-2) * x^{-s-2k+1}
    rising = s
    dlog_rising = 1.0 / s
    power = x_s / x
    inv_x2 = 1.0 / (x * x)
    for k in range(1, order + 1):
        term = coeffs[k] * rising * power
        total += term * (dlog_rising - log_x) if derivative else term
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        dlog_rising += 1.0 / (s + 2 * k - 1) + 1.0 / (s + 2 * k)
        power = power * inv_x2

    bound = np.abs(coeffs[order + 1] * rising * power)
    if derivative:
        bound = bound * (abs(dlog_rising) + log_x)
    return total, bound


def hurwitz_zeta_many(s: float, a, params: EvalParams = DEFAULT_PARAMS) -> tuple[np.ndarray, np.ndarray]:
    """向量化 Hurwitz zeta，返回 (值, 余项上界)。"""
    """EN: Vectorized Hurwitz zeta returning (values, remainder bounds)."""
    return _euler_maclaurin(s, a, params, derivative=False)


def hurwitz_zeta(s: float, a: float, params: EvalParams = DEFAULT_PARAMS) -> float:
    """zeta(s, a) = sum_{n>=0} (n+a)^{-s}，Euler-Maclaurin 求值。"""
    """EN: zeta(s, a) = sum_{n>=0} (n+a)^{-s} via Euler-Maclaurin."""
    values, _ = _euler_maclaurin(s, a, params, derivative=False)
    return float(values[0])


def hurwitz_zeta_bound(s: float, a: float, params: EvalParams = DEFAULT_PARAMS) -> float:
    _, bounds = _euler_maclaurin(s, a, params, derivative=False)
    return float(bounds[0])


def hurwitz_zeta_ds_many(s: float, a, params: EvalParams = DEFAULT_PARAMS) -> tuple[np.ndarray, np.ndarray]:
    return _euler_maclaurin(s, a, params, derivative=True)


def hurwitz_zeta_ds(s: float, a: float, params: EvalParams = DEFAULT_PARAMS) -> float:
    """d/ds zeta(s, a)，逐项微分的 Euler-Maclaurin 公式。"""
    """EN: d/ds zeta(s, a) from the term-by-term differentiated Euler-Maclaurin formula."""
    values, _ = _euler_maclaurin(s, a, params, derivative=True)
    return float(values[0])


# ---------------------------------------------------------------------------
# L(sigma, chi)
# ---------------------------------------------------------------------------


def _check_sigma(sigma: float, params: EvalParams) -> float:
    sigma = float(sigma)
    if not 0.5 < sigma <= params.sigma_max:
        raise DomainError(f"sigma 须在 (1/2, {params.sigma_max}] 内: sigma={sigma}")
    if sigma == 1:
        raise PoleError("sigma = 1 处 Hurwitz 分解有极点")
    return sigma


def _residue_points(G: CharacterGroup) -> tuple[np.ndarray, np.ndarray]:
    residues = np.arange(1, G.q, dtype=np.int64)
    return residues, residues / G.q


def _l_abs_error(G: CharacterGroup, sigma: float, zetas: np.ndarray, bounds: np.ndarray) -> float:
    # 余项之和加上求和舍入误差的粗略估计。
    # EN: Sum of remainders plus a rough rounding estimate for the sum itself.
    scale = G.q ** (-sigma)
    rounding = _EPS * math.log2(max(G.m, 2)) * float(np.sum(np.abs(zetas)))
    return scale * (float(np.sum(bounds)) + rounding)


def l_value(G: CharacterGroup, j: CharacterIndex, sigma: float, params: EvalParams = DEFAULT_PARAMS) -> complex:
    """L(sigma, chi_j) = q^{-sigma} sum_a chi_j(a) zeta(sigma, a/q)。"""
    """EN: L(sigma, chi_j) = q^{-sigma} sum_a chi_j(a) zeta(sigma, a/q)."""
    sigma = _check_sigma(sigma, params)
    residues, points = _residue_points(G)
    zetas, _ = hurwitz_zeta_many(sigma, points, params)
    chi = char_values(G, j, residues)
    return G.q ** (-sigma) * chunked_complex_sum(chi * zetas)


def l_values_all(G: CharacterGroup, sigma: float, params: EvalParams = DEFAULT_PARAMS) -> np.ndarray:
    """一次 Hurwitz 扫描加一次批量变换，得到全部 L(sigma, chi_j)。"""
    """EN: One Hurwitz sweep plus one batch transform gives every L(sigma, chi_j)."""
    sigma = _check_sigma(sigma, params)
    _, points = _residue_points(G)
    zetas, _ = hurwitz_zeta_many(sigma, points, params)
    return G.q ** (-sigma) * transform_all(G, zetas)


# ---------------------------------------------------------------------------
# log L: continuation along the real segment
# ---------------------------------------------------------------------------


@dataclass
class _ContinuationState:
    """延拓状态容器。记录当前位置、步长、累计辐角与失效标记。"""
    """EN: Continuation state: current point, step, accumulated argument and failure marks."""

    s: float
    h: float
    current: np.ndarray
    arg: np.ndarray
    active: np.ndarray
    failed_step: np.ndarray
    steps: int = 0

    def accept(self, target: float, candidate: np.ndarray, turn: np.ndarray, dropped: np.ndarray):
        self.steps += 1
        self.failed_step[dropped] = self.steps
        self.active &= ~dropped
        self.arg[self.active] += turn[self.active]
        self.current = np.where(self.active, candidate, self.current)
        self.s = target


def _next_target(state: _ContinuationState, sigma: float) -> float:
    target = max(sigma, state.s - state.h)
    if abs(target - 1.0) < _POLE_AVOIDANCE and target != sigma:
        target = 1.0 + _POLE_AVOIDANCE if state.s > 1.0 + _POLE_AVOIDANCE else 1.0 - _POLE_AVOIDANCE
        target = max(sigma, target)
    return target


def _continue_log(
    evaluate: Callable[[float], np.ndarray],
    sigma: float,
    params: EvalParams,
    active: np.ndarray,
) -> _ContinuationState:
    """从 s = 2 沿实轴走到 sigma，逐步展开辐角。"""
    """EN: Walk from s = 2 down the real axis to sigma, unwrapping the argument step by step."""
    start_values = evaluate(CONTINUATION_START)
    # s >= 2 时 |L - 1| < 0.65，主值对数即 Euler 和。
    # EN: For s >= 2, |L - 1| < 0.65 so the principal log is the Euler sum.
    state = _ContinuationState(
        s=CONTINUATION_START,
        h=(CONTINUATION_START - sigma) / CONTINUATION_INITIAL_STEPS,
        current=start_values,
        arg=np.angle(start_values),
        active=active.copy(),
        failed_step=np.full(start_values.size, -1, dtype=np.int64),
    )
    while state.s > sigma:
        target = _next_target(state, sigma)
        candidate = evaluate(target)
        with np.errstate(divide="ignore", invalid="ignore"):
            turn = np.angle(candidate / state.current)
        tiny = state.active & (np.abs(candidate) < params.zero_guard)
        steep = state.active & ~tiny & (np.abs(turn) >= CONTINUATION_MAX_ARG_STEP)
        if steep.any() and state.h > CONTINUATION_MIN_STEP:
            state.h /= 2.0
            continue
        state.accept(target, candidate, turn, tiny | steep)
        if (tiny | steep).any():
            logger.debug("延拓在 s=%.9f 处排除 %d 个特征", target, int((tiny | steep).sum()))
        live = np.abs(turn[state.active])
        if live.size == 0 or float(live.max()) < CONTINUATION_MAX_ARG_STEP / 4:
            state.h *= 2.0
    return state


def _finish_logs(state: _ContinuationState) -> np.ndarray:
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(state.current)) + 1j * state.arg
    return np.where(state.active, logs, np.nan + 1j * np.nan)


def log_l(G: CharacterGroup, j: CharacterIndex, sigma: float, params: EvalParams = DEFAULT_PARAMS) -> LogLValue:
    """沿实轴从 s = 2 连续延拓得到的 log L(sigma, chi_j)，虚部不取模 2*pi。"""
    """EN: log L(sigma, chi_j) by continuation along the real axis from s = 2; the imaginary part is not reduced mod 2*pi."""
    j = G.check_index(j)
    sigma = _check_sigma(sigma, params)
    residues, points = _residue_points(G)
    chi = char_values(G, j, residues)

    def evaluate(s: float) -> np.ndarray:
        zetas, _ = hurwitz_zeta_many(s, points, params)
        return np.array([G.q ** (-s) * chunked_complex_sum(chi * zetas)])

    zetas, bounds = hurwitz_zeta_many(sigma, points, params)
    final = G.q ** (-sigma) * chunked_complex_sum(chi * zetas)
    rel_err = _l_abs_error(G, sigma, zetas, bounds) / max(abs(final), params.zero_guard)

    if sigma >= CONTINUATION_START:
        return LogLValue(value=complex(np.log(final)), method="euler-region", err_estimate=rel_err, path_steps=0)

    state = _continue_log(evaluate, sigma, params, np.ones(1, dtype=bool))
    if not state.active[0]:
        raise BranchFailureError(
            f"log L 分支跟踪失败: q={G.q}, j={j}, 第 {int(state.failed_step[0])} 步附近 |L| 过小或辐角跳变",
            step=int(state.failed_step[0]),
            s=state.s,
            j=j,
        )
    value = complex(_finish_logs(state)[0])
    return LogLValue(
        value=value,
        method="branch-tracked",
        err_estimate=rel_err + 4 * _EPS * max(state.steps, 1),
        path_steps=state.steps,
    )


def log_l_all(G: CharacterGroup, sigma: float, params: EvalParams = DEFAULT_PARAMS) -> LogLBatch:
    """全部非主特征共享一条延拓路径；单个特征失败不影响其他特征。"""
    """EN: All non-principal characters share one continuation path; one failure does not affect the others."""
    sigma = _check_sigma(sigma, params)
    _, points = _residue_points(G)
    active = np.ones(G.m, dtype=bool)
    # 主特征在 s = 1 有极点，不参与延拓。
    # EN: The principal character has a pole at s = 1 and is not continued.
    active[0] = False

    def evaluate(s: float) -> np.ndarray:
        zetas, _ = hurwitz_zeta_many(s, points, params)
        return G.q ** (-s) * transform_all(G, zetas)

    zetas, bounds = hurwitz_zeta_many(sigma, points, params)
    abs_err = _l_abs_error(G, sigma, zetas, bounds)

    if sigma >= CONTINUATION_START:
        final = G.q ** (-sigma) * transform_all(G, zetas)
        failed = np.full(G.m, -1, dtype=np.int64)
        failed[0] = 0
        values = np.where(active, np.log(final), np.nan + 1j * np.nan)
        return LogLBatch(values, failed, abs_err / np.abs(final), "euler-region", 0)

    state = _continue_log(evaluate, sigma, params, active)
    state.failed_step[0] = 0
    values = _finish_logs(state)
    with np.errstate(divide="ignore"):
        rel = abs_err / np.maximum(np.abs(state.current), params.zero_guard) + 4 * _EPS * max(state.steps, 1)
    excluded = int((~state.active).sum()) - 1
    if excluded:
        logger.info("q=%d sigma=%.4f: %d 个非主特征分支跟踪失败，已排除", G.q, sigma, excluded)
    return LogLBatch(values, state.failed_step, rel, "branch-tracked", state.steps)


# ---------------------------------------------------------------------------
# truncated sums
# ---------------------------------------------------------------------------


def truncated_log_l(G: CharacterGroup, j: CharacterIndex, sigma: float, Y: float, table: PrimeSieve) -> complex:
    """T_chi(sigma, Y) = sum_{p <= Y} chi(p) p^{-sigma}。"""
    """EN: T_chi(sigma, Y) = sum_{p <= Y} chi(p) p^{-sigma}."""
    primes = table.primes_upto(Y)
    if primes.size == 0:
        return 0j
    chi = char_values(G, j, primes)
    return chunked_complex_sum(chi * primes.astype(np.float64) ** (-float(sigma)))


def _residue_accumulate(G: CharacterGroup, primes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # 按 p mod q 累加权重；p = q 落在余数 0 上被丢弃。
    # EN: Accumulate weights by p mod q; p = q lands on residue 0 and is dropped.
    residues = primes % G.q
    return np.bincount(residues, weights=weights, minlength=G.q)[1:]


def prime_weights(primes: np.ndarray, sigma: float, prime_weight: PrimeWeight = "plain") -> np.ndarray:
    p = primes.astype(np.float64)
    weights = p ** (-float(sigma))
    if prime_weight == "log":
        return weights * np.log(p)
    if prime_weight != "plain":
        raise InvalidArgumentError(f"未知的素数权重: {prime_weight}")
    return weights


def truncated_log_l_all(
    G: CharacterGroup,
    sigma: float,
    Y: float,
    table: PrimeSieve,
    prime_weight: PrimeWeight = "plain",
) -> np.ndarray:
    """全部特征的 T_chi(sigma, Y)；prime_weight="log" 时给出 sum (log p) chi(p) p^{-sigma}。"""
    """EN: T_chi(sigma, Y) for every character; prime_weight="log" gives sum (log p) chi(p) p^{-sigma}."""
    primes = table.primes_upto(Y)
    if primes.size == 0:
        return np.zeros(G.m, dtype=np.complex128)
    f = _residue_accumulate(G, primes, prime_weights(primes, sigma, prime_weight))
    return transform_all(G, f)


def _prime_power_sum(G: CharacterGroup, j: int, s: float, Y: float, table: PrimeSieve, log_weighted: bool) -> complex:
    primes = table.primes_upto(Y)
    if primes.size == 0:
        return 0j
    j = G.check_index(j)
    coprime = primes[primes % G.q != 0]
    ind = G.table.ind[coprime % G.q]
    log_p = np.log(coprime.astype(np.float64))
    limit = math.log(math.floor(Y))
    total = 0j
    k = 1
    while True:
        keep = k * log_p <= limit + 1e-12
        if not keep.any():
            break
        # p^k 用整数精确判定，避免浮点边界误差。
        # EN: Check p^k <= Y with integers to avoid floating-point edge errors.
        candidates = coprime[keep]
        exact = np.array([int(p) ** k <= Y for p in candidates.tolist()], dtype=bool) if k > 1 else np.ones(candidates.size, bool)
        chi_k = G.roots[(j * k * ind[keep][exact]) % G.m]
        decay = np.exp(-k * float(s) * log_p[keep][exact])
        weight = log_p[keep][exact] if log_weighted else np.full(int(exact.sum()), 1.0 / k)
        total += chunked_complex_sum(chi_k * decay * weight)
        k += 1
    return total


def truncated_log_l_prime_powers(G: CharacterGroup, j: CharacterIndex, sigma: float, Y: float, table: PrimeSieve) -> complex:
    """sum_{2<=n<=Y} Lambda(n) chi(n) / (n^sigma log n) = sum_{p^k<=Y} chi(p)^k / (k p^{k sigma})。"""
    """EN: sum_{2<=n<=Y} Lambda(n) chi(n) / (n^sigma log n), i.e. the prime-power sum chi(p)^k / (k p^{k sigma})."""
    return _prime_power_sum(G, j, sigma, Y, table, log_weighted=False)


def euler_log_l(G: CharacterGroup, j: CharacterIndex, s: float, limit: float, table: PrimeSieve) -> LogLValue:
    """截断的 Euler 对数和 sum_{p^k<=limit} chi(p^k)/(k p^{ks})，只在 s >= 2 的绝对收敛区使用。"""
    """EN: Truncated Euler log-sum over p^k <= limit, meant for the absolutely convergent region s >= 2."""
    if s < CONTINUATION_START:
        raise DomainError(f"Euler 对数和只在 s >= {CONTINUATION_START} 时使用: s={s}")
    value = _prime_power_sum(G, j, s, limit, table, log_weighted=False)
    # 尾项上界：sum_{n>limit} n^{-s} <= limit^{1-s}/(s-1)
    # EN: Tail bound: sum_{n>limit} n^{-s} <= limit^{1-s}/(s-1)
    tail = float(limit) ** (1.0 - s) / (s - 1.0)
    return LogLValue(value=value, method="truncated", err_estimate=tail, path_steps=0)


def log_deriv(G: CharacterGroup, j: CharacterIndex, sigma: float, params: EvalParams = DEFAULT_PARAMS) -> complex:
    """L'/L(sigma, chi_j)，其中 L' = -(log q) L + q^{-sigma} sum_a chi(a) d/ds zeta(sigma, a/q)。"""
    """EN: L'/L(sigma, chi_j) with L' = -(log q) L + q^{-sigma} sum_a chi(a) d/ds zeta(sigma, a/q)."""
    sigma = _check_sigma(sigma, params)
    residues, points = _residue_points(G)
    chi = char_values(G, j, residues)
    zetas, _ = hurwitz_zeta_many(sigma, points, params)
    dzetas, _ = hurwitz_zeta_ds_many(sigma, points, params)
    scale = G.q ** (-sigma)
    value = scale * chunked_complex_sum(chi * zetas)
    if abs(value) < params.zero_guard:
        raise DivisionGuardError(f"|L| 过小，无法计算 L'/L: q={G.q}, j={j}, |L|={abs(value):.3e}")
    derivative = -math.log(G.q) * value + scale * chunked_complex_sum(chi * dzetas)
    return derivative / value


def log_deriv_all(G: CharacterGroup, sigma: float, params: EvalParams = DEFAULT_PARAMS) -> LogDerivBatch:
    """全部特征的 L'/L；|L| 低于阈值的位置为 nan 并在 guarded 中标记。"""
    """EN: L'/L for every character; entries with |L| below the guard are nan and flagged in guarded."""
    sigma = _check_sigma(sigma, params)
    _, points = _residue_points(G)
    zetas, _ = hurwitz_zeta_many(sigma, points, params)
    dzetas, _ = hurwitz_zeta_ds_many(sigma, points, params)
    scale = G.q ** (-sigma)
    values = scale * transform_all(G, zetas)
    derivs = -math.log(G.q) * values + scale * transform_all(G, dzetas)
    guarded = np.abs(values) < params.zero_guard
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(guarded, np.nan + 1j * np.nan, derivs / values)
    return LogDerivBatch(values=ratio, l_values=values, guarded=guarded)


def truncated_log_deriv(
    G: CharacterGroup, j: CharacterIndex, sigma: float, Y: float, table: PrimeSieve
) -> TruncatedLogDeriv:
    """同时返回 sum_{n<=Y} Lambda(n) chi(n) n^{-sigma} 与只含素数的和。"""
    """EN: Returns both sum_{n<=Y} Lambda(n) chi(n) n^{-sigma} and the prime-only sum."""
    primes = table.primes_upto(Y)
    if primes.size == 0:
        return TruncatedLogDeriv(full=0j, prime_only=0j)
    full = _prime_power_sum(G, j, sigma, Y, table, log_weighted=True)
    chi = char_values(G, j, primes)
    prime_only = chunked_complex_sum(chi * prime_weights(primes, sigma, "log"))
    return TruncatedLogDeriv(full=full, prime_only=prime_only)


def median_truncation_gap(logs: LogLBatch, truncated: np.ndarray) -> float:
    """可用特征上 |log L - T_chi| 的中位数。"""
    """EN: Median of |log L - T_chi| over admissible characters."""
    mask = logs.admissible
    if not mask.any():
        return float("nan")
    return float(np.median(np.abs(logs.values[mask] - truncated[mask])))


def masked_weighted_gap(values: np.ndarray, truncated: np.ndarray, weights: np.ndarray, mask: np.ndarray) -> float:
    """mask 上以权重加权的 |values - truncated| 平均。"""
    """EN: Weighted mean of |values - truncated| over mask."""
    total = chunked_sum(weights[mask])
    if total <= 0:
        return float("nan")
    return chunked_sum(np.abs(values[mask] - truncated[mask]) * weights[mask]) / total


def weighted_gap(logs: LogLBatch, truncated: np.ndarray, weights: np.ndarray) -> float:
    return masked_weighted_gap(logs.values, truncated, weights, logs.admissible)
