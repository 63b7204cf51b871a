"""共振子 R(chi)、矩 Q1 与 Q2、比值下界、同余暴力校验以及最大值证书。"""
"""EN: The resonator R(chi), the moments Q1 and Q2, the ratio lower bound, brute-force congruence checks and the maximum certificate."""


import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .arith import PrimeSieve, is_prime, sieve
from .characters import CharacterGroup, CharacterIndex, char_values
from .config import CONGRUENCE_ORACLE_MAX_N, RESONATOR_BLOCK_ELEMENTS
from .constants import default_x, theta_cos
from .errors import (
    BoundInapplicableWarning,
    DegenerateFactorError,
    EmptyDomainError,
    InvalidArgumentError,
    OutOfRangeError,
)
from .lfun import PrimeWeight, prime_weights, truncated_log_l, truncated_log_l_all, truncated_log_deriv
from .reduction import chunked_complex_sum, chunked_dot, chunked_sum

_DEGENERATE_FACTOR = 1e-300
_WEIGHT_BOUND_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class ResonatorParams:
    """共振子参数 (q, sigma, A, X)，附带 p <= X 的素数与系数 r(p)。"""
    """EN: Resonator parameters (q, sigma, A, X) with the primes p <= X and their coefficients r(p)."""

    q: int
    sigma: float
    A: float
    X: float
    primes: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, q: int, sigma: float, A: float, X: float | None = None) -> "ResonatorParams":
        q = int(q)
        if q < 3 or not is_prime(q):
            raise InvalidArgumentError(f"模数必须是奇素数: q={q}")
        sigma = float(sigma)
        if not 0.5 < sigma < 1.0:
            raise InvalidArgumentError(f"sigma 须在 (1/2, 1) 内: sigma={sigma}")
        if not A > 0:
            raise InvalidArgumentError(f"A 必须为正: A={A}")
        X = default_x(q, A) if X is None else float(X)
        # p <= X 的素数必须与 q 互素。
        # EN: Every prime p <= X must be coprime to q.
        if X >= q:
            raise InvalidArgumentError(f"要求 X < q: X={X}, q={q}")
        if X >= 2:
            primes = sieve(math.floor(X)).primes.copy()
        else:
            primes = np.zeros(0, dtype=np.int64)
        coeffs = 1.0 - (primes.astype(np.float64) / X) ** sigma
        primes.setflags(write=False)
        coeffs.setflags(write=False)
        return cls(q=q, sigma=sigma, A=float(A), X=X, primes=primes, coeffs=coeffs)

    @property
    def log_bound(self) -> float:
        """2 sigma sum_{p<=X} log(X/p)，即 log|R(chi)|^2 的上界。"""
        """EN: 2 sigma sum_{p<=X} log(X/p), the upper bound for log|R(chi)|^2."""
        return 2.0 * self.sigma * chunked_sum(np.log(self.X / self.primes.astype(np.float64)))

    @property
    def total_mass(self) -> float:
        """sum_{n>=1} r(n) = prod_{p<=X} (X/p)^sigma。"""
        """EN: sum_{n>=1} r(n) = prod_{p<=X} (X/p)^sigma."""
        return math.exp(self.log_bound / 2.0)

    @property
    def square_mass(self) -> float:
        """sum_{n>=1} r(n)^2 = prod_{p<=X} (1 - r(p)^2)^{-1}。"""
        """EN: sum_{n>=1} r(n)^2 = prod_{p<=X} (1 - r(p)^2)^{-1}."""
        return math.exp(-chunked_sum(np.log1p(-self.coeffs**2)))


def r_coeff(p: int, params: ResonatorParams) -> float:
    """r(p) = 1 - (p/X)^sigma（p <= X），否则为 0；r(1) = 1。"""
    """EN: r(p) = 1 - (p/X)^sigma for p <= X, else 0; r(1) = 1."""
    p = int(p)
    if p == 1:
        return 1.0
    if p > params.X:
        return 0.0
    return 1.0 - (p / params.X) ** params.sigma


def r_value(n: int, params: ResonatorParams, table: PrimeSieve) -> float:
    """完全积性延拓：r(n) = prod r(p)^a。"""
    """EN: Completely multiplicative extension r(n) = prod r(p)^a."""
    value = 1.0
    for p, exponent in table.factor(int(n)):
        coeff = r_coeff(p, params)
        if coeff == 0.0:
            return 0.0
        value *= coeff**exponent
    return value


def r_values_upto(N: int, params: ResonatorParams, table: PrimeSieve) -> np.ndarray:
    """r(n) 对 n = 0..N 的向量化表，r[0] = 0。按最小素因子逐层剥离。"""
    """EN: Vectorized table of r(n) for n = 0..N with r[0] = 0, peeling off smallest prime factors."""
    N = int(N)
    if N < 1:
        raise InvalidArgumentError(f"需要 N >= 1: N={N}")
    if N > table.limit:
        raise OutOfRangeError(f"N 超过筛法上限: N={N}, limit={table.limit}")
    spf = table.smallest_factor[: N + 1]
    by_prime = np.zeros(N + 1, dtype=np.float64)
    keep = params.primes[params.primes <= N]
    by_prime[keep] = params.coeffs[: keep.size]

    values = np.ones(N + 1, dtype=np.float64)
    values[0] = 0.0
    rest = np.arange(N + 1, dtype=np.int64)
    rest[0] = 1
    live = rest > 1
    while live.any():
        p = spf[rest[live]].astype(np.int64)
        values[live] *= by_prime[p]
        rest[live] //= p
        live = rest > 1
    return values


def _factors(G: CharacterGroup, params: ResonatorParams, j: int) -> np.ndarray:
    chi = char_values(G, j, params.primes)
    return 1.0 - params.coeffs * chi


def resonator_value(G: CharacterGroup, j: CharacterIndex, params: ResonatorParams) -> complex:
    """R(chi) = prod_{p<=X} (1 - r(p) chi(p))^{-1}。"""
    """EN: R(chi) = prod_{p<=X} (1 - r(p) chi(p))^{-1}."""
    _check_group(G, params)
    factors = _factors(G, params, G.check_index(j))
    if factors.size and float(np.min(np.abs(factors))) < _DEGENERATE_FACTOR:
        raise DegenerateFactorError(f"共振子欧拉因子退化: q={G.q}, j={j}")
    return complex(1.0 / np.prod(factors)) if factors.size else 1 + 0j


def _check_group(G: CharacterGroup, params: ResonatorParams):
    if G.q != params.q:
        raise InvalidArgumentError(f"特征群模数 {G.q} 与共振子参数 q={params.q} 不一致")


def _factor_blocks(G: CharacterGroup, params: ResonatorParams):
    """按素数顺序逐块产出 1 - r(p) chi_j(p)，形状 (m, 块宽)。p <= X < q 故都与 q 互素。"""
    """EN: Yield 1 - r(p) chi_j(p) block by block in prime order, shape (m, block width); p <= X < q so all are coprime to q."""
    width = max(1, RESONATOR_BLOCK_ELEMENTS // G.m)
    ind = G.table.ind[params.primes % G.q]
    j = np.arange(G.m, dtype=np.int64)[:, None]
    for start in range(0, params.primes.size, width):
        stop = min(start + width, params.primes.size)
        chi = G.roots[(j * ind[None, start:stop]) % G.m]
        factors = 1.0 - params.coeffs[None, start:stop] * chi
        if float(np.min(np.abs(factors))) < _DEGENERATE_FACTOR:
            raise DegenerateFactorError(f"共振子欧拉因子退化: q={G.q}")
        yield factors


def resonator_values_all(G: CharacterGroup, params: ResonatorParams) -> np.ndarray:
    _check_group(G, params)
    values = np.ones(G.m, dtype=np.complex128)
    for factors in _factor_blocks(G, params):
        values /= np.prod(factors, axis=1)
    return values


def series_partial(
    G: CharacterGroup, j: CharacterIndex, params: ResonatorParams, N: int, table: PrimeSieve
) -> tuple[complex, float]:
    """返回 sum_{n<=N} r(n) chi(n) 与尾项上界 sum_{n>N} r(n)。"""
    """EN: Returns sum_{n<=N} r(n) chi(n) and the tail bound sum_{n>N} r(n)."""
    _check_group(G, params)
    r = r_values_upto(N, params, table)
    chi = char_values(G, j, np.arange(int(N) + 1))
    partial = chunked_complex_sum(r * chi)
    tail = max(params.total_mass - chunked_sum(r), 0.0)
    return complex(partial), tail


@dataclass(frozen=True, eq=False)
class ResonatorWeights:
    """|R(chi_j)|^2 全表。weights 已除以主特征处的值 exp(log_bound)，log_weights 为未缩放的对数。"""
    """EN: The full |R(chi_j)|^2 table. weights is divided by the principal value exp(log_bound); log_weights is unscaled."""

    weights: np.ndarray
    log_weights: np.ndarray
    log_bound: float

    @property
    def bound_holds(self) -> bool:
        return bool(np.all(self.log_weights <= self.log_bound + _WEIGHT_BOUND_SLACK))

    @property
    def bound_gap(self) -> float:
        """max_j log|R|^2 - 上界。主特征处应为 0。"""
        """EN: max_j log|R|^2 minus the bound; zero at the principal character."""
        return float(np.max(self.log_weights)) - self.log_bound


def weights_all(G: CharacterGroup, params: ResonatorParams) -> ResonatorWeights:
    _check_group(G, params)
    # 按素数顺序逐列累加，保证逐位可复现。
    # EN: Accumulate column by column in prime order for bit-reproducibility.
    log_weights = np.zeros(G.m, dtype=np.float64)
    for factors in _factor_blocks(G, params):
        log_moduli = np.log(np.abs(factors))
        for column in range(log_moduli.shape[1]):
            log_weights -= 2.0 * log_moduli[:, column]
    log_bound = params.log_bound if params.primes.size else 0.0
    return ResonatorWeights(np.exp(log_weights - log_bound), log_weights, log_bound)


def _weight_array(weights) -> np.ndarray:
    if isinstance(weights, ResonatorWeights):
        return weights.weights
    return np.asarray(weights, dtype=np.float64)


def q1_moment(weights) -> float:
    """Q1 = sum_chi |R(chi)|^2，与权重同一缩放。"""
    """EN: Q1 = sum_chi |R(chi)|^2 in the same scaling as the weights."""
    return chunked_sum(_weight_array(weights))


def log_q1_moment(weights: ResonatorWeights) -> float:
    """未缩放 Q1 的对数，X 较大时 Q1 本身会溢出。"""
    """EN: Logarithm of the unscaled Q1, which itself overflows for large X."""
    return weights.log_bound + math.log(q1_moment(weights))


@dataclass(frozen=True)
class CongruenceOracle:
    value: float
    deficit_bound: float
    diagonal: float


def q1_congruence_oracle(q: int, params: ResonatorParams, N: int, table: PrimeSieve) -> CongruenceOracle:
    """phi(q) sum_{m,n<=N, m=n mod q, (n,q)=1} r(m) r(n)，按余数类求和后平方。"""
    """EN: phi(q) sum over m, n <= N with m = n mod q and (n, q) = 1 of r(m) r(n), via per-class sums squared."""
    q, N = int(q), int(N)
    if q != params.q:
        raise InvalidArgumentError(f"q={q} 与共振子参数 q={params.q} 不一致")
    if N > CONGRUENCE_ORACLE_MAX_N:
        raise InvalidArgumentError(f"同余校验的 N 不得超过 {CONGRUENCE_ORACLE_MAX_N}: N={N}")
    r = r_values_upto(N, params, table)
    n = np.arange(N + 1, dtype=np.int64)
    class_sums = np.bincount(n % q, weights=r, minlength=q)[1:]
    phi = q - 1
    coprime = n % q != 0
    value = phi * chunked_dot(class_sums, class_sums)
    partial = chunked_sum(r)
    tail = max(params.total_mass - partial, 0.0)
    deficit = phi * (2.0 * partial * tail + tail * tail)
    diagonal = phi * chunked_dot(r[coprime], r[coprime])
    return CongruenceOracle(value=value, deficit_bound=deficit, diagonal=diagonal)


def _truncated_table(
    G: CharacterGroup,
    sigma: float,
    Y: float,
    table: PrimeSieve,
    method: str | None,
    prime_weight: PrimeWeight,
) -> np.ndarray:
    if method == "naive":
        # 逐特征直接求和，作为批量路径的对照。
        # EN: Per-character direct sums, the reference for the batch path.
        if prime_weight == "log":
            return np.array([truncated_log_deriv(G, j, sigma, Y, table).prime_only for j in range(G.m)])
        return np.array([truncated_log_l(G, j, sigma, Y, table) for j in range(G.m)])
    return truncated_log_l_all(G, sigma, Y, table, prime_weight)


def _rotated_real(values: np.ndarray, theta: float) -> np.ndarray:
    return np.real(np.exp(-1j * float(theta)) * values)


def q2_moment(
    G: CharacterGroup,
    params: ResonatorParams,
    Y: float,
    theta: float,
    weights,
    table: PrimeSieve,
    method: str | None = None,
    prime_weight: PrimeWeight = "plain",
) -> float:
    """Q2 = sum_chi Re(e^{-i theta} T_chi(sigma, Y)) |R(chi)|^2。prime_weight="log" 时 T 带 log p 权重。"""
    """EN: Q2 = sum_chi Re(e^{-i theta} T_chi(sigma, Y)) |R(chi)|^2; prime_weight="log" adds the log p weight to T."""
    _check_group(G, params)
    w = _weight_array(weights)
    truncated = _truncated_table(G, params.sigma, Y, table, method, prime_weight)
    return chunked_dot(_rotated_real(truncated, theta), w)


@dataclass(frozen=True)
class RatioBound:
    exact: float
    asymptotic: float


def ratio_rhs(params: ResonatorParams, theta: float, prime_weight: PrimeWeight = "plain") -> RatioBound:
    """比值下界 cos(theta) sum_{p<=X} r(p) p^{-sigma} 及其渐近形式。"""
    """EN: Ratio lower bound cos(theta) sum_{p<=X} r(p) p^{-sigma} and its asymptotic form."""
    c = theta_cos(theta)
    if c < 0:
        warnings.warn(f"cos(theta) < 0，比值下界不适用: theta={theta}", BoundInapplicableWarning, stacklevel=2)
    if params.primes.size == 0:
        return RatioBound(exact=0.0, asymptotic=0.0)
    sigma, X = params.sigma, params.X
    exact = c * chunked_dot(params.coeffs, prime_weights(params.primes, sigma, prime_weight))
    shape = c * sigma / (1.0 - sigma) * X ** (1.0 - sigma)
    asymptotic = shape if prime_weight == "log" else shape / math.log(X)
    return RatioBound(exact=exact, asymptotic=asymptotic)


@dataclass(frozen=True)
class Certificate:
    weighted_mean: float
    argmax_j: int
    max_value: float
    excluded_count: int


def certificate(values, weights, exclude=()) -> Certificate:
    """加权平均与最大值。j = 0 总被排除；最大值并列时取最小的 j。"""
    """EN: Weighted mean and maximum. j = 0 is always excluded; ties go to the smallest j."""
    values = np.asarray(values, dtype=np.float64)
    w = _weight_array(weights)
    if values.shape != w.shape:
        raise InvalidArgumentError(f"取值表与权重长度不一致: {values.shape} vs {w.shape}")
    mask = np.ones(values.size, dtype=bool)
    excluded = {0, *(int(j) for j in exclude)}
    mask[[j for j in excluded if 0 <= j < values.size]] = False
    if not mask.any():
        raise EmptyDomainError("所有特征都被排除，无法构造证书")
    total = chunked_sum(w[mask])
    mean = chunked_dot(values[mask], w[mask]) / total
    masked = np.where(mask, values, -np.inf)
    argmax = int(np.argmax(masked))
    return Certificate(
        weighted_mean=mean,
        argmax_j=argmax,
        max_value=float(values[argmax]),
        excluded_count=int(values.size - mask.sum()),
    )


@dataclass(frozen=True)
class MomentReport:
    Q1: float
    Q2: float
    ratio: float
    rhs: float
    argmax_j: int
    max_value: float
    weighted_mean: float
    excluded_count: int
    # 排除分支失败特征后的 S1、S2 及被排除的权重占比。
    # EN: S1 and S2 with branch-failure characters removed, and the excluded weight share.
    s1: float
    s2: float
    excluded_weight_fraction: float

    @property
    def s_ratio(self) -> float:
        return self.s2 / self.s1


def moment_report(
    G: CharacterGroup,
    params: ResonatorParams,
    Y: float,
    theta: float,
    weights: ResonatorWeights,
    table: PrimeSieve,
    values,
    exclude=(),
    prime_weight: PrimeWeight = "plain",
    truncated: np.ndarray | None = None,
) -> MomentReport:
    """把矩、比值下界与证书汇总成一份报告。values 是每个特征上要最大化的实数量。"""
    """EN: Bundle the moments, the ratio bound and the certificate. values holds the real quantity maximized per character."""
    w = _weight_array(weights)
    if truncated is None:
        truncated = truncated_log_l_all(G, params.sigma, Y, table, prime_weight)
    rotated = _rotated_real(truncated, theta)
    Q1 = q1_moment(w)
    Q2 = chunked_dot(rotated, w)

    cert = certificate(values, w, exclude)
    # S1/S2 与证书使用同一可用集合：去掉主特征与分支失败的特征。
    # EN: S1/S2 use the same admissible set as the certificate: no principal, no branch failures.
    keep = np.ones(G.m, dtype=bool)
    keep[[0, *(int(j) for j in exclude)]] = False
    s1 = chunked_sum(w[keep])
    s2 = chunked_dot(rotated[keep], w[keep])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundInapplicableWarning)
        rhs = ratio_rhs(params, theta, prime_weight).exact
    return MomentReport(
        Q1=Q1,
        Q2=Q2,
        ratio=Q2 / Q1,
        rhs=rhs,
        argmax_j=cert.argmax_j,
        max_value=cert.max_value,
        weighted_mean=cert.weighted_mean,
        excluded_count=cert.excluded_count,
        s1=s1,
        s2=s2,
        excluded_weight_fraction=1.0 - s1 / Q1,
    )
