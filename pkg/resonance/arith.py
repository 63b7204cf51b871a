"""该模块提供整数算术基础。包含素数筛、von Mangoldt 函数、原根与离散对数表。"""
"""EN: Integer arithmetic backbone: prime sieve, von Mangoldt function, primitive roots and discrete-log tables."""


import math
from dataclasses import dataclass, field

import numpy as np

from .config import SIEVE_LIMIT_CAP
from .errors import InvalidArgumentError, OutOfRangeError

# Miller-Rabin 固定见证集。对 n < 3.3e24 给出确定性结果，覆盖全部 64 位输入。
# EN: Fixed Miller-Rabin witnesses; deterministic for n < 3.3e24, which covers every 64-bit input.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PrimeSieve:
    """最小素因子筛。构造后只读，可在线程间共享。"""
    """EN: Smallest-prime-factor sieve. Read-only after construction and safe to share across threads."""

    limit: int
    primes: np.ndarray
    smallest_factor: np.ndarray

    def primes_upto(self, y: float) -> np.ndarray:
        """返回不超过 y 的素数切片。"""
        """EN: Return the slice of primes <= y."""
        if y > self.limit:
            raise OutOfRangeError(f"截断点超过筛法上限: y={y}, limit={self.limit}")
        if y < 2:
            return self.primes[:0]
        stop = int(np.searchsorted(self.primes, math.floor(y), side="right"))
        return self.primes[:stop]

    def is_prime(self, n: int) -> bool:
        self._check(n)
        return n >= 2 and int(self.smallest_factor[n]) == n

    def factor(self, n: int) -> list[tuple[int, int]]:
        """按最小素因子表分解 n，返回 (p, a) 列表，p 升序。"""
        """EN: Factor n through the smallest-factor table; returns (p, a) pairs in increasing p."""
        self._check(n)
        result: list[tuple[int, int]] = []
        rest = int(n)
        while rest > 1:
            p = int(self.smallest_factor[rest])
            exponent = 0
            while rest % p == 0:
                rest //= p
                exponent += 1
            result.append((p, exponent))
        return result

    def _check(self, n: int):
        if n < 1:
            raise InvalidArgumentError(f"需要正整数: n={n}")
        if n > self.limit:
            raise OutOfRangeError(f"n 超过筛法上限: n={n}, limit={self.limit}")


@dataclass(frozen=True, eq=False)
class DiscreteLogTable:
    """素数模 q 的离散对数表。ind[a] 满足 g^ind[a] = a (mod q)。"""
    """EN: Discrete-log table for a prime modulus q; ind[a] satisfies g^ind[a] = a (mod q)."""

    q: int
    g: int
    # ind[0] 固定为 -1，表示 0 没有离散对数。
    # EN: ind[0] is -1: zero has no discrete logarithm.
    ind: np.ndarray
    powers: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.q - 1

    def index(self, a: int) -> int:
        """返回 a mod q 的离散对数。q | a 时报错。"""
        """EN: Discrete log of a mod q; raises when q divides a."""
        residue = int(a) % self.q
        if residue == 0:
            raise InvalidArgumentError(f"{a} 与模数 {self.q} 不互素")
        return int(self.ind[residue])


def sieve(limit: int, cap: int = SIEVE_LIMIT_CAP) -> PrimeSieve:
    """构建 [0, limit] 上的最小素因子筛。"""
    """EN: Build the smallest-prime-factor sieve on [0, limit]."""
    limit = int(limit)
    if limit < 2:
        raise InvalidArgumentError(f"筛法上限至少为 2: limit={limit}")
    if limit > cap:
        raise InvalidArgumentError(f"筛法上限 {limit} 超过允许值 {cap}，请调低 Y 上限")

    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] != 0:
            continue
        # 切片是视图，布尔赋值直接写回 spf。
        # EN: The slice is a view, so the masked assignment writes through to spf.
        block = spf[p * p :: p]
        block[block == 0] = p

    prime_mask = spf == 0
    prime_mask[:2] = False
    primes = np.flatnonzero(prime_mask).astype(np.int64)
    spf[primes] = primes
    spf[1] = 1
    return PrimeSieve(limit=limit, primes=_frozen(primes), smallest_factor=_frozen(spf))


def mangoldt(n: int, table: PrimeSieve) -> float:
    """计算 Lambda(n)。n = p^k 时为 log p，否则为 0。"""
    """EN: Compute Lambda(n): log p when n = p^k, else 0."""
    n = int(n)
    if n < 1:
        raise InvalidArgumentError(f"von Mangoldt 函数需要 n >= 1: n={n}")
    if n > table.limit:
        raise OutOfRangeError(f"n 超过筛法上限: n={n}, limit={table.limit}")
    if n == 1:
        return 0.0
    p = int(table.smallest_factor[n])
    rest = n
    while rest % p == 0:
        rest //= p
    return math.log(p) if rest == 1 else 0.0


def mangoldt_table(table: PrimeSieve, upto: int | None = None) -> np.ndarray:
    """向量化计算 Lambda(n)，n = 0..upto。"""
    """EN: Vectorized Lambda(n) for n = 0..upto."""
    upto = table.limit if upto is None else int(upto)
    if upto > table.limit:
        raise OutOfRangeError(f"上限超过筛法范围: upto={upto}, limit={table.limit}")
    values = np.zeros(max(upto, 0) + 1, dtype=np.float64)
    if upto < 2:
        return values
    primes = table.primes_upto(upto)
    logs = np.log(primes.astype(np.float64))
    values[primes] = logs
    for p, log_p in zip(primes[: int(np.searchsorted(primes, math.isqrt(upto), side="right"))], logs):
        power = int(p) * int(p)
        while power <= upto:
            values[power] = log_p
            power *= int(p)
    return values


def is_prime(n: int) -> bool:
    """确定性 Miller-Rabin 素性检验。"""
    """EN: Deterministic Miller-Rabin primality test."""
    n = int(n)
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """返回不小于 n 的最小素数。"""
    """EN: Smallest prime >= n."""
    candidate = max(2, int(n))
    while not is_prime(candidate):
        candidate += 1
    return candidate


def factorize(n: int) -> list[tuple[int, int]]:
    """试除分解，返回 (p, a) 列表。"""
    """EN: Trial-division factorization returning (p, a) pairs."""
    n = int(n)
    if n < 1:
        raise InvalidArgumentError(f"需要正整数: n={n}")
    result: list[tuple[int, int]] = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            exponent = 0
            while n % p == 0:
                n //= p
                exponent += 1
            result.append((p, exponent))
        p += 1 if p == 2 else 2
    if n > 1:
        result.append((n, 1))
    return result


def _require_odd_prime(q: int) -> int:
    q = int(q)
    if q < 3 or not is_prime(q):
        # q = 2 时特征群平凡，非主特征为空，直接拒绝。
        # EN: For q = 2 the character group is trivial and has no non-principal character.
        raise InvalidArgumentError(f"模数必须是奇素数: q={q}")
    return q


def primitive_root(q: int) -> int:
    """返回模 q 的最小原根。"""
    """EN: Smallest primitive root modulo q."""
    q = _require_odd_prime(q)
    m = q - 1
    cofactors = [m // p for p, _ in factorize(m)]
    for g in range(2, q):
        if all(pow(g, c, q) != 1 for c in cofactors):
            return g
    raise InvalidArgumentError(f"未找到原根: q={q}")  # pragma: no cover - 素数必有原根


def discrete_log_table(q: int) -> DiscreteLogTable:
    """迭代 g 的幂次构建离散对数表，复杂度 O(q)。"""
    """EN: Build the discrete-log table by iterating powers of g in O(q)."""
    q = _require_odd_prime(q)
    g = primitive_root(q)
    m = q - 1
    ind = np.full(q, -1, dtype=np.int64)
    powers = np.empty(m, dtype=np.int64)
    value = 1
    for k in range(m):
        powers[k] = value
        ind[value] = k
        value = value * g % q
    return DiscreteLogTable(q=q, g=g, ind=_frozen(ind), powers=_frozen(powers))
