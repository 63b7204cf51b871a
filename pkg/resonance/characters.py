"""素数模 q 的 Dirichlet 特征群。提供逐点求值、正交和与全体特征的批量变换。"""
"""EN: The Dirichlet character group modulo a prime q: pointwise values, orthogonality sums and a batch transform over all characters."""


import math
from dataclasses import dataclass, field

import numpy as np

from .arith import DiscreteLogTable, discrete_log_table
from .config import NAIVE_TRANSFORM_ROW_CHUNK
from .errors import InvalidArgumentError
from .fourier import METHOD_NAIVE, dft

# 特征按原根下的指标 j 编号，j = 0 为主特征。
# EN: Characters are numbered by their index j under the primitive root; j = 0 is principal.
CharacterIndex = int


def _unit_roots(m: int) -> np.ndarray:
    # 由角度 2*pi*k/m 直接计算，不做累乘；上半部分取共轭，保证 chi_{m-j} 与 conj(chi_j) 逐位相等。
    # EN: Computed from the angle 2*pi*k/m, not by repeated multiplication; the upper half is the conjugate of the lower half bit for bit.
    k = np.arange(m, dtype=np.float64)
    roots = np.exp(2j * np.pi * k / m)
    roots[0] = 1.0
    upper = np.arange(1, (m + 1) // 2)
    roots[m - upper] = np.conj(roots[upper])
    if m % 2 == 0:
        roots[m // 2] = -1.0
    return roots


@dataclass(frozen=True, eq=False)
class CharacterGroup:
    """特征群 G_q。构造后只读，可在线程间共享。"""
    """EN: Character group G_q; read-only after construction and shareable across threads."""

    q: int
    m: int
    table: DiscreteLogTable = field(repr=False)
    roots: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, q: int) -> "CharacterGroup":
        table = discrete_log_table(q)
        m = table.order
        roots = _unit_roots(m)
        roots.setflags(write=False)
        return cls(q=table.q, m=m, table=table, roots=roots)

    def check_index(self, j: CharacterIndex) -> int:
        j = int(j)
        if not 0 <= j < self.m:
            raise InvalidArgumentError(f"特征指标越界: j={j}, m={self.m}")
        return j


def conjugate_index(G: CharacterGroup, j: CharacterIndex) -> int:
    return (G.m - G.check_index(j)) % G.m


def is_real_character(G: CharacterGroup, j: CharacterIndex) -> bool:
    """实特征只有主特征和 j = m/2 的二次特征。"""
    """EN: The only real characters are the principal one and the quadratic one at j = m/2."""
    j = G.check_index(j)
    return j == conjugate_index(G, j)


def char_value(G: CharacterGroup, j: CharacterIndex, n: int) -> complex:
    """chi_j(n) = e(j * ind(n) / m)，q | n 时为 0。"""
    """EN: chi_j(n) = e(j * ind(n) / m), and 0 when q divides n."""
    j = G.check_index(j)
    n = int(n)
    if n < 0:
        raise InvalidArgumentError(f"需要非负整数: n={n}")
    residue = n % G.q
    if residue == 0:
        return 0j
    return complex(G.roots[(j * int(G.table.ind[residue])) % G.m])


def char_values(G: CharacterGroup, j: CharacterIndex, n) -> np.ndarray:
    """对整数数组 n 向量化求 chi_j(n)。"""
    """EN: Vectorized chi_j(n) over an integer array n."""
    j = G.check_index(j)
    residues = np.asarray(n, dtype=np.int64) % G.q
    ind = G.table.ind[residues]
    values = G.roots[(j * ind) % G.m]
    return np.where(residues == 0, 0j, values)


def char_values_all(G: CharacterGroup, n: int) -> np.ndarray:
    """固定 n，返回全部特征的取值，按 j 排列。"""
    """EN: Values of every character at a fixed n, ordered by j."""
    residue = int(n) % G.q
    if residue == 0:
        return np.zeros(G.m, dtype=np.complex128)
    k = int(G.table.ind[residue])
    return G.roots[(np.arange(G.m, dtype=np.int64) * k) % G.m]


def character_table(G: CharacterGroup) -> np.ndarray:
    """稠密特征表，形状 (m, q)，列为 n = 0..q-1。"""
    """EN: Dense character table of shape (m, q); columns are n = 0..q-1."""
    j = np.arange(G.m, dtype=np.int64)[:, None]
    ind = G.table.ind[np.arange(G.q)][None, :]
    table = G.roots[(j * ind) % G.m]
    table[:, 0] = 0
    return table


def orthogonality_sum(G: CharacterGroup, a: int, n: int) -> complex:
    """(1/phi(q)) * sum_chi conj(chi(a)) chi(n)，直接逐项求和。"""
    """EN: (1/phi(q)) * sum_chi conj(chi(a)) chi(n) by direct summation."""
    a, n = int(a), int(n)
    if math.gcd(a, G.q) != 1:
        raise InvalidArgumentError(f"a 必须与 q 互素: a={a}, q={G.q}")
    if n % G.q == 0:
        return 0j
    diff = int(G.table.ind[n % G.q]) - int(G.table.ind[a % G.q])
    exponents = (np.arange(G.m, dtype=np.int64) * diff) % G.m
    return complex(np.sum(G.roots[exponents]) / G.m)


def _check_residue_table(G: CharacterGroup, f) -> np.ndarray:
    values = np.asarray(f, dtype=np.complex128)
    if values.ndim != 1 or values.size != G.q - 1:
        raise InvalidArgumentError(f"输入长度必须为 q-1={G.q - 1}: 实际 {values.size}")
    return values


def transform_all(G: CharacterGroup, f, method: str | None = None) -> np.ndarray:
    """result[j] = sum_{a=1}^{q-1} f(a) chi_j(a)。f[a-1] 存放 f(a)。"""
    """EN: result[j] = sum_{a=1}^{q-1} f(a) chi_j(a), with f(a) stored at f[a-1]."""
    values = _check_residue_table(G, f)
    if method == METHOD_NAIVE:
        return transform_all_naive(G, values)
    # 按离散对数重排：h[k] = f(g^k)，于是 result[j] = sum_k h[k] e(jk/m)。
    # EN: Reorder by discrete log, h[k] = f(g^k), so result[j] = sum_k h[k] e(jk/m).
    reordered = values[G.table.powers - 1]
    return dft(reordered, method)


def transform_all_naive(G: CharacterGroup, f) -> np.ndarray:
    """O(m^2) 直接求和，逐块处理以控制内存。"""
    """EN: Direct O(m^2) summation, processed in row blocks to bound memory."""
    values = _check_residue_table(G, f)
    ind = G.table.ind[1:]
    result = np.empty(G.m, dtype=np.complex128)
    for start in range(0, G.m, NAIVE_TRANSFORM_ROW_CHUNK):
        rows = np.arange(start, min(G.m, start + NAIVE_TRANSFORM_ROW_CHUNK), dtype=np.int64)
        result[rows] = G.roots[np.outer(rows, ind) % G.m] @ values
    return result
