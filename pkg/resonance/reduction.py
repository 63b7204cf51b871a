"""固定顺序分块求和。分块边界只取决于数据长度，与线程数无关，因此结果逐位可复现。"""
"""EN: Fixed-order chunked sums. Chunk boundaries depend only on the data length, never on thread count, so results are bit-reproducible."""


import math

import numpy as np

from .config import REDUCTION_CHUNK


def chunk_bounds(n: int, chunk: int = REDUCTION_CHUNK) -> list[tuple[int, int]]:
    return [(start, min(n, start + chunk)) for start in range(0, n, chunk)]


def chunked_sum(values, chunk: int = REDUCTION_CHUNK) -> float:
    """先在每块内用 numpy 求和，再用 fsum 按块序合并。"""
    """EN: Sum each chunk with numpy, then merge the partials in chunk order with fsum."""
    array = np.asarray(values, dtype=np.float64).ravel()
    partials = [float(np.sum(array[lo:hi])) for lo, hi in chunk_bounds(array.size, chunk)]
    return math.fsum(partials)


def chunked_complex_sum(values, chunk: int = REDUCTION_CHUNK) -> complex:
    array = np.asarray(values, dtype=np.complex128).ravel()
    return complex(chunked_sum(array.real, chunk), chunked_sum(array.imag, chunk))


def chunked_dot(values, weights, chunk: int = REDUCTION_CHUNK) -> float:
    """sum(values * weights)，与 chunked_sum 同样的分块顺序。"""
    """EN: sum(values * weights) using the same chunk order as chunked_sum."""
    a = np.asarray(values, dtype=np.float64).ravel()
    b = np.asarray(weights, dtype=np.float64).ravel()
    return chunked_sum(a * b, chunk)
