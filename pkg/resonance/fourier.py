"""任意长度离散傅里叶变换。光滑长度走混合基 FFT，含大素因子时走 chirp-z (Bluestein)。"""
"""EN: Arbitrary-length DFT: mixed-radix FFT for smooth lengths, chirp-z (Bluestein) when a large prime factor is present."""


import numpy as np
import scipy.fft

from .arith import factorize
from .config import NAIVE_TRANSFORM_ROW_CHUNK, SMOOTH_RADIX_LIMIT
from .errors import InvalidArgumentError

METHOD_MIXED_RADIX = "mixed-radix"
METHOD_CHIRP_Z = "chirp-z"
METHOD_NAIVE = "naive"


def largest_prime_factor(n: int) -> int:
    if n <= 1:
        return 1
    return factorize(n)[-1][0]


def choose_method(n: int, radix_limit: int = SMOOTH_RADIX_LIMIT) -> str:
    """按长度的最大素因子选择变换路线。"""
    """EN: Pick the transform route from the length's largest prime factor."""
    return METHOD_MIXED_RADIX if largest_prime_factor(n) <= radix_limit else METHOD_CHIRP_Z


def _as_vector(x) -> np.ndarray:
    vector = np.asarray(x, dtype=np.complex128)
    if vector.ndim != 1:
        raise InvalidArgumentError(f"只支持一维序列: shape={vector.shape}")
    return vector


def mixed_radix_dft(x) -> np.ndarray:
    """y[j] = sum_k x[k] e(jk/n)，不做归一化。"""
    """EN: y[j] = sum_k x[k] e(jk/n), unnormalized."""
    vector = _as_vector(x)
    # norm="forward" 让逆变换不带 1/n 因子。
    # EN: norm="forward" leaves the inverse transform unscaled.
    return scipy.fft.ifft(vector, norm="forward")


def _chirp(n: int) -> np.ndarray:
    # k^2 先对 2n 取模，避免大 k 时角度丢精度。
    # EN: Reduce k^2 mod 2n first so the angle keeps full precision for large k.
    k = np.arange(n, dtype=np.int64)
    return np.exp(1j * np.pi * ((k * k) % (2 * n)) / n)


def chirp_z_dft(x) -> np.ndarray:
    """Bluestein 算法：jk = (j^2 + k^2 - (j-k)^2)/2，把 DFT 化为卷积。"""
    """EN: Bluestein: jk = (j^2 + k^2 - (j-k)^2)/2 turns the DFT into a convolution."""
    vector = _as_vector(x)
    n = vector.size
    if n <= 1:
        return vector.copy()
    w = _chirp(n)
    size = scipy.fft.next_fast_len(2 * n - 1)

    a = np.zeros(size, dtype=np.complex128)
    a[:n] = vector * w
    b = np.zeros(size, dtype=np.complex128)
    b[:n] = np.conj(w)
    b[size - n + 1 :] = np.conj(w[1:])[::-1]

    conv = scipy.fft.ifft(scipy.fft.fft(a) * scipy.fft.fft(b))
    return w * conv[:n]


def naive_dft(x) -> np.ndarray:
    """O(n^2) 直接求和，作为测试基准。"""
    """EN: Direct O(n^2) summation used as the test oracle."""
    vector = _as_vector(x)
    n = vector.size
    if n == 0:
        return vector.copy()
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    k = np.arange(n, dtype=np.int64)
    result = np.empty(n, dtype=np.complex128)
    for start in range(0, n, NAIVE_TRANSFORM_ROW_CHUNK):
        rows = np.arange(start, min(n, start + NAIVE_TRANSFORM_ROW_CHUNK), dtype=np.int64)
        result[rows] = roots[np.outer(rows, k) % n] @ vector
    return result


def dft(x, method: str | None = None) -> np.ndarray:
    """统一入口。method 为空时自动选择。"""
    """EN: Unified entry point; picks the route automatically when method is None."""
    vector = _as_vector(x)
    chosen = method or choose_method(vector.size)
    if chosen == METHOD_MIXED_RADIX:
        return mixed_radix_dft(vector)
    if chosen == METHOD_CHIRP_Z:
        return chirp_z_dft(vector)
    if chosen == METHOD_NAIVE:
        return naive_dft(vector)
    raise InvalidArgumentError(f"未知的变换方法: {method}")
