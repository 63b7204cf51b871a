import math

import numpy as np
import pytest

from resonance.reduction import chunk_bounds, chunked_complex_sum, chunked_dot, chunked_sum


def test_chunk_bounds_cover_range():
    assert chunk_bounds(10, 4) == [(0, 4), (4, 8), (8, 10)]
    assert chunk_bounds(0, 4) == []


def test_chunked_sum_is_close_to_fsum(rng):
    values = rng.standard_normal(100_003)
    assert chunked_sum(values) == pytest.approx(math.fsum(values.tolist()), abs=1e-9)


def test_chunked_sum_is_reproducible(rng):
    values = rng.standard_normal(50_000)
    assert chunked_sum(values) == chunked_sum(values.copy())


def test_chunked_sum_depends_only_on_chunk_layout():
    # 块内求和后 fsum 合并：每块精确时结果也精确。
    # EN: per-chunk sums merged by fsum; exact chunks give an exact result.
    values = np.array([1e16, 1.0, -1e16, 1.0] * 3)
    assert chunked_sum(values, chunk=1) == 6.0


def test_chunked_complex_and_dot():
    values = np.array([1 + 2j, 3 - 1j, -0.5j])
    assert chunked_complex_sum(values) == complex(4, 0.5)
    assert chunked_dot([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]) == 32.0
    assert chunked_sum([]) == 0.0
