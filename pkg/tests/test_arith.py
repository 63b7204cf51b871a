import math

import numpy as np
import pytest

from resonance.arith import (
    discrete_log_table,
    factorize,
    is_prime,
    mangoldt,
    mangoldt_table,
    next_prime,
    primitive_root,
    sieve,
)
from resonance.errors import InvalidArgumentError, OutOfRangeError


def test_sieve_counts(table, big_table):
    assert table.primes_upto(10**5).size == 9592
    assert big_table.primes.size == 78498
    assert table.primes[:10].tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_sieve_smallest_factor(table):
    assert int(table.smallest_factor[1]) == 1
    assert int(table.smallest_factor[91]) == 7
    assert int(table.smallest_factor[99991]) == 99991
    assert table.factor(360) == [(2, 3), (3, 2), (5, 1)]


def test_sieve_rejects_small_limit_and_out_of_range():
    with pytest.raises(InvalidArgumentError):
        sieve(1)
    small = sieve(100)
    with pytest.raises(OutOfRangeError):
        small.primes_upto(101)
    with pytest.raises(OutOfRangeError):
        small.is_prime(1000)
    assert small.primes_upto(1.5).size == 0


@pytest.mark.parametrize("n, expected", [(1, 0.0), (2, math.log(2)), (8, math.log(2)), (12, 0.0), (49, math.log(7))])
def test_mangoldt_values(table, n, expected):
    assert mangoldt(n, table) == pytest.approx(expected)


def test_mangoldt_table_matches_pointwise(table):
    values = mangoldt_table(table, 2000)
    assert values[0] == 0.0
    for n in range(1, 2001):
        assert values[n] == mangoldt(n, table)


def test_chebyshev_sum_order_of_magnitude(table):
    # psi(x) ~ x
    psi = math.fsum(mangoldt_table(table, 10**4).tolist())
    assert psi == pytest.approx(10**4, rel=0.02)


@pytest.mark.parametrize("n", [2, 3, 97, 7919, 1_000_003, 2_147_483_647])
def test_is_prime_true(n):
    assert is_prime(n)


@pytest.mark.parametrize("n", [0, 1, 4, 561, 1105, 3_215_031_751, 25326001])
def test_is_prime_false(n):
    assert not is_prime(n)


def test_next_prime_and_factorize():
    assert next_prime(1000) == 1009
    assert next_prime(10**4) == 10007
    assert next_prime(13) == 13
    assert factorize(1008) == [(2, 4), (3, 2), (7, 1)]
    assert factorize(1) == []


@pytest.mark.parametrize("q, g", [(3, 2), (7, 3), (101, 2)])
def test_primitive_root_smallest(q, g):
    assert primitive_root(q) == g


@pytest.mark.parametrize("q", [1009, 10007])
def test_primitive_root_is_minimal_generator(q):
    def generates(h):
        return all(pow(h, (q - 1) // p, q) != 1 for p, _ in factorize(q - 1))

    g = primitive_root(q)
    assert generates(g)
    assert not any(generates(h) for h in range(2, g))


@pytest.mark.parametrize("q", [2, 15, 1])
def test_discrete_log_rejects_bad_modulus(q):
    with pytest.raises(InvalidArgumentError):
        discrete_log_table(q)


@pytest.mark.parametrize("q", [7, 101, 1009])
def test_discrete_log_homomorphism(q, rng):
    dl = discrete_log_table(q)
    assert dl.ind[0] == -1
    a = rng.integers(1, q, size=500)
    b = rng.integers(1, q, size=500)
    assert np.array_equal(dl.ind[(a * b) % q], (dl.ind[a] + dl.ind[b]) % (q - 1))
    assert sorted(dl.ind[1:].tolist()) == list(range(q - 1))
    assert dl.index(dl.g) == 1


def test_discrete_log_index_rejects_multiple_of_q():
    dl = discrete_log_table(7)
    with pytest.raises(InvalidArgumentError):
        dl.index(14)
