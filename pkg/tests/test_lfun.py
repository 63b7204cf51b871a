import math

import mpmath
import numpy as np
import pytest

from resonance.arith import mangoldt_table
from resonance.characters import CharacterGroup, char_value, char_values
from resonance.errors import BranchFailureError, DomainError, InvalidArgumentError, PoleError
from resonance.lfun import (
    EvalParams,
    euler_log_l,
    hurwitz_zeta,
    hurwitz_zeta_bound,
    hurwitz_zeta_ds,
    hurwitz_zeta_many,
    l_value,
    l_values_all,
    log_deriv,
    log_deriv_all,
    log_l,
    log_l_all,
    median_truncation_gap,
    truncated_log_deriv,
    truncated_log_l,
    truncated_log_l_all,
    truncated_log_l_prime_powers,
    weighted_gap,
)


def _dirichlet_series(G, j, s):
    chi = [0] + [char_value(G, j, n) for n in range(1, G.q)]
    return complex(mpmath.dirichlet(s, chi))


# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------


def test_hurwitz_goldens():
    assert hurwitz_zeta(2.0, 1.0) == pytest.approx(math.pi**2 / 6, abs=1e-12)
    assert hurwitz_zeta(2.0, 0.5) == pytest.approx(math.pi**2 / 2, abs=1e-12)
    assert hurwitz_zeta(0.75, 0.3) == pytest.approx(float(mpmath.zeta(0.75, 0.3)), rel=1e-12)


@pytest.mark.parametrize("s, a", [(0.6, 0.01), (0.9, 0.5), (1.3, 0.999), (2.5, 0.2), (3.0, 1.0)])
def test_hurwitz_matches_mpmath(s, a):
    assert hurwitz_zeta(s, a) == pytest.approx(float(mpmath.zeta(s, a)), rel=1e-11)


@pytest.mark.parametrize("s, a", [(0.75, 0.3), (2.0, 1.0), (1.5, 0.05)])
def test_hurwitz_derivative_matches_mpmath(s, a):
    assert hurwitz_zeta_ds(s, a) == pytest.approx(float(mpmath.zeta(s, a, 1)), rel=1e-10)


def test_hurwitz_refinement_stays_within_bound(rng):
    base = EvalParams()
    fine = base.refined()
    assert fine.em_cutoff == 64 and fine.em_order == 11
    for _ in range(50):
        s = float(rng.uniform(0.6, 3.0))
        if abs(s - 1.0) < 0.05:
            continue
        a = float(rng.uniform(1e-3, 1.0))
        coarse = hurwitz_zeta(s, a, base)
        allowed = hurwitz_zeta_bound(s, a, base) + 1e-13 * max(1.0, abs(coarse))
        assert abs(coarse - hurwitz_zeta(s, a, fine)) <= allowed


def test_hurwitz_vectorized_matches_scalar():
    a = np.array([0.1, 0.5, 1.0])
    values, bounds = hurwitz_zeta_many(0.8, a)
    assert values.shape == bounds.shape == (3,)
    for value, point in zip(values, a):
        assert value == pytest.approx(hurwitz_zeta(0.8, float(point)), rel=1e-15)
    assert np.all(bounds < 1e-12)


def test_hurwitz_domain_errors():
    with pytest.raises(PoleError):
        hurwitz_zeta(1.0, 0.5)
    with pytest.raises(DomainError):
        hurwitz_zeta(0.5, 0.5)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, 0.0)
    with pytest.raises(DomainError):
        hurwitz_zeta(2.0, 1.5)


def test_eval_params_validation():
    with pytest.raises(InvalidArgumentError):
        EvalParams(em_cutoff=5)
    with pytest.raises(InvalidArgumentError):
        EvalParams(em_order=0)
    with pytest.raises(InvalidArgumentError):
        EvalParams(zero_guard=0.0)


# ---------------------------------------------------------------------------
# L(sigma, chi)
# ---------------------------------------------------------------------------


def test_principal_identity(group101):
    for sigma in (0.6, 0.75, 1.5):
        expected = float(mpmath.zeta(sigma) * (1 - mpmath.mpf(101) ** (-sigma)))
        assert l_value(group101, 0, sigma).real == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("sigma", [0.75, 2.0])
def test_l_value_matches_dirichlet_series(group7, sigma):
    for j in range(1, 6):
        assert abs(l_value(group7, j, sigma) - _dirichlet_series(group7, j, sigma)) <= 1e-10


def test_l_values_all_matches_loop(group101):
    batch = l_values_all(group101, 0.75)
    loop = np.array([l_value(group101, j, 0.75) for j in range(group101.m)])
    assert np.max(np.abs(batch - loop) / np.abs(loop)) <= 1e-9


def test_l_value_rejects_sigma_outside_domain(group7):
    with pytest.raises(DomainError):
        l_value(group7, 1, 0.5)
    with pytest.raises(PoleError):
        l_value(group7, 1, 1.0)
    with pytest.raises(DomainError):
        l_value(group7, 1, 3.5)


# ---------------------------------------------------------------------------
# log L
# ---------------------------------------------------------------------------


def test_log_l_exponentiates_back(group101):
    for j in (1, 7, 50, 99):
        result = log_l(group101, j, 0.75)
        assert result.method == "branch-tracked"
        assert result.path_steps > 0
        direct = l_value(group101, j, 0.75)
        assert abs(np.exp(result.value) - direct) <= 1e-8 * abs(direct)


def test_log_l_of_real_character_is_real(group101):
    assert abs(log_l(group101, 50, 0.75).value.imag) <= 1e-12


def test_log_l_euler_region(group101):
    result = log_l(group101, 3, 2.5)
    assert result.method == "euler-region"
    assert result.path_steps == 0
    assert result.value == pytest.approx(complex(np.log(l_value(group101, 3, 2.5))))


def test_log_l_principal_below_one_fails_at_pole(group101):
    with pytest.raises(BranchFailureError) as info:
        log_l(group101, 0, 0.75)
    assert info.value.j == 0
    assert info.value.step >= 1


def test_log_l_principal_above_one(group101):
    result = log_l(group101, 0, 1.5)
    expected = math.log(float(mpmath.zeta(1.5) * (1 - mpmath.mpf(101) ** -1.5)))
    assert result.value.real == pytest.approx(expected, abs=1e-10)
    assert result.value.imag == 0.0


def test_log_l_all_matches_single(group101):
    batch = log_l_all(group101, 0.75)
    assert batch.method == "branch-tracked"
    assert batch.failed_step[0] == 0
    assert not batch.admissible[0]
    assert batch.admissible[1:].all()
    for j in (1, 2, 50, 77, 99):
        assert abs(batch.values[j] - log_l(group101, j, 0.75).value) <= 1e-9


def test_log_l_all_euler_region(group101):
    batch = log_l_all(group101, 2.0)
    assert batch.method == "euler-region"
    assert np.isnan(batch.values[0])
    direct = l_values_all(group101, 2.0)
    assert np.allclose(np.exp(batch.values[1:]), direct[1:], rtol=1e-12)


def test_log_l_all_agrees_with_euler_sum(big_table):
    G = CharacterGroup.build(61)
    batch = log_l_all(G, 2.0)
    for j in range(1, G.m):
        euler = euler_log_l(G, j, 2.0, 10**6, big_table)
        assert euler.method == "truncated"
        assert abs(batch.values[j] - euler.value) <= euler.err_estimate + 1e-10


def test_euler_log_l_rejects_small_s(group7, table):
    with pytest.raises(DomainError):
        euler_log_l(group7, 1, 1.5, 1000, table)


# ---------------------------------------------------------------------------
# L'/L
# ---------------------------------------------------------------------------


def test_log_deriv_principal_identity(group101):
    s = mpmath.mpf("0.75")
    q = mpmath.mpf(101)
    expected = mpmath.zeta(s, 1, 1) / mpmath.zeta(s) + mpmath.log(q) * q ** (-s) / (1 - q ** (-s))
    assert log_deriv(group101, 0, 0.75).real == pytest.approx(float(expected), rel=1e-9)


def test_log_deriv_matches_mangoldt_series(big_table):
    G = CharacterGroup.build(61)
    Y = 10**6
    for j in (1, 5, 30):
        series = -truncated_log_deriv(G, j, 2.0, Y, big_table).full
        assert abs(log_deriv(G, j, 2.0) - series) <= 2.0 * math.log(Y) / Y


def test_log_deriv_all_matches_single(group101):
    batch = log_deriv_all(group101, 0.75)
    assert not batch.guarded.any()
    for j in (0, 3, 50):
        assert abs(batch.values[j] - log_deriv(group101, j, 0.75)) <= 1e-9 * max(1.0, abs(batch.values[j]))


# ---------------------------------------------------------------------------
# truncated sums
# ---------------------------------------------------------------------------


def test_truncated_all_matches_single(group101, table):
    batch = truncated_log_l_all(group101, 0.75, 5000, table)
    for j in (0, 1, 42, 99):
        assert abs(batch[j] - truncated_log_l(group101, j, 0.75, 5000, table)) <= 1e-10


def test_truncated_log_weight(group101, table):
    batch = truncated_log_l_all(group101, 0.75, 5000, table, prime_weight="log")
    for j in (1, 42):
        expected = truncated_log_deriv(group101, j, 0.75, 5000, table).prime_only
        assert abs(batch[j] - expected) <= 1e-9


def test_truncated_prime_powers_matches_mangoldt(group101, table):
    Y = 3000
    lam = mangoldt_table(table, Y)
    n = np.arange(2, Y + 1)
    chi = char_values(group101, 7, n)
    keep = lam[n] > 0
    expected = np.sum(lam[n][keep] * chi[keep] / (n[keep] ** 0.75 * np.log(n[keep])))
    assert abs(truncated_log_l_prime_powers(group101, 7, 0.75, Y, table) - expected) <= 1e-10


def test_truncated_log_deriv_difference(group101, table):
    Y = 3000
    lam = mangoldt_table(table, Y)
    n = np.arange(2, Y + 1)
    chi = char_values(group101, 7, n)
    expected = np.sum(lam[n] * chi * n ** (-0.75))
    result = truncated_log_deriv(group101, 7, 0.75, Y, table)
    assert abs(result.full - expected) <= 1e-10
    assert result.difference == result.full - result.prime_only


def test_truncated_sums_empty_below_two(group7, table):
    assert truncated_log_l(group7, 1, 0.75, 1.5, table) == 0
    assert np.all(truncated_log_l_all(group7, 0.75, 1.5, table) == 0)


def test_truncation_gaps(group101, table):
    logs = log_l_all(group101, 0.75)
    truncated = truncated_log_l_all(group101, 0.75, 10**4, table)
    median = median_truncation_gap(logs, truncated)
    assert 0 < median < 2.0
    assert weighted_gap(logs, truncated, np.ones(group101.m)) > 0
