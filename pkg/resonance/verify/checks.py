"""各模块的不变量校验项。quick 级别覆盖全部不变量的缩小版本，full 级别跑完整网格。"""
"""EN: Invariant checks for every module. The quick level runs reduced versions of every invariant; full runs the complete grids."""


import math

import mpmath
import numpy as np

from ..arith import mangoldt_table, next_prime
from ..characters import char_value, character_table, conjugate_index, orthogonality_sum, transform_all, transform_all_naive
from ..constants import a_max, default_epsilon, lambda_sigma, resolve_A, vartheta
from ..lfun import (
    EvalParams,
    euler_log_l,
    hurwitz_zeta,
    hurwitz_zeta_bound,
    hurwitz_zeta_ds,
    l_value,
    l_values_all,
    log_deriv,
    log_l_all,
    median_truncation_gap,
    truncated_log_deriv,
    truncated_log_l_all,
)
from ..resonator import (
    ResonatorParams,
    certificate,
    q1_congruence_oracle,
    log_q1_moment,
    q1_moment,
    q2_moment,
    ratio_rhs,
    r_values_upto,
    resonator_value,
    series_partial,
    weights_all,
)
from .registry import InvariantCheck, VerifyContext

BOTH = ("quick", "full")
FULL = ("full",)


def _rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


# ---------------------------------------------------------------------------
# arith
# ---------------------------------------------------------------------------

# pi(10^5) 与 pi(10^6)。
# EN: pi(10^5) and pi(10^6).
_PRIME_COUNTS = {10**5: 9592, 10**6: 78498}


def check_sieve_count(ctx: VerifyContext):
    limit = 10**6 if ctx.full else 10**5
    table = ctx.table(limit)
    count = int(table.primes_upto(limit).size)
    sample = ctx.rng.integers(2, limit + 1, size=2000)
    spf = table.smallest_factor[sample]
    divides = bool(np.all(sample % spf == 0))
    spf_prime = all(table.is_prime(int(p)) for p in spf)
    ok = count == _PRIME_COUNTS[limit] and divides and spf_prime
    return ok, f"pi({limit})={count}"


def check_dlog_homomorphism(ctx: VerifyContext):
    moduli = (7, 101, 1009, 10007) if ctx.full else (7, 101, 1009)
    for q in moduli:
        table = ctx.group(q).table
        a = ctx.rng.integers(1, q, size=1000)
        b = ctx.rng.integers(1, q, size=1000)
        lhs = table.ind[(a * b) % q]
        rhs = (table.ind[a] + table.ind[b]) % (q - 1)
        if not np.array_equal(lhs, rhs):
            return False, f"q={q}: ind(ab) != ind(a)+ind(b)"
        if sorted(table.ind[1:].tolist()) != list(range(q - 1)):
            return False, f"q={q}: ind 不是双射"
    return True, f"moduli={moduli}"


def check_mangoldt_sum(ctx: VerifyContext):
    N = 10**4
    table = ctx.table(N)
    from_table = math.fsum(mangoldt_table(table, N).tolist())
    enumerated = []
    for p in table.primes_upto(N).tolist():
        power = p
        while power <= N:
            enumerated.append(math.log(p))
            power *= p
    direct = math.fsum(enumerated)
    return from_table == direct, f"sum Lambda = {from_table:.12f}"


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------


def check_roots(ctx: VerifyContext):
    for q in (101, 1009):
        G = ctx.group(q)
        if G.roots[0] != 1.0:
            return False, f"q={q}: roots[0] != 1"
        drift = float(np.max(np.abs(np.abs(G.roots) - 1.0)))
        if drift > 1e-14:
            return False, f"q={q}: max ||root|-1| = {drift:.2e}"
        n = np.arange(1, q)
        for j in ctx.rng.integers(0, G.m, size=10).tolist():
            chi = G.roots[(j * G.table.ind[n]) % G.m]
            conj = G.roots[(conjugate_index(G, j) * G.table.ind[n]) % G.m]
            if float(np.max(np.abs(conj - np.conj(chi)))) > 1e-14:
                return False, f"q={q}, j={j}: 共轭关系不成立"
    return True, "roots ok"


def check_multiplicativity(ctx: VerifyContext):
    q = 1009
    G = ctx.group(q)
    worst = 0.0
    for _ in range(1000):
        j = int(ctx.rng.integers(0, G.m))
        a, b = (int(x) for x in ctx.rng.integers(1, q, size=2))
        worst = max(worst, abs(char_value(G, j, a * b) - char_value(G, j, a) * char_value(G, j, b)))
    return worst <= 1e-12, f"max error {worst:.2e}"


def check_orthogonality(ctx: VerifyContext):
    worst = 0.0
    for q in (5, 7, 11, 101):
        G = ctx.group(q)
        for a in range(1, q):
            for n in range(1, 2 * q + 1):
                expected = 1.0 if (n - a) % q == 0 else 0.0
                worst = max(worst, abs(orthogonality_sum(G, a, n) - expected))
    return worst <= 1e-10, f"max error {worst:.2e}"


def check_column_orthogonality(ctx: VerifyContext):
    for q in (101, 1009):
        table = character_table(ctx.group(q))
        sums = np.abs(table[1:, 1:].sum(axis=1))
        if float(np.max(sums)) > 1e-9 * q:
            return False, f"q={q}: max |sum chi| = {float(np.max(sums)):.2e}"
    return True, "columns ok"


def check_transform_naive(ctx: VerifyContext):
    moduli = (101, 107, 1009) if ctx.full else (101, 107)
    worst = 0.0
    for q in moduli:
        G = ctx.group(q)
        f = ctx.rng.standard_normal(q - 1) + 1j * ctx.rng.standard_normal(q - 1)
        fast, naive = transform_all(G, f), transform_all_naive(G, f)
        worst = max(worst, float(np.max(np.abs(fast - naive))) / float(np.max(np.abs(naive))))
    return worst <= 1e-9, f"max rel error {worst:.2e}"


# ---------------------------------------------------------------------------
# lfun
# ---------------------------------------------------------------------------


def check_hurwitz_goldens(ctx: VerifyContext):
    errors = [
        abs(hurwitz_zeta(2.0, 1.0) - math.pi**2 / 6),
        abs(hurwitz_zeta(2.0, 0.5) - math.pi**2 / 2),
        abs(hurwitz_zeta(0.75, 0.3) - float(mpmath.zeta(0.75, 0.3))),
    ]
    return max(errors) <= 1e-12, f"max error {max(errors):.2e}"


def check_hurwitz_refinement(ctx: VerifyContext):
    base = EvalParams()
    fine = base.refined()
    count = 100 if ctx.full else 30
    for _ in range(count):
        s = float(ctx.rng.uniform(0.6, 3.0))
        if abs(s - 1.0) < 0.05:
            s += 0.1
        a = float(ctx.rng.uniform(1e-3, 1.0))
        coarse = hurwitz_zeta(s, a, base)
        change = abs(coarse - hurwitz_zeta(s, a, fine))
        allowed = hurwitz_zeta_bound(s, a, base) + 1e-13 * max(1.0, abs(coarse))
        if change > allowed:
            return False, f"s={s:.4f}, a={a:.4f}: change {change:.2e} > {allowed:.2e}"
    return True, f"{count} samples"


def check_hurwitz_derivative(ctx: VerifyContext):
    h = 1e-6
    for s, tol in ((2.0, 1e-8), (0.75, 1e-6)):
        fd = (hurwitz_zeta(s + h, 1.0) - hurwitz_zeta(s - h, 1.0)) / (2 * h)
        if abs(hurwitz_zeta_ds(s, 1.0) - fd) > tol:
            return False, f"s={s}: |d/ds - 差分| 过大"
    return True, "derivative ok"


def check_fast_path(ctx: VerifyContext):
    worst = 0.0
    for q in (101, 1009) if ctx.full else (101,):
        G = ctx.group(q)
        batch = l_values_all(G, 0.75)
        loop = np.array([l_value(G, j, 0.75) for j in range(G.m)])
        worst = max(worst, _rel(batch, loop))
    return worst <= 1e-9, f"max rel error {worst:.2e}"


def check_principal_identity(ctx: VerifyContext):
    q, sigma = 101, 0.75
    expected = float(mpmath.zeta(sigma) * (1 - mpmath.mpf(q) ** (-sigma)))
    value = l_value(ctx.group(q), 0, sigma)
    err = abs(value - expected) / abs(expected)
    return err <= 1e-9, f"rel error {err:.2e}"


def check_exp_log(ctx: VerifyContext):
    grid = [(q, s) for q in (61, 101) for s in (0.6, 0.75, 0.9)] if ctx.full else [(101, 0.75)]
    worst, failed = 0.0, 0
    for q, sigma in grid:
        G = ctx.group(q)
        logs = log_l_all(G, sigma)
        direct = l_values_all(G, sigma)
        mask = logs.admissible
        failed += int(logs.failed[1:].sum())
        worst = max(worst, _rel(np.exp(logs.values[mask]), direct[mask]))
    return worst <= 1e-8, f"max rel error {worst:.2e}, branch failures {failed}"


def check_euler_region(ctx: VerifyContext):
    q, limit = 61, 10**6
    G = ctx.group(q)
    table = ctx.table(limit)
    logs = log_l_all(G, 2.0)
    worst, allowed = 0.0, 0.0
    for j in range(1, G.m):
        euler = euler_log_l(G, j, 2.0, limit, table)
        worst = max(worst, abs(logs.values[j] - euler.value))
        allowed = euler.err_estimate + 1e-10
    return worst <= allowed, f"max error {worst:.2e}, tail bound {allowed:.2e}"


def check_logderiv_series(ctx: VerifyContext):
    q, Y = 61, 10**6
    G = ctx.group(q)
    table = ctx.table(Y)
    worst = 0.0
    for j in ctx.rng.integers(1, G.m, size=5).tolist():
        series = -truncated_log_deriv(G, j, 2.0, Y, table).full
        worst = max(worst, abs(log_deriv(G, j, 2.0) - series))
    # sum_{n>Y} log(n)/n^2 <= 2 log(Y)/Y
    allowed = 2.0 * math.log(Y) / Y
    return worst <= allowed, f"max error {worst:.2e}, tail bound {allowed:.2e}"


def check_truncation_discrepancy(ctx: VerifyContext):
    q = next_prime(10**4) if ctx.full else 1009
    Y = 10**4
    G = ctx.group(q)
    logs = log_l_all(G, 0.75)
    gap = median_truncation_gap(logs, truncated_log_l_all(G, 0.75, Y, ctx.table(Y)))
    return gap <= ctx.discrepancy_warn, f"q={q}: median |log L - T| = {gap:.4f}, threshold {ctx.discrepancy_warn:.4f}"


# ---------------------------------------------------------------------------
# resonator
# ---------------------------------------------------------------------------


def _auto_params(q: int, sigma: float) -> ResonatorParams:
    A, _ = resolve_A(sigma, default_epsilon(sigma), grh=False)
    return ResonatorParams.build(q, sigma, A)


def check_weight_bound(ctx: VerifyContext):
    q = 1009 if ctx.full else 101
    G = ctx.group(q)
    params = ResonatorParams.build(q, 0.75, 1.0, X=20.0)
    weights = weights_all(G, params)
    equality = abs(weights.log_weights[0] - weights.log_bound)
    return weights.bound_holds and equality <= 1e-10, f"q={q}: equality gap {equality:.2e}"


def check_euler_series(ctx: VerifyContext):
    q, N = 101, (10**5 if ctx.full else 2 * 10**4)
    G = ctx.group(q)
    params = ResonatorParams.build(q, 0.75, 1.0, X=20.0)
    table = ctx.table(N)
    for j in ctx.rng.integers(0, G.m, size=20).tolist():
        partial, tail = series_partial(G, j, params, N, table)
        if abs(resonator_value(G, j, params) - partial) > tail + 1e-12:
            return False, f"j={j}: |R - series| > tail {tail:.2e}"
    return True, f"N={N}"


def check_square_mass(ctx: VerifyContext):
    N = 10**5
    table = ctx.table(N)
    closed = ResonatorParams.build(101, 0.75, 1.0, X=3.0).total_mass
    if abs(closed - 1.5**0.75) > 1e-14 * closed:
        return False, f"X=3: total_mass {closed!r} != 1.5^0.75"
    params = ResonatorParams.build(101, 0.75, 1.0, X=20.0)
    r = r_values_upto(N, params, table)
    partial = math.fsum(r**2)
    # r(n) <= 1，故 sum_{n>N} r(n)^2 <= sum_{n>N} r(n)。
    # EN: r(n) <= 1, hence sum_{n>N} r(n)^2 <= sum_{n>N} r(n).
    tail = max(params.total_mass - math.fsum(r), 0.0)
    mass = params.square_mass
    ok = partial <= mass * (1 + 1e-12) and mass <= partial + tail + 1e-12
    return ok, f"N={N}: partial {partial:.12f}, square_mass {mass:.12f}, tail {tail:.2e}"
    return True, f"N={N}"


def check_q1_congruence(ctx: VerifyContext):
    N = 3 * 10**4 if ctx.full else 10**4
    table = ctx.table(N)
    for q in (5, 7, 11):
        params = ResonatorParams.build(q, 0.75, 1.0, X=float(q - 1))
        Q1 = math.exp(log_q1_moment(weights_all(ctx.group(q), params)))
        oracle = q1_congruence_oracle(q, params, N, table)
        if abs(Q1 - oracle.value) > oracle.deficit_bound + 1e-9 * Q1:
            return False, f"q={q}: |Q1 - oracle| = {abs(Q1 - oracle.value):.2e} > {oracle.deficit_bound:.2e}"
        if oracle.value < oracle.diagonal * (1 - 1e-12):
            return False, f"q={q}: 对角下界不成立"
    return True, f"N={N}"


_THETAS = (0.0, math.pi / 4, math.pi / 2, 7 * math.pi / 4)


def check_ratio_inequality(ctx: VerifyContext):
    moduli = (101, 1009) if ctx.full else (101,)
    table = ctx.table(10**4)
    for q in moduli:
        G = ctx.group(q)
        for sigma in (0.6, 0.75, 0.9):
            for params in (_auto_params(q, sigma), ResonatorParams.build(q, sigma, 1.0, X=20.0)):
                weights = weights_all(G, params)
                Y = max(params.X, 10**4)
                Q1 = q1_moment(weights)
                for theta in _THETAS:
                    ratio = q2_moment(G, params, Y, theta, weights, table) / Q1
                    rhs = ratio_rhs(params, theta).exact
                    if ratio < rhs - 1e-10:
                        return False, f"q={q}, sigma={sigma}, X={params.X:.3f}, theta={theta:.4f}: {ratio} < {rhs}"
    return True, f"moduli={moduli}"


def check_q2_angle(ctx: VerifyContext):
    q = 1009 if ctx.full else 101
    G = ctx.group(q)
    params = ResonatorParams.build(q, 0.75, 1.0, X=20.0)
    weights = weights_all(G, params)
    table = ctx.table(10**4)
    base = q2_moment(G, params, 10**4, 0.0, weights, table)
    worst = max(abs(q2_moment(G, params, 10**4, t, weights, table) - math.cos(t) * base) for t in _THETAS)
    rel = worst / abs(base)
    return rel <= 1e-10, f"q={q}: rel error {rel:.2e}"


def check_q2_naive(ctx: VerifyContext):
    q = 101
    G = ctx.group(q)
    params = ResonatorParams.build(q, 0.75, 1.0, X=20.0)
    weights = weights_all(G, params)
    table = ctx.table(50)
    fast = q2_moment(G, params, 50, 0.0, weights, table)
    naive = q2_moment(G, params, 50, 0.0, weights, table, method="naive")
    rel = abs(fast - naive) / abs(naive)
    return rel <= 1e-9, f"rel error {rel:.2e}"


def check_certificate(ctx: VerifyContext):
    for _ in range(100):
        size = int(ctx.rng.integers(2, 200))
        values = ctx.rng.standard_normal(size)
        weights = ctx.rng.uniform(0.01, 5.0, size)
        cert = certificate(values, weights)
        if cert.max_value < cert.weighted_mean - 1e-12:
            return False, "max < weighted mean"
    return True, "100 tables"


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def check_constant_goldens(ctx: VerifyContext):
    errors = [
        abs(lambda_sigma(1.0) - (2 * math.log(2) - 1)),
        abs(vartheta(0.8) - 0.5),
        abs(vartheta(0.6) - 3 * 0.4 / 1.4),
        abs(vartheta(0.9) - 2 * 0.1 / 0.9),
    ]
    ordered = a_max(0.75, 0.01, grh=True) > a_max(0.75, 0.01, grh=False) > 0
    return max(errors) <= 1e-10 and ordered, f"max error {max(errors):.2e}"


def _midpoint_lambda(sigma: float, panels: int = 10**7, chunk: int = 10**6) -> float:
    # 分块求和，避免一次分配 10^7 个点。
    # EN: Summed in chunks so the 10^7 nodes are never allocated at once.
    partial = []
    for start in range(0, panels, chunk):
        t = (np.arange(start, min(start + chunk, panels)) + 0.5) / panels
        ts = t**sigma
        partial.append(float(np.sum(ts / (2.0 - ts))))
    return math.fsum(partial) / panels


def check_lambda_midpoint(ctx: VerifyContext):
    worst = 0.0
    for sigma in (0.55, 0.6, 0.75, 0.9, 0.99):
        worst = max(worst, abs(lambda_sigma(sigma) - _midpoint_lambda(sigma)))
    return worst <= 1e-8, f"max error {worst:.2e}"


CHECKS: dict[str, InvariantCheck] = {
    check.name: check
    for check in (
        InvariantCheck("arith.sieve-count", "arith", BOTH, check_sieve_count),
        InvariantCheck("arith.dlog-homomorphism", "arith", BOTH, check_dlog_homomorphism),
        InvariantCheck("arith.mangoldt-sum", "arith", BOTH, check_mangoldt_sum),
        InvariantCheck("characters.roots", "characters", BOTH, check_roots),
        InvariantCheck("characters.multiplicativity", "characters", BOTH, check_multiplicativity),
        InvariantCheck("characters.orthogonality", "characters", BOTH, check_orthogonality),
        InvariantCheck("characters.column-orthogonality", "characters", BOTH, check_column_orthogonality),
        InvariantCheck("characters.transform-naive", "characters", BOTH, check_transform_naive),
        InvariantCheck("lfun.hurwitz-goldens", "lfun", BOTH, check_hurwitz_goldens),
        InvariantCheck("lfun.hurwitz-refinement", "lfun", BOTH, check_hurwitz_refinement),
        InvariantCheck("lfun.hurwitz-derivative", "lfun", BOTH, check_hurwitz_derivative),
        InvariantCheck("lfun.fast-path", "lfun", BOTH, check_fast_path),
        InvariantCheck("lfun.principal-identity", "lfun", BOTH, check_principal_identity),
        InvariantCheck("lfun.exp-log", "lfun", BOTH, check_exp_log),
        InvariantCheck("lfun.euler-region", "lfun", BOTH, check_euler_region),
        InvariantCheck("lfun.logderiv-series", "lfun", BOTH, check_logderiv_series),
        InvariantCheck("lfun.truncation-discrepancy", "lfun", BOTH, check_truncation_discrepancy, soft=True),
        InvariantCheck("resonator.weight-bound", "resonator", BOTH, check_weight_bound),
        InvariantCheck("resonator.euler-series", "resonator", BOTH, check_euler_series),
        InvariantCheck("resonator.square-mass", "resonator", BOTH, check_square_mass),
        InvariantCheck("resonator.q1-congruence", "resonator", BOTH, check_q1_congruence),
        InvariantCheck("resonator.ratio-inequality", "resonator", BOTH, check_ratio_inequality),
        InvariantCheck("resonator.q2-angle", "resonator", BOTH, check_q2_angle),
        InvariantCheck("resonator.q2-naive", "resonator", BOTH, check_q2_naive),
        InvariantCheck("resonator.certificate", "resonator", BOTH, check_certificate),
        InvariantCheck("constants.goldens", "constants", BOTH, check_constant_goldens),
        InvariantCheck("constants.lambda-midpoint", "constants", FULL, check_lambda_midpoint),
    )
}
