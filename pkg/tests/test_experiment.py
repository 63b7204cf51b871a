import math

import pytest

from resonance.arith import sieve
from resonance.config import SCHEMA_VERSION
from resonance.errors import InvalidArgumentError
from resonance.experiment import build_tasks, cmd_resonate, cmd_scan, compute_record, select_primes, sieve_for
from resonance.records import RecordStore
from resonance.resonator import ResonatorParams, ratio_rhs
from resonance.run_config import RunConfig

# 小 Y_cap 让单个实验保持在秒级。
# EN: A small Y_cap keeps each experiment within seconds.
SMALL_Y = 10**4


def small_config(tmp_path, **changes) -> RunConfig:
    base = dict(q_min=100, q_max=110, Y_cap=SMALL_Y, out_path=tmp_path / "scan.jsonl")
    base.update(changes)
    return RunConfig(**base)


@pytest.fixture(scope="module")
def small_table():
    return sieve(SMALL_Y)


def test_select_primes_every_prime():
    assert select_primes(100, 110) == [101, 103, 107, 109]
    assert select_primes(1, 10) == [3, 5, 7]


def test_select_primes_targets_round_up_and_drop_overflow():
    assert select_primes(100, 110, targets=3) == [101, 107]
    assert select_primes(100, 110, targets=1) == [101]


def test_select_primes_collapses_duplicates():
    primes = select_primes(100, 102, targets=5)
    assert primes == [101]


def test_select_primes_empty_range():
    assert select_primes(114, 126) == []
    assert select_primes(10, 5) == []


def test_build_tasks_order(tmp_path):
    config = small_config(tmp_path, q_min=100, q_max=104, sigma_list=(0.6, 0.75), theta_list=(0.0, math.pi))
    tasks = build_tasks(config)
    assert tasks[0] == (101, 0.6, 0.0)
    assert tasks[1] == (101, 0.6, math.pi)
    assert tasks[2] == (101, 0.75, 0.0)
    assert len(tasks) == 8


def test_sieve_for_reuses_large_enough_table(small_table):
    assert sieve_for(5000.0, small_table) is small_table
    assert sieve_for(2 * SMALL_Y, small_table).limit >= 2 * SMALL_Y


def test_compute_record_satisfies_invariants(tmp_path, small_table):
    record = compute_record(101, 0.75, 0.0, small_config(tmp_path), table=small_table)
    assert record.check() == []
    assert record.q == 101
    assert record.schema_version == SCHEMA_VERSION
    assert record.X < 101
    assert record.Y <= SMALL_Y
    assert record.Y_source == "cap"
    assert record.A_mode == "auto"
    assert 0 < record.argmax_j < 100
    assert record.ratio == pytest.approx(record.Q2 / record.Q1, rel=1e-12)
    assert record.max_re_e_itheta_logL >= record.weighted_mean
    assert record.predicted_logL_bound is not None
    assert record.predicted_logderiv_bound is not None
    assert 0 <= record.excluded_weight_fraction < 1


def test_compute_record_reports_logderiv_variant(tmp_path, small_table):
    config = small_config(tmp_path)
    record = compute_record(101, 0.75, math.pi / 6, config, table=small_table)
    assert record.check() == []
    for value in (
        record.max_neg_re_e_itheta_logderiv,
        record.logderiv_Q2,
        record.logderiv_weighted_mean,
        record.logderiv_truncation_slack,
        record.log_weight_scale,
    ):
        assert math.isfinite(value)
    assert record.logderiv_ratio == pytest.approx(record.logderiv_Q2 / record.Q1, rel=1e-12)
    params = ResonatorParams.build(101, 0.75, record.A)
    assert record.logderiv_ratio_rhs == pytest.approx(ratio_rhs(params, math.pi / 6, "log").exact, rel=1e-12)
    assert record.logderiv_excluded_count >= 1
    assert 0 < record.logderiv_argmax_j < 100
    assert record.max_neg_re_e_itheta_logderiv >= record.logderiv_ratio - record.logderiv_truncation_slack


def test_compute_record_without_bound_for_negative_cos(tmp_path, small_table):
    record = compute_record(101, 0.75, math.pi, small_config(tmp_path), table=small_table)
    assert record.predicted_logL_bound is None
    assert record.predicted_logderiv_bound is None
    assert record.check() == []


def test_compute_record_without_bound_for_small_q(tmp_path, small_table):
    record = compute_record(13, 0.75, 0.0, small_config(tmp_path, X_override=5.0), table=small_table)
    assert record.predicted_logL_bound is None


def test_compute_record_fixed_A(tmp_path, small_table):
    record = compute_record(101, 0.75, 0.0, small_config(tmp_path, A=0.5), table=small_table)
    assert record.A == 0.5
    assert record.A_mode == "fixed"


def test_compute_record_rejects_bad_inputs(tmp_path, small_table):
    with pytest.raises(InvalidArgumentError):
        compute_record(15, 0.75, 0.0, small_config(tmp_path), table=small_table)
    with pytest.raises(InvalidArgumentError):
        compute_record(101, 0.75, 0.0, small_config(tmp_path, X_override=200.0), table=small_table)


def test_cmd_resonate_appends(tmp_path):
    config = small_config(tmp_path)
    record = cmd_resonate(101, 0.75, 0.0, config)
    stored = RecordStore(config.out_path).load()
    assert stored == [record]


def test_scan_empty_range_writes_empty_outputs(tmp_path):
    config = small_config(tmp_path, q_min=114, q_max=126)
    outcome = cmd_scan(config)
    assert outcome.written == 0
    assert outcome.total_records == 0
    assert config.out_path.read_text(encoding="utf-8") == ""
    lines = config.summary_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 1


def test_scan_resume_and_rerun(tmp_path):
    config = small_config(tmp_path)
    first = cmd_scan(config)
    assert first.written == 4
    assert first.summary_path == tmp_path / "scan.summary.csv"

    again = cmd_scan(config)
    assert again.written == 0
    assert again.skipped == 4

    # 模拟在写最后一行时中断。
    # EN: Simulate an interruption while the last line was being written.
    lines = config.out_path.read_text(encoding="utf-8").splitlines(keepends=True)
    config.out_path.write_text("".join(lines[:-1]) + lines[-1][:30], encoding="utf-8")
    resumed = cmd_scan(config)
    assert resumed.written == 1
    assert resumed.total_records == 4
    assert [r.q for r in RecordStore(config.out_path).load()] == [101, 103, 107, 109]


@pytest.mark.slow
def test_scan_results_do_not_depend_on_worker_count(tmp_path):
    serial = small_config(tmp_path, out_path=tmp_path / "one.jsonl", workers=1)
    parallel = small_config(tmp_path, out_path=tmp_path / "two.jsonl", workers=2)
    cmd_scan(serial)
    cmd_scan(parallel)
    one = [r.numeric_fingerprint() for r in RecordStore(serial.out_path).load()]
    two = [r.numeric_fingerprint() for r in RecordStore(parallel.out_path).load()]
    assert one == two


@pytest.mark.slow
def test_compute_record_with_long_resonator(tmp_path, small_table):
    # X = 3000 时 |R(chi_0)|^2 超出双精度范围，记录仍须有限且通过校验。
    # EN: At X = 3000, |R(chi_0)|^2 exceeds double range; the record must stay finite and pass its checks.
    config = small_config(tmp_path, X_override=3000.0)
    record = compute_record(10007, 0.75, 0.0, config, table=small_table)
    assert record.check() == []
    assert record.log_weight_scale > 709
    assert math.isfinite(record.Q1) and math.isfinite(record.Q2)
    assert record.ratio >= record.ratio_rhs
    assert record.max_re_e_itheta_logL >= record.ratio - record.truncation_slack
