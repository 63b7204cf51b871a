import csv
import dataclasses
import json
import math

import pytest

from resonance.config import SCHEMA_VERSION
from resonance.errors import CorruptResumeError
from resonance.records import SCAN_RECORD_FIELDS, SUMMARY_COLUMNS, RecordStore, ScanRecord, write_summary


def make_record(q=101, **changes) -> ScanRecord:
    base = dict(
        schema_version=SCHEMA_VERSION,
        q=q,
        sigma=0.75,
        theta=0.0,
        A=0.5,
        X=3.5,
        Y=1e4,
        grh=False,
        Q1=2.0,
        Q2=1.0,
        ratio=0.5,
        ratio_rhs=0.3,
        argmax_j=7,
        max_re_e_itheta_logL=1.2,
        max_log_abs_L=1.3,
        max_neg_re_logderiv=2.5,
        predicted_logL_bound=0.9,
        predicted_logderiv_bound=1.1,
        excluded_count=1,
        runtime_ms=12.0,
        truncation_slack=0.05,
        weighted_mean=0.1,
        Y_source="cap",
        A_mode="auto",
        epsilon=0.01,
        s1_over_q1=0.9,
        excluded_weight_fraction=0.1,
        median_truncation_gap=0.3,
        log_weight_scale=4.0,
        max_neg_re_e_itheta_logderiv=2.0,
        logderiv_Q2=3.0,
        logderiv_ratio=1.5,
        logderiv_ratio_rhs=1.2,
        logderiv_argmax_j=3,
        logderiv_weighted_mean=0.5,
        logderiv_truncation_slack=0.1,
        logderiv_excluded_count=2,
    )
    base.update(changes)
    return ScanRecord(**base)


def test_json_has_exactly_the_record_fields():
    payload = json.loads(make_record().to_json())
    assert tuple(payload) == SCAN_RECORD_FIELDS
    assert payload["asymptotic_terms_dropped"] is True
    assert ScanRecord.from_json(make_record().to_json()) == make_record()


def test_from_json_rejects_missing_or_extra_fields():
    payload = json.loads(make_record().to_json())
    payload.pop("Q1")
    with pytest.raises(ValueError):
        ScanRecord.from_json(json.dumps(payload))
    payload = json.loads(make_record().to_json())
    payload["extra"] = 1
    with pytest.raises(ValueError):
        ScanRecord.from_json(json.dumps(payload))
    with pytest.raises(ValueError):
        ScanRecord.from_json("[1, 2]")


def test_null_predicted_bounds_round_trip():
    record = make_record(predicted_logL_bound=None, predicted_logderiv_bound=None)
    assert ScanRecord.from_json(record.to_json()).predicted_logL_bound is None


def test_record_check():
    assert make_record().check() == []
    assert "ratio != Q2/Q1" in make_record(ratio=0.6).check()
    assert "max < ratio - truncation_slack" in make_record(max_re_e_itheta_logL=0.4, weighted_mean=0.0).check()
    assert "max < weighted_mean" in make_record(weighted_mean=2.0).check()
    # cos(theta) < 0 时不检查比值链。
    # EN: the ratio chain is not checked when cos(theta) < 0.
    assert make_record(theta=3.0, max_re_e_itheta_logL=0.4, weighted_mean=0.0).check() == []


def test_record_check_covers_logderiv_chain():
    assert "logderiv ratio != Q2/Q1" in make_record(logderiv_ratio=1.4).check()
    problems = make_record(max_neg_re_e_itheta_logderiv=1.3, logderiv_weighted_mean=0.0).check()
    assert problems == ["logderiv max < ratio - truncation_slack"]
    assert make_record(logderiv_weighted_mean=2.5).check() == ["logderiv max < weighted_mean"]
    assert make_record(theta=3.0, max_neg_re_e_itheta_logderiv=1.3, logderiv_weighted_mean=0.0).check() == []


def test_non_finite_values_are_written_as_null():
    record = make_record(max_neg_re_e_itheta_logderiv=float("nan"), logderiv_weighted_mean=float("-inf"))
    text = record.to_json()
    assert "NaN" not in text and "Infinity" not in text
    payload = json.loads(text)
    assert payload["max_neg_re_e_itheta_logderiv"] is None
    assert payload["logderiv_weighted_mean"] is None
    restored = ScanRecord.from_json(text)
    assert math.isnan(restored.max_neg_re_e_itheta_logderiv)
    assert math.isnan(restored.logderiv_weighted_mean)
    assert restored.max_re_e_itheta_logL == record.max_re_e_itheta_logL


def test_numeric_fingerprint_ignores_runtime():
    assert make_record(runtime_ms=1.0).numeric_fingerprint() == make_record(runtime_ms=99.0).numeric_fingerprint()


def test_store_append_and_load(tmp_path):
    store = RecordStore(tmp_path / "out" / "scan.jsonl")
    assert store.load() == []
    store.append(make_record(101))
    store.append(make_record(103))
    records = store.load()
    assert [r.q for r in records] == [101, 103]
    assert store.completed_keys() == {(101, 0.75, 0.0, SCHEMA_VERSION), (103, 0.75, 0.0, SCHEMA_VERSION)}


def test_completed_keys_skip_other_schema_versions(tmp_path):
    store = RecordStore(tmp_path / "scan.jsonl")
    store.append(make_record(101, schema_version=SCHEMA_VERSION + 1))
    assert store.completed_keys() == set()


def test_corrupt_middle_line_reports_line_number(tmp_path):
    path = tmp_path / "scan.jsonl"
    path.write_text(make_record(101).to_json() + "\n{not json\n" + make_record(103).to_json() + "\n", encoding="utf-8")
    with pytest.raises(CorruptResumeError) as info:
        RecordStore(path).load()
    assert info.value.line_number == 2


def test_truncated_trailing_line_is_dropped(tmp_path):
    path = tmp_path / "scan.jsonl"
    full = make_record(101).to_json() + "\n"
    path.write_text(full + make_record(103).to_json()[:40], encoding="utf-8")
    store = RecordStore(path)
    assert [r.q for r in store.load()] == [101]
    assert path.read_text(encoding="utf-8") == full
    store.append(make_record(107))
    assert [r.q for r in store.load()] == [101, 107]


def test_complete_trailing_line_without_newline_is_kept(tmp_path):
    path = tmp_path / "scan.jsonl"
    path.write_text(make_record(101).to_json(), encoding="utf-8")
    store = RecordStore(path)
    assert [r.q for r in store.load()] == [101]
    assert path.read_text(encoding="utf-8").endswith("\n")


def test_touch_creates_empty_file(tmp_path):
    store = RecordStore(tmp_path / "deep" / "scan.jsonl")
    store.touch()
    assert store.path.exists()
    assert store.path.read_text(encoding="utf-8") == ""


def test_write_summary(tmp_path):
    path = tmp_path / "scan.summary.csv"
    records = [make_record(103), make_record(101, predicted_logL_bound=None, predicted_logderiv_bound=None)]
    assert write_summary(records, path) == 2
    with path.open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    assert tuple(rows[0]) == SUMMARY_COLUMNS
    assert [row[0] for row in rows[1:]] == ["101", "103"]
    assert rows[1][5] == ""
    assert float(rows[2][5]) == pytest.approx(1.3 / 0.9)
    assert rows[1][8] == ""
    assert float(rows[2][8]) == pytest.approx(2.0 / 1.1)
    assert float(rows[2][9]) == pytest.approx(1.5)
    assert float(rows[2][10]) == pytest.approx(1.2)


def test_record_is_frozen():
    with pytest.raises(dataclasses.FrozenInstanceError):
        make_record().q = 5
