"""
Tests for run configs, corpora and records (config.py, records.py).

Covers:
- Parsing run configs, "inf" exponents and field-level errors
- Corpus files with per-case errors and line numbers
- Canonical echo, config hashes and run ids
- JSON-safe records, storage, lookup and CSV emission
"""

import csv
import json
import math

import numpy as np
import pytest

from fockbench.src.config import RunConfig, config_from_dict, load_config, load_corpus, parse_exponent
from fockbench.src.errors import ConfigError
from fockbench.src.operators import OperatorKind
from fockbench.src.records import (
    canonical_json,
    config_hash,
    find_record,
    make_json_safe,
    retrieve_records,
    run_id_for,
    store_record,
    write_field_csv,
    write_summary_csv,
)


# =============================================================================
# CONFIGS
# =============================================================================

def test_config_from_dict_defaults():
    config = config_from_dict({"op": "Vg", "g": "z^2"})
    assert config.op is OperatorKind.VG
    assert config.psi == "z"
    assert config.p == 2.0
    assert config.q == 2.0
    assert config.params().theorem == "theorem1"


def test_infinite_exponents():
    config = config_from_dict({"op": "J_g_psi", "g": "1", "psi": "0.5*z", "p": 2, "q": "inf"})
    assert math.isinf(config.q)
    assert config.canonical()["q"] == "inf"
    assert parse_exponent("Infinity", "p") == math.inf


@pytest.mark.parametrize(
    "data, field",
    [
        ({"op": "Vg"}, "g"),
        ({"op": "Xg", "g": "z"}, "op"),
        ({"op": "Vg", "g": "z^-1"}, "g"),
        ({"op": "C_g_psi", "g": "z", "psi": "sin(z)"}, "psi"),
        ({"op": "Vg", "g": "z", "q": "big"}, "q"),
        ({"op": "Vg", "g": "z", "p": True}, "p"),
        ({"op": "Vg", "g": "z", "alpha": 0}, "alpha/p/q"),
        ({"op": "Vg", "g": "z", "radii": 2.5}, "radii"),
        ({"op": "Vg", "g": "z", "tol": 0.5}, "tol"),
        ({"op": "Vg", "g": "z", "probes": 1}, "probes"),
        ({"op": "Vg", "g": "z", "colour": "red"}, "colour"),
    ],
)
def test_config_errors_name_the_field(data, field):
    with pytest.raises(ConfigError) as info:
        config_from_dict(data, line=7)
    assert info.value.field == field
    assert info.value.line == 7


def test_overrides_only_apply_when_set():
    config = config_from_dict({"op": "Mg", "g": "2", "tol": 1e-6})
    changed = config.with_overrides(tol=None, radii=3)
    assert changed.tol == 1e-6
    assert changed.radii == 3
    assert config.radii != 3


def test_load_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"op": "Jg", "g": "2", "run_id": "const"}))
    config = load_config(path)
    assert config.run_id == "const"


def test_load_config_rejects_bad_json(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"op": "Jg",\n "g": }')
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert info.value.line == 2


def test_corpus_keeps_going_past_bad_cases(tmp_path):
    path = tmp_path / "corpus.json"
    path.write_text(
        "[\n"
        '  {"op": "Mg", "g": "2", "case_id": "b"},\n'
        '  {"op": "Vg", "g": "sin(z)", "case_id": "a"},\n'
        '  {"op": "Jg", "g": "0"}\n'
        "]\n"
    )
    entries = load_corpus(path)
    assert [e.case_id for e in entries] == ["b", "a", "case002"]
    assert entries[0].config is not None
    assert entries[1].error.field == "g"
    assert entries[1].error.line == 3
    assert entries[2].config.case_id == "case002"


def test_corpus_must_be_an_array(tmp_path):
    path = tmp_path / "corpus.json"
    path.write_text('{"op": "Mg", "g": "2"}')
    with pytest.raises(ConfigError):
        load_corpus(path)


def test_empty_corpus(tmp_path):
    path = tmp_path / "corpus.json"
    path.write_text("[]")
    assert load_corpus(path) == []


# =============================================================================
# HASHES AND RUN IDS
# =============================================================================

def test_config_hash_ignores_output_location():
    a = config_from_dict({"op": "Vg", "g": "z", "out": "/tmp/a"})
    b = config_from_dict({"op": "Vg", "g": "z", "out": "/tmp/b"})
    c = config_from_dict({"op": "Vg", "g": "z", "alpha": 2})
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash(c)
    assert len(config_hash(a)) == 64


def test_run_id_precedence():
    config = RunConfig(OperatorKind.VG, "z")
    assert run_id_for(config) == config_hash(config)[:12]
    assert run_id_for(config.with_overrides(case_id="c1")) == "c1"
    assert run_id_for(config.with_overrides(case_id="c1", run_id="r1")) == "r1"


# =============================================================================
# RECORDS
# =============================================================================

def test_make_json_safe():
    data = {
        "z": 1 + 2j,
        "inf": math.inf,
        "neg": -math.inf,
        "nan": math.nan,
        "array": np.array([1.0, 2.0]),
        "np": (np.float64(0.5), np.int64(3), np.bool_(True)),
    }
    safe = make_json_safe(data)
    assert safe == {
        "z": [1.0, 2.0],
        "inf": "inf",
        "neg": "-inf",
        "nan": "nan",
        "array": [1.0, 2.0],
        "np": [0.5, 3, True],
    }
    json.dumps(safe, allow_nan=False)


def test_canonical_json_is_order_independent():
    assert canonical_json({"b": 1, "a": 0.1}) == canonical_json({"a": 0.1, "b": 1})


def test_store_and_find_record(tmp_path):
    config = config_from_dict({"op": "Mg", "g": "2", "run_id": "m2"})
    record = {"run_id": "m2", "config_hash": config_hash(config), "route": "corollary1"}
    path = store_record(record, tmp_path)
    assert path.name == "m2.json"
    (tmp_path / "notes.json").write_text("[1, 2]")
    assert retrieve_records(tmp_path) == [record]
    assert find_record(config, tmp_path) == record
    assert find_record(config.with_overrides(alpha=2.0), tmp_path) is None
    assert retrieve_records(tmp_path / "missing") == []


def test_field_csv_keeps_full_precision(tmp_path):
    path = write_field_csv([(0.0, 1.0, 1.0 / 3.0)], tmp_path / "field.csv")
    with path.open() as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["re", "im", "value"]
    assert float(rows[1][2]) == 1.0 / 3.0


def test_summary_csv_columns(tmp_path):
    path = write_summary_csv([{"case_id": "a", "route": "theorem1"}], ("case_id", "route", "error"), tmp_path / "s.csv")
    with path.open() as f:
        rows = list(csv.reader(f))
    assert rows == [["case_id", "route", "error"], ["a", "theorem1", ""]]
