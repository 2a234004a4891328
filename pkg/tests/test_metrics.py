import json

import pytest

from cdrefactor import generators
from cdrefactor.engine import run
from cdrefactor.metrics import MetricsPairingError, measure
from cdrefactor.model import Model
from cdrefactor.oracle import OracleBudget, max_removable


def test_tc1_with_oracle(tc1):
    r = run(tc1)
    rep = measure(tc1, r, max_removable(tc1))
    assert (rep.m, rep.classes_created, rep.n, rep.effectiveness) == (2, 1, 2, 1.0)
    assert rep.output_sizes.attributes == rep.input_sizes.attributes - rep.m


def test_tc3_with_constant(tc3_model):
    r = run(tc3_model)
    rep = measure(tc3_model, r, n_max=generators.TC3_MAX_REMOVABLE)
    assert (rep.m, rep.classes_created, rep.effectiveness) == (4990, 1, 1.0)
    assert rep.rule_counts == {"R1": 9, "R2": 0, "R3": 1}
    assert rep.output_sizes.total == 501 + 10 + 500


def test_no_clones_model():
    m = Model()
    m.add_class("A", {"a": "T"})
    r = run(m)
    rep = measure(m, r, max_removable(m))
    assert (rep.m, rep.classes_created, rep.effectiveness) == (0, 0, 1.0)


def test_json_omits_missing_maximum(tc2, tmp_path):
    rep = measure(tc2, run(tc2))
    d = rep.to_dict()
    assert "n" not in d and "effectiveness" not in d
    path = tmp_path / "m.json"
    rep.write(path)
    loaded = json.loads(path.read_text())
    assert loaded["m"] == 3
    assert set(loaded) == {"input_sizes", "output_sizes", "m", "classes_created", "steps",
                           "rule_counts", "execution_ms"}
    assert set(loaded["input_sizes"]) == {"classes", "attributes", "generalizations", "total"}


def test_inexact_oracle_is_ignored():
    m = generators.tc3(classes=12, attributes=4)
    res = max_removable(m, OracleBudget(max_states=3))
    rep = measure(m, run(m), res)
    assert rep.n is None and rep.effectiveness is None


def test_mismatched_pairing(tc1, tc2):
    with pytest.raises(MetricsPairingError):
        measure(tc1, run(tc2))


def test_same_sizes_different_model_detected(tc1):
    other = Model()
    other.add_type("T")
    other.add_class("R")
    for n, attrs in [("A", {"b": "T"}), ("B", {"a": "T", "b": "T"}), ("C", {"a": "T"}), ("D", {"a": "T"})]:
        other.add_class(n, attrs, ["R"])
    with pytest.raises(MetricsPairingError):
        measure(tc1, run(other))
