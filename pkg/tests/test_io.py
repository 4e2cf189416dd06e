import json

import pytest

from polyreg import catalog
from polyreg.io import FormatError, RunRecord, dumps, load, save, to_dict
from polyreg.transducer import same_transducer


@pytest.mark.parametrize(
    "make",
    [
        catalog.alternating_length_automaton,
        catalog.letter_product_automaton,
        catalog.late_linear_decomposition,
        catalog.square_difference_decomposition,
        catalog.length_minus_one_transducer,
        catalog.length_minus_one_transducer_alt,
        catalog.pairs_presentation,
    ],
)
def test_round_trip(tmp_path, make):
    obj = make()
    path = tmp_path / "obj.json"
    save(obj, path)
    kind, back = load(path)
    assert to_dict(back) == to_dict(obj)
    if kind == "transducer":
        assert same_transducer(back, obj)
    # stable bytes
    assert path.read_text() == dumps(to_dict(back))


def test_decomposition_format_frozen():
    d = to_dict(catalog.late_linear_decomposition())
    assert d["omega"] == 3
    assert d["pieces"][-1] == {"S": [1], "r": [2], "poly": "3*X1 - 1"}


@pytest.mark.parametrize(
    "payload, message",
    [
        ({"alphabet": ["a"], "dim": 2, "initial": [1], "final": [1], "matrices": {"a": [[1]]}}, "dim"),
        ({"alphabet": ["ab"], "dim": 1, "initial": [1], "final": [1], "matrices": {"ab": [[1]]}}, "single"),
        ({"alphabet": ["a"], "omega": 1}, "missing"),
        ({"hello": 1}, "unrecognised"),
    ],
)
def test_format_errors(tmp_path, payload, message):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(FormatError, match=message):
        load(path)


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    with pytest.raises(FormatError):
        load(path)


def test_run_record_round_trip():
    rec = RunRecord(["poly", "classify", "X"], ["X"], {"A": "yes"}, {"A": {"bound": 2}}, 0.5)
    assert RunRecord.from_dict(json.loads(rec.dumps())) == rec
