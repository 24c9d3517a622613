import json

import pytest

import bicat_py


DOC = """
0cell A;
1cell X : A -> A;
2cell f : X -> X;
let e = (f ; id[X]) * id[U_A]

search merge : id[X] ; f == f budget 500;
"""

Z4 = json.dumps(
    {
        "order": 4,
        "table": [[(i + j) % 4 for j in range(4)] for i in range(4)],
        "subgroups": {"even": [0, 2]},
    }
)


def test_check_document():
    tasks = bicat_py.check_document(DOC)
    assert all(t["ok"] for t in tasks)
    kinds = [t["kind"] for t in tasks]
    assert kinds == ["typecheck", "typecheck", "search"]


def test_parse_error_is_typed():
    with pytest.raises(bicat_py.DocumentParseError):
        bicat_py.check_document("frobnicate;")


def test_normalize():
    assert bicat_py.normalize_expression(DOC, "e") == "f"
    with pytest.raises(RuntimeError):
        bicat_py.normalize_expression(DOC, "missing")


def test_corpus_verifies():
    items = bicat_py.corpus()
    assert len(items) == 6
    assert all(item["verified"] for item in items)
    names = {item["name"] for item in items}
    assert "theta_squared" in names and "trace_functorial" in names


def test_theorem_text_round_trips():
    text = bicat_py.theorem_text("theta_squared")
    tasks = bicat_py.check_document(text)
    assert all(t["ok"] for t in tasks)
    with pytest.raises(ValueError):
        bicat_py.theorem_text("nope")


def test_transfer_and_cross_model():
    t = bicat_py.transfer(Z4, "even")
    assert t["entries"] == [[2, 0, 0, 0], [0, 0, 2, 0]]
    assert bicat_py.transfer(Z4, "{0,2}") == t

    r = bicat_py.cross_model(Z4, "even")
    assert r["pass"]

    with pytest.raises(bicat_py.ModelValidationError):
        bicat_py.transfer(Z4, "{0,1}")


def test_trace():
    q = {
        "dim": 1,
        "basis": ["1"],
        "structure": [[[1]]],
        "unit": [1],
    }
    free3 = {
        "left_algebra": q,
        "right_algebra": q,
        "dim": 3,
        "left": [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]],
        "right": [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]],
        "witness": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    }
    assert bicat_py.trace(json.dumps(free3)) == [["3"]]
