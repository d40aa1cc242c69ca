import json

import pytest
from hypothesis import given, strategies as st

from ktotal.cli import (
    REPORT_SCHEMA,
    ParseError,
    SemanticError,
    dispatch,
    emit_report,
    evaluate,
    parse_input,
    parse_matrix_text,
    serialize,
)
from ktotal.verify import SubVerdict, VerifyReport, Witness

DOC = {
    "version": 1,
    "groups": {"Z9": {"kind": "cyclic", "n": 9}, "Z3": {"kind": "cyclic", "n": 3}},
    "homs": {
        "up": {"kind": "matrix", "from": "Z3", "to": "Z9", "entries": [[3]]},
        "six": {"kind": "matrix", "from": "Z3", "to": "Z9", "entries": [["6"]]},
        "id3": {"kind": "scalar", "on": "Z3", "c": 1},
        "id9": {"kind": "scalar", "on": "Z9", "c": 1},
        "down": {"kind": "matrix", "from": "Z9", "to": "Z3", "entries": [[1]]},
        "triple": {"kind": "scalar", "on": "Z9", "c": 3},
        "loop": {"kind": "composite", "of": ["up", "down"]},
    },
    "assertions": [
        {"kind": "square", "expected": "commutes", "top": "id3", "right": "up", "left": "up", "bottom": "id9"},
        {"kind": "square", "expected": "fails", "top": "id3", "right": "up", "left": "six", "bottom": "id9"},
        {"kind": "exact_at", "expected": "exact", "in": "up", "out": "down"},
        {"kind": "exact_at", "expected": "exact", "in": "triple", "out": "triple"},
        {"kind": "exact_at", "expected": "fails", "in": "up", "out": "id9"},
        {"kind": "lambda_linear", "expected": "fails", "map": "gamma", "bound": 6},
        {"kind": "cone_member", "expected": "positive", "fixture": "A", "element": ["3/4"]},
    ],
}


def write(tmp_path, obj, name="doc.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_document_evaluates_as_declared():
    reports = evaluate(parse_input(json.dumps(DOC)))
    assert [r.passed for r in reports] == [True] * len(DOC["assertions"])
    square = reports[1]
    assert square.witnesses and square.witnesses[0].lhs != square.witnesses[0].rhs


def test_serialize_round_trip_and_key_order():
    doc = parse_input(json.dumps(DOC))
    text = serialize(doc)
    assert serialize(parse_input(text)) == text
    shuffled = json.dumps(dict(reversed(list(DOC.items()))), sort_keys=False)
    assert serialize(parse_input(shuffled)) == text
    # "6" and 6 denote the same entry
    assert json.loads(text)["homs"]["six"]["entries"] == [[6]]


@pytest.mark.parametrize("change, error", [
    ({"homs": {"f": {"kind": "composite", "of": ["g"]}}}, SemanticError),
    ({"homs": {"f": {"kind": "composite", "of": ["g"]}, "g": {"kind": "composite", "of": ["f"]}}}, SemanticError),
    ({"groups": {"G": {"kind": "cyclic", "n": -4}}}, ParseError),
    ({"groups": {"G": {"kind": "cyclic", "n": 2, "extra": 1}}}, ParseError),
    ({"version": 2}, ParseError),
])
def test_rejections(change, error):
    doc = {"version": 1, **change}
    with pytest.raises(error):
        parse_input(json.dumps(doc))


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as exc:
        parse_input('{"version": 1,\n  "groups": {"G": {"kind": "cyclic", "n": 1.5}}}')
    assert exc.value.line >= 1
    with pytest.raises(ParseError):
        parse_input(b"\xff\xfe")
    with pytest.raises(ParseError):
        parse_input('{"version": NaN}')


@given(st.binary(max_size=64))
def test_arbitrary_bytes_only_raise_input_errors(blob):
    try:
        parse_input(blob)
    except (ParseError, SemanticError):
        pass


json_values = st.recursive(
    st.none() | st.booleans() | st.integers(-5, 5) | st.sampled_from(["cyclic", "sum", "Z3", "1/2", "matrix"]),
    lambda kids: st.lists(kids, max_size=3) | st.dictionaries(
        st.sampled_from(["version", "groups", "homs", "kind", "n", "of", "from", "to", "entries"]), kids, max_size=4),
    max_leaves=12,
)


@given(json_values)
def test_structured_garbage_only_raises_input_errors(value):
    try:
        parse_input(json.dumps(value))
    except (ParseError, SemanticError):
        pass


def test_check_exit_codes(tmp_path, capsys):
    assert dispatch(["check", write(tmp_path, DOC)]) == 0
    wrong = dict(DOC, assertions=[dict(DOC["assertions"][0], expected="fails")])
    assert dispatch(["check", write(tmp_path, wrong, "w.json")]) == 1
    assert dispatch(["check", write(tmp_path, "{", "bad.json")]) == 2
    assert dispatch(["check", str(tmp_path / "missing.json")]) == 2
    assert dispatch(["frobnicate"]) == 2
    capsys.readouterr()


def test_check_json_output(tmp_path, capsys):
    assert dispatch(["check", write(tmp_path, DOC), "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["schema"] == REPORT_SCHEMA and out["verdict"] == "pass"
    assert len(out["reports"]) == len(DOC["assertions"])


def test_canonical_output(tmp_path, capsys):
    assert dispatch(["check", write(tmp_path, DOC), "--canonical"]) == 0
    assert capsys.readouterr().out == serialize(parse_input(json.dumps(DOC)))


def test_snf_command(tmp_path, capsys):
    path = write(tmp_path, "2 4 4\n-6 6 12\n10 -4 -16\n", "m.txt")
    assert dispatch(["snf", path, "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["diagonal"] == [2, 6, 12] and out["rank"] == 3
    assert out["cokernel"] == {"free_rank": 0, "torsion": [2, 6, 12]}
    assert parse_matrix_text(b"[[1, 2], [3, 4]]") == [[1, 2], [3, 4]]
    with pytest.raises(ParseError):
        parse_matrix_text(b"1 2\n3\n")
    assert dispatch(["snf", write(tmp_path, "1 x\n", "bad.txt")]) == 2


def test_fixture_dump(capsys):
    assert dispatch(["fixture", "dump", "E1", "--max-coeff", "6"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["cone"] == "ExtensionCone" and out["total_cone"] == "TotalExtensionCone"
    assert out["groups"]["0,3"] == "Z3"
    assert dispatch(["fixture", "dump", "nope"]) == 2


def test_verify_reads_environment(monkeypatch, capsys):
    monkeypatch.setenv("MAX_COEFF", "10")
    monkeypatch.setenv("WINDOW", "4")
    assert dispatch(["paper", "verify", "--case", "de", "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["config"]["max_coeff"] == 10 and out["config"]["window"] == 4
    monkeypatch.setenv("MAX_COEFF", "ten")
    assert dispatch(["paper", "verify", "--case", "de"]) == 2
    assert dispatch(["paper", "verify", "--case", "de", "--max-coeff", "6"]) == 2
    assert dispatch(["paper", "verify", "--case", "refute", "--max-coeff", "6", "--window", "3"]) == 0
    capsys.readouterr()


def test_emit_report_formats():
    ok = VerifyReport("a", {"k": 3}, (SubVerdict("x", "pass", "pass"),))
    bad = VerifyReport("b", {}, (SubVerdict("y", "fail", "pass", "probe"),),
                       (Witness("sq", "[1]_3", "[1]_3", "[2]_3", "detail"),))
    text = emit_report([ok, bad]).decode()
    assert "CHECK a ... PASS" in text and "CHECK b ... FAIL" in text
    assert "[probe]" in text and "(detail)" in text
    assert text.rstrip().endswith("2 checks, 1 failed ... FAIL")
    doc = json.loads(emit_report([ok, bad], "json", {"z": 1, "a": 2}))
    assert list(doc["config"]) == ["a", "z"]
    assert doc["reports"][1]["witnesses"][0] == {"location": "sq", "element": "[1]_3", "lhs": "[1]_3",
                                                 "rhs": "[2]_3", "detail": "detail"}
    assert doc["reports"][1]["subs"][0]["mode"] == "probe"
