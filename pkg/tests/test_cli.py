import json

import pytest

from tlalg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def _rows(doc, table):
    return {(r["n"], r["i"]): r["value"] for r in doc["results"][table]}


def test_coeffs(capsys):
    code, doc = run_json(capsys, "coeffs", "--gamma", "1/4", "--n", "4")
    assert code == 0 and doc["exact"]
    assert _rows(doc, "c")[(2, 1)] == "1/4"
    code, doc = run_json(capsys, "coeffs", "--gamma", "1/4", "--n", "4", "--l", "3")
    assert _rows(doc, "lambda")[(3, 0)] == "3/4"
    code, doc = run_json(capsys, "coeffs", "--gamma", "0", "--n", "5")
    for (n, i), v in _rows(doc, "c").items():
        assert v == ("1" if i == 0 else "0")


def test_csv_matches_json(capsys):
    _, doc = run_json(capsys, "coeffs", "--gamma", "1/5", "--n", "7", "--l", "3")
    code, text, _ = run(capsys, "coeffs", "--gamma", "1/5", "--n", "7", "--l", "3", "--format", "csv")
    lines = text.strip().splitlines()
    assert lines[0] == "table,n,i,value"
    from_csv = {}
    for line in lines[1:]:
        t, n, i, v = line.split(",")
        from_csv[(t, int(n), int(i))] = v
    from_json = {(t, n, i): v for t in ("c", "lambda") for (n, i), v in _rows(doc, t).items()}
    assert from_csv == from_json


@pytest.mark.parametrize(
    "word,gamma,delta,value",
    [("1", "1/4", "3", "3/4"), ("1 2", "1/4", "rou:2", "1/4"), ("1 2 3", "1/5", "3", "3/25")],
)
def test_trace(capsys, word, gamma, delta, value):
    code, doc = run_json(capsys, "trace", "--word", word, "--gamma", gamma, "--delta", delta)
    assert code == 0
    assert doc["results"]["value"] == value
    assert doc["results"]["agree"] is True


def test_thresholds(capsys):
    _, doc = run_json(capsys, "thresholds", "--k", "3", "4", "6")
    assert [r["exact"] for r in doc["results"]] == ["1", "1/2", "1/3"]


def test_bratteli_dot(capsys):
    code, text, _ = run(capsys, "bratteli", "--l", "3", "--levels", "8", "--dot")
    assert code == 0 and text.startswith("digraph") and "critical" in text


def test_gram_and_jw(capsys):
    _, doc = run_json(capsys, "gram", "--n", "3", "--gamma", "1/4", "--delta", "3")
    assert doc["results"]["signature"] == [5, 0, 0] and doc["exact"]
    _, doc = run_json(capsys, "gram", "--n", "5", "--gamma", "1/4", "--delta", "0", "--involution", "diamond")
    assert doc["results"]["signature"] == [42, 0, 0]
    assert doc["exact"] is False and doc["results"]["constructed_images"] == [3]
    _, doc = run_json(capsys, "jw", "--n", "4", "--delta", "formal")
    assert doc["results"]["checks"]["idempotent"] and doc["results"]["checks"]["killed_by_generators"]


def test_verify_jones(capsys):
    code, doc = run_json(capsys, "verify", "--suite", "jones-oracle", "--n", "6", "--delta", "3")
    assert code == 0
    assert doc["results"]["passed"] and doc["results"]["checks"][0]["diagrams"] == 132


def test_verify_onb_not_exact(capsys):
    code, doc = run_json(capsys, "verify", "--suite", "onb-numeric")
    assert code == 0 and doc["exact"] is False


def test_exit_codes(capsys):
    assert run(capsys, "coeffs", "--gamma", "abc", "--n", "3")[0] == 2
    assert run(capsys, "coeffs", "--n", "3")[0] == 2
    assert run(capsys, "trace", "--word", "1 x", "--gamma", "1/4", "--delta", "3")[0] == 2
    assert run(capsys, "jw", "--n", "4", "--delta", "rou:3")[0] == 3
    assert run(capsys, "gram", "--n", "7", "--gamma", "1/4", "--delta", "0", "--involution", "diamond")[0] == 3
    assert run(capsys, "verify", "--suite", "jones-oracle", "--delta", "2")[0] == 2


def test_deterministic(capsys):
    docs = []
    for _ in range(2):
        _, doc = run_json(capsys, "bratteli", "--l", "3", "--levels", "6")
        docs.append(doc["results"])
    assert docs[0] == docs[1]
    assert json.loads(json.dumps(docs[0])) == docs[0]
