import json

import pytest

from dtorsion import Context, enumerate_incremental
from dtorsion.cli import main
from dtorsion.lattice import build_hasse
from dtorsion.serialize import ResultDocument, collection_from_document, document_from_collection

import oracles


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,expected", [
    (("--n", "3", "--d", "2"), "25\n"),
    (("--n", "1", "--d", "7"), "2\n"),
    (("--kupisch", "1,2,2,3", "--d", "2"), "64\n"),
    (("--kupisch", "1,2,2,3", "--d", "2", "--algorithm", "paper"), "64\n"),
    (("--kupisch", "1,2,0,1,2", "--ainf", "--d", "2"), "36\n"),
])
def test_enumerate_count_only(capsys, argv, expected):
    assert run(capsys, "enumerate", *argv, "--count-only")[:2] == (0, expected)


def test_nakayama_count_is_brute_force():
    assert len(oracles.all_torsion_classes(oracles.kupisch_tuples((1, 2, 2, 3), 2))) == 64


@pytest.mark.parametrize("gens,expected", [
    ("0,0,0;1,1,1", [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 1, 1]]),
    ("", []),
])
def test_closure(capsys, gens, expected):
    code, out, _ = run(capsys, "closure", "--n", "3", "--d", "2", "--gens", gens)
    assert code == 0 and json.loads(out) == expected


def test_closure_simple(capsys):
    code, out, _ = run(capsys, "closure", "--n", "2", "--d", "1", "--gens", "0,0")
    assert json.loads(out) == [[0, 0]]


@pytest.mark.parametrize("gens", ["0,0,x", "0,0,5", "0,0"])
def test_closure_bad_input(capsys, gens):
    code, _, err = run(capsys, "closure", "--n", "3", "--d", "2", "--gens", gens)
    assert code == 1 and err.startswith("error:")


def test_check(capsys, tmp_path):
    assert run(capsys, "check", "--n", "3", "--d", "2", "--members", "")[1] == "true\n"
    code, out, _ = run(capsys, "check", "--n", "3", "--d", "2", "--members", "0,0,0;1,1,1")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "false"
    assert json.loads(lines[1]) == {"condition": 2, "x": [0, 0, 0], "z": [1, 1, 1], "y": [0, 0, 1]}
    path = tmp_path / "cls.json"
    path.write_text(json.dumps([[0, 0, 0], [1, 3, 3], [2, 2, 2], [2, 2, 3], [2, 3, 3], [3, 3, 3]]))
    assert run(capsys, "check", "--kupisch", "1,2,2,3", "--d", "2", "--class-file", str(path))[:2] == (0, "true\n")
    path.write_text("{not json")
    assert run(capsys, "check", "--kupisch", "1,2,2,3", "--d", "2", "--class-file", str(path))[0] == 1


def test_invalid_context_exit_1(capsys):
    code, _, err = run(capsys, "enumerate", "--kupisch", "1,3", "--d", "2", "--count-only")
    assert code == 1 and "position 1" in err


def test_resource_cap_exit_3(capsys):
    assert run(capsys, "enumerate", "--n", "4", "--d", "3", "--max-classes", "10", "--count-only")[0] == 3
    assert run(capsys, "enumerate", "--n", "4", "--d", "6", "--algorithm", "paper", "--count-only")[0] == 3


def test_hom_ext(capsys):
    assert run(capsys, "hom", "--n", "3", "--d", "2", "--x", "0,0,1", "--y", "0,1,2")[1] == "1\n"
    code, out, _ = run(capsys, "ext", "--n", "3", "--d", "2", "--x", "0,0,0", "--y", "1,1,1")
    assert json.loads(out) == {"ext_dim": 1, "layers": [[[0, 0, 1]], [[0, 1, 1]]]}
    assert json.loads(run(capsys, "ext", "--n", "3", "--d", "2", "--x", "0,1,1", "--y", "1,1,1")[1]) == {"ext_dim": 0}


def test_document_round_trip():
    coll = enumerate_incremental(Context.nakayama((1, 2, 2, 3), 2))
    lat = build_hasse(coll)
    doc = document_from_collection(coll, lat, {"x": 1})
    text = doc.to_json()
    again = ResultDocument.from_json(text)
    assert again == doc and again.to_json() == text
    assert collection_from_document(again) == coll


def test_enumerate_document(capsys, tmp_path):
    out = tmp_path / "a.json"
    assert run(capsys, "enumerate", "--n", "2", "--d", "1", "--out", str(out), "--hasse")[0] == 0
    doc = json.loads(out.read_text())
    assert doc["format_version"] == "1"
    assert doc["context"] == {"kind": "auslander", "n": 2, "d": 1}
    assert doc["count"] == 5 == len(doc["classes"])
    assert doc["classes"][0] == [] and doc["classes"][-1] == [[0, 0], [0, 1], [1, 1]]
    assert len(doc["hasse"]) == 5


def test_hasse_dot(capsys, tmp_path):
    path = tmp_path / "a.json"
    main(["enumerate", "--n", "1", "--d", "1", "--out", str(path)])
    code, out, _ = run(capsys, "hasse", "--in", str(path))
    assert out == 'digraph torsion_classes {\n  0 [label="0"];\n  1 [label="1"];\n  1 -> 0;\n}\n'
    code, out, _ = run(capsys, "hasse", "--in", str(path), "--labels", "full")
    assert '1 [label="00"]' in out
    main(["enumerate", "--n", "3", "--d", "3", "--out", str(path)])
    capsys.readouterr()
    first = run(capsys, "hasse", "--in", str(path))[1]
    assert first == run(capsys, "hasse", "--in", str(path))[1]
    assert first.count("[label=") == 46
    doc = json.loads(run(capsys, "hasse", "--in", str(path), "--format", "json")[1])
    assert doc["count"] == 46 and len(doc["hasse"]) == 78


def test_hasse_rejects_incomplete(capsys, tmp_path):
    path = tmp_path / "a.json"
    main(["enumerate", "--n", "3", "--d", "2", "--out", str(path)])
    doc = json.loads(path.read_text())
    del doc["classes"][3]
    doc["count"] -= 1
    path.write_text(json.dumps(doc))
    assert run(capsys, "hasse", "--in", str(path))[0] == 2
    doc["classes"][2] = [[0, 0, 0], [1, 1, 1]]
    path.write_text(json.dumps(doc))
    assert run(capsys, "props", "--in", str(path))[0] == 2


def test_props(capsys, tmp_path):
    path = tmp_path / "a.json"
    main(["enumerate", "--n", "3", "--d", "3", "--out", str(path)])
    capsys.readouterr()
    report = json.loads(run(capsys, "props", "--in", str(path))[1])
    assert report["is_lattice"] and not report["hasse_regular"]
    assert not report["meet_semidistributive"] and report["witness"]["law"] == "meet"
    main(["enumerate", "--n", "1", "--d", "1", "--out", str(path)])
    capsys.readouterr()
    report = json.loads(run(capsys, "props", "--in", str(path))[1])
    assert report["hasse_regular"] and report["join_semidistributive"] and report["meet_semidistributive"]
    main(["enumerate", "--n", "2", "--d", "2", "--out", str(path)])
    capsys.readouterr()
    report = json.loads(run(capsys, "props", "--in", str(path))[1])
    assert report == {"is_lattice": True, "join_semidistributive": True, "meet_semidistributive": True,
                      "witness": None, "hasse_regular": True, "degree_multiset": {"2": 6}}


def test_ainf_document_and_stream(capsys):
    code, out, _ = run(capsys, "enumerate", "--kupisch", "0,1,2,0,1,2", "--ainf", "--offset", "-3", "--d", "2")
    doc = json.loads(out)
    assert doc["context"] == {"kind": "ainf", "kupisch": [1, 2, 0, 1, 2], "d": 2, "offset": -2}
    assert doc["count"] == 36 and [b["offset"] for b in doc["blocks"]] == [-2, 1]
    code, out, _ = run(capsys, "enumerate", "--kupisch", "1,2,0,1,2", "--ainf", "--d", "2", "--stream")
    lines = out.splitlines()
    assert len(lines) == 36 and lines[0] == "[0,0]" and lines[-1] == "[5,5]"
