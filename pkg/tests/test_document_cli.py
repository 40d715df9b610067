import copy
import json
import random
import subprocess
import sys
from importlib.resources import files

import pytest

from cosetra.cli import main
from cosetra.document import DocumentError, dumps, load_document, parse_document, to_document
from cosetra.frame import GroupTriple, check_pre_semi_frame, reassemble, same_triple, single_group_triple
from cosetra.groups import cyclic_group

import families

DATA = files("cosetra") / "data"
PENTAGON = str(DATA / "pentagon.json")
TWO = str(DATA / "two_components.json")


@pytest.fixture
def pentagon_doc():
    return json.loads((DATA / "pentagon.json").read_text())


def test_bundled_pentagon_matches_construction(pentagon):
    assert same_triple(load_document(PENTAGON), pentagon)


def test_canonical_roundtrip(pentagon_doc):
    t = parse_document(pentagon_doc)
    again = to_document(t, pentagon_doc["groups"])
    assert again == pentagon_doc
    assert dumps(again) == (DATA / "pentagon.json").read_text()


def test_table_groups_roundtrip():
    t = families.s3_twisted(True)
    doc = json.loads(dumps(to_document(t)))
    assert all(g["kind"] == "table" for g in doc["groups"])
    assert same_triple(parse_document(doc), t)


def test_two_component_document(pentagon):
    t = load_document(TWO)
    assert [list(c) for c in t.isos.classes] == [list("pqrst"), ["u"]]
    assert same_triple(t, reassemble([pentagon, single_group_triple("u", cyclic_group(3))]))


def test_coordinate_elements(pentagon_doc):
    doc = copy.deepcopy(pentagon_doc)
    doc["cosets"][0]["representative"] = [0, 0, 1]
    c = doc["cosets"][0]
    tr = (c["x"], c["y"], c["z"])
    t = parse_document(doc)
    g = t.system[c["x"]]
    assert g.element((0, 0, 1)) in t.cosets[tr].members


def _broken(doc, fn):
    d = copy.deepcopy(doc)
    fn(d)
    return d


BREAKS = {
    "schema": lambda d: d.pop("classes"),
    "extra key": lambda d: d.update(extra=1),
    "unknown factor": lambda d: d["groups"].insert(0, {"name": "W", "kind": "product", "factors": ["Q"]}),
    "group twice": lambda d: d["groups"].append(dict(d["groups"][1])),
    "unknown class member": lambda d: d["classes"][0].append("zz"),
    "repeated member": lambda d: d["classes"].append(["p"]),
    "reversed pair": lambda d: d["pairs"][0].update(x=d["pairs"][0]["y"], y=d["pairs"][0]["x"]),
    "pair twice": lambda d: d["pairs"].append(dict(d["pairs"][0])),
    "missing pair": lambda d: d["pairs"].pop(0),
    "bad element": lambda d: d["pairs"][0]["H"].append(99),
    "bad coordinates": lambda d: d["pairs"][0]["H"].append([0, 2, 0]),
    "H not subgroup": lambda d: d["pairs"][0].update(H=[0, 1, 2]),
    "iso not covering": lambda d: d["pairs"][0]["iso"].pop(),
    "iso twice": lambda d: d["pairs"][0]["iso"].append([d["pairs"][0]["iso"][1][0], d["pairs"][0]["iso"][2][1]]),
    "coset outside E3": lambda d: d["cosets"].append({"x": "p", "y": "q", "z": "zz", "representative": 0}),
    "coset twice": lambda d: d["cosets"].append(dict(d["cosets"][0])),
    "bad table": lambda d: d["groups"].append({"name": "T", "kind": "table", "cayley": [[0, 1], [1, 1]]}),
}


@pytest.mark.parametrize("name", sorted(BREAKS))
def test_document_errors(pentagon_doc, name):
    with pytest.raises(DocumentError):
        parse_document(_broken(pentagon_doc, BREAKS[name]))


def test_non_homomorphic_iso_rejected(pentagon_doc):
    doc = copy.deepcopy(pentagon_doc)
    iso = doc["pairs"][0]["iso"]
    iso[0][1], iso[1][1] = iso[1][1], iso[0][1]
    with pytest.raises(DocumentError):
        parse_document(doc)


def test_load_errors(tmp_path):
    with pytest.raises(DocumentError):
        load_document(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(DocumentError, match="invalid JSON"):
        load_document(bad)


# --- CLI -------------------------------------------------------------------------------

def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("cmd", ["validate", "build", "measure", "decompose"])
def test_commands_succeed_on_pentagon(capsys, cmd):
    code, out, _ = run(capsys, cmd, PENTAGON)
    assert code == 0
    assert "FAIL" not in out


def test_axioms_command(capsys):
    code, out, _ = run(capsys, "axioms", PENTAGON)
    assert code == 0
    assert [line.split()[1] for line in out.splitlines()] == ["R5", "R7", "R11", "R4", "R1", "R2",
                                                                 "R3", "R6", "R8", "R9"]


def test_machine_format(capsys):
    code, out, _ = run(capsys, "validate", "--format", "machine", PENTAGON)
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["exit_code"] == 0
    assert len(rep["conditions"]) == 8


def test_semantic_failure_exit_code(tmp_path, capsys, pentagon_doc):
    doc = copy.deepcopy(pentagon_doc)
    doc["cosets"].append({"x": "p", "y": "q", "z": "q", "representative": 1})
    path = tmp_path / "mutated.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 1
    assert "FAIL  coset condition (i)" in out
    code, out, _ = run(capsys, "axioms", str(path))
    assert code == 1


def test_input_error_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "build", str(tmp_path / "nope.json"))
    assert code == 2 and "error:" in err
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "build", "--jobs", "0", PENTAGON)[0] == 2
    assert run(capsys, "pentagon", "--base", "Q8")[0] == 2
    assert run(capsys, "refute", PENTAGON, "--triangle", "p,q", "--dir", str(tmp_path))[0] == 2


def test_not_pre_semi_frame_is_input_error(tmp_path, capsys):
    rng = random.Random(0)
    while True:
        isos = families.quotient_frame(rng, families.small_groups()[3], 3)
        t = GroupTriple.build(isos.system, isos)
        if not check_pre_semi_frame(t).ok:
            break
    doc = to_document(t)
    path = tmp_path / "s3.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "build", str(path))
    assert code == 2


def test_tables(capsys, pentagon_alg):
    code, out, _ = run(capsys, "atoms", PENTAGON)
    lines = out.splitlines()
    assert lines[0] == "index\tx\ty\talpha\tpairs"
    assert len(lines) == 121
    code, out, _ = run(capsys, "table", "--op", "otimes", PENTAGON)
    lines = out.splitlines()
    assert lines[0] == "left\tright\tresult" and len(lines) == 1 + 120 * 120
    code, out, _ = run(capsys, "table", "--op", "converse", PENTAGON)
    assert len(out.splitlines()) == 121
    code, out, _ = run(capsys, "table", "--op", "compose", "--format", "machine", PENTAGON)
    rep = json.loads(out)
    assert rep["header"] == ["left", "right", "in_algebra", "result"]
    assert all(r[2] == "yes" for r in rep["rows"])


def test_out_and_timing(tmp_path, capsys):
    target = tmp_path / "v.txt"
    code, out, _ = run(capsys, "validate", "--out", str(target), PENTAGON)
    assert code == 0 and out == ""
    assert target.read_text().endswith("verdict  valid\n")
    code, out, _ = run(capsys, "validate", "--timing", PENTAGON)
    assert out.splitlines()[-1].startswith("time  ")


def test_pentagon_command_writes_bundled_document(tmp_path, capsys):
    target = tmp_path / "p.json"
    assert run(capsys, "pentagon", "--out", str(target))[0] == 0
    assert target.read_text() == (DATA / "pentagon.json").read_text()
    code, out, _ = run(capsys, "pentagon", "--base", "Z3")
    assert code == 0
    assert json.loads(out)["groups"][0] == {"name": "Z3", "kind": "cyclic", "n": 3}


def test_decompose_two_components(capsys):
    code, out, _ = run(capsys, "decompose", TWO)
    assert code == 0
    assert "simple  false" in out and "components  2" in out


def test_refute_command(tmp_path, capsys):
    code, out, _ = run(capsys, "refute", PENTAGON, "--dir", str(tmp_path))
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary == {"scaffold_count": 0, "pre_scaffold_count": 2048, "certificates": 2048,
                       "refuted": 2048, "all_refuted": True}
    lines = (tmp_path / "certificates.jsonl").read_text().splitlines()
    assert len(lines) == 2048
    assert json.loads(lines[0])["refuted"]


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "cosetra.cli", "validate", PENTAGON],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.endswith("verdict  valid\n")
