import json
import os
import subprocess
import sys

import pytest

import oracles as o
from fidl_lab import codec
from fidl_lab.cli import main
from fidl_lab.congruences import compatibility_witness
from fidl_lab.fidl import CHAIN3, mod2, product_module, trivial_module
from fidl_lab.generators import random_hom
from fidl_lab.morphisms import subalgebra_candidate


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(doc.dumps() if isinstance(doc, codec.InstanceDocument) else doc)
    return path


@pytest.fixture
def mod2_file(tmp_path):
    return write(tmp_path, "mod2.json", codec.module_document(mod2(), name="mod2"))


# -- check -------------------------------------------------------------------

def test_check_ok(capsys, mod2_file):
    code, out = run(capsys, "check", mod2_file)
    assert code == 0 and json.loads(out) == {"kind": "module", "valid": True}


def test_check_axiom_failure(capsys, tmp_path):
    obj = codec.encode_module(mod2())
    obj["i"][1][1] = 0
    path = write(tmp_path, "bad.json", codec.dumps(obj))
    code, out = run(capsys, "check", path)
    res = json.loads(out)
    assert code == 1 and res["error"] == "AxiomViolation"
    assert res["violations"] == [{"axiom": "I3", "b": 1}]


def test_check_malformed(capsys, tmp_path, mod2_file):
    text = mod2_file.read_text()
    path = write(tmp_path, "cut.json", text[: len(text) // 2])
    code, out = run(capsys, "check", path)
    assert code == 2 and json.loads(out)["error"] == "MalformedInput"
    code, _ = run(capsys, "check", tmp_path / "missing.json")
    assert code == 2


def test_budget_exit_code(capsys):
    code, out = run(capsys, "fuzz", "--max-a", 100000, "--count", 1)
    assert code == 3 and json.loads(out)["error"] == "BudgetExceeded"


def test_bad_fuzz_config(capsys):
    code, _ = run(capsys, "fuzz", "--strategy", "nonsense")
    assert code == 2


# -- dualize -----------------------------------------------------------------

def test_dualize_module(capsys, mod2_file, PT):
    code, out = run(capsys, "dualize", mod2_file, "--to", "frame", "--roundtrip")
    doc = json.loads(out)
    assert code == 0 and doc["kind"] == "frame" and doc["meta"]["roundtripIso"] is True
    F = codec.decode_frame(doc["payload"])
    assert (F.X.up, F.Y.up, F.R, F.T) == (PT.X.up, PT.Y.up, PT.R, PT.T)


def test_dualize_frame(capsys, tmp_path, PT):
    path = write(tmp_path, "pt.json", codec.frame_document(PT))
    code, out = run(capsys, "dualize", path, "--to", "module", "--roundtrip")
    doc = json.loads(out)
    assert code == 0 and doc["meta"]["roundtripIso"] is True
    assert o.module_iso(codec.decode_module(doc["payload"]), mod2())


def test_dualize_wrong_kind(capsys, mod2_file):
    code, out = run(capsys, "dualize", mod2_file, "--to", "module")
    assert code == 2 and json.loads(out)["error"] == "KindMismatch"


# -- congruences and classify ------------------------------------------------

def test_congruences_mod2(capsys, mod2_file):
    code, out = run(capsys, "congruences", mod2_file)
    res = json.loads(out)
    assert code == 0 and res["antiIsomorphism"]["ok"]
    cls = res["classification"]
    assert (cls["conLatticeSize"], cls["stronglyClosedCount"]) == (3, 3)
    assert len(res["bijection"]) == 3
    found = {(tuple(map(tuple, b["congruence"]["thetaA"])), tuple(map(tuple, b["congruence"]["thetaB"])))
             for b in res["bijection"]}
    assert len(found) == 3


def test_congruences_product(capsys, tmp_path):
    M = mod2()
    P, _ = product_module([M, M])
    path = write(tmp_path, "p.json", codec.module_document(P))
    code, out = run(capsys, "congruences", path)
    res = json.loads(out)
    assert code == 0
    assert len(res["congruences"]) == len(res["stronglyClosed"]) == len(o.module_congruences(P))
    assert res["classification"]["verdict"] == "not_SI"
    for b in res["bijection"]:
        c = codec.decode_congruence(b["congruence"], P)
        assert compatibility_witness(P, c.thetaA, c.thetaB) is None


def test_classify(capsys, tmp_path, mod2_file):
    code, out = run(capsys, "classify", mod2_file)
    assert code == 0 and json.loads(out)["verdict"] == "subdirectly_irreducible_not_simple"
    path = write(tmp_path, "t.json", codec.module_document(trivial_module()))
    code, out = run(capsys, "classify", path)
    assert json.loads(out)["verdict"] == "trivial"


# -- subalgebras and homomorphisms -------------------------------------------

def test_subalg(capsys, tmp_path):
    from fidl_lab.fidl import validate_module
    from fidl_lab.order import heyting_arrow

    C3 = validate_module(CHAIN3, CHAIN3, CHAIN3.meet, heyting_arrow(CHAIN3))
    mpath = write(tmp_path, "c3.json", codec.module_document(C3))
    cpath = write(tmp_path, "carr.json", codec.subalgebra_document(subalgebra_candidate(C3, [0, 2], [0, 1, 2])))
    code, out = run(capsys, "subalg", mpath, cpath)
    res = json.loads(out)
    assert code == 0 and res["agree"]
    assert res["direct"] == {"fusion": False, "implication": True, "subalgebra": False}


def test_hom(capsys, tmp_path):
    import random

    hom = random_hom(random.Random(5))
    s = write(tmp_path, "s.json", codec.module_document(hom.source))
    t = write(tmp_path, "t.json", codec.module_document(hom.target))
    h = write(tmp_path, "h.json", codec.hom_document(hom))
    code, out = run(capsys, "hom", s, t, h)
    res = json.loads(out)
    assert code == 0 and res["valid"]
    m = write(tmp_path, "m.json", codec.module_document(mod2()))
    swap = write(tmp_path, "swap.json", codec.document("hom", {"alpha": [1, 0], "gamma": [0, 1]}))
    code, out = run(capsys, "hom", m, m, swap)
    assert code == 1 and json.loads(out)["error"] == "NotLatticeHom"


# -- fuzz --------------------------------------------------------------------

def test_fuzz_heyting_power(capsys, tmp_path):
    code, out = run(capsys, "fuzz", "--seed", 1, "--strategy", "heyting-power", "--count", 10,
                    "--out", tmp_path / "a")
    res = json.loads(out)
    assert code == 0 and res["failures"] == []
    assert all(v["fail"] == 0 for v in res["properties"].values())
    assert sorted(os.listdir(tmp_path / "a")) == [f"module-{k}.json" for k in range(10)] + ["summary.json"]
    code2, out2 = run(capsys, "fuzz", "--seed", 1, "--strategy", "heyting-power", "--count", 10,
                      "--out", tmp_path / "b")
    assert out2 == out
    for name in os.listdir(tmp_path / "a"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_fuzz_random_tables_stats(capsys):
    code, out = run(capsys, "fuzz", "--seed", 3, "--strategy", "random-tables", "--count", 5,
                    "--max-a", 5, "--max-b", 4)
    res = json.loads(out)
    assert code == 0
    assert res["tables"]["proposed"] >= res["tables"]["accepted"] >= 5


# -- export-dot --------------------------------------------------------------

def test_export_dot(capsys, tmp_path, mod2_file):
    from fidl_lab.fidl import BOOL4

    path = write(tmp_path, "b4.json", codec.document("lattice", codec.encode_lattice(BOOL4)))
    code, out = run(capsys, "export-dot", path)
    assert code == 0 and out.startswith('digraph "lattice"') and out.count(" -> ") == 4
    code, out = run(capsys, "export-dot", mod2_file)
    assert code == 0 and 'digraph "mod2"' in out


def test_module_entry_point(mod2_file):
    proc = subprocess.run([sys.executable, "-m", "fidl_lab.cli", "check", str(mod2_file)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["valid"]
