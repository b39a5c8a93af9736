import io
import json

import pytest

from cubekit.cli import render_text, run
from cubekit.fixtures import builtin_text
from cubekit.rank_graph import read_matrix_text


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def test_cover_figure(recwarn):
    code, out = call("cover", "--spec", "T:1,T:1,D:2", "--format", "json")
    rep = json.loads(out)["cover"]
    assert code == 0
    assert rep["matrices"] == [[[0, 2], [2, 0]], [[0, 2], [2, 0]], [[4, 0], [0, 4]]]
    assert rep["warnings"] and "hypothesis" in rep["warnings"][0]


def test_cover_k_theory_text():
    code, out = call("cover", "--spec", "T:2,D:3,D:3", "--k-theory")
    assert code == 0
    assert "K1: (Z/5)^2" in out


def test_bad_cover_spec_is_usage_error():
    assert call("cover", "--spec", "D:2,D:2")[0] == 1


def test_verify_broken_exits_two(tmp_path):
    d = json.loads(builtin_text("gamma357"))
    d["relators"] = d["relators"][1:]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(d))
    code, out = call("verify", str(path), "--format", "json")
    rep = json.loads(out)
    assert code == 2
    assert rep["verify"]["axioms"]["c2"] is False
    assert any(w[0] == "C2" for w in rep["verify"]["axioms"]["witnesses"])


def test_io_and_usage_errors(tmp_path):
    assert call("verify", str(tmp_path / "missing.json"))[0] == 1
    assert call("frobnicate")[0] == 1
    assert call("verify")[0] == 1
    assert call("verify", "x.json", "--builtin", "gamma357")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert call("verify", str(bad))[0] == 1
    assert call("ktheory", "--builtin", "F2^3", "--kunneth-k0", "Q")[0] == 1


def test_ktheory_is_deterministic_and_round_trips():
    a = call("ktheory", "--builtin", "F2^3", "--format", "json", "--kunneth-k0", "Z^32", "--seed", "7")
    b = call("ktheory", "--builtin", "F2^3", "--format", "json", "--kunneth-k0", "Z^32", "--seed", "7")
    assert a == b and a[0] == 0
    rep = json.loads(a[1])
    assert rep["seed"] == 7
    assert rep["ktheory"]["resolved"] == {"G_0": "0", "G_1": "Z^8"}
    assert rep["ktheory"]["identity_order"]["computed_order"] == 1
    assert json.loads(json.dumps(rep)) == rep


def test_input_hash_stable(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(builtin_text("gamma357"))
    h1 = json.loads(call("verify", str(path), "--format", "json")[1])["input"]["sha256"]
    h2 = json.loads(call("verify", "--builtin", "gamma357", "--format", "json")[1])["input"]["sha256"]
    assert h1 == h2 and len(h1) == 64


def test_dumps_and_out(tmp_path):
    out = tmp_path / "r.json"
    code, text = call("homology", "--builtin", "F2^3", "--format", "json", "--out", str(out),
                      "--dump-matrices", str(tmp_path / "m"), "--dump-snf", str(tmp_path / "s"))
    assert code == 0 and text == ""
    rep = json.loads(out.read_text())
    assert rep["homology"]["groups"]["H_1"] == "Z^24"
    m1 = read_matrix_text(tmp_path / "m" / "M_1.txt")
    assert m1.shape == (64, 64) and m1.sum() == 64 * 3
    assert read_matrix_text(tmp_path / "m" / "d_1.txt").shape == (64, 192)
    snf = json.loads((tmp_path / "s" / "snf_d_1.json").read_text())
    assert snf["rank"] == 56


def test_cubes_dim():
    code, out = call("cubes", "--builtin", "gamma357", "--dim", "2", "--format", "json")
    assert code == 0 and json.loads(out)["cubes"]["counts"] == {"2": 104}


def test_cellular_torus_relaxed(tmp_path):
    code, out = call("cellular", "--builtin", "torus", "--relaxed", "--format", "json",
                     "--dump-complex", str(tmp_path / "c"))
    rep = json.loads(out)["cellular"]
    assert code == 0
    assert rep["homology"] == {"H_0": "Z", "H_1": "Z^2", "H_2": "Z"}
    assert (tmp_path / "c" / "counts.txt").read_text().split() == ["4", "12", "8"]
    assert call("cellular", "--builtin", "torus")[0] == 2


def test_all_text_and_timings_flag():
    code, out = call("all", "--builtin", "F2^3")
    assert code == 0
    assert "timings" not in out
    assert "H_3: Z^8" in out
    code, out = call("all", "--builtin", "F2^3", "--timings", "--exhaustive-uce", "--format", "json")
    rep = json.loads(out)
    assert "homology" in rep["timings"]
    assert rep["kgraph"]["uce"]["mode"] == "all"
    assert rep["cellular"]["homology"]["H_1"] == "Z^6"


def test_threads_env(monkeypatch):
    monkeypatch.setenv("CUBEKIT_THREADS", "1")
    assert call("homology", "--builtin", "F2^3")[0] == 0
    monkeypatch.setenv("CUBEKIT_THREADS", "many")
    assert call("homology", "--builtin", "F2^3")[0] == 1


def test_render_text():
    text = render_text({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": None}]})
    assert text.splitlines() == ["a: 1", "b:", "  c: [1, 2]", "d:", "  -", "    e: -"]


def test_modular_method_reports_prime_bound():
    code, out = call("ktheory", "--builtin", "F3^3", "--format", "json", "--method", "modular",
                     "--prime-bound", "7")
    rep = json.loads(out)
    assert code == 0
    assert rep["homology"]["torsion_primes_up_to"] == 7
    assert rep["homology"]["groups"]["H_1"] == "Z^81 + (Z/2)^74"
    dense = json.loads(call("ktheory", "--builtin", "F3^3", "--format", "json")[1])
    assert rep["ktheory"]["identity_order"] == dense["ktheory"]["identity_order"]
    assert "torsion_primes_up_to" not in dense["homology"]


def test_prime_bound_must_be_a_prime_range():
    assert call("homology", "--builtin", "F2^3", "--prime-bound", "1")[0] == 1
