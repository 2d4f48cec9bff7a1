import io
import json

import pytest

from qgp.cli import dumps, main
from qgp.generate import random_instance, random_repmap
from qgp.quiver import FIXTURE_QUIVERS, a_n
from qgp.rep import Rep, validate_rep
from qgp.ring import ZMod


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write(path, obj):
    path.write_text(dumps(obj), encoding="utf-8")
    return str(path)


@pytest.fixture
def files(tmp_path, zero_to_z2, z4):
    from qgp.modules import FPModule

    from conftest import a2_rep

    R = FPModule.free(z4, 1)
    non_gp = a2_rep(z4, R, R, [[2]])
    return {
        "gp": write(tmp_path / "gp.json", zero_to_z2.to_json()),
        "non_gp": write(tmp_path / "non_gp.json", non_gp.to_json()),
        "dir": tmp_path,
        "reps": (zero_to_z2, non_gp),
    }


def test_validate(files):
    code, out, _ = run(["validate", "--input", files["gp"]])
    assert code == 0 and json.loads(out)["kind"] == "Rep"


def test_validate_cyclic_quiver(tmp_path):
    q = {"vertices": ["0"], "arrows": [{"name": "a", "src": "0", "tgt": "0"}]}
    code, _, err = run(["validate", "--input", write(tmp_path / "q.json", q)])
    assert code == 2 and "cycle" in err.lower()


def test_non_canonical_element(tmp_path, zero_to_z2):
    data = zero_to_z2.to_json()
    data["modules"]["1"]["relations"] = [[5]]
    code, _, err = run(["validate", "--input", write(tmp_path / "bad.json", data)])
    assert code == 2 and "input error" in err


def test_malformed_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{", encoding="utf-8")
    assert run(["validate", "--input", str(p)])[0] == 2
    assert run(["validate", "--input", str(tmp_path / "missing.json")])[0] == 2


def test_unknown_verb_and_missing_option():
    assert run(["frobnicate"])[0] == 2
    assert run(["check"])[0] == 2


def test_check_and_assert(files):
    code, out, _ = run(["check", "--input", files["gp"]])
    assert code == 0 and json.loads(out)["flags"]["gorenstein_projective"] is True
    assert run(["check", "--input", files["non_gp"], "--assert", "gp"])[0] == 1
    assert run(["check", "--input", files["gp"], "--assert", "gp"])[0] == 0
    assert run(["check", "--input", files["gp"], "--assert", "nonsense"])[0] == 2


def test_check_morphism_and_factor(files):
    d = files["dir"]
    src, tgt = files["reps"]
    f = random_repmap(1, src, src)
    morph = {"source": "gp.json", "target": "gp.json", **f.to_json()}
    path = write(d / "f.json", morph)
    code, out, _ = run(["check", "--morphism", path])
    assert code == 0 and "weak_equivalence" in json.loads(out)["flags"]
    for mode in ("cof-trivfib", "trivcof-fib"):
        code, out, _ = run(["factor", "--morphism", path, "--mode", mode])
        rep = json.loads(out)
        assert code == 0 and rep["mode"] == mode and "certification" in rep
    inline = {"source": src.to_json(), "target": src.to_json(), **f.to_json()}
    assert run(["check", "--morphism", write(d / "g.json", inline)])[0] == 0


def test_replace_suspend_loop(files):
    for mode in ("cofibrant", "fibrant"):
        code, out, _ = run(["replace", "--input", files["non_gp"], "--mode", mode])
        assert code == 0
        assert Rep.from_json(json.loads(out)["replacement"])
    for verb in ("suspend", "loop"):
        code, out, _ = run([verb, "--input", files["gp"]])
        assert code == 0 and validate_rep(Rep.from_json(json.loads(out)["result"])) is None


def test_oracle(files):
    code, out, _ = run(["oracle", "--input", files["non_gp"]])
    rep = json.loads(out)
    assert code == 0 and rep["agree"] and not rep["gp"] and not rep["ext_vanishes"]
    assert set(rep["ext1"]) == {"0", "1"}


def test_stable_hom_and_adjunction(files):
    code, out, _ = run(["stable-hom", "--a", files["gp"], "--b", files["gp"]])
    rep = json.loads(out)
    assert code == 0 and rep["module"]["invariants"] == [2] and rep["module"]["order"] == 2
    code, out, _ = run(["adjunction", "--a", files["gp"], "--b", files["non_gp"], "--assert", "agree"])
    assert code == 0 and json.loads(out)["agree"]


def test_text_report_and_output_dir(files, tmp_path, monkeypatch):
    code, out, _ = run(["check", "--input", files["gp"], "--report", "text"])
    assert code == 0 and "gorenstein_projective: true" in out
    monkeypatch.setenv("QGP_REPORT_DIR", str(tmp_path))
    code, out, _ = run(["check", "--input", files["gp"], "--output", "report.json"])
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "report.json").read_text())["flags"]["gorenstein_projective"]


def test_round_trip_is_byte_identical(tmp_path):
    for seed in range(5):
        for qname, qf in FIXTURE_QUIVERS.items():
            m = random_instance(seed, ZMod(6), qf(), 2)
            text = dumps(m.to_json())
            path = tmp_path / f"{qname}{seed}.json"
            path.write_text(text, encoding="utf-8")
            again = dumps(Rep.from_json(json.loads(path.read_text(encoding="utf-8"))).to_json())
            assert again == text


def test_random_instance_contract():
    r, q = ZMod(4), a_n(2)
    assert random_instance(7, r, q, 2).to_json() == random_instance(7, r, q, 2).to_json()
    assert random_instance(7, r, q, 0).is_zero()
    for seed in range(100):
        assert validate_rep(random_instance(seed, r, q, 2)) is None


def test_selftest_small_scale():
    code, out, _ = run(["selftest", "--seed", "3", "--count", "0.01"])
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and len(rep["criteria"]) == 9
