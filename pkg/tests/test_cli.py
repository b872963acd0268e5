import io
import json

import pytest

from conftest import FIXTURES, load_fixture
from skewlab.cli import RunReport, main, write_atomic


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], stdout=out)
    text = out.getvalue()
    return code, (json.loads(text) if text.lstrip().startswith("{") else text)


def fx(name):
    return FIXTURES / name


def strip_timing(text):
    obj = json.loads(text)
    obj.pop("timing")
    return obj


def test_validate_cocycle_codes(tmp_path):
    assert run("validate-cocycle", fx("klein_trivial_cocycle.json"))[0] == 0
    code, rep = run("validate-cocycle", fx("klein_perturbed_cocycle.json"))
    assert code == 1
    assert "s1" in rep["error"] and rep["verdicts"]["cocycle"] == "fail"
    assert run("validate-cocycle", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("validate-cocycle", bad)[0] == 2


def test_build_cyclic_quaternion(tmp_path):
    out = tmp_path / "q.json"
    code, rep = run("build", fx("quaternion_cyclic.json"), "--kind", "cyclic", "--out", out)
    assert code == 0
    art = json.loads(out.read_text())
    assert art["algebra"]["dim"] == 4
    assert rep["artifacts"]["build"]["center_dim"] == 1


def test_build_klein_chain():
    code, rep = run("build", fx("klein_chain.json"), "--kind", "abelian-chain")
    assert code == 0
    art = rep["artifacts"]["build"]
    assert art["dim"] == 16 and art["center_dim"] == 1
    assert all(v == "pass" for v in rep["verdicts"].values())


def test_build_chain_non_abelian(tmp_path):
    desc = {"kind": "abelian-chain", "extension": load_fixture("s3_splitting.json"), "c0": "1", "l": ["1"]}
    p = tmp_path / "s3.json"
    p.write_text(json.dumps(desc))
    assert run("build", p, "--kind", "abelian-chain")[0] == 2


def test_decompose(tmp_path):
    art = tmp_path / "z4.json"
    assert run("build", fx("zeta5_cyclic_cocycle.json"), "--kind", "crossed", "--out", art)[0] == 0
    code, rep = run("decompose", art)
    assert code == 0
    assert len(rep["artifacts"]["chain"]["levels"]) == 2
    assert all(v == "pass" for v in rep["verdicts"].values())
    quat = tmp_path / "q.json"
    run("build", fx("quaternion_cocycle.json"), "--kind", "crossed", "--out", quat)
    code, rep = run("decompose", quat)
    assert code == 0 and len(rep["artifacts"]["chain"]["levels"]) == 1


def test_decompose_explicit_series(tmp_path):
    art = tmp_path / "z4.json"
    run("build", fx("zeta5_cyclic_cocycle.json"), "--kind", "crossed", "--out", art)
    ser = tmp_path / "series.json"
    ser.write_text(json.dumps({"subgroups": [["id"], ["id", "s2"], ["id", "s", "s2", "s3"]]}))
    assert run("decompose", art, "--series", ser)[0] == 0
    ser.write_text(json.dumps({"subgroups": [["id"], ["id", "s"], ["id", "s", "s2", "s3"]]}))
    assert run("decompose", art, "--series", ser)[0] == 2


def test_decompose_a5_not_solvable():
    code, rep = run("decompose", fx("a5_artifact.json"))
    assert code == 1 and "is_solvable" in rep["error"]


def test_probe_codes():
    code, rep = run("probe-division", fx("quaternion_chain.json"), "--height", 3)
    assert code == 3 and rep["artifacts"]["probe"]["verdict"] == "undetermined(3)"
    assert run("probe-division", fx("quaternion_chain.json"), "--height", 2, "--allow-undetermined")[0] == 0
    code, rep = run("probe-division", fx("split_chain.json"), "--height", 1)
    assert code == 0 and rep["artifacts"]["probe"]["verdict"] == "not-division"
    assert "witness" in rep["artifacts"]["probe"]["levels"][0]
    code, rep = run("probe-division", fx("f9_chain.json"), "--exhaustive")
    assert code == 0 and rep["artifacts"]["probe"]["verdict"] == "not-division"
    assert run("probe-division", fx("quaternion_chain.json"), "--exhaustive")[0] == 2


def test_center_and_centralizer(tmp_path):
    art = tmp_path / "q.json"
    run("build", fx("quaternion_cyclic.json"), "--kind", "cyclic", "--out", art)
    code, rep = run("center", art)
    assert code == 0 and rep["artifacts"]["center"]["dim"] == 1
    code, rep = run("centralizer", art, "--gens", "th")
    assert code == 0 and rep["artifacts"]["centralizer"]["dim"] == 2


def test_reports_byte_identical(tmp_path):
    texts = []
    for _ in range(2):
        out = io.StringIO()
        main(["decompose", str(fx("quaternion_cocycle.json"))], stdout=out)
        texts.append(out.getvalue())
    assert strip_timing(texts[0]) == strip_timing(texts[1])
    a = {k: v for k, v in json.loads(texts[0]).items() if k != "timing"}
    b = {k: v for k, v in json.loads(texts[1]).items() if k != "timing"}
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_report_flag_and_atomic_write(tmp_path):
    rep_path = tmp_path / "r.json"
    code = main(["--report", str(rep_path), "validate-cocycle", str(fx("klein_trivial_cocycle.json"))], stdout=io.StringIO())
    assert code == 0 and json.loads(rep_path.read_text())["exit_code"] == 0
    code = main(["validate-cocycle", str(fx("klein_trivial_cocycle.json")), "--text"], stdout=io.StringIO())
    assert code == 0
    target = tmp_path / "x.json"
    write_atomic(target, "abc\n")
    write_atomic(target, "def\n")
    assert target.read_text() == "def\n"
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".")] == []


def test_run_report_round_trip():
    out = io.StringIO()
    main(["validate-cocycle", str(fx("klein_perturbed_cocycle.json"))], stdout=out)
    obj = json.loads(out.getvalue())
    assert RunReport.from_json(obj).to_json() == obj


@pytest.mark.parametrize("argv", [[], ["build", "x.json"], ["probe-division", "x", "--height", "2", "--exhaustive"]])
def test_usage_errors(argv, capsys):
    assert main(argv, stdout=io.StringIO()) == 2
