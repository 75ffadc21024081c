import csv
import json
import os
import subprocess
import sys

import pytest

from polyconvex.cli import JobConfig, main
from polyconvex.errors import ValidationError

DIAG = '{"matrix": [["1","0"],["0","2"]]}'


def run(*args, stdin=None, check_code=None):
    p = subprocess.run([sys.executable, "-m", "polyconvex", *args], input=stdin,
                       capture_output=True, text=True)
    if check_code is not None:
        assert p.returncode == check_code, p.stderr
    return p


def test_decide_single_plane():
    out = json.loads(run("decide", "-i", DIAG, check_code=0).stdout)
    assert out["outcome"] == "Convex" and out["rule"] == "WeinstockPair"
    assert out["certificateId"] and out["trace"]


def test_thomas_pipe():
    fam = run("thomas", "--eps", "3/10", check_code=0).stdout
    p = run("decide", stdin=fam, check_code=0)
    out = json.loads(p.stdout)
    assert out["outcome"] == "Undecided"
    assert "OmegaMinusStar" in json.dumps(out)
    assert "probe" in p.stderr


def test_malformed_rational():
    p = run("decide", "-i", '{"matrix": [["1/0","0"],["0","2"]]}')
    assert p.returncode == 2 and p.stderr


def test_decimal_input_exact():
    out = json.loads(run("normalize", "-i", '[{"matrix": [[0.1, 0], [0, 2]]}]', check_code=0).stdout)
    assert out["planes"][0]["matrix"][0][0] == "1/10"


def test_decide_verify_roundtrip(tmp_path):
    fam = '[{"matrix": [["1","-1"],["1","1"]]}, {"matrix": [["2","-1"],["1","3"]]}]'
    rep = run("decide", "-i", fam, "--cert-dir", str(tmp_path), check_code=0).stdout
    assert json.loads(rep)["outcome"] == "Convex"
    assert json.loads(run("verify", stdin=rep, check_code=0).stdout)["ok"] is True
    (cert,) = tmp_path.iterdir()
    assert cert.name == json.loads(rep)["certificateId"] + ".json"
    run("verify", "-i", str(cert), check_code=0)


def test_tampered_ray(tmp_path):
    rep = json.loads(run("decide", "-i", '{"matrix": [["1","-1"],["1","1"]]}', check_code=0).stdout)
    cert = rep["certificate"]
    for g in cert["groups"]:
        g["target"]["direction"] = ["0", "1"]
    p = run("verify", "-i", json.dumps(cert))
    assert p.returncode == 3
    assert json.loads(p.stdout)["ok"] is False


def test_unknown_certificate_type():
    assert run("verify", "-i", '{"type": "Mystery"}').returncode == 2


def test_probe_empty_family():
    assert run("probe", "-i", "[]").returncode == 2


def test_probe_report_and_csv(tmp_path):
    out = tmp_path / "r.json"
    table = tmp_path / "r.csv"
    grid = '{"points": [[0.2, 0.5, 0.1, 0.0], [0.0, 0.4, 0.3, -0.1]]}'
    run("probe", "-i", DIAG, "--grid", grid, "--degree", "2", "--samples", "200",
        "-o", str(out), "--csv", str(table), check_code=0)
    rep = json.loads(out.read_text())
    assert rep["count"] == 2 and rep["degree"] == 2 and rep["samplesPerPlane"] == 200
    rows = list(csv.DictReader(table.open()))
    assert len(rows) == 2


def test_byte_identical(tmp_path):
    args = ["probe", "-i", DIAG, "--samples", "150", "--degree", "2", "--seed", "11",
            "--grid", '{"kind": "ball", "count": 3, "radius": 1, "minDistance": 0.1, "seed": 4}']
    a = run(*args, check_code=0).stdout
    b = run(*args, "--jobs", "2", check_code=0).stdout
    assert a == b
    d1 = run("decide", "-i", DIAG, check_code=0).stdout
    d2 = run("decide", "-i", DIAG, check_code=0).stdout
    assert d1 == d2


@pytest.mark.parametrize("view", ["--matrices", "--graphs", "--spectra", "--classify"])
def test_thomas_views(view):
    out = json.loads(run("thomas", "--eps", "1/2", view, check_code=0).stdout)
    assert out


def test_thomas_degenerate():
    assert run("thomas", "--eps", "1").returncode == 2


def test_config_file(tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({"command": "thomas", "eps": "3/10", "view": "classify"}))
    out = json.loads(run("thomas", "--config", str(cfg), check_code=0).stdout)
    assert "OmegaMinusStar" in json.dumps(out)
    cfg.write_text(json.dumps({"command": "thomas", "colour": "red"}))
    assert run("thomas", "--config", str(cfg)).returncode == 2


def test_jobconfig_rejects_unknown():
    with pytest.raises(ValidationError):
        JobConfig.from_dict({"command": "decide", "bogus": 1})
    with pytest.raises(ValidationError):
        JobConfig.from_dict({"command": "launch"})


def test_in_process_main(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert main(["decide", "-i", DIAG, "-o", str(out)]) == 0
    assert json.loads(out.read_text())["outcome"] == "Convex"
    assert os.path.exists(str(out) + ".cert.json") or json.loads(out.read_text())["certificate"]
