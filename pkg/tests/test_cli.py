import json
import subprocess
import sys

import numpy as np
import pytest

from gptshape import cli, io


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_forward_disk(tmp_path, capsys):
    assert run("forward", "--shape", "disk", "--sigma", "5", "--order", "2", "--quad-nodes", "128") == 0
    doc = json.loads(capsys.readouterr().out)
    n2 = doc["n2"][0][0]
    assert n2[0] == pytest.approx(8 * np.pi / 3, rel=1e-12) and abs(n2[1]) < 1e-12
    assert doc["lambda"] == 0.75
    assert doc["metadata"]["shape"] == "disk"


def test_forward_is_deterministic(tmp_path):
    args = ("forward", "--shape", "kite", "--sigma", "1/5", "--order", "3", "--quad-nodes", "256", "--snr", "5")
    run(*args, "--out", tmp_path / "a.json")
    run(*args, "--out", tmp_path / "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_forward_recover_evaluate(tmp_path):
    g = tmp_path / "g.json"
    assert run("forward", "--shape", "ellipse", "--e1", "0.3", "--sigma", "inf", "--order", "4",
               "--quad-nodes", "256", "--out", g) == 0
    for method in cli.METHODS:
        out = tmp_path / f"{method}.txt"
        assert run("recover", "--gpt", g, "--method", method, "--out", out, "--curve-samples", "256") == 0
        _, z, head = io.read_curve(out)
        assert head["method"] == method
    th = 2 * np.pi * np.arange(256) / 256
    w = np.exp(1j * th)
    io.write_curve(tmp_path / "truth.txt", th, w + 0.3 / w)
    m = tmp_path / "m.txt"
    assert run("evaluate", "--truth", tmp_path / "truth.txt", "--recon", tmp_path / "conformal.txt", "--out", m) == 0
    assert float(io.read_metrics(m)["symmetric_difference"]) < 1e-10


def test_usage_errors_exit_1(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run("forward", "--shape", "blob", "--sigma", "5")
    assert exc.value.code == 1
    assert run("recover", "--gpt", tmp_path / "missing.json", "--method", "disk", "--out", tmp_path / "x") == 1
    assert run("forward", "--shape", "disk", "--sigma", "5", "--order", "8", "--quad-nodes", "32") == 1
    g = tmp_path / "g.json"
    run("forward", "--shape", "disk", "--sigma", "5", "--order", "2", "--quad-nodes", "64", "--out", g)
    assert run("recover", "--gpt", g, "--method", "disk", "--order", "5", "--out", tmp_path / "x") == 1
    assert "error" in capsys.readouterr().err


def test_numerical_errors_exit_2(tmp_path, capsys):
    assert run("forward", "--shape", "disk", "--sigma", "1", "--order", "2") == 2
    doc = {"order": 2, "sigma": 5.0, "lambda": 0.75, "n1": [[[0, 0]] * 2] * 2, "n2": [[[0, 0]] * 2] * 2}
    (tmp_path / "z.json").write_text(json.dumps(doc))
    assert run("recover", "--gpt", tmp_path / "z.json", "--method", "conformal", "--out", tmp_path / "x") == 2
    assert "numerical error" in capsys.readouterr().err


def test_demo_writes_manifest(tmp_path):
    man = cli.run_demo("kite-orders", tmp_path, n_quad=256, n_curve=128)
    assert len(man["cells"]) == 2 * len(cli.METHODS)
    assert (tmp_path / "truth.txt").exists()
    ok = [c for c in man["cells"] if c["status"] == "ok"]
    for cell in ok:
        assert (tmp_path / cell["recon"]).exists()
        assert 0 <= cell["metrics"]["symmetric_difference"] < 2
    assert json.loads((tmp_path / "manifest.json").read_text()) == man


def test_demo_unknown_figure(tmp_path):
    with pytest.raises(ValueError):
        cli.run_demo("nope", tmp_path)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "gptshape.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "forward" in out.stdout
