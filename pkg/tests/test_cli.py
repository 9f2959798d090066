import json
import os
import subprocess
import sys

import pytest

from conftest import GOLDEN, ROOT
from toric_interp.cli import run
from toric_interp.degeneration import DegenCertificate, verify_certificate


def cli(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify(capsys):
    code, out, _ = cli(capsys, "classify", "--points", "6")
    data = json.loads(out)
    assert code == 0
    assert data["count"] == 13 and data["box"] == 8
    assert sum(c["empty"] for c in data["classes"]) == 5


def test_vdim_literal(capsys):
    code, out, _ = cli(capsys, "vdim", "--degree", "4", "--mults", "3,3")
    assert (code, out.strip()) == (0, '{"virtual":2,"expected":2}')


def test_vdim_polygon(capsys):
    code, out, _ = cli(capsys, "vdim", "--polygon", "[[0,0],[5,0],[5,3],[0,3]]", "--mults", "3,3,3,3")
    assert code == 0 and json.loads(out) == {"virtual": -1, "expected": -1}


def test_oracle(capsys):
    code, out, _ = cli(capsys, "oracle", "--degree", "4", "--mults", "3,3", "--seed", "42")
    assert code == 0 and json.loads(out) == {"dim": 3}


def test_triple_test_exit_codes(capsys):
    code, out, _ = cli(capsys, "triple-test", "--polygon", "[[0,0],[2,0],[0,2]]")
    assert code == 0 and json.loads(out)["empty"] is True
    code, out, _ = cli(capsys, "triple-test", "--polygon", "[[0,0],[2,0],[2,1],[0,1]]")
    assert code == 2 and json.loads(out) == {"empty": False, "det_is_zero": True, "class": json.loads(out)["class"]}


def test_verify_golden(capsys):
    code, out, _ = cli(capsys, "verify", str(GOLDEN / "c5_3.json"))
    assert code == 0 and "verified" in out
    code, out, _ = cli(capsys, "verify", "--json", str(GOLDEN / "c5_3.json"))
    data = json.loads(out)
    assert data["valid"] and data["r"] == 4 and data["e"] == 0 and data["conclusion"]["empty"]


def test_verify_invalid(tmp_path, capsys):
    data = json.loads((GOLDEN / "c5_3.json").read_text())
    del data["cells"][0]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out, _ = cli(capsys, "verify", "--json", str(path))
    assert code == 2 and not json.loads(out)["valid"]


def test_verify_malformed_and_missing(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    code, _, err = cli(capsys, "verify", str(path))
    assert code == 1 and "malformed" in err
    code, _, err = cli(capsys, "verify", str(tmp_path / "absent.json"))
    assert code == 3 and "Traceback" not in err


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["vdim", "--degree", "x", "--mults", "3"], ["vdim", "--degree", "4"], ["vdim", "--degree", "4", "--mults", "0"], ["triple-test", "--polygon", "[[0,0]]"], ["search-block", "--rect", "5", "--special", "4"], ["classify", "--points", "0"]],
)
def test_usage_errors(argv, capsys):
    code, _, err = cli(capsys, *argv)
    assert code == 1 and "error" in err


def test_triple_test_wrong_point_count(capsys):
    code, _, err = cli(capsys, "triple-test", "--polygon", "[[0,0],[3,0],[0,3]]")
    assert code == 2 and "6" in err


def test_search_block_round_trip(tmp_path, capsys):
    out_path = tmp_path / "c.json"
    code, out, _ = cli(capsys, "search-block", "--rect", "2,3", "--special", "2", "-o", str(out_path), "--json")
    assert code == 0
    report = json.loads(out)["report"]
    assert report["valid"] and report["r"] == 2
    assert verify_certificate(DegenCertificate.loads(out_path.read_text())).valid
    # stdout certificate, when no file is given, is readable back
    code, out, _ = cli(capsys, "search-block", "--rect", "2,3", "--special", "2", "--json")
    cert = DegenCertificate.from_json(json.loads(out)["certificate"])
    assert cert.dumps() == out_path.read_text()


def test_search_block_not_found(capsys):
    code, out, _ = cli(capsys, "search-block", "--rect", "1,1", "--special", "1", "--json")
    assert code == 2 and json.loads(out)["found"] is False


def test_build(tmp_path, capsys):
    out_path = tmp_path / "v7.json"
    code, out, _ = cli(capsys, "build", "--p2", "--degree", "7", "--golden", str(GOLDEN), "-o", str(out_path))
    assert code == 0 and "r=6 e=0" in out
    code, out, _ = cli(capsys, "build", "--p1xp1", "5,7", "--golden", str(GOLDEN), "--json")
    assert code == 0 and json.loads(out)["report"]["r"] == 8
    code, out, _ = cli(capsys, "build", "--p1xp1", "5,4", "--json")
    assert code == 2 and json.loads(out)["built"] is False
    code, _, err = cli(capsys, "build", "--p2")
    assert code == 1


def test_render(tmp_path, capsys):
    svg = tmp_path / "c.svg"
    code, out, _ = cli(capsys, "render", str(GOLDEN / "c5_3.json"), "-o", str(svg), "--json")
    assert code == 0 and json.loads(out)["marked"] == 4
    assert svg.read_text().lstrip().startswith("<?xml")
    code, _, _ = cli(capsys, "render", str(GOLDEN / "c5_3.json"), "-o", str(tmp_path / "missing" / "c.svg"))
    assert code == 3


def test_regen_golden_rejects_bad_catalog(tmp_path, monkeypatch):
    from toric_interp import golden
    from toric_interp.classify import Catalog

    broken = Catalog((), 6, 8, 0)
    with pytest.raises(golden.GoldenError):
        golden.regen_golden(tmp_path, catalog=broken, budget=1000)
    assert list(tmp_path.iterdir()) == []


def _subprocess(args, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    return subprocess.run([sys.executable, "-m", "toric_interp.cli", *args], capture_output=True, text=True, env=env, cwd=ROOT)


@pytest.mark.parametrize(
    "args",
    [["classify", "--points", "6"], ["oracle", "--degree", "5", "--mults", "3,3,3"], ["search-block", "--rect", "5,3", "--special", "4", "--json"], ["verify", "--json", "golden/v5.json"]],
)
def test_output_is_byte_identical(args):
    runs = [_subprocess(args, seed) for seed in (0, 1, 12345)]
    assert all(r.returncode == 0 for r in runs)
    assert runs[0].stdout == runs[1].stdout == runs[2].stdout


def test_render_is_byte_identical(tmp_path):
    outs = []
    for seed in (0, 7):
        path = tmp_path / f"{seed}.svg"
        assert _subprocess(["render", "golden/v5.json", "-o", str(path)], seed).returncode == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
