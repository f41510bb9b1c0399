import json
import subprocess
import sys

import pytest

from gowers_lab.cli import ExperimentConfig, main, parse_range
from gowers_lab import PreconditionError


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def doc(text):
    return json.loads(text)


def test_norm_of_indicator(capsys):
    code, out, _ = run_cli(capsys, "gowers", "norm", "--group", "2", "--fn", "const:1", "--k", "2")
    assert code == 0
    d = doc(out)
    assert d["tool"] == "gowers-lab" and abs(d["result"]["norm"] - 1) < 1e-12
    assert d["config"]["k"] == 2 and d["config"]["budget"] is not None
    assert "wall_seconds" in d["timing"]


def test_norm_of_file_table(tmp_path, capsys):
    from gowers_lab import FunctionTable, GroupSpec
    p = tmp_path / "f.json"
    FunctionTable.from_complex(GroupSpec((2,)), [1, 0]).save(p)
    code, out, _ = run_cli(capsys, "gowers", "norm", "--fn", f"file:{p}", "--k", "2", "--method", "recursive")
    assert code == 0 and abs(doc(out)["result"]["norm"] - (1 / 8) ** 0.25) < 1e-12


def test_inner_and_correlate(capsys):
    code, out, _ = run_cli(capsys, "gowers", "inner", "--group", "2", *["--fn", "const:1"] * 4)
    assert code == 0 and abs(doc(out)["result"]["inner"][0] - 1) < 1e-12
    code, out, _ = run_cli(capsys, "gowers", "correlate", "--group", "4", "--fn", "poly:1/4 * x1^2",
                           "--deg", "2", "--den", "4")
    assert code == 0 and abs(doc(out)["result"]["correlation"] - 1) < 1e-12


def test_poly_commands(capsys):
    code, out, _ = run_cli(capsys, "poly", "degree", "--group", "2,4", "--fn", "poly:1/2 * x1 x2")
    assert code == 0 and doc(out)["result"]["degree"] == 2
    code, out, _ = run_cli(capsys, "poly", "residue-bound", "--k", "2", "--p", "2", "--r", "1", "--s", "1")
    assert code == 0 and isinstance(doc(out)["result"]["bound"], int)
    code, out, _ = run_cli(capsys, "poly", "alg-lemma", "--m", "4", "--r", "1")
    assert code == 0 and doc(out)["result"]["report"]["passed"]


def test_sylow_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "sylow", "--group", "12,10", "--element", "5,7")
    r = doc(out)["result"]
    assert code == 0 and r["element"]["roundtrip"]
    assert set(r["components"]) == {"2", "3", "5"}


def test_universal_build_then_verify(tmp_path, capsys):
    form = json.dumps({"order": 2, "entries": [{"indices": [0, 0], "num": 1, "den": 2}]})
    out_path = tmp_path / "sys.json"
    code, _, _ = run_cli(capsys, "universal", "build", "--group", "2", "--form", form, "--out", str(out_path))
    assert code == 0
    code, out, _ = run_cli(capsys, "universal", "verify", "--system", str(out_path))
    assert code == 0 and doc(out)["result"]["passed"]


def test_cubes_commands(capsys):
    code, out, _ = run_cli(capsys, "cubes", "count", "--spec", "D1:2", "--n", "2")
    assert doc(out)["result"]["count"] == 8 and doc(out)["result"]["matches"]
    code, out, _ = run_cli(capsys, "cubes", "member", "--spec", "D1:4", "--cube", "[0,1,2,3]")
    assert doc(out)["result"]["member"] and doc(out)["result"]["hk_member"]
    code, out, _ = run_cli(capsys, "cubes", "complete", "--spec", "D1:4", "--corner", "[0,1,2]")
    assert doc(out)["result"]["completions"] == [[3]]
    code, out, _ = run_cli(capsys, "cubes", "constancy", "--q", "2", "--l", "1", "--p", "3", "--m", "1")
    assert code == 0 and doc(out)["result"]["passed"]


def test_dynamics_gallery(capsys):
    code, out, _ = run_cli(capsys, "dynamics", "gallery", "--name", "appendixD", "--n", "2")
    r = doc(out)["result"]
    assert code == 0 and r["report"]["passed"] and "degrees" in r
    code, out, _ = run_cli(capsys, "dynamics", "gallery", "--name", "z4z-skew", "--verify", "none")
    assert "report" not in doc(out)["result"]


def test_root_search_default(capsys):
    code, out, _ = run_cli(capsys, "dynamics", "root-search", "--n", "1")
    r = doc(out)["result"]
    assert code == 0 and r["candidates"] == 2 ** 8


def test_verify_single_suite(capsys):
    code, out, err = run_cli(capsys, "verify", "suite:constancy", "--timing")
    d = doc(out)
    assert code == 0 and d["result"]["passed"] and "timing" not in d
    assert "constancy:" in err


def test_sweep_csv(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--task", "norm", "--param", "k", "--range", "1..3",
                           "--group", "2", "--fn", "const:1")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "k,norm" and len(lines) == 4
    code, out, _ = run_cli(capsys, "sweep", "--task", "norm", "--param", "k", "--range", "3..1",
                           "--group", "2", "--fn", "const:1")
    assert out.strip() == "k,norm"


def test_sweep_over_gallery_size(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--task", "norm", "--param", "n", "--range", "1,2",
                           "--fn", "gallery:appendixD", "--k", "2")
    assert code == 0 and len(out.strip().splitlines()) == 3


def test_csv_format_flattens(capsys):
    code, out, _ = run_cli(capsys, "sylow", "--group", "6", "--format", "csv")
    assert out.startswith("key,value\n") and "result.components.2,2" in out


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"group": "2", "fn": ["const:1"], "k": 3}))
    code, out, _ = run_cli(capsys, "gowers", "norm", "--config", str(cfg), "--k", "2")
    assert code == 0 and doc(out)["config"]["k"] == 2


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"groop": "2"}))
    code, _, err = run_cli(capsys, "gowers", "norm", "--config", str(cfg))
    assert code == 2 and "groop" in err
    with pytest.raises(PreconditionError):
        ExperimentConfig.from_mapping({"nope": 1})


@pytest.mark.parametrize("argv,code", [
    (["gowers", "norm", "--group", "2,x", "--fn", "const:1"], 2),
    (["gowers", "norm", "--fn", "const:1"], 2),
    (["gowers", "norm", "--group", "2", "--fn", "bogus:1"], 2),
    (["gowers", "norm", "--group", "2,2,2,2", "--fn", "const:1", "--k", "4", "--budget", "100"], 3),
    (["cubes", "count", "--spec", "D1:4", "--n", "4", "--budget", "10"], 3),
    (["cubes", "constancy", "--q", "2", "--l", "1", "--p", "2", "--m", "1"], 2),
    (["verify", "suite:nope"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run_cli(capsys, *argv)[0] == code


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["gowers", "frobnicate"])
    assert e.value.code == 2


def test_parse_range():
    assert parse_range("1..3") == [1, 2, 3]
    assert parse_range("3..1") == []
    assert parse_range("2, 5") == [2, 5]
    with pytest.raises(PreconditionError):
        parse_range("a..b")


def test_console_entry_point_runs():
    p = subprocess.run([sys.executable, "-m", "gowers_lab", "--version"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.startswith("gowers-lab")
