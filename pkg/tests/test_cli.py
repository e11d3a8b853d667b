import json
import subprocess
import sys

import pytest

from putwinners.cli import main
from putwinners.core import dump_preflib, parse_preflib
from putwinners.priority import slice_length


@pytest.fixture
def cycle_file(tmp_path, cycle3):
    path = tmp_path / "cycle.soc"
    path.write_text(dump_preflib(cycle3))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_stv(capsys, cycle_file):
    code, out, _ = run(capsys, "solve", "--rule", "stv", "--input", cycle_file)
    assert code == 0
    data = json.loads(out)
    assert data["winners"] == [0, 1, 2] and data["winner_names"] == ["A", "B", "C"]


@pytest.mark.parametrize("algo", ["mc", "ndfs"])
def test_solve_rp_to_file(capsys, tmp_path, cycle_file, algo):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "solve", "--rule", "rp", "--algo", algo, "--scc", "off",
                     "--priority", "lp", "--samples", "auto", "--seed", 3,
                     "--prune", "off", "--cache", "on", "--input", cycle_file, "--out", out)
    assert code == 0
    data = json.loads(out.read_text())
    assert data["winners"] == [0, 1, 2] and data["samples"] == 200


def test_solve_with_weights(capsys, tmp_path, cycle_file):
    w = tmp_path / "w.txt"
    w.write_text("version 1\nm 3\ncontext stv\nbias 0\n" + "0.1\n" * slice_length(3, "stv"))
    code, out, _ = run(capsys, "solve", "--rule", "stv", "--priority", "lpml",
                       "--weights", w, "--input", cycle_file)
    assert code == 0 and json.loads(out)["winners"] == [0, 1, 2]
    w.write_text("version 1\nm 4\ncontext stv\nbias 0\n" + "0\n" * slice_length(4, "stv"))
    code, _, err = run(capsys, "solve", "--rule", "stv", "--priority", "lpml",
                       "--weights", w, "--input", cycle_file)
    assert code == 2 and "m=4" in err


def test_budget_exit_code(capsys, cycle_file):
    code, out, _ = run(capsys, "solve", "--rule", "stv", "--max-nodes", 1, "--input", cycle_file)
    assert code == 3 and json.loads(out)["complete"] is False


def test_usage_errors(capsys, cycle_file):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--rule", "stv"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--rule", "rp", "--prune", "maybe", "--input", str(cycle_file)])
    assert exc.value.code == 1
    assert run(capsys, "solve", "--rule", "stv", "--algo", "mc", "--input", cycle_file)[0] == 1
    assert run(capsys, "solve", "--rule", "stv", "--input", "/nonexistent.soc")[0] == 1


def test_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.soc"
    bad.write_text("3\n1,A\n2,B\n3,C\n1,1,1\n1,{1,2},3\n")
    code, _, err = run(capsys, "oracle", "--rule", "stv", "--input", bad)
    assert code == 2 and "input error" in err


def test_oracle_and_cap(capsys, tmp_path, cycle_file):
    code, out, _ = run(capsys, "oracle", "--rule", "rp", "--input", cycle_file)
    assert code == 0 and json.loads(out)["winners"] == [0, 1, 2]
    big = tmp_path / "big.soc"
    run(capsys, "gen", "--m", 6, "--n", 3, "--out", tmp_path / "g")
    big.write_text((tmp_path / "g" / "profile_0000.soc").read_text())
    assert run(capsys, "oracle", "--rule", "rp", "--input", big)[0] == 3
    assert run(capsys, "oracle", "--rule", "rp", "--cap", 6, "--input", big)[0] == 0


def test_gen_hard(capsys, tmp_path):
    out = tmp_path / "hard"
    assert run(capsys, "gen", "--rule", "rp", "--m", 4, "--n", 5, "--count", 3,
               "--seed", 2, "--hard", "--out", out)[0] == 0
    files = sorted(out.glob("*.soc"))
    assert len(files) == 3
    text = files[0].read_text()
    assert text.startswith("# hard rule=rp")
    assert parse_preflib(text).m == 4


def test_bench(capsys, tmp_path):
    run(capsys, "gen", "--m", 4, "--n", 5, "--count", 2, "--out", tmp_path / "p")
    cfg = tmp_path / "c.toml"
    cfg.write_text('[configs.mc]\nalgo = "mc"\n\n[configs.naive]\nalgo = "ndfs"\nprune = false\n')
    csv_out, js = tmp_path / "b.csv", tmp_path / "b.json"
    code, _, _ = run(capsys, "bench", "--rule", "rp", "--inputs", f"{tmp_path}/p/*.soc",
                     "--configs", cfg, "--out", csv_out, "--json", js)
    assert code == 0
    lines = csv_out.read_text().splitlines()
    assert len(lines) == 5 and lines[0].startswith("schema_version,")
    assert len(json.loads(js.read_text())["records"]) == 4
    cfg.write_text("nothing = 1\n")
    assert run(capsys, "bench", "--rule", "rp", "--inputs", f"{tmp_path}/p/*.soc",
               "--configs", cfg)[0] == 1


def test_ilp_round_trip(capsys, tmp_path, cycle_file, cycle3):
    from putwinners.ilp import ranking_to_assignment

    lp = tmp_path / "m.lp"
    assert run(capsys, "ilp", "--rule", "rp", "--target", "B", "--input", cycle_file, "--emit", lp)[0] == 0
    assert lp.read_text().startswith("\\ rp_target_1\n")
    asg = tmp_path / "a.json"
    asg.write_text(json.dumps(ranking_to_assignment(cycle3, (1, 2, 0))))
    code, out, _ = run(capsys, "ilp-check", "--model", f"{lp}-meta", "--assignment", asg)
    assert code == 0 and json.loads(out) == {"satisfied": True, "violated": []}
    asg.write_text(json.dumps(ranking_to_assignment(cycle3, (1, 0, 2))))
    _, out, _ = run(capsys, "ilp-check", "--model", f"{lp}-meta", "--assignment", asg)
    assert json.loads(out)["satisfied"] is False


def test_ilp_stdout_and_errors(capsys, tmp_path, cycle_file):
    code, out, _ = run(capsys, "ilp", "--rule", "stv", "--target", 0, "--input", cycle_file)
    assert code == 0 and out.endswith("End\n")
    assert run(capsys, "ilp", "--rule", "stv", "--target", "Z", "--input", cycle_file)[0] == 1
    soi = tmp_path / "soi.soc"
    soi.write_text("3\n1,A\n2,B\n3,C\n1,1,1\n1,1\n")
    assert run(capsys, "ilp", "--rule", "stv", "--target", 0, "--input", soi)[0] == 1


def test_console_script_entry_point(cycle_file):
    proc = subprocess.run([sys.executable, "-m", "putwinners.cli", "oracle", "--rule", "stv",
                           "--input", str(cycle_file)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["winners"] == [0, 1, 2]
