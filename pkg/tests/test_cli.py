import json
import os
import subprocess
import sys

from speclab.cli import main


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "speclab.cli", *args],
        capture_output=True,
        text=True,
        env=env,
    )


def test_sample_and_spectrum_pipeline(tmp_path):
    rep_path = tmp_path / "rep.json"
    assert main(["sample", "--seed", "3", "--output", str(rep_path)]) == 0
    doc = json.loads(rep_path.read_text())
    assert doc["genus"] == 1 and doc["punctures"] == 1
    out_path = tmp_path / "spec.csv"
    code = main(
        [
            "spectrum",
            "--rep-file",
            str(rep_path),
            "--maxlen",
            "2",
            "--format",
            "csv",
            "--output",
            str(out_path),
        ]
    )
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "class,trace,length"
    assert len(lines) == 13  # 12 classes of length <= 2


def test_pattern_command(tmp_path, capsys):
    rep_path = tmp_path / "rep.json"
    main(["sample", "--seed", "5", "--output", str(rep_path)])
    assert main(["pattern", "--rep-file", str(rep_path), "--maxlen", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    flat = sorted(w for b in doc["blocks"] for w in b)
    assert len(flat) == 12
    assert any({"a1", "A1"} <= set(b) for b in doc["blocks"])


def test_compare_self_holds(tmp_path, capsys):
    rep_path = tmp_path / "rep.json"
    main(["sample", "--seed", "9", "--output", str(rep_path)])
    code = main(
        ["compare", "--rep-file", str(rep_path), "--other", str(rep_path), "--maxlen", "3"]
    )
    assert code == 0
    assert json.loads(capsys.readouterr().out)["holds"] is True


def test_tracepoly_command(capsys):
    assert main(["tracepoly", "--word", "a b A B"]) == 0
    spaced = capsys.readouterr().out
    assert main(["tracepoly", "--word", "abAB"]) == 0
    compact = capsys.readouterr().out
    assert spaced == compact
    assert "t{1,2}" in compact


def test_rmin_command(capsys):
    assert main(["rmin", "--seed", "1", "ab", "ba", "aB"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    verdicts = {tuple(json.loads(l)["pair"]): json.loads(l)["verdict"] for l in lines}
    assert verdicts[("ab", "ba")] == "equal"
    assert verdicts[("ab", "aB")] == "distinct"


def test_cocycle_verify_exit_code(capsys):
    assert main(["cocycle-verify", "--seed", "7", "--samples", "100"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 7
    assert all(json.loads(l)["pass"] for l in lines)


def test_scan_command(capsys):
    assert main(["scan", "--seed", "2", "--trials", "2", "--maxlen", "3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    for l in lines:
        assert json.loads(l)["violations"] == []


def test_seed_required():
    assert main(["sample"]) == 1


def test_missing_file_is_input_error():
    assert main(["spectrum", "--rep-file", "/nonexistent/rep.json"]) == 1


def test_rep_file_and_seed_conflict(tmp_path):
    rep_path = tmp_path / "rep.json"
    main(["sample", "--seed", "3", "--output", str(rep_path)])
    assert main(["spectrum", "--rep-file", str(rep_path), "--seed", "3"]) == 1


def test_determinism_byte_identical():
    r1 = run_cli(["sample", "--seed", "123"])
    r2 = run_cli(["sample", "--seed", "123"])
    assert r1.returncode == r2.returncode == 0
    assert r1.stdout == r2.stdout
    r3 = run_cli(["scan", "--seed", "11", "--trials", "2", "--maxlen", "3"])
    r4 = run_cli(["scan", "--seed", "11", "--trials", "2", "--maxlen", "3"])
    assert r3.stdout == r4.stdout


def test_cache_dir_roundtrip(tmp_path, capsys):
    env = {"SPECLAB_CACHE_DIR": str(tmp_path)}
    r1 = run_cli(["spectrum", "--seed", "4", "--maxlen", "3"], env_extra=env)
    cached = list(tmp_path.glob("classes-*.txt"))
    assert r1.returncode == 0 and cached
    r2 = run_cli(["spectrum", "--seed", "4", "--maxlen", "3"], env_extra=env)
    assert r1.stdout == r2.stdout


def test_config_file_merging(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 3, "maxlen": 2}))
    assert main(["sample", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)["genus"] == 1
