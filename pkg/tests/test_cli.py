import json
from pathlib import Path

from corpus import ACCEPT_A, PING_PONG, spec_with
from debilandia.cli import main
from debilandia.embedding import compile_direct
from debilandia.instances import Instance, build_candidate, instance_to_json_obj
from debilandia.tiles import atlas_default


def write_instance(path: Path, values, gens, marker) -> None:
    inst = Instance(tuple(values))
    path.write_text(json.dumps(instance_to_json_obj(inst, build_candidate(inst, gens, marker))))


def write_points(path: Path, points) -> None:
    path.write_text(json.dumps({"points": [list(p) for p in sorted(points)]}))


def test_verify_accepts_fixture(tmp_path, capsys):
    inst_file = tmp_path / "accept.json"
    write_instance(inst_file, ACCEPT_A, 1, 25)
    report_file = tmp_path / "report.json"
    trace_file = tmp_path / "trace.jsonl"
    rc = main(
        [
            "verify",
            "--instance",
            str(inst_file),
            "--report",
            str(report_file),
            "--trace",
            str(trace_file),
        ]
    )
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "accept"
    report = json.loads(report_file.read_text())
    assert report["total_counted"] <= report["bound"]
    for line in trace_file.read_text().splitlines():
        assert "outcome" in json.loads(line)


def test_verify_rejects_bad_first_element(tmp_path, capsys):
    inst_file = tmp_path / "bad_first.json"
    obj = {"A": [1, 3], "L": [3, 1, 1, 5, 25]}
    inst_file.write_text(json.dumps(obj))
    rc = main(["verify", "--instance", str(inst_file)])
    assert rc == 1
    out = json.loads(capsys.readouterr().out)
    assert out["reason"] == "condition_1"
    assert out["step"] == 1


def test_verify_malformed_file_exits_two(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["verify", "--instance", str(broken)]) == 2
    missing_keys = tmp_path / "nokeys.json"
    missing_keys.write_text("{}")
    assert main(["verify", "--instance", str(missing_keys)]) == 2


def test_verify_reports_are_byte_identical(tmp_path):
    inst_file = tmp_path / "inst.json"
    write_instance(inst_file, ACCEPT_A, 1, 25)
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["verify", "--instance", str(inst_file), "--report", str(r1)]) == 0
    assert main(["verify", "--instance", str(inst_file), "--report", str(r2)]) == 0
    assert r1.read_bytes() == r2.read_bytes()


def test_simulate_writes_parseable_trace(tmp_path, capsys):
    atlas = atlas_default()
    points_file = tmp_path / "points.json"
    write_points(points_file, compile_direct(spec_with(PING_PONG, "11"), atlas))
    trace_file = tmp_path / "trace.jsonl"
    rc = main(
        [
            "simulate",
            "--points",
            str(points_file),
            "--max-gens",
            "50",
            "--trace",
            str(trace_file),
        ]
    )
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["status"] == "cycle"
    assert summary["period"] == 2
    lines = trace_file.read_text().splitlines()
    assert len(lines) == summary["generations"]
    for line in lines:
        record = json.loads(line)  # every line parses on its own
        assert set(record) == {"gen", "outcome", "state_hash", "changed_cells"}


def test_simulate_traces_are_deterministic(tmp_path):
    atlas = atlas_default()
    points_file = tmp_path / "points.json"
    write_points(points_file, compile_direct(spec_with(PING_PONG, "11"), atlas))
    t1, t2 = tmp_path / "t1.jsonl", tmp_path / "t2.jsonl"
    for t in (t1, t2):
        assert main(["simulate", "--points", str(points_file), "--max-gens", "9", "--trace", str(t)]) == 0
    assert t1.read_bytes() == t2.read_bytes()


def test_simulate_rejects_bad_points_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"points": [[1, -2]]}))
    assert main(["simulate", "--points", str(bad)]) == 2


def test_encode_emits_json_and_text(tmp_path):
    out = tmp_path / "inst.json"
    rc = main(["encode", "--set-a", "1,3", "--e", "2", "--marker", "25", "--out", str(out)])
    assert rc == 0
    obj = json.loads(out.read_text())
    assert obj["A"] == [1, 3]
    assert obj["L"][0] == 2 and obj["L"][-1] == 25
    text = out.with_suffix(".txt").read_text().strip()
    assert text == " ".join(str(v) for v in obj["L"])


def test_solve_round_trips_through_verify(tmp_path, capsys):
    out = tmp_path / "cert.json"
    set_a = ",".join(str(v) for v in ACCEPT_A)
    rc = main(["solve", "--set-a", set_a, "--max-gens", "16", "--cap", "16", "--out", str(out)])
    assert rc == 0
    capsys.readouterr()
    assert main(["verify", "--instance", str(out)]) == 0


def test_solve_none_found_exits_one(tmp_path, capsys):
    out = tmp_path / "cert.json"
    rc = main(["solve", "--set-a", "1,3", "--max-gens", "8", "--out", str(out)])
    assert rc == 1
    assert "no certificate" in capsys.readouterr().err
    assert not out.exists()


def test_solve_cap_exceeded_exits_two(tmp_path, capsys):
    out = tmp_path / "cert.json"
    set_a = ",".join(str(v) for v in ACCEPT_A)
    rc = main(["solve", "--set-a", set_a, "--out", str(out)])
    assert rc == 2
    assert "exponential" in capsys.readouterr().err


def test_bench_csv(tmp_path):
    csv_file = tmp_path / "bench.csv"
    rc = main(["bench", "--sizes", "1,2", "--trials", "2", "--seed", "5", "--csv", str(csv_file)])
    assert rc == 0
    lines = csv_file.read_text().splitlines()
    assert lines[0].split(",")[:4] == ["m", "trial", "cells_placed", "factorial_sq_claim"]
    assert len(lines) == 1 + 4


def test_unknown_subcommand_exits_two(capsys):
    assert main(["frobnicate"]) == 2
    assert "usage" in capsys.readouterr().err.lower()


def test_atlas_env_override(tmp_path, monkeypatch, capsys):
    atlas_file = tmp_path / "atlas.json"
    atlas_default().save(atlas_file)
    monkeypatch.setenv("DEBILANDIA_ATLAS", str(atlas_file))
    points_file = tmp_path / "points.json"
    write_points(points_file, compile_direct(spec_with(PING_PONG, "11"), atlas_default()))
    assert main(["simulate", "--points", str(points_file), "--max-gens", "5"]) == 0
    capsys.readouterr()
    monkeypatch.setenv("DEBILANDIA_ATLAS", str(tmp_path / "missing.json"))
    assert main(["simulate", "--points", str(points_file), "--max-gens", "5"]) == 2
