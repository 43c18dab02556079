"""Exercises the argparse front end in process via main(argv)."""

import json

import pytest

from confrank.cli import main


@pytest.fixture()
def synth_csv(tmp_path):
    path = tmp_path / "toy.csv"
    rc = main([
        "synth", "--binary", "5", "--interactions", "none",
        "--seed", "3", "--out", str(path),
    ])
    assert rc == 0
    return path


def run_args(csv_path, out_dir, *extra):
    return [
        "run", "--data", str(csv_path), "--repeats", "3",
        "--out", str(out_dir), *extra,
    ]


def test_synth_writes_a_loadable_table(synth_csv):
    header = synth_csv.read_text().splitlines()[0]
    assert header == "b1,b2,b3,b4,b5,perf"
    assert len(synth_csv.read_text().splitlines()) == 33  # header + 2^5


def test_run_produces_report_files(synth_csv, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(run_args(synth_csv, out)) == 0
    printed = capsys.readouterr().out.splitlines()
    assert [p.split("/")[-1] for p in printed] == [
        "report.json", "sk_tables.txt", "summary.csv", "traces.csv",
    ]
    doc = json.loads((out / "report.json").read_text())
    assert doc["settings"]["repeats"] == 3
    assert doc["datasets"]["toy"]["rows"] == 32
    assert len(doc["cells"]) == 9


def test_hyphenated_approach_spelling_is_accepted(synth_csv, tmp_path):
    out = tmp_path / "out"
    rc = main(run_args(synth_csv, out, "--approaches", "rank-based"))
    assert rc == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["settings"]["approaches"] == ["rank_based"]


def test_duplicate_approaches_collapse(synth_csv, tmp_path):
    out = tmp_path / "out"
    rc = main(run_args(
        synth_csv, out, "--approaches", "progressive,progressive",
    ))
    assert rc == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["settings"]["approaches"] == ["progressive"]


def test_sweep_lives_writes_csv(synth_csv, tmp_path, capsys):
    out = tmp_path / "sweep"
    rc = main([
        "sweep-lives", "--data", str(synth_csv), "--repeats", "2",
        "--out", str(out), "--lives-values", "2,4",
    ])
    assert rc == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "dataset,lives,median_measurements,median_best_rank"
    assert len(lines) == 3
    assert lines[1].startswith("toy,2,")
    assert lines[2].startswith("toy,4,")
    assert capsys.readouterr().out.strip().endswith("sweep.csv")


def test_maximize_perf_runs_clean(synth_csv, tmp_path):
    out = tmp_path / "out"
    rc = main(run_args(synth_csv, out, "--maximize-perf"))
    assert rc == 0
    doc = json.loads((out / "report.json").read_text())
    assert all(c["rd"] is not None for c in doc["cells"])


def test_missing_data_file_exits_2(tmp_path, capsys):
    rc = main(run_args(tmp_path / "absent.csv", tmp_path / "out"))
    assert rc == 2
    assert "confrank:" in capsys.readouterr().err


def test_malformed_csv_exits_2(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,perf\n1,2\n")
    rc = main(run_args(bad, tmp_path / "out"))
    assert rc == 2


def test_bad_split_exits_1(synth_csv, tmp_path, capsys):
    rc = main(run_args(synth_csv, tmp_path / "out", "--split", "0.5,0.5"))
    assert rc == 1
    assert "three comma-separated" in capsys.readouterr().err


def test_unknown_approach_exits_1(synth_csv, tmp_path):
    rc = main(run_args(
        synth_csv, tmp_path / "out", "--approaches", "simulated",
    ))
    assert rc == 1


def test_zero_repeats_exits_1(synth_csv, tmp_path):
    rc = main([
        "run", "--data", str(synth_csv), "--repeats", "0",
        "--out", str(tmp_path / "out"),
    ])
    assert rc == 1


def test_bad_lives_values_exit_1(synth_csv, tmp_path):
    rc = main([
        "sweep-lives", "--data", str(synth_csv), "--repeats", "2",
        "--out", str(tmp_path / "out"), "--lives-values", "two,three",
    ])
    assert rc == 1


def test_synth_needs_a_feature(tmp_path):
    rc = main([
        "synth", "--binary", "0", "--numeric", "0",
        "--out", str(tmp_path / "x.csv"),
    ])
    assert rc == 1


def test_missing_subcommand_exits_1(capsys):
    assert main([]) == 1
    assert "confrank:" in capsys.readouterr().err
