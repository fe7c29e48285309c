"""Command-line interface end to end."""

import csv
import os
import re
import shutil

import pytest

from conftest import INSTANCE_DIR
from wcfg.cli import main

SAMPLE = os.path.join(os.path.dirname(__file__), os.pardir, "sample")
G0 = os.path.join(SAMPLE, "g0.gr")
DOMAINS = os.path.join(SAMPLE, "domains.txt")
DAY = os.path.join(SAMPLE, "day.inst")


@pytest.mark.parametrize("backend", ["m", "d", "de", "monolithic"])
def test_propagate_ok(backend, capsys):
    assert main(["propagate", G0, DOMAINS, "--z", "3",
                 "--backend", backend]) == 0
    assert capsys.readouterr().out.strip() == "X1={a} X2={b} root_min=3"


def test_propagate_infeasible(capsys):
    assert main(["propagate", G0, DOMAINS, "--z", "2"]) == 1
    assert capsys.readouterr().out.strip() == "infeasible"


def test_propagate_bad_inputs(capsys):
    assert main(["propagate", "no-such-file.gr", DOMAINS, "--z", "3"]) == 2
    assert main(["propagate", G0, DOMAINS, "--z", "3",
                 "--backend", "quantum"]) == 2
    assert main(["propagate", G0, DOMAINS]) == 2   # missing --z
    assert "error" in capsys.readouterr().err


def test_soft_encodes_and_propagates(tmp_path, capsys):
    out = tmp_path / "enc.gr"
    assert main(["soft", G0, "--distance", "edit", "-o", str(out),
                 "--z", "3", "--domains", DOMAINS]) == 0
    text = out.read_text()
    assert "eps" in text
    err = capsys.readouterr().err
    assert "root_min=" in err


def test_soft_hamming_to_stdout(capsys):
    assert main(["soft", G0, "--distance", "hamming"]) == 0
    out = capsys.readouterr().out
    # G0 already has every substitution; only the marker is added
    assert "mask soft-encoded:" in out
    assert "S -> A B @ 0" in out


def test_oracle_table_and_string(capsys):
    assert main(["oracle", G0, "--max-len", "2"]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "aa: 5", "ab: 3", "ba: 7", "bb: 5"]
    assert main(["oracle", G0, "--string", "ab"]) == 0
    assert capsys.readouterr().out.strip() == "ab: min_weight=3"
    assert main(["oracle", G0, "--string", "aba"]) == 1


def test_solve_log_format(capsys):
    assert main(["solve", DAY]) == 0
    lines = capsys.readouterr().out.splitlines()
    for line in lines[:-1]:
        assert re.fullmatch(r"cost=\d+ time=\d+\.\d{3} bt=\d+", line)
    assert re.fullmatch(r"status=Optimal BT=\d+", lines[-1])
    costs = [int(line.split()[0].split("=")[1]) for line in lines[:-1]]
    assert costs == sorted(costs, reverse=True)


def test_bench_writes_csv_and_figure(tmp_path, capsys):
    for name in ("desk01.inst", "desk02.inst"):
        shutil.copy(os.path.join(INSTANCE_DIR, name), tmp_path / name)
    assert main(["bench", str(tmp_path)]) == 0
    csv_path = tmp_path / "bench.csv"
    png_path = tmp_path / "bench.png"
    assert csv_path.exists() and png_path.exists()
    with open(csv_path) as f:
        rows = list(csv.DictReader(f))
    assert rows and list(rows[0]) == ["instance", "backend", "cost",
                                      "time", "bt", "BT"]
    assert {r["backend"] for r in rows} \
        == {"monolithic", "decomposition", "decomposition-entailment"}
    for stem in ("desk01", "desk02"):
        costs = {r["cost"] for r in rows if r["instance"] == stem}
        assert len(costs) == 1


def test_bench_empty_directory(tmp_path, capsys):
    assert main(["bench", str(tmp_path)]) == 2
