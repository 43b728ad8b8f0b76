import json

import pytest

from quarticknots import cli, plotting
from quarticknots.report import Check, Report


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_d_cell(capsys):
    code, out, err = run(capsys, "classify", "--a", "-2", "--b", "0")
    assert code == 0
    assert "cell: D" in out
    assert "segment t + s = 0" in out
    assert "circle (t + 0)^2 + (s + 0)^2 - 2 = 0" in out
    assert "runtime" in err and "runtime" not in out


def test_classify_reference_breakpoints(capsys):
    code, out, _ = run(capsys, "classify", "--a", "-14", "--b", "24")
    assert code == 0
    assert "cell: B" in out
    assert "critical_roots: [-3.0, 1.0, 2.0]" in out
    assert "  tau  -1.0" in out and "  m23  1.5" in out
    assert "[PASS] lemma13.orderings" in out


def test_classify_origin_and_coeffs(capsys):
    code, out, _ = run(capsys, "classify", "--a", "0", "--b", "0")
    assert code == 0 and "cell: O" in out
    code, out, _ = run(capsys, "classify", "--coeffs", "4,0,0")
    assert code == 0 and "normal_form: t^4 - 6 t^2 + 8 t" in out and "t -> t - 1" in out


@pytest.mark.parametrize("argv", [
    ["classify"],
    ["classify", "--coeffs", "1,2"],
    ["classify", "--a", "nan", "--b", "1"],
    ["scan", "--cell", "Z"],
    ["scan", "--cell", "B", "--resolution", "8"],
    ["verify", "--suite", "nope"],
    ["columns", "--n", "2"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["plot", "--figure", "nope"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_io_error_exit_2(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(capsys, "plot", "--figure", "cells", "--output", str(blocker / "sub" / "x.svg"))
    assert code == 2


def test_scan_d_cell(capsys, tmp_path):
    code, out, _ = run(capsys, "scan", "--cell", "D", "--resolution", "64", "--output", str(tmp_path))
    assert code == 0
    for k in ("1/3", "sqrt2/3", "1/2", "2/3"):
        assert f"[PASS] lemma20.threshold[{k}]" in out
    assert {p.name for p in tmp_path.iterdir()} == {"fibers.tsv", "fibers.svg", "report.jsonl"}
    rows = (tmp_path / "fibers.tsv").read_text().splitlines()
    assert rows[0].split("\t") == ["nabla", "analytic", "oracle"]


def test_scan_b_cell(capsys, tmp_path):
    code, out, _ = run(capsys, "--samples", "1", "scan", "--cell", "B", "--resolution", "64",
                       "--output", str(tmp_path))
    assert code == 0
    assert "agreement: 40/40" in out or "boundary_flags" in out
    matrix = (tmp_path / "agreement.tsv").read_text().splitlines()
    assert matrix[0] == "target\tanalytic\toracle\tcount"
    records = [json.loads(line) for line in (tmp_path / "report.jsonl").read_text().splitlines()]
    assert records[0]["record"] == "report" and records[1]["id"] == "thm4.oracle_agreement"


def test_scan_a_cell(capsys, tmp_path):
    code, out, _ = run(capsys, "scan", "--cell", "A", "--samples", "2", "--output", str(tmp_path))
    assert code == 0
    assert "[PASS] lemma9.no_three_condition_lines[A]" in out


def test_verify_reference_and_report(capsys, tmp_path):
    path = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "verify", "--suite", "reference", "--report", str(path))
    assert code == 0
    assert "6/6 checks passed" in out
    lines = path.read_text().splitlines()
    assert len(lines) == 7
    rec = json.loads(lines[1])
    assert set(rec) == {"record", "id", "inputs", "margin", "verdict", "detail"}


def test_reports_are_byte_stable(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    _, out1, _ = run(capsys, "--seed", "3", "verify", "--suite", "bezout", "--samples", "200", "--report", str(a))
    _, out2, _ = run(capsys, "verify", "--suite", "bezout", "--samples", "200", "--seed", "3", "--report", str(b))
    assert out1 == out2
    assert a.read_bytes() == b.read_bytes()


def test_plot_is_deterministic(capsys, tmp_path):
    for name in ("cells", "rcurves"):
        p1, p2 = tmp_path / f"{name}1.svg", tmp_path / f"{name}2.svg"
        assert run(capsys, "plot", "--figure", name, "--output", str(p1))[0] == 0
        assert run(capsys, "plot", "--figure", name, "--output", str(p2))[0] == 0
        assert p1.read_bytes() == p2.read_bytes()
        assert p1.read_text().lstrip().startswith("<?xml")


def test_plot_rcurves_arguments(capsys, tmp_path):
    path = tmp_path / "r.svg"
    code, out, _ = run(capsys, "plot", "--figure", "rcurves", "--a", "-14", "--b", "24", "--nabla", "1.2",
                       "--output", str(path))
    assert code == 0 and path.exists()
    assert "input nabla: 1.2" in out


def test_fibers_figure_needs_cell_b():
    with pytest.raises(ValueError):
        plotting.figure_fibers(a=1.0, b=1.0)


def test_ledger_gating():
    ok = {"linking": [Check("prop3b.orbit_loop", True)], "lemma7": [Check("lemma7.x", True)],
          "fibers": [Check("thm4.x", True)], "infinite": [Check("lemma3.x", True)],
          "cells": [Check("prop10.x", True)], "dcell": [Check("lemma20.x", False)]}
    ledger = cli.build_ledger(4, ok)
    status = {e.column: e.status for e in ledger.entries}
    assert status == {"E1^{-1,*}": "supported", "E1^{-2,*}": "supported", "E1^{-3,*}": "unsupported"}
    assert ledger.entries[0].claim.startswith("free cyclic at q = 3")
    assert not ledger.supported


def test_columns_failed_support_exits_nonzero(capsys, monkeypatch):
    def fake(names, seed, samples, jobs):
        return [Check(f"{names[0]}.fake", names[0] != "lemma7")]
    monkeypatch.setattr(cli, "_run_suites", fake)
    code, out, _ = run(capsys, "columns", "--n", "4")
    assert code == 1
    assert "unsupported" in out
    assert "paper-proved, machine-supported-not-machine-proved" in out
    assert "q = 3" in out


def test_columns_n3_note(capsys, monkeypatch):
    monkeypatch.setattr(cli, "_run_suites", lambda names, seed, samples, jobs: [Check(f"{names[0]}.ok", True)])
    code, out, _ = run(capsys, "columns", "--n", "3")
    assert code == 0
    assert "circle" in out
    assert "[PASS] prop3a.unique_orbit_representative" in out
    assert "[PASS] prop3b.orbit_sphere[n=3]" in out


def test_report_text_and_exit_semantics():
    rep = Report("x", {"a": 1}, {"rows": [(1, 2.5)]}, [Check("id.one", True, 0.5), Check("id.two", False)])
    text = rep.to_text()
    assert "[PASS] id.one  margin=0.5" in text and "[FAIL] id.two" in text
    assert "1/2 checks passed" in text
    assert not rep.passed
    assert "runtime" not in text
