import json

import pytest

from roteprover import checks, workbench
from roteprover.automata import textio
from roteprover.cli import main


def test_search_counts_csv(capsys):
    assert main(["search", "--non-strict", "--counts", "60"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,count,bound_16n,ok"
    rows = [list(map(int, line.split(","))) for line in lines[1:]]
    assert [r[0] for r in rows] == list(range(1, 61))
    assert rows[57] == [58, 864, 928, 1]


def test_search_words(capsys):
    assert main(["search"]) == 0
    out = capsys.readouterr()
    words = out.out.split()
    assert len(words) == 822 and len(words[0]) == 38
    assert set(words[:8]) >= set(checks.LISTED_38)
    assert "max_depth=38" in out.err


def test_search_node_budget(capsys):
    assert main(["search", "--max-nodes", "50"]) == 1
    assert "error" in capsys.readouterr().err


def test_export_round_trip(tmp_path):
    path = tmp_path / "dfao.txt"
    assert main(["export", "dfao", str(path)]) == 0
    assert textio.loads(path.read_text()) == workbench.system("dt_q").dfao()


def test_export_system_and_unknown(capsys):
    assert main(["export", "system", "-", "--system", "dt_h"]) == 0
    assert capsys.readouterr().out.strip()
    assert main(["export", "nonexistent", "-", "--system", "dt_h"]) == 2


def test_script_command(tmp_path, capsys):
    path = tmp_path / "s.txt"
    path.write_text('eval all "Ax Ey y=x+1":\neval none "Ex x<0"\n')
    assert main(["script", str(path), "--system", "dt_h"]) == 0
    out = capsys.readouterr().out
    assert "all: TRUE" in out and "none: FALSE" in out
    path.write_text('eval bad "x=1"\n')
    assert main(["script", str(path)]) == 1


def test_check_report(tmp_path, capsys):
    report = tmp_path / "r.json"
    assert main(["check", "reversible-15", "--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data[0]["name"] == "reversible-15" and data[0]["verdict"] == "PASS"
    assert set(data[0]["sources"].values()) <= {"claimed", "derived", "trivial"}
    assert "ALL PASS" in capsys.readouterr().out
    assert main(["check", "no-such-check"]) == 2


def test_inconclusive_on_exhaustion(monkeypatch):
    def boom(ctx, r):
        raise MemoryError("budget")
    monkeypatch.setitem(checks.REGISTRY, "boom", boom)
    rep = checks.run_check("boom", checks.Context())
    assert rep.verdict == checks.INCONCLUSIVE
    assert not checks.suite_passed([rep])


def test_conjectural_reports_do_not_gate():
    r = checks.CheckReport("x", conjectural=True)
    r.expect("k", 1, 2)
    r.settle()
    assert r.verdict == checks.CONJECTURAL_FAIL and not r.gating
    assert checks.suite_passed([r])


def test_context_rejects_other_systems():
    with pytest.raises(ValueError):
        checks.Context("dt_h")
