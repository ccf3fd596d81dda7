from __future__ import annotations

import json
import re

import pytest

from fanopic.cli import UsageError, build_parser, main, parse_args
from fanopic.registry import find_record


@pytest.fixture
def out(tmp_path):
    return str(tmp_path / "reports.json")


def test_parse_verify_with_primes():
    cmd = parse_args(["verify", "--family", "2.32", "--primes", "10007,10009,10037"])
    assert cmd.subcommand == "verify" and cmd.families == ["2.32"]
    assert cmd.primes == (10007, 10009, 10037)


def test_parse_report():
    assert parse_args(["report", "--kind", "summary"]).subcommand == "report"


@pytest.mark.parametrize("argv", [
    ["verify", "--primes", "4"],
    ["verify", "--family", "2.32", "--primes", "4"],
    ["verify"],
    ["verify", "--all", "--family", "2.32"],
    ["verify", "--all", "--jobs", "0"],
    ["report", "--kind", "pie"],
    [],
])
def test_usage_errors(argv):
    with pytest.raises(UsageError):
        parse_args(argv)
    assert main(argv) == 2


def test_help_lists_every_flag():
    parser = build_parser()
    subs = parser._subparsers._group_actions[0].choices
    text = "\n".join(sp.format_help() for sp in subs.values())
    for flag in ("--family", "--all", "--primes", "--timeout-secs", "--jobs", "--kind", "--out", "--adhoc", "--seed"):
        assert flag in text
    assert set(subs) == {"verify", "report", "cohomology", "stabilizer", "smooth"}


def test_verify_family_exit_zero_and_report(out, capsys):
    assert main(["verify", "--family", "2.32", "--out", out]) == 0
    data = json.loads(open(out, encoding="utf-8").read())
    assert data[0]["family"] == "2.32" and data[0]["overall"] == "PASS"
    capsys.readouterr()
    assert main(["report", "--kind", "summary", "--out", out]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "2.32 | Z/2 | Z/2 | PASS"


def test_unknown_family_exit_two(out, capsys):
    assert main(["verify", "--family", "9.99", "--out", out]) == 2
    assert "9.99" in capsys.readouterr().err


def test_missing_report_exit_two(tmp_path):
    assert main(["report", "--out", str(tmp_path / "none.json")]) == 2


def test_bad_registry_path_exit_two(monkeypatch, tmp_path, out):
    monkeypatch.setenv("FANO_REGISTRY", str(tmp_path / "nowhere.json"))
    assert main(["verify", "--all", "--out", out]) == 2


def test_failing_record_exit_one(monkeypatch, tmp_path, registry, out):
    r = find_record(registry, "2.32").to_json()
    r["automorphisms"][0]["picard_matrix"] = [[1, 0], [0, 1]]
    p = tmp_path / "reg.json"
    p.write_text(json.dumps([r]), encoding="utf-8")
    monkeypatch.setenv("FANO_REGISTRY", str(p))
    assert main(["verify", "--all", "--out", out]) == 1


def test_smooth_adhoc_singular(tmp_path, capsys):
    f = tmp_path / "lines.txt"
    f.write_text("# two lines in the plane\nfactor x0 x1 x2\nx0*x1\n", encoding="utf-8")
    assert main(["smooth", "--adhoc", str(f)]) == 1
    assert "SINGULAR_MOD_P(" in capsys.readouterr().out


def test_smooth_adhoc_smooth(tmp_path):
    f = tmp_path / "flag.txt"
    f.write_text("factor x0 x1 x2\nfactor y0 y1 y2\nx0*y0 + x1*y1 + x2*y2\n", encoding="utf-8")
    assert main(["smooth", "--adhoc", str(f), "--primes", "10007"]) == 0


def test_smooth_adhoc_malformed(tmp_path):
    f = tmp_path / "empty.txt"
    f.write_text("x0*x1\n", encoding="utf-8")
    assert main(["smooth", "--adhoc", str(f)]) == 2


def test_smooth_registry_family(capsys):
    assert main(["smooth", "--family", "3.25"]) == 0
    assert "CERTIFIED_SMOOTH_MOD_P" in capsys.readouterr().out


def test_cohomology_family_and_random(capsys):
    assert main(["cohomology", "--family", "4.1", "--random", "10", "--seed", "3"]) == 0
    text = capsys.readouterr().out
    assert "4.1: 30 subgroups, H1 trivial for all" in text
    assert "10/10 with H1 = 0" in text


def test_stabilizer_orders(capsys):
    assert main(["stabilizer", "--family", "2.12", "--family", "3.27"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert re.match(r"2\.12: order 2, Z/2, realized group contained", lines[0])
    assert re.match(r"3\.27: order 6, S3, realized group contained", lines[1])
