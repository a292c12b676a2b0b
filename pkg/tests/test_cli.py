"""CLI surface: subcommands, JSON output, exit codes."""

import json

import pytest

from lmo_kernel.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_compute_both_routes(capsys):
    code, obj = run(capsys, "compute", "--framing", "2", "--lie", "A1",
                    "--order", "2")
    assert code == 0
    assert obj["routes_equal"] is True
    assert obj["routes"]["definition"] == obj["routes"]["lemma"]
    assert obj["routes"]["definition"]["coeffs"]["0"] == "1/1"


def test_compute_single_route(capsys):
    code, obj = run(capsys, "compute", "--framing", "1", "--lie", "A1",
                    "--order", "1", "--route", "definition")
    assert code == 0 and "lemma" not in obj["routes"]


def test_taupg(capsys):
    code, obj = run(capsys, "taupg", "--framing", "2", "--lie", "A1",
                    "--order", "2")
    assert code == 0
    assert obj["taupg"]["coeffs"]["0"] == "1/2"


def test_compare_exit_code_and_payload(capsys):
    code, obj = run(capsys, "compare", "--framing", "3", "--lie", "A1",
                    "--order", "2")
    assert code == 0
    assert obj["equal"] is True
    assert obj["h1_power"] == "3/1"


def test_verify_suite(capsys):
    code, obj = run(capsys, "verify", "--suite", "bernoulli")
    assert code == 0
    assert obj["passed"] is True
    assert {c["name"] for c in obj["checks"]} >= {"bernoulli.b2"}


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(["compare", "--framing", "2", "--lie", "A1", "--order", "1",
                 "--out", str(target)])
    assert code == 0
    obj = json.loads(target.read_text())
    assert obj["equal"] is True


def test_zero_framing_fails_cleanly(capsys):
    with pytest.raises(ValueError):
        main(["compute", "--framing", "0", "--lie", "A1", "--order", "1"])


def test_bad_suite_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "bogus"])
