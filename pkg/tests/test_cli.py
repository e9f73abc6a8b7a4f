import json

import pytest

from futaki import cli, moments
from futaki.report import parse_report, render_json


def write_input(tmp_path, summands, dest, m, genus=2, name="in.json"):
    data = {
        "genus": genus,
        "summands": [{"rank": r, "degree": d} for r, d in summands],
        "destabilizer": {"target": dest[0], "rank": dest[1], "degree": dest[2]},
        "polarization": str(m),
    }
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_not_destabilized(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0)], (0, 1, -1), 2)
    code, out, _ = run(capsys, "check", "--input", path)
    rep = json.loads(out)
    assert code == 0
    assert rep["value"] == "5/3" and rep["sign"] == "Positive"
    assert rep["slopes"]["comparison"] == "mu(L) < mu(U0)"
    assert rep["rr_crosscheck"]["match"] is True


def test_check_destabilized_exits_zero(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0)], (0, 1, 1), 2)
    code, out, _ = run(capsys, "check", "--input", path, "--emit", "text")
    assert code == 0
    assert "verdict: DESTABILIZED" in out


def test_check_borderline(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0)], (0, 1, 0), 3)
    code, out, _ = run(capsys, "check", "--input", path)
    rep = json.loads(out)
    assert rep["value"] == "0" and rep["verdict"] == "Borderline"


def test_text_rendering(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0), (1, 0)], (0, 1, -1), 2, genus=1)
    _, out, _ = run(capsys, "check", "--input", path, "--emit", "text")
    assert "verdict: NOT destabilized" in out
    assert "Fut1: " in out and "Fut2: " in out
    assert "RR cross-check: ok" in out


def test_genus_zero_note(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0)], (0, 1, -1), 2, genus=0)
    _, out, _ = run(capsys, "check", "--input", path, "--emit", "text")
    assert "note: genus 0" in out


def test_rr_mismatch_is_loud(tmp_path, capsys, monkeypatch):
    from futaki import equirr, report

    real = equirr.algebraic_relative_futaki

    def skewed(inv, m, table=None):
        res = real(inv, m, table)
        return equirr.AlgebraicFutaki(
            -res.value, res.a_tilde, res.differential, res.tilde_match, res.a_tilde_quarter, res.ratio, res.normalized_ratio
        )

    monkeypatch.setattr(report, "algebraic_relative_futaki", skewed)
    path = write_input(tmp_path, [(2, 0)], (0, 1, -1), 2)
    code, out, _ = run(capsys, "check", "--input", path, "--emit", "text")
    assert code == 1
    assert "RR CROSS-CHECK FAILED" in out


def test_inadmissible_exit_code(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0)], (0, 1, -1), 1)
    code, _, err = run(capsys, "check", "--input", path)
    assert code == 2 and "error:" in err


@pytest.mark.parametrize("payload", ["{", json.dumps({"genus": 1}), json.dumps([1, 2])])
def test_malformed_exit_code(tmp_path, capsys, payload):
    p = tmp_path / "bad.json"
    p.write_text(payload)
    code, _, _ = run(capsys, "check", "--input", str(p))
    assert code == 3


def test_missing_file_exit_code(tmp_path, capsys):
    code, _, _ = run(capsys, "check", "--input", str(tmp_path / "nope.json"))
    assert code == 3


def test_float_polarization_rejected(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0)], (0, 1, -1), "2.5")
    code, _, _ = run(capsys, "check", "--input", path)
    assert code == 3


def test_check_is_byte_stable(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 1), (1, 0), (3, -1)], (0, 1, -1), 3)
    outs = [run(capsys, "check", "--input", path)[1] for _ in range(3)]
    assert outs[0] == outs[1] == outs[2]


def test_json_roundtrip(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 1), (1, 0), (3, -1)], (0, 1, -1), 3)
    _, out, _ = run(capsys, "check", "--input", path)
    rep = parse_report(out)
    assert render_json(rep) == out


def test_scan_constant_sign(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0), (1, 0)], (0, 1, -1), 2, genus=1)
    code, out, _ = run(capsys, "scan", "--input", path, "--c-min", "2", "--c-max", "4", "--step", "1", "--emit", "json")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 3
    assert {r["sign"] for r in rows} == {"Positive"}


def test_scan_skips_inadmissible(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0)], (0, 1, -1), 2)
    _, out, _ = run(capsys, "scan", "--input", path, "--c-min", "1", "--c-max", "3/2", "--step", "1/2")
    lines = out.splitlines()
    assert lines[0] == "1\tskipped: inadmissible"
    assert lines[1].startswith("3/2\t")


def test_scan_equal_slopes_zero(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0)], (0, 1, 0), 2)
    _, out, _ = run(capsys, "scan", "--input", path, "--c-min", "1", "--c-max", "3", "--step", "1/2", "--emit", "json")
    rows = [r for r in json.loads(out) if "value" in r]
    assert rows and all(r["value"] == "0" for r in rows)


def test_scan_bad_step(tmp_path, capsys):
    path = write_input(tmp_path, [(2, 0)], (0, 1, -1), 2)
    code, _, _ = run(capsys, "scan", "--input", path, "--c-min", "2", "--c-max", "3", "--step", "0")
    assert code == 3


def test_enumerate(tmp_path, capsys):
    path = write_input(tmp_path, [(3, 0)], (0, 1, 0), 2)
    code, out, _ = run(capsys, "check", "--input", path, "--enumerate", "--d-min", "-1", "--d-max", "1")
    res = json.loads(out)
    assert code == 0
    assert len(res["rows"]) == 6
    assert res["minimal"]["sign"] == "Negative"


SMALL = ("--max-rank", "3", "--max-degree", "1", "--genus", "1")


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "gamma", *SMALL)
    assert code == 0
    assert out.splitlines()[0].startswith("gamma: PASS")
    assert "moments" not in out


def test_verify_unknown_suite(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "nope")
    assert code == 3


def test_verify_catches_injected_bug(capsys, monkeypatch):
    real = moments.gamma_closed

    def broken(inv, c=None):
        gam, gp = real(inv, c)
        # drop the diagonal correction on instances with three or more summands
        if inv.ell >= 2:
            gp = tuple(x * 0 for x in gp)
        return gam, gp

    monkeypatch.setattr(moments, "gamma_closed", broken)
    code, out, _ = run(capsys, "verify", "--suite", "gamma", *SMALL)
    assert code == 1
    assert "gamma: FAIL" in out
    assert "counterexample:" in out and "ranks" in out
