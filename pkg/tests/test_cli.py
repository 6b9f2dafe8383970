"""CLI behaviour: output formats, exit codes, cache round-trips."""

import json

import pytest

from psl2cert.certify import verify_certificate
from psl2cert.cli import EXIT_OK, EXIT_RANGE, EXIT_USAGE, load_cache, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_lpoly_known_primes(capsys):
    code, out = run(capsys, "lpoly", "--p", "3")
    assert code == EXIT_OK
    assert out == "P_3 = 1 - 2/9*T^2 + T^4; shape: biquadratic b=4/3\n"
    code, out = run(capsys, "lpoly", "--p", "5")
    assert code == EXIT_OK
    assert "shape: square b=-2/5" in out


def test_lpoly_rejects_composite(capsys):
    code, _ = run(capsys, "lpoly", "--p", "9")
    assert code == EXIT_USAGE


def test_lpoly_full_mode(capsys):
    code, out = run(capsys, "lpoly", "--p", "7", "--mode", "full")
    assert code == EXIT_OK
    assert "P_7 = 1 - 34/49*T^2 + T^4" in out


def test_scan_row_counts(capsys):
    code, out = run(capsys, "scan", "--pmax", "20")
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0] == "p,p_mod_4,a,b,shape_b,shape_b_times_p_integral"
    assert len(lines) == 1 + 7  # 3, 5, 7, 11, 13, 17, 19
    assert lines[1] == "3,3,0/1,-2/9,4/3,true"
    assert all(line.endswith("true") for line in lines[1:])

    code, out = run(capsys, "scan", "--pmax", "3")
    assert len(out.strip().split("\n")) == 2


def test_scan_deterministic(capsys):
    _, first = run(capsys, "scan", "--pmax", "20")
    _, second = run(capsys, "scan", "--pmax", "20")
    assert first == second


def test_certify_single(capsys):
    code, out = run(capsys, "certify", "--ell", "19")
    assert code == EXIT_OK
    assert "ell=19 verdict=Certified borel=3 cartan=3 exceptional=5" in out


def test_certify_out_of_range(capsys):
    code, _ = run(capsys, "certify", "--ell", "7")
    assert code == EXIT_RANGE


def test_certify_range_with_json(capsys, tmp_path):
    path = tmp_path / "certs.json"
    code, out = run(capsys, "certify", "--ell-range", "11:31", "--json", str(path))
    assert code == EXIT_OK
    assert "certified 7/7" in out
    docs = json.loads(path.read_text())
    assert [d["ell"] for d in docs] == ["11", "13", "17", "19", "23", "29", "31"]
    assert all(verify_certificate(d) for d in docs)


def test_certify_witness_flag(capsys):
    code, out = run(capsys, "certify", "--ell", "19", "--witnesses", "3")
    assert code == EXIT_OK
    assert "verdict=Inconclusive" in out


def test_certify_range_reports_witness_clash(capsys):
    code, out = run(capsys, "certify", "--ell-range", "11:17", "--witnesses", "13")
    assert code == EXIT_OK
    assert "ell=13 error=" in out
    assert out.strip().endswith("/3")


def test_invariants_output(capsys):
    code, out = run(capsys, "invariants")
    assert code == EXIT_OK
    assert "Delta = 16*t^10*(t-1)^8*(t+1)^8" in out
    assert "j = 256*(t^4-t^2+1)^3 / (t^4*(t-1)^2*(t+1)^2)" in out
    assert "pole orders of j: 0:4, 1:2, -1:2, oo:4 (lcm 4)" in out
    assert "kodaira: 0:I4*, 1:I2*, -1:I2*, oo:I4*" in out


def test_group_check_small(capsys):
    code, out = run(capsys, "group-check", "--ell", "5")
    assert code == EXIT_OK
    assert "orders: H=120 G=240 G/<gamma>=60" in out
    code, out = run(capsys, "group-check", "--ell", "11")
    assert code == EXIT_OK
    assert "orders: H=1320 G=2640 G/<gamma>=660" in out


def test_group_check_refuses_large_ell(capsys):
    code, _ = run(capsys, "group-check", "--ell", "17")
    assert code == EXIT_RANGE


def test_cache_roundtrip(capsys, tmp_path):
    path = tmp_path / "lpoly-cache.json"
    code, first = run(capsys, "lpoly", "--p", "5", "--cache", str(path))
    assert code == EXIT_OK
    doc = json.loads(path.read_text())
    assert doc["version"] == 1
    assert doc["entries"]["5"] == {"a": "-4/5", "b": "54/25", "mode": "FE"}

    code, second = run(capsys, "lpoly", "--p", "5", "--cache", str(path))
    assert code == EXIT_OK
    assert first == second

    entries = load_cache(str(path))
    assert str(entries[5].a) == "-4/5"


def test_cache_detects_corruption(tmp_path):
    # a well-formed entry that is simply not P_5: the load-time spot check
    # recomputes and must reject it
    path = tmp_path / "bad-cache.json"
    path.write_text(
        json.dumps({"version": 1, "entries": {"5": {"a": "0/1", "b": "2/5", "mode": "FE"}}})
    )
    with pytest.raises(ValueError):
        load_cache(str(path))


def test_cache_rejects_invalid_coefficients(tmp_path):
    # denominators must be powers of p; this entry fails re-validation
    path = tmp_path / "foreign-cache.json"
    path.write_text(
        json.dumps({"version": 1, "entries": {"5": {"a": "1/3", "b": "0/1", "mode": "FE"}}})
    )
    with pytest.raises(ValueError):
        load_cache(str(path))
