import csv
import json

import pytest

from polytriple.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    payload = json.loads(out)
    assert payload["schemaVersion"] == "1.0"
    assert {"command", "inputs", "result", "provenance"} <= payload.keys()
    return code, payload


def test_classify_json(capsys):
    code, p = run_json(capsys, "classify", "--triple", "3,5,9", "--json")
    assert code == 0
    assert p["result"]["verdict"] == "AlmostUniversal" and p["result"]["witnesses"]["p"] == 7


def test_classify_obstruction(capsys):
    code, p = run_json(capsys, "classify", "--triple", "4,4,4")
    assert code == 0 and p["result"]["verdict"] == "LocalObstruction"


def test_classify_bad_order_exit_2(capsys):
    assert main(["classify", "--triple", "2,4,5"]) == 2


def test_classify_malformed_triple_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--triple", "3,x,5"])
    assert exc.value.code == 2


def test_classify_routes(capsys):
    _, p = run_json(capsys, "classify", "--consecutive", "5")
    assert p["result"]["verdict"] == "AlmostUniversal"
    _, p = run_json(capsys, "classify", "--power-family", "2,2,2,1,5,3")
    assert p["result"]["matched_statement"] == "power-family(i)"
    _, p = run_json(capsys, "classify", "--fermat", "1,2,3")
    assert p["result"]["residue_class"] == 2
    _, p = run_json(capsys, "classify", "--mersenne", "3,5,7")
    assert p["result"]["residue_class"] == 1
    assert main(["classify", "--fermat", "1,1,2"]) == 2


def test_classify_csv(capsys):
    code, out = run(capsys, "classify", "--triple", "3,4,5", "--csv")
    rows = list(csv.reader(out.splitlines()))
    assert code == 0 and len(rows) == 2 and "verdict" in rows[0]


def test_search_zero_gaps(capsys):
    code, p = run_json(capsys, "search", "--triple", "3,4,5", "--bound", "100000")
    assert code == 0 and p["result"]["gaps"] == []


def test_search_windowed_gaps_carry_t2(capsys):
    code, p = run_json(capsys, "search", "--triple", "4,5,6", "--bound", "100000", "--window", "1000")
    assert code == 0
    for a in p["result"]["annotations"]:
        if a["n"] >= 1000:
            assert any(w[0] == 2 for w in a["witnesses"])


def test_search_strict_obstruction_is_not_tension(capsys):
    code, p = run_json(capsys, "search", "--triple", "4,4,4", "--bound", "1000", "--strict")
    assert code == 0 and p["result"]["gaps"]


def test_search_strict_tension_exit_3(capsys):
    code, p = run_json(capsys, "search", "--triple", "10,10,13", "--bound", "5000", "--window", "0", "--strict")
    assert code == (3 if p["result"]["tension_items"] else 0)


def test_search_memory_cap_exit_4(capsys):
    assert main(["search", "--triple", "3,4,5", "--bound", "1000000", "--memory-cap", "1000"]) == 4


def test_search_config_file(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"memory_cap_bytes": 100}))
    monkeypatch.setenv("POLYTRIPLE_CONFIG", str(cfg))
    assert main(["search", "--triple", "3,4,5", "--bound", "10000"]) == 4


def test_search_gap_csv(capsys, tmp_path):
    out = tmp_path / "gaps.csv"
    code, _ = run_json(capsys, "search", "--triple", "4,4,4", "--bound", "200", "--gaps-out", str(out))
    rows = list(csv.reader(out.read_text().splitlines()))
    assert code == 0
    assert rows[0] == ["n", "in_S", "witness_t", "witness_r", "tension"]
    assert [int(r[0]) for r in rows[1:]][:3] == [7, 15, 23]


def test_symbols(capsys):
    _, p = run_json(capsys, "symbols", "hilbert", "--", "-1", "-1", "2")
    assert p["result"]["value"] == -1
    _, p = run_json(capsys, "symbols", "isotropic", "--form", "1,2,3", "--p", "2")
    assert p["result"]["value"] is False
    _, p = run_json(capsys, "symbols", "aniso-primes", "--triple", "3,4,5")
    assert p["result"]["value"] == [2]


def test_symbols_non_prime_place_exit_2(capsys):
    assert main(["symbols", "hilbert", "--", "3", "5", "9"]) == 2
    assert main(["symbols", "isotropic", "--form", "1,2,3", "--p", "4"]) == 2


def test_verify_flag_does_not_change_results(capsys):
    for argv in (["symbols", "hilbert", "--", "3", "-5", "2"], ["symbols", "isotropic", "--form", "1,1,1", "--p", "2"]):
        _, plain = run_json(capsys, *argv)
        _, checked = run_json(capsys, *argv, "--verify")
        assert plain["result"]["value"] == checked["result"]["value"]


def test_exceptional(capsys):
    _, p = run_json(capsys, "exceptional", "--triple", "3,4,5", "--n", "4")
    assert p["result"] == [[2, 10]]
    _, p = run_json(capsys, "exceptional", "--triple", "3,4,5", "--n", "1")
    assert p["result"] == []
    _, p = run_json(capsys, "exceptional", "--triple", "3,4,5", "--range", "0:10", "--t", "2")
    hits = [r["n"] for r in p["result"] if r["witnesses"]]
    assert hits[:2] == [0, 4]
    # 48n + 8 = 2 r^2 iff 24n + 4 is a square iff 6n + 1 is a square
    assert hits == [n for n in range(11) if int((6 * n + 1) ** 0.5) ** 2 == 6 * n + 1]
