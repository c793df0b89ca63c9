import math
import os
from pathlib import Path

import pytest

import dlive

PROBLEMS = Path(os.environ.get("DLIVE_PROBLEMS", Path(__file__).resolve().parents[2] / "problems"))


def read(name):
    return (PROBLEMS / name).read_text()


def test_ex1_proved():
    r = dlive.check(read("ex1.dl"))
    assert r["verdict"] == "Proved"
    assert r["exit_code"] == 0
    assert "GEx" in r["trace"]


def test_check_file_matches_check():
    assert dlive.check_file(PROBLEMS / "ex2.dl") == dlive.check(read("ex2.dl"))


def test_ce1_refused():
    r = dlive.check(read("ce1.dl"))
    assert "RuleRefused(GlobalLipschitz)" in r["trace"]
    assert r["exit_code"] == 2


def test_parse_error():
    with pytest.raises(dlive.ParseError):
        dlive.check("ode { x' = }")


def test_normalize_round_trip():
    text = dlive.normalize(read("ex2.dl"))
    assert dlive.normalize(text) == text


def test_lie():
    assert dlive.lie(read("ex1.dl"), "u", 2) == "2*v"


def test_simulate_escape_time():
    r = dlive.simulate(read("ex2.dl"), {"u": 1.0, "v": 0.0})
    assert r["event"] == "GoalEntered"
    assert r["event_time"] == pytest.approx(2 * math.log(7 / 6), abs=1e-6)
    assert len(r["times"]) == len(r["states"])


def test_falsify_witnesses():
    r = dlive.falsify(read("ex2.dl"), samples=8, seed=1)
    assert r["exit_code"] == 0
    assert all(s["class"] == "WITNESS" for s in r["samples"])


def test_catalog():
    results = dlive.catalog()
    assert [r["id"] for r in results] == ["CE-1", "CE-2", "CE-3", "CE-4"]
    assert all(r["pass"] for r in results)
