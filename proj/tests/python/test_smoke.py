# SPDX-License-Identifier: Apache-2.0
import os

import pytest

import hypo

SPECS = os.environ.get("HYPO_SPECS", os.path.join(os.path.dirname(__file__), "..", "..", "data", "specs"))


def spec(name):
    return os.path.join(SPECS, name)


def test_version():
    assert hypo.__version__ == "0.1.0"


def test_classify_condition_one():
    report = hypo.classify(spec("one_signed.toml"))
    assert report["verdict"]["outcome"] == "GH"
    assert report["verdict"]["certificate"] == "ConditionI"
    assert len(report["hash"]) == 16


def test_classify_inline_text():
    text = '[system]\nm = 1\nmu = 1\n[operator]\nkind = "harmonic_oscillator"\n[[equation]]\na = "1/2"\n'
    report = hypo.classify(text)
    assert report["verdict"]["certificate"] == "ConditionII"


def test_classify_sign_change_is_deterministic():
    a = hypo.classify(spec("sign_change.toml"), j_max=16)
    b = hypo.classify(spec("sign_change.toml"), j_max=16)
    assert a == b
    assert a["verdict"]["witness"]["kind"] == "SignChangeCase1"
    assert a["verdict"]["witness"]["verification"]["passed"]


def test_resonances():
    rows = hypo.resonances(spec("half_constant.toml"), j_max=4)
    assert [r["lambda"] for r in rows] == [1.0, 3.0, 5.0, 7.0]
    assert all(r["gap_1"] == 0.5 for r in rows)
    assert hypo.resonances(spec("half_constant.toml"), j_max=0) == []


def test_solve_closed_form():
    out = hypo.solve(spec("half_constant.toml"), ["tau_1,j,re,im\n1,1,1,0\n"])
    assert out["residual"] < 1e-12
    row = out["u_csv"].splitlines()[1].split(",")
    assert row[:2] == ["1", "1"]
    assert abs(float(row[2]) - 2.0 / 3.0) < 1e-12


def test_solve_resonant_raises():
    with pytest.raises(hypo.ResonanceError):
        hypo.solve(spec("integer_resonant.toml"), ["tau_1,j,re,im\n-1,1,1,0\n"])


def test_witness_and_precondition():
    w = hypo.witness(spec("integer_resonant.toml"), kind="infinite-zero-set", j_max=8)
    assert w["verification"]["residual"] == 0.0
    with pytest.raises(hypo.PreconditionError):
        hypo.witness(spec("one_signed.toml"), kind="sign-change", j_max=8)


def test_input_error():
    with pytest.raises(hypo.InputError):
        hypo.classify("[system]\nm = 1\nbogus = 1\n")


def test_check_condition():
    rep = hypo.check_condition(["1/2"], [1, 3, 5, 7, 9, 11], sigma=2.0, mu=1.0)
    assert rep["verdict"] == "HoldsUpToBounds"
    assert rep["min_gap"] == 0.5


def test_content_hash():
    assert hypo.content_hash("") == "cbf29ce484222325"
