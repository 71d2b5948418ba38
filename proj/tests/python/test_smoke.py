import cmath

import pytest

import octaflow


def test_integer_roots():
    r = octaflow.solve([-36, 546, -4536, 22449, -67284, 118124, -109584, 40320])
    assert len(r["roots"]) == 8
    got = sorted(x["root"].real for x in r["roots"])
    assert max(abs(g - k) for g, k in zip(got, range(1, 9))) < 1e-8


def test_roots_of_unity_extended():
    r = octaflow.solve([0] * 7 + [-1], precision="extended")
    assert r["dynamical"] == 8
    for x in r["roots"]:
        assert abs(abs(x["root"]) - 1) < 1e-10
        assert abs(x["root"] ** 8 - 1) < 1e-9


def test_random_octic_dynamical():
    coeffs = [cmath.rect(0.5, k) for k in range(8)]
    r = octaflow.solve(coeffs, seed=3)
    assert r["status"] == "ok"
    assert all(x["rel_residual"] < 1e-8 for x in r["roots"])


def test_bad_input():
    with pytest.raises(ValueError):
        octaflow.solve([1, 2, 3])
    with pytest.raises(ValueError):
        octaflow.solve([1] * 8, precision="quad")
    with pytest.raises(OSError):
        octaflow.solve([1] * 8, tables="/nonexistent.json")
    with pytest.raises(ValueError):
        octaflow.restricted_map("nope", 0.5)


def test_line_model():
    assert abs(octaflow.restricted_map("line28", 0.5)) < 0.5
    z = 0.3 + 0.2j
    want = -z**3 * (7 * z - 4) / (4 * z - 7)
    assert abs(octaflow.restricted_map("line28", z) - want) < 1e-14


def test_g4_and_k_invariants():
    u = [0.3, -0.1j, 0.7, 0.2 + 0.2j, -0.5, 0.1, 0.9j]
    g = octaflow.g4(u)
    assert len(g) == 7
    assert len(octaflow.k_invariants(u)) == 6


def test_basin():
    img = octaflow.render_basin("line28", width=32, height=32)
    assert len(img["attractors"]) == 2
    assert len(img["labels"]) == 32 * 32
    assert img["ppm"].startswith(b"P6\n32 32\n255\n")
    quad = octaflow.render_basin("L2_105", width=24, height=24)
    assert len(quad["attractors"]) == 4


def test_verify():
    r = octaflow.verify_tables(trials=2, exact_trials=1)
    assert r["ok"], r["failures"]
    assert r["conjugacy"] < 1e-9


def test_default_tables_env(monkeypatch):
    monkeypatch.setenv("OCTAFLOW_TABLES", "/tmp/elsewhere.json")
    assert octaflow.default_tables() == "/tmp/elsewhere.json"
