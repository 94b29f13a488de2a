import csv
import io

import numpy as np
import pytest

import rigidmatch as rm


def test_distance_matrix():
    d = rm.distance_matrix([[0, 0], [3, 4]])
    assert d.shape == (2, 2)
    assert d[0, 1] == 5.0 and d[1, 1] == 0.0


def test_noiseless_match_recovers_truth():
    inst = rm.generate_instance(8, 15, eps=0.0, seed=3)
    for engine in ("bp", "jt"):
        r = rm.match(inst["template"], inst["scene"], engine=engine, mode="delta")
        assert r["assignment"] == inst["truth"]
        assert r["residual"] < 1e-20
        assert r["converged"]


def test_numpy_and_lists_agree():
    inst = rm.generate_instance(6, 9, eps=0.01, seed=1)
    a = rm.match(inst["template"], inst["scene"])
    b = rm.match(inst["template"].tolist(), inst["scene"].tolist())
    assert a["assignment"] == b["assignment"]


def test_small_template_routes_to_oracle():
    inst = rm.generate_instance(4, 6, seed=2)
    r = rm.match(inst["template"], inst["scene"])
    assert r["engine"] == "oracle"
    assert r["note"]
    assign, residual = rm.brute_force_objective(inst["template"], inst["scene"], injective=True)
    assert assign == inst["truth"]
    assert residual == pytest.approx(0.0, abs=1e-20)


def test_trace_and_residual():
    inst = rm.generate_instance(7, 10, eps=0.0, seed=4)
    r = rm.match(inst["template"], inst["scene"], trace=True)
    assert r["trace"].startswith("iteration,clique,mse")
    assert rm.objective_residual(inst["template"], inst["scene"], r["assignment"]) == pytest.approx(r["residual"])


def test_graphs():
    assert len(rm.squared_cycle_edges(6)) == 12
    assert not rm.is_chordal(6, rm.squared_cycle_edges(6))
    assert rm.is_chordal(9, rm.three_tree_edges(9, seed=5))


def test_errors_raise():
    with pytest.raises(rm.RigidmatchError):
        rm.match(np.zeros((6, 3)), np.zeros((6, 2)))
    with pytest.raises(ValueError):
        rm.match([[0, 0]] * 6, [[0, 0]] * 6, engine="nope")


def test_benchmark_is_deterministic():
    spec = {"n": 6, "m_values": [8], "eps_values": [0.0], "trials": 3, "engines": ["bp", "jt"], "seed": 9}
    rows, summary = rm.run_benchmark(spec)
    assert rows == rm.run_benchmark(spec)[0]
    table = list(csv.DictReader(io.StringIO(rows)))
    assert len(table) == 6
    assert all(float(r["accuracy"]) == 1.0 for r in table)
    assert "mean_accuracy" in summary.splitlines()[0]
