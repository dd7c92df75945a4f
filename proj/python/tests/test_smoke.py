import math

import numpy as np
import pytest

import cqblab


def flag():
    return cqblab.assemble("A", 2, [1, 2], "c=1,1")


def test_flag_sign_pattern():
    r = flag()
    assert r.n == 3
    assert r.frame_labels == ["a2,3", "a1,2", "a1,3"]
    assert np.allclose(r.ricci(), 2 * np.eye(3))
    assert abs(cqblab.form_eigenvalues(r, "cqb")[0]) < 1e-8
    assert cqblab.form_eigenvalues(r, "dcqb")[0] > 0
    assert cqblab.form_check(r, "cqb")["verdict"] == "nonnegative_with_kernel"
    assert cqblab.q_eigenvalues(r)[-1] == pytest.approx(2.0)


def test_ke_positive_example():
    r = cqblab.assemble("A", 5, [2, 4])
    assert cqblab.einstein_constant(r) == pytest.approx(1.0)
    assert cqblab.form_check(r, "cqb")["verdict"] == "positive"
    assert cqblab.form_check(r, "dcqb")["verdict"] == "positive"


def test_rank1_matches_outer_product_value():
    r = cqblab.random_kahler_operator(3, 4)
    rep = cqblab.rank1_check(r, "cqb", starts=16)
    m = rep["witness"]["map"]
    w = np.array(m["re"]) + 1j * np.array(m["im"])
    assert cqblab.cqb_value(r, w) / np.linalg.norm(w) ** 2 == pytest.approx(rep["min_value"], abs=1e-8)
    assert rep["min_value"] <= cqblab.form_eigenvalues(r, "cqb")[-1]


def test_tensor_json_round_trip():
    r = flag()
    back = cqblab.Tensor.from_json(r.to_json())
    assert (back + (-1.0) * r).norm() == 0.0


def test_flow_closed_form():
    r = cqblab.Tensor(1)
    r.set(0, 0, 0, 0, 1.0)
    tr = cqblab.integrate(r, 0.5, dt=1e-3)
    assert tr["t"][-1] == pytest.approx(0.5)
    assert tr["final"](0, 0, 0, 0).real == pytest.approx(2.0, abs=1e-6)
    assert not tr["truncated"]


def test_mostow_siu_negative():
    r = cqblab.mostow_siu(2, 2.0, 1.0, 2.0)
    assert cqblab.form_eigenvalues(r, "cqb")[-1] < 0
    assert cqblab.form_eigenvalues(r, "dcqb")[-1] < 0


def test_run_job_exit_codes():
    code, report, _, _ = cqblab.run({"command": "check", "family": "A", "rank": 2, "phi": "1,2", "metric": "c=1,1", "sign": "pos"})
    assert code == 2
    assert report["verdict"] == "nonnegative_with_kernel"
    code, _, _, err = cqblab.run({"command": "check", "family": "A", "rank": 2, "phi": "1,,2"})
    assert code == 1 and err
    code, report, csv, _ = cqblab.run({"command": "flow", "n": 1, "k0": 1.0, "t_max": 0.5, "dt": 1e-3})
    assert code == 0
    assert math.isclose(report["final_k"], 2.0, abs_tol=1e-6)
    assert csv.startswith("t,norm_R")
