import math

import numpy as np
import pytest

import fairrank as fr


def test_instance_roundtrip(tmp_path):
    inst = fr.ProblemInstance(fr.Mode.ONE_SIDED, [[1.0, 0.0], [0.0, 1.0]], [1.0])
    assert inst.n_users == 2 and inst.n_items == 2 and inst.slots == 1
    path = str(tmp_path / "two.fri")
    fr.save_instance(inst, path)
    assert fr.load_instance(path) == inst


def test_invalid_instance_raises():
    with pytest.raises(fr.FairrankError, match="NonMonotoneWeights"):
        fr.ProblemInstance(fr.Mode.ONE_SIDED, [[1.0, 0.0]], [0.5, 1.0])


def test_utility_profile():
    inst = fr.ProblemInstance(fr.Mode.ONE_SIDED, [[1.0, 0.5]], [1.0])
    ranking = fr.StochasticRanking([(1.0, np.array([[0]]))])
    u = fr.utility_profile(ranking, inst)
    assert u["users"].tolist() == [1.0]
    assert u["items"].tolist() == [1.0, 0.0]


def test_leader_star_reference():
    inst, ref = fr.gen_leader_star(4)
    case = ref["cases"]["welfare"]
    u = fr.utility_profile(case["ranking"], inst)["users"]
    assert u[0] == pytest.approx(4.0)
    assert u[1:] == pytest.approx([4 / 3] * 3)


def test_solve_welfare_identity():
    inst, _ = fr.gen_qw_counterexample(2)
    result = fr.solve(inst, "welfare", iterations=2000)
    assert result["utilities"]["users"] == pytest.approx([1.0, 1.0, 1.0], abs=1e-3)
    assert result["final_gap"] >= 0
    weights = [w for w, _ in result["ranking"].atoms]
    assert math.fsum(weights) == pytest.approx(1.0, abs=1e-12)
    assert result["trace"]["gamma"][0] == pytest.approx(2 / 3)


def test_penalty_and_mode_errors():
    inst, _ = fr.gen_qw_counterexample(2)
    with pytest.raises(fr.FairrankError, match="WrongModeForKind"):
        fr.solve(inst, "eq-util", beta=1.0)
    star, _ = fr.gen_leader_star(10)
    result = fr.solve(star, "expo", beta=1e3)
    assert sum(result["utilities"]["users"]) == pytest.approx(4.0, abs=0.1)


def test_analysis_functions():
    assert fr.lorenz_curve([3, 1, 2]).tolist() == [1, 3, 6]
    assert fr.gini([1, 2, 3]) == pytest.approx(8 / 36, abs=1e-12)
    assert fr.dominance([2, 2], [1, 3]) == "dominates"
    assert fr.leximin_compare([2, 2], [1, 100]) == "greater"
    report = fr.lorenz_report([1, 2, 3, 4])
    assert report["total"] == 10


def test_random_is_deterministic():
    a = fr.gen_random(5, 7, fr.Mode.ONE_SIDED, 3, 7)
    b = fr.gen_random(5, 7, fr.Mode.ONE_SIDED, 3, 7)
    assert a == b
    assert np.array_equal(a.mu_user, b.mu_user)


def test_criterion_runner():
    result = fr.run_criterion(8)
    assert result["passed"]
    assert result["id"] == 8
