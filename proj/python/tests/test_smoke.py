import math

import pytest

import softbandit


def test_rouge_scores():
    assert softbandit.tokenize("The Cat, sat!") == ["the", "cat", "sat"]
    assert softbandit.rouge1(["a", "b"], ["a", "b"]) == (1.0, 1.0, 1.0)
    assert softbandit.rouge_l(["a", "c", "b"], ["a", "b"])[2] == pytest.approx(0.8)
    assert softbandit.lcs_length(["a", "b", "c"], ["b", "c", "a"]) == 2
    assert softbandit.avg_rouge_reward("hello world", "hello world") == 1.0
    assert softbandit.avg_rouge_reward("", "x") == 0.0


def test_config_round_trip_and_errors():
    config = softbandit.load_config()
    assert config["intrinsic_dim"] == 100
    assert config["lambda_reg"] == 0.1
    assert softbandit.load_config(config) == config
    assert len(softbandit.config_fingerprint(config)) == 16
    with pytest.raises(softbandit.ConfigError):
        softbandit.load_config({"nu": -1.0})
    with pytest.raises(ValueError):
        softbandit.load_config({"no_such_field": 1})


def test_projection_and_surrogate():
    proj = softbandit.Projection(12, 3, seed=5)
    assert (proj.output_dim, proj.input_dim) == (12, 3)
    out = proj.project([1.0, 0.0, 0.0])
    assert out == [proj.at(i, 0) for i in range(12)]
    with pytest.raises(IndexError):
        proj.at(12, 0)

    net = softbandit.Surrogate(3, 4, seed=1)
    assert net.param_count == 3 * 4 + 4 + 4 + 1
    x = [0.2, -0.4, 0.7]
    grad = net.grad(x)
    params = net.params
    step = 1e-6
    params[-1] += step
    net.params = params
    assert (net.forward(x) - softbandit.Surrogate(3, 4, seed=1).forward(x)) / step == pytest.approx(grad[-1])


def test_synthetic_run_and_aggregate():
    config, ids = softbandit.synthetic_suite("small")
    config["total_iterations"] = 10
    ids = ids[:2]
    ucb = softbandit.run_synthetic(config, ids, "neuralucb")
    again = softbandit.run_synthetic(config, ids, "neuralucb", threads=2)
    base = softbandit.run_synthetic(config, ids)
    assert ucb == again
    assert [t["method"] for t in base] == ["baseline", "baseline"]
    for t in ucb:
        assert len(t["rewards"]) == 10
        assert t["best_so_far"] == sorted(t["best_so_far"])
        assert t["best_so_far"][-1] == max(t["rewards"])

    report = softbandit.aggregate_finals({"neuralts": [0.228]}, [0.140])
    assert report["best_policy"] == "neuralts"
    assert report["improvement_pct"] == pytest.approx(62.857, abs=1e-3)
    assert math.isclose(softbandit.improvement_pct(0.466, 0.346), 34.682, abs_tol=1e-3)
