import math
import os
from pathlib import Path

import numpy as np
import pytest

import aif

SOURCE_DIR = Path(os.environ.get("AIF_SOURCE_DIR", Path(__file__).resolve().parents[2]))
LISTING2 = SOURCE_DIR / "models" / "listing2.json"


def test_softmax_and_entropy():
    np.testing.assert_allclose(aif.softmax(np.array([0.0, 0.0, 0.5])), [0.27406861906, 0.27406861906, 0.45186276188])
    assert aif.entropy(np.array([0.5, 0.5])) == pytest.approx(math.log(2))


def test_softmax_rejects_non_finite():
    with pytest.raises(aif.NumericalError):
        aif.softmax(np.array([0.0, np.inf]))


def test_model_round_trip(tmp_path):
    model = aif.load_model(LISTING2)
    assert model.num_obs == [3] and model.num_states == [3] and model.num_controls == [2]
    assert model.validate() == []
    out = tmp_path / "model.json"
    model.save(out)
    assert aif.Model.load(out) == model
    assert aif.Model.from_json(model.to_json()) == model


def test_model_validation_reports_bad_column():
    model = aif.Model(A=[np.array([[0.6, 0.5], [0.3, 0.5]])], B=[np.eye(2).reshape(2, 2, 1)])
    problems = model.validate()
    assert len(problems) == 1
    assert problems[0][0] == "A[0]" and problems[0][1] == "column (0)"


def test_construct_policies_counts():
    policies = aif.construct_policies([3, 2], [2, 3], policy_len=2)
    assert len(policies) == 36
    assert policies[0] == [[0, 0], [0, 0]]


def test_single_factor_inference_is_bayes():
    A = np.array([[0.9, 0.2], [0.1, 0.8]])
    prior = np.array([0.3, 0.7])
    result = aif.infer_states([1], [A], [prior])
    expected = A[1] * prior / np.sum(A[1] * prior)
    np.testing.assert_allclose(result["qs"][0], expected, atol=1e-12)
    assert result["sweeps"] == 1


def test_policy_posterior_is_normalised():
    model = aif.load_model(LISTING2)
    policies = aif.construct_policies(model.num_states, model.num_controls)
    post = aif.update_posterior_policies([np.array([1.0, 0.0, 0.0])], model, policies)
    assert post["q_pi"].sum() == pytest.approx(1.0)
    assert len(post["efe_components"]) == len(policies) == 2


def test_dirichlet_update_adds_mass():
    pA = [np.ones((2, 2))]
    updated = aif.update_A(pA, [0], [np.array([0.25, 0.75])], lr=2.0)
    np.testing.assert_allclose(updated[0], [[1.5, 2.5], [1.0, 1.0]])


def test_agent_loop_against_listing2_env():
    agent = aif.Agent(aif.load_model(LISTING2), seed=3)
    env = aif.Listing2Env(seed=5)
    obs = env.reset()
    for _ in range(5):
        qs = agent.infer_states(obs)
        assert qs[0].sum() == pytest.approx(1.0)
        agent.infer_policies()
        obs = env.step(agent.sample_action())
    assert agent.t == 5


def test_run_is_reproducible():
    def trace():
        agent = aif.Agent(aif.EpistemicChamberEnv.matching_model(), action_selection="stochastic", seed=1)
        return aif.run(agent, aif.EpistemicChamberEnv(seed=2), steps=8)

    first = trace()
    assert first == trace()
    assert [r["t"] for r in first] == list(range(8))
    assert set(first[0]) == {"t", "obs", "qs", "vfe", "q_pi", "G", "efe_components", "action", "wall_clock_ms"}


def test_agent_rejects_out_of_range_observation():
    agent = aif.Agent(aif.load_model(LISTING2))
    with pytest.raises(aif.Error):
        agent.infer_states([7])
