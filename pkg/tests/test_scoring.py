"""Rubric scoring: the point map, alignment tolerance, reconstruction effects."""

import pytest

from toolrig.agents import Final, OracleAgent, ToolCall, ViolationAgent, render_action
from toolrig.agents.base import Agent
from toolrig.bank import bundle_load, instantiate
from toolrig.evaluation import Episode, reconstruct, run_episode, score
from toolrig.server import ContextService


@pytest.fixture(scope="module")
def kinetic():
    template = bundle_load()[0]
    return instantiate(template, 0, overrides={"A": 1, "B": 3, "C": 2, "m": 2})


def episode_for(agent, instance, service=None, run_id="test"):
    service = service or ContextService()
    episode = run_episode(agent, instance, service, run_id)
    return reconstruct(episode, instance, service), service


class SkippingOracle(Agent):
    """Canonical replay that omits verification-checkpoint steps."""

    name = "skipping"

    def __init__(self, instance):
        self.steps = [s for s in instance.trace if s.checkpoint is None]
        self.instance = instance
        self.cursor = 0

    def next_action(self, obs):
        if self.cursor < len(self.steps):
            step = self.steps[self.cursor]
            self.cursor += 1
            return ToolCall(step.step_id, step.tool_id, step.input)
        return Final(self.instance.final_answer())


class ShufflingOracle(OracleAgent):
    """Replays the canonical trace with its commutative prefix swapped."""

    def __init__(self, instance, i, j):
        super().__init__(instance)
        order = list(instance.trace)
        order[i], order[j] = order[j], order[i]
        self.order = order

    def next_action(self, obs):
        if self.cursor < len(self.order):
            step = self.order[self.cursor]
            self.cursor += 1
            return ToolCall(step.step_id, step.tool_id, step.input)
        return Final(self.instance.final_answer())


def test_oracle_scores_exactly_100(kinetic):
    episode, _ = episode_for(OracleAgent(kinetic), kinetic)
    breakdown = score(episode, kinetic)
    assert breakdown.tool_usage == 70.0
    assert breakdown.correctness == 20.0
    assert breakdown.approach == 10.0
    assert breakdown.partial_total == 100.0
    assert breakdown.accuracy is True


def test_empty_trace_scores_zero(kinetic):
    episode = Episode(model="null", instance_id=kinetic.instance_id, run_id="x")
    breakdown = score(episode, kinetic)
    assert breakdown.tool_usage == 15.0  # compliance only: no calls, no violations
    assert breakdown.correctness == 0.0
    assert breakdown.approach == 0.0
    assert breakdown.accuracy is False


def test_skipped_verification_keeps_correctness_full(kinetic):
    episode, _ = episode_for(SkippingOracle(kinetic), kinetic)
    breakdown = score(episode, kinetic)
    assert breakdown.correctness == 20.0  # final answer + all deliverables
    assert breakdown.verification_score == 0.0
    assert breakdown.approach == pytest.approx(4.0)  # decomposition component only
    assert breakdown.trace_fidelity == pytest.approx(5 / 6)
    assert breakdown.accuracy is True


def test_commutative_reorder_keeps_full_fidelity():
    # MAVEN-0002 steps 1 and 2 are commutative and independent
    instance = instantiate(bundle_load()[1], 0)
    episode, _ = episode_for(ShufflingOracle(instance, 0, 1), instance)
    breakdown = score(episode, instance)
    assert breakdown.trace_fidelity == 1.0
    assert breakdown.partial_total == 100.0


def test_multi_call_reconstruction_penalty(kinetic):
    episode, _ = episode_for(ViolationAgent(kinetic, "multi_call"), kinetic)
    breakdown = score(episode, kinetic)
    assert episode.reconstructed is True
    assert breakdown.compliance == 0.5
    assert breakdown.partial_total < 100.0
    assert breakdown.accuracy is True  # reconstruction mitigates, accuracy can survive
    assert breakdown.trace_fidelity == 1.0  # split calls align with the canonical trace


def test_missing_marker_fails_accuracy(kinetic):
    episode, _ = episode_for(ViolationAgent(kinetic, "no_marker"), kinetic)
    breakdown = score(episode, kinetic)
    assert episode.completion_marker_seen is False
    assert breakdown.accuracy is False
    assert breakdown.trace_fidelity == 1.0  # artifacts themselves were perfect


def test_manual_assertion_inference(kinetic):
    episode, _ = episode_for(ViolationAgent(kinetic, "manual"), kinetic)
    assert episode.flags["manual_computation"] is True
    assert episode.reconstructed is True
    assert any(a["step_id"].startswith("recon") for a in episode.artifacts)
    inferred = [a for a in episode.artifacts if a["step_id"].startswith("recon")][0]
    assert inferred["tool_id"] == "numeric_evaluator"


def test_uninferable_assertion_stands(kinetic):
    episode = Episode(model="m", instance_id=kinetic.instance_id, run_id="x")
    episode.flags["manual_computation"] = True
    episode.manual_assertions.append({"asserted": [123456.789], "numbers": [123456.789]})
    episode.completion_marker_seen = True
    episode.final_answer = kinetic.final_answer()
    episode = reconstruct(episode, kinetic, ContextService())
    assert episode.reconstructed is False
    assert episode.unreconstructed_violation is True
    breakdown = score(episode, kinetic)
    assert breakdown.compliance == 0.0


def test_monotonicity_deleting_matched_steps(kinetic):
    episode, _ = episode_for(OracleAgent(kinetic), kinetic)
    base = score(episode, kinetic)
    for drop in range(len(episode.artifacts)):
        trimmed = Episode.from_json(episode.to_json())
        del trimmed.artifacts[drop]
        reduced = score(trimmed, kinetic)
        assert reduced.trace_fidelity <= base.trace_fidelity
        assert reduced.tool_usage <= base.tool_usage


def test_rubric_bounds_on_fixture_zoo(kinetic):
    agents = [
        OracleAgent(kinetic),
        SkippingOracle(kinetic),
        ViolationAgent(kinetic, "multi_call"),
        ViolationAgent(kinetic, "manual"),
        ViolationAgent(kinetic, "no_marker"),
    ]
    for agent in agents:
        episode, _ = episode_for(agent, kinetic, run_id=f"zoo/{agent.__class__.__name__}")
        b = score(episode, kinetic)
        assert 0.0 <= b.tool_usage <= 70.0
        assert 0.0 <= b.correctness <= 20.0
        assert 0.0 <= b.approach <= 10.0
        assert b.partial_total == b.tool_usage + b.correctness + b.approach
        for metric in (
            b.sub_question_accuracy,
            b.tool_selection_accuracy,
            b.trace_fidelity,
            b.verification_score,
            b.decomposition,
            b.compliance,
        ):
            assert 0.0 <= metric <= 1.0


def test_alternative_step_ids_still_align(kinetic):
    # alignment matches on tool + input equivalence, not on step-id strings
    class RenamingOracle(OracleAgent):
        def next_action(self, obs):
            action = super().next_action(obs)
            if isinstance(action, ToolCall):
                return ToolCall(f"my-{self.cursor:02d}", action.tool_id, action.input)
            return action

    episode, _ = episode_for(RenamingOracle(kinetic), kinetic)
    breakdown = score(episode, kinetic)
    assert breakdown.trace_fidelity == 1.0
    assert breakdown.partial_total == 100.0


def test_reconstruction_never_edits_existing_outputs(kinetic):
    service = ContextService()
    episode = run_episode(ViolationAgent(kinetic, "manual"), kinetic, service, "keep")
    before = {a["result_id"]: a["output"] for a in episode.artifacts}
    episode = reconstruct(episode, kinetic, service)
    for artifact in episode.artifacts:
        if artifact["result_id"] in before:
            assert artifact["output"] == before[artifact["result_id"]]
