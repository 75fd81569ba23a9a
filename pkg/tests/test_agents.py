"""Agent runtime: oracle, violations, the three-stage reasoner, LLM backends."""

import json

import pytest

from toolrig.agents import (
    BackendError,
    CassetteBackend,
    Final,
    LlmAgent,
    MAX_REFINEMENTS,
    Observation,
    OracleAgent,
    ReferenceReasoner,
    StubBackend,
    ToolCall,
    ViolationAgent,
    make_agent,
    render_action,
    system_prompt,
)
from toolrig.bank import bundle_load, instantiate
from toolrig.evaluation import enforce, run_episode
from toolrig.server import ContextService
from toolrig.tools import default_registry


@pytest.fixture(scope="module")
def kinetic():
    return instantiate(bundle_load()[0], 0, overrides={"A": 1, "B": 3, "C": 2, "m": 2})


def observation(instance, **kw):
    descriptors = tuple(d.to_wire() for d in default_registry().descriptors())
    defaults = dict(
        statement=instance.statement,
        sub_questions=tuple(instance.sub_questions),
        tool_descriptors=descriptors,
        answer_keys=tuple(instance.reference),
        last_response=None,
        result_ids=(),
        remaining_steps=18,
    )
    defaults.update(kw)
    return Observation(**defaults)


def test_oracle_emits_min_steps_calls_then_final(kinetic):
    agent = OracleAgent(kinetic)
    obs = observation(kinetic)
    actions = [agent.next_action(obs) for _ in range(kinetic.min_steps + 1)]
    assert all(isinstance(a, ToolCall) for a in actions[:-1])
    assert isinstance(actions[-1], Final)
    assert actions[-1].marker == "PROBLEM_COMPLETED"
    assert actions[0].input == {"expr": "A*t^3 - B*t^2 + C*t", "wrt": "t"}


def test_oracle_traces_are_byte_identical_across_runs(kinetic):
    def transcript():
        service = ContextService()
        agent = OracleAgent(kinetic)
        episode = run_episode(agent, kinetic, service, "det")
        return json.dumps(episode.to_json(), sort_keys=True)

    assert transcript() == transcript()


def test_builtin_actions_pass_enforcement(kinetic):
    agent = OracleAgent(kinetic)
    obs = observation(kinetic)
    for _ in range(kinetic.min_steps + 1):
        text = render_action(agent.next_action(obs))
        outcome = enforce(text)
        assert outcome.kind in ("accepted", "final")


def test_violation_agent_multi_call_first_response(kinetic):
    agent = ViolationAgent(kinetic, "multi_call")
    outcome = enforce(agent.respond(observation(kinetic)))
    assert outcome.kind == "multi_call"
    assert len(outcome.calls) == 2


def test_violation_agent_unknown_kind(kinetic):
    with pytest.raises(ValueError):
        ViolationAgent(kinetic, "arson")


def test_make_agent_registry(kinetic):
    assert isinstance(make_agent("oracle", kinetic), OracleAgent)
    assert isinstance(make_agent("violation:manual", kinetic), ViolationAgent)
    assert isinstance(make_agent("planner", kinetic), ReferenceReasoner)
    with pytest.raises(ValueError):
        make_agent("gpt-17", kinetic)


def test_planner_solves_kinetic_family(kinetic):
    service = ContextService()
    episode = run_episode(ReferenceReasoner(), kinetic, service, "plan")
    assert episode.completion_marker_seen
    assert abs(episode.final_answer["t_star"] - 1.0) < 1e-6
    assert abs(episode.final_answer["K_star"] - 1.0) < 1e-6


def test_planner_next_action_with_persisted_candidate(kinetic):
    # remaining sub-goal "evaluate K at t*" with t* already verified in the buffer
    agent = ReferenceReasoner()
    agent.buffer.facts.update(
        {
            "params": {"A": 1.0, "B": 3.0, "C": 2.0, "m": 2.0},
            "kinetic": "0.5*m*(3*A*t^2 - 2*B*t + C)^2",
            "t_verified": 1.0,
            "exprs": ["3*A*t^2 - 2*B*t + C"],
        }
    )
    agent.buffer.satisfied = {1: ["r1"], 2: ["r2"], 3: ["r3"], 4: ["r4"]}
    action = agent.next_action(observation(kinetic, result_ids=("r1", "r2", "r3", "r4")))
    assert isinstance(action, ToolCall)
    assert action.tool_id == "numeric_evaluator"
    assert action.input["bindings"]["t"] == 1.0


def test_planner_refinement_bound_and_audit(kinetic):
    agent = ReferenceReasoner()
    service = ContextService()
    episode = run_episode(agent, kinetic, service, "audit")
    assert len(agent.audit_log) == len(episode.transcript)
    assert agent.buffer.refinement_count <= MAX_REFINEMENTS
    for record in agent.audit_log:
        assert record.buffer_digest and record.task and record.invocation


def test_planner_abstains_on_unknown_domain():
    instance = instantiate(bundle_load()[4], 0)  # linear-algebra chain
    agent = ReferenceReasoner()
    action = agent.next_action(observation(instance))
    assert isinstance(action, Final)
    assert action.answer.get("status") == "ABSTAIN"


def test_llm_agent_parses_scripted_tool_call(kinetic):
    completion = render_action(
        ToolCall("step-01", "symbolic_diff", {"expr": "t^2", "wrt": "t"})
    )
    agent = LlmAgent(StubBackend([completion]))
    action = agent.next_action(observation(kinetic))
    assert isinstance(action, ToolCall)
    assert action.tool_id == "symbolic_diff"


def test_llm_agent_prose_only_yields_zero_call(kinetic):
    agent = LlmAgent(StubBackend(["I think the answer requires more thought."]))
    action = agent.next_action(observation(kinetic))
    assert isinstance(action, Final)
    assert action.answer.get("status") == "ABSTAIN"


def test_llm_agent_retry_then_abstain(kinetic):
    backend = StubBackend([])  # always raises
    agent = LlmAgent(backend)
    text = agent.respond(observation(kinetic))
    assert "ABSTAIN" in text and "PROBLEM_COMPLETED" in text
    assert len(backend.requests) == 2  # one retry before giving up


def test_llm_system_prompt_carries_rules_and_schemas(kinetic):
    prompt = system_prompt(observation(kinetic))
    assert "at most ONE tool call" in prompt
    assert "PROBLEM_COMPLETED" in prompt
    assert "symbolic_diff" in prompt


def test_cassette_record_and_replay(tmp_path, kinetic):
    completion = render_action(Final({"t_star": 1.0}))
    tape = tmp_path / "session.json"
    recording = CassetteBackend(tape, inner=StubBackend([completion]))
    agent = LlmAgent(recording)
    first = agent.respond(observation(kinetic))

    replay = LlmAgent(CassetteBackend(tape))
    second = replay.respond(observation(kinetic))
    assert first == second

    with pytest.raises(BackendError):
        CassetteBackend(tmp_path / "empty.json").complete([{"role": "user", "content": "?"}])
