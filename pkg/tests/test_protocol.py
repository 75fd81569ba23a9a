"""Protocol enforcement: single-call rule, completion marker, manual detection."""

from toolrig.agents import Final, ToolCall, render_action
from toolrig.evaluation import enforce, parse_response


CALL_TEXT = render_action(
    ToolCall("step-01", "symbolic_diff", {"expr": "A*t^3 - B*t^2 + C*t", "wrt": "t"})
)


def test_single_call_accepted():
    outcome = enforce(CALL_TEXT)
    assert outcome.kind == "accepted"
    assert outcome.calls[0]["tool_id"] == "symbolic_diff"


def test_two_calls_is_multi_call_with_queue():
    second = render_action(ToolCall("step-02", "symbolic_diff", {"expr": "t^2", "wrt": "t"}))
    outcome = enforce(f"Let me batch these.\n{CALL_TEXT}\n{second}")
    assert outcome.kind == "multi_call"
    assert [c["step_id"] for c in outcome.calls] == ["step-01", "step-02"]


def test_marker_terminates():
    outcome = enforce(render_action(Final({"t_star": 1.0})))
    assert outcome.kind == "final"
    assert outcome.marker_seen
    assert outcome.final_answer == {"t_star": 1.0}


def test_bare_answer_with_marker_flags_manual():
    outcome = enforce("the answer is 42 PROBLEM_COMPLETED", known_numbers=set())
    assert outcome.kind == "final"
    assert outcome.manual_suspect
    assert outcome.asserted_numbers == [42.0]


def test_known_numbers_are_not_manual():
    outcome = enforce("the answer is 42 PROBLEM_COMPLETED", known_numbers={42.0})
    assert not outcome.manual_suspect


def test_prose_assertion_without_marker():
    outcome = enforce("No tool needed: v(1.0) = -1.0. Moving on.", known_numbers={1.0})
    assert outcome.kind == "none"
    assert outcome.manual_suspect
    assert outcome.asserted_numbers == [-1.0]
    assert 1.0 in outcome.prose_numbers  # argument numbers stay available for inference


def test_descriptive_prose_is_not_manual():
    outcome = enforce("Next I will differentiate for step-02 of 6.", known_numbers=set())
    assert outcome.kind == "none"
    assert not outcome.manual_suspect


def test_malformed_call_json():
    outcome = enforce("```tool_call\n{not json\n```")
    assert outcome.kind == "malformed"


def test_parse_response_round_trip():
    parsed = parse_response(CALL_TEXT)
    assert len(parsed.calls) == 1
    assert not parsed.marker_seen
    parsed = parse_response(render_action(Final({"x": 2.0})))
    assert parsed.marker_seen and parsed.final_answer == {"x": 2.0}
