"""Context store: persistence semantics, journal replay, reset, concurrency."""

import threading

import pytest

from toolrig.server import ContextService, ContextStore, DuplicateStepError

CALL = {
    "problem_id": "MAVEN-0001",
    "step_id": "step-01",
    "tool_id": "symbolic_diff",
    "input": {"expr": "A*t^3 - B*t^2 + C*t", "wrt": "t"},
    "persist": True,
}


def test_result_id_format():
    service = ContextService()
    status, response = service.call(CALL)
    assert status == 200
    assert response["result_id"] == "MAVEN-0001-step-01-result"


def test_persist_false_leaves_store_unchanged():
    service = ContextService()
    status, response = service.call({**CALL, "persist": False})
    assert status == 200
    assert "result_id" not in response
    assert service.store.trace("default", "MAVEN-0001") == []


def test_duplicate_step_conflicts_and_store_unchanged():
    service = ContextService()
    service.call(CALL)
    before = service.store.trace("default", "MAVEN-0001")
    status, response = service.call(CALL)
    assert status == 409
    assert response["ok"] is False
    assert response["error"]["code"] == "duplicate_step"
    assert service.store.trace("default", "MAVEN-0001") == before


def test_unknown_tool_is_not_found():
    service = ContextService()
    status, response = service.call({**CALL, "tool_id": "quantum_solver"})
    assert status == 404
    assert response["error"]["code"] == "unknown_tool"


def test_failed_tool_calls_are_persisted_for_audit():
    service = ContextService()
    bad = {**CALL, "input": {"expr": "3 +* t", "wrt": "t"}}
    status, response = service.call(bad)
    assert status == 200
    assert response["ok"] is False
    assert response["diagnostics"]["status"] == "failed"
    trace = service.store.trace("default", "MAVEN-0001")
    assert len(trace) == 1
    assert trace[0]["diagnostics"]["status"] == "failed"


def test_query_missing_paths_give_empty_projection():
    service = ContextService()
    service.call(CALL)
    _, response = service.query(
        {"problem_id": "MAVEN-0001", "query": {"from_step": "step-01", "fields": ["output.nope"]}}
    )
    assert response["matches"] == [{"result_id": "MAVEN-0001-step-01-result"}]


def test_query_unknown_problem_is_empty_not_error():
    service = ContextService()
    _, response = service.query(
        {"problem_id": "nowhere", "query": {"from_step": "step-01", "fields": ["output.expr"]}}
    )
    assert response == {"ok": True, "matches": []}


def test_query_diagnostics_projection():
    service = ContextService()
    service.call(CALL)
    _, response = service.query(
        {"problem_id": "MAVEN-0001", "query": {"from_step": "step-01", "fields": ["diagnostics.type"]}}
    )
    assert response["matches"] == [
        {"result_id": "MAVEN-0001-step-01-result", "diagnostics": {"type": "symbolic"}}
    ]


def test_trace_order_and_reset_isolation():
    service = ContextService()
    for i in range(3):
        service.call({**CALL, "step_id": f"step-0{i + 1}"})
    service.call({**CALL, "problem_id": "MAVEN-0002", "step_id": "step-01"})
    _, response = service.trace({"problem_id": "MAVEN-0001"})
    assert [a["step_id"] for a in response["trace"]] == ["step-01", "step-02", "step-03"]
    seqs = [a["created_seq"] for a in response["trace"]]
    assert seqs == sorted(seqs)

    service.reset({"problem_id": "MAVEN-0001"})
    _, after = service.trace({"problem_id": "MAVEN-0001"})
    assert after["trace"] == []
    _, other = service.trace({"problem_id": "MAVEN-0002"})
    assert len(other["trace"]) == 1  # the other problem is untouched

    status, _ = service.reset({"problem_id": "never-existed"})
    assert status == 200


def test_run_id_namespaces_are_independent():
    service = ContextService()
    service.call({**CALL, "run_id": "run-a"})
    status, _ = service.call({**CALL, "run_id": "run-b"})
    assert status == 200  # same (problem, step) in another run is fine
    status, _ = service.call({**CALL, "run_id": "run-a"})
    assert status == 409


def test_journal_replay_reconstructs_index(tmp_path):
    journal = tmp_path / "journal"
    store = ContextStore(journal)
    service = ContextService(store=store)
    service.call(CALL)
    service.call({**CALL, "step_id": "step-02"})
    service.reset({"problem_id": "MAVEN-0001", "run_id": None})

    service.call({**CALL, "problem_id": "MAVEN-0003"})

    # "restart": a fresh store replaying the same journal answers identically
    revived = ContextService(store=ContextStore(journal))
    _, q1 = revived.query(
        {"problem_id": "MAVEN-0001", "query": {"from_step": "step-01", "fields": ["output.expr"]}}
    )
    assert q1["matches"] == []  # reset survived the restart
    _, q2 = revived.query(
        {"problem_id": "MAVEN-0003", "query": {"from_step": "step-01", "fields": ["output.expr"]}}
    )
    assert q2["matches"] == [
        {"result_id": "MAVEN-0003-step-01-result", "output": {"expr": "3*A*t^2 - 2*B*t + C"}}
    ]


def test_journal_replay_after_each_prefix(tmp_path):
    journal = tmp_path / "journal"
    service = ContextService(store=ContextStore(journal))
    for i in range(5):
        service.call({**CALL, "step_id": f"step-{i:02d}"})
        fresh = ContextService(store=ContextStore(journal))
        _, got = fresh.trace({"problem_id": "MAVEN-0001"})
        _, want = service.trace({"problem_id": "MAVEN-0001"})
        assert got == want


def test_concurrent_duplicates_yield_exactly_one_success():
    service = ContextService()
    outcomes = []

    def worker():
        status, _ = service.call(CALL)
        outcomes.append(status)

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(outcomes) == [200] + [409] * 7


def test_concurrent_distinct_steps_all_persist():
    service = ContextService()

    def worker(i):
        service.call({**CALL, "step_id": f"step-{i:02d}"})

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    _, response = service.trace({"problem_id": "MAVEN-0001"})
    assert len(response["trace"]) == 16
    assert sorted(a["created_seq"] for a in response["trace"]) == list(range(16))


def test_store_duplicate_raises():
    store = ContextStore()
    store.persist("r", "p", "s", "t", "1.0.0", {}, {}, {})
    with pytest.raises(DuplicateStepError):
        store.persist("r", "p", "s", "t", "1.0.0", {}, {}, {})
