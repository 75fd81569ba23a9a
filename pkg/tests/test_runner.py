"""Evaluation runner: determinism, resumability, isolation, the judge hook."""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from toolrig.agents.base import Agent
from toolrig.bank import bundle_load, instantiate
from toolrig.evaluation import Report, RunConfig, report_from_csv, run
from toolrig.server import ContextService


@pytest.fixture(scope="module")
def instances():
    templates = bundle_load()
    return [instantiate(t, s) for t in templates[:5] for s in (0, 1)]


def test_parallelism_does_not_change_the_report(instances):
    models = ["oracle", "violation:multi_call"]
    serial = run(models, instances, RunConfig(models=tuple(models), parallelism=1))
    parallel = run(models, instances, RunConfig(models=tuple(models), parallelism=8))
    assert serial.csv() == parallel.csv()
    assert serial.summary_csv() == parallel.summary_csv()


def test_interrupt_and_resume_is_byte_identical(tmp_path, instances):
    models = ["oracle"]
    baseline = run(models, instances, RunConfig(models=("oracle",), parallelism=1))

    resume_dir = tmp_path / "run"
    killed = run(
        models,
        instances,
        RunConfig(models=("oracle",), parallelism=8, resume_dir=resume_dir, stop_after=4),
    )
    assert killed.partial and len(killed.rows) == 4

    resumed = run(models, instances, RunConfig(models=("oracle",), parallelism=8, resume_dir=resume_dir))
    assert not resumed.partial
    assert resumed.csv() == baseline.csv()

    # a third run touches nothing and reproduces the same bytes again
    again = run(models, instances, RunConfig(models=("oracle",), parallelism=2, resume_dir=resume_dir))
    assert again.csv() == baseline.csv()


def test_episode_namespaces_are_isolated(instances):
    service = ContextService()
    run(["oracle", "violation:multi_call"], instances[:2],
        RunConfig(models=("oracle", "violation:multi_call"), parallelism=4), service=service)
    # each (model, instance) pair owns a private run namespace on the store
    oracle_trace = service.store.trace(f"oracle/{instances[0].instance_id}", instances[0].instance_id)
    violated = service.store.trace(
        f"violation:multi_call/{instances[0].instance_id}", instances[0].instance_id
    )
    assert len(oracle_trace) == instances[0].min_steps
    assert len(violated) == instances[0].min_steps


def test_errored_backend_marks_episode_and_run_continues(instances):
    class ExplodingAgent(Agent):
        name = "exploder"

        def respond(self, obs):
            raise ConnectionError("backend unreachable")

    def factory(model, instance):
        return ExplodingAgent() if model == "exploder" else None

    report = run(["exploder"], instances[:3], RunConfig(models=("exploder",)), agent_factory=factory)
    assert len(report.rows) == 3
    assert all(row["accuracy"] is False for row in report.rows)


def test_step_budget_timeout_flag(instances):
    class LoopingAgent(Agent):
        name = "looper"

        def __init__(self, instance):
            self.instance = instance
            self.n = 0

        def next_action(self, obs):
            from toolrig.agents import ToolCall

            self.n += 1
            return ToolCall(f"loop-{self.n:03d}", "symbolic_diff", {"expr": "t^2", "wrt": "t"})

    report = run(
        ["looper"],
        instances[:1],
        RunConfig(models=("looper",), step_budget=4),
        agent_factory=lambda m, i: LoopingAgent(i),
    )
    assert report.rows[0]["violations"] == "timeout"
    assert report.rows[0]["accuracy"] is False


def test_external_judge_hook_replaces_approach_scores(instances):
    class Judge(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            json.loads(self.rfile.read(length))
            body = json.dumps({"verification_score": 0.5, "decomposition": 0.5}).encode()
            self.send_response(200)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def log_message(self, *args):
            pass

    httpd = ThreadingHTTPServer(("127.0.0.1", 0), Judge)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    try:
        endpoint = f"http://127.0.0.1:{httpd.server_address[1]}/judge"
        report = run(
            ["oracle"],
            instances[:1],
            RunConfig(models=("oracle",), judge_endpoint=endpoint),
        )
        row = report.rows[0]
        assert row["approach"] == 6 * 0.5 + 4 * 0.5
        assert row["verification_score"] == 0.5
    finally:
        httpd.shutdown()
        httpd.server_close()


def test_unreachable_judge_keeps_deterministic_scores(instances):
    report = run(
        ["oracle"],
        instances[:1],
        RunConfig(models=("oracle",), judge_endpoint="http://127.0.0.1:1/nope"),
    )
    assert report.rows[0]["approach"] == 10.0


def test_report_csv_round_trip(instances):
    report = run(["oracle", "degrading"], instances,
                 RunConfig(models=("oracle", "degrading"), parallelism=4))
    rebuilt = report_from_csv(report.csv())
    assert rebuilt.csv() == report.csv()
    assert rebuilt.buckets_csv() == report.buckets_csv()
    # completion is not a CSV column, so the rebuilt summary leaves it blank
    assert ",," in rebuilt.summary_csv() or rebuilt.summary_csv().count(",100.0,") >= 1


def test_buckets_cover_the_published_axis(instances):
    report = run(["oracle"], instances, RunConfig(models=("oracle",)))
    buckets = [entry["bucket"] for entry in report.buckets()]
    assert buckets == [6, 7, 8, 9, 10, 15]
