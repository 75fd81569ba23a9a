"""CLI subcommands, exit codes, idempotence."""

import json
import socket
import subprocess
import sys
import time
import urllib.request
from pathlib import Path

import pytest

from toolrig.cli import main

GOLDEN = Path(__file__).parent / "golden"


def files_snapshot(directory: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(directory.glob("*.json"))}


def test_gen_is_deterministic(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["gen", "--seeds", "0..1", "--out", str(out_a)]) == 0
    assert main(["gen", "--seeds", "0..1", "--out", str(out_b)]) == 0
    assert files_snapshot(out_a) == files_snapshot(out_b)
    assert len(files_snapshot(out_a)) == 24  # 12 templates x 2 seeds


def test_gen_counts_templates_times_seeds(tmp_path):
    out = tmp_path / "g"
    assert main(["gen", "--seeds", "0..4", "--out", str(out)]) == 0
    assert len(list(out.glob("*.json"))) == 60


def test_eval_oracle_all_100(tmp_path):
    instances = tmp_path / "instances"
    results = tmp_path / "results"
    main(["gen", "--seeds", "0", "--out", str(instances), "--template", "MAVEN-0001"])
    assert main([
        "eval", "--instances", str(instances), "--models", "oracle", "--out", str(results)
    ]) == 0
    lines = (results / "report.csv").read_text().strip().split("\n")
    assert len(lines) == 2
    assert ",true,100.0," in lines[1]


def test_eval_resume_reproduces_csv(tmp_path):
    instances = tmp_path / "instances"
    main(["gen", "--seeds", "0..1", "--out", str(instances), "--template", "MAVEN-0002"])
    first = tmp_path / "r1"
    again = tmp_path / "r2"
    assert main(["eval", "--instances", str(instances), "--models", "oracle", "--out", str(first)]) == 0
    # rerun against the same resume dir: episodes are skipped, bytes identical
    csv_before = (first / "report.csv").read_bytes()
    assert main(["eval", "--instances", str(instances), "--models", "oracle", "--out", str(first)]) == 0
    assert (first / "report.csv").read_bytes() == csv_before
    assert main([
        "eval", "--instances", str(instances), "--models", "oracle",
        "--out", str(again), "--parallel", "8",
    ]) == 0
    assert (again / "report.csv").read_bytes() == csv_before


def test_unknown_model_is_validation_error(tmp_path, capsys):
    instances = tmp_path / "instances"
    main(["gen", "--seeds", "0", "--out", str(instances), "--template", "MAVEN-0001"])
    code = main(["eval", "--instances", str(instances), "--models", "frontier-9000", "--out", str(tmp_path / "x")])
    assert code == 1
    assert "unknown model" in capsys.readouterr().err


def test_score_empty_trace_file_yields_zero_rows(tmp_path):
    instances = tmp_path / "instances"
    main(["gen", "--seeds", "0", "--out", str(instances), "--template", "MAVEN-0001"])
    traces = tmp_path / "traces"
    traces.mkdir()
    (traces / "empty.json").write_text("")
    out = tmp_path / "rescored.csv"
    assert main(["score", "--traces", str(traces), "--instances", str(instances), "--out", str(out)]) == 0
    assert out.read_text().strip().count("\n") == 0  # header only


def test_report_emits_bucket_axis(tmp_path):
    instances = tmp_path / "instances"
    results = tmp_path / "results"
    main(["gen", "--seeds", "0", "--out", str(instances)])
    main(["eval", "--instances", str(instances), "--models", "degrading", "--out", str(results)])
    tables = tmp_path / "tables"
    assert main(["report", "--csv", str(results / "report.csv"), "--out", str(tables)]) == 0
    buckets = (tables / "buckets.csv").read_text().strip().split("\n")
    assert [line.split(",")[1] for line in buckets[1:]] == ["6", "7", "8", "9", "10", "15"]


def test_missing_inputs_are_validation_errors(tmp_path):
    assert main(["eval", "--instances", str(tmp_path / "void"), "--models", "oracle",
                 "--out", str(tmp_path / "o")]) == 1
    assert main(["report", "--csv", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "t")]) == 1


@pytest.mark.parametrize("argv", [["gen"], []])
def test_bad_arguments_exit_one(argv):
    assert main(argv) == 1


def test_serve_answers_goldens_and_rejects_occupied_port(tmp_path):
    probe = socket.socket()
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    probe.close()

    process = subprocess.Popen(
        [sys.executable, "-m", "toolrig.cli", "serve", "--listen", f"127.0.0.1:{port}",
         "--journal-dir", str(tmp_path / "journal")],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
    )
    try:
        deadline = time.time() + 10
        base = f"http://127.0.0.1:{port}"
        while time.time() < deadline:
            try:
                urllib.request.urlopen(base + "/mcp/tools", timeout=1)
                break
            except Exception:
                time.sleep(0.1)
        request = urllib.request.Request(
            base + "/mcp/call",
            data=(GOLDEN / "call_request.json").read_bytes(),
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        with urllib.request.urlopen(request, timeout=5) as response:
            assert response.read() == (GOLDEN / "call_response.json").read_bytes()

        # second server on the same port refuses with a clear error and exit 2
        clash = subprocess.run(
            [sys.executable, "-m", "toolrig.cli", "serve", "--listen", f"127.0.0.1:{port}"],
            capture_output=True,
            text=True,
            timeout=15,
        )
        assert clash.returncode == 2
        assert "cannot bind" in clash.stderr
    finally:
        process.terminate()
        process.wait(timeout=10)


def test_serve_resumes_from_journal(tmp_path):
    journal = tmp_path / "journal"

    def start():
        proc = subprocess.Popen(
            [sys.executable, "-m", "toolrig.cli", "serve", "--listen", "127.0.0.1:0",
             "--journal-dir", str(journal)],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
        )
        line = proc.stdout.readline()
        port = int(line.strip().rsplit(":", 1)[1])
        return proc, f"http://127.0.0.1:{port}"

    proc, base = start()
    try:
        request = urllib.request.Request(
            base + "/mcp/call",
            data=(GOLDEN / "call_request.json").read_bytes(),
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        urllib.request.urlopen(request, timeout=5).read()
    finally:
        proc.terminate()
        proc.wait(timeout=10)

    proc, base = start()  # killed and restarted: the journal replays
    try:
        request = urllib.request.Request(
            base + "/mcp-server/mcp",
            data=(GOLDEN / "query_request.json").read_bytes(),
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        with urllib.request.urlopen(request, timeout=5) as response:
            assert response.read() == (GOLDEN / "query_response.json").read_bytes()
    finally:
        proc.terminate()
        proc.wait(timeout=10)
