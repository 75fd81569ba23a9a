"""Acceptance suite: one test per release criterion, at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one pass/fail line per
criterion.  Each criterion also carries its runtime budget; the suite asserts
the budgets hold so regressions in determinism or performance surface here.
"""

import random
import time
import urllib.request
from contextlib import contextmanager
from pathlib import Path

import pytest

from helpers import central_difference, cofactor_determinant, gen_expr, try_eval
from toolrig.agents import OracleAgent, ViolationAgent
from toolrig.bank import bundle_load, instantiate, validate
from toolrig.evaluation import RunConfig, reconstruct, run, run_episode, score
from toolrig.expr import canonicalize, differentiate, evaluate, parse, print_expr
from toolrig.server import ContextServer, ContextService
from toolrig.tools import default_registry
from toolrig.tools.polynomial import poly_eval

GOLDEN = Path(__file__).parent / "golden"


@contextmanager
def criterion(name: str, budget_s: float):
    started = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE] {name}: FAIL")
        raise
    elapsed = time.monotonic() - started
    if elapsed > budget_s:
        print(f"[ACCEPTANCE] {name}: FAIL (runtime {elapsed:.1f}s > {budget_s}s)")
        raise AssertionError(f"{name} exceeded its {budget_s}s budget ({elapsed:.1f}s)")
    print(f"[ACCEPTANCE] {name}: PASS ({elapsed:.2f}s)")


def test_wire_golden_byte_for_byte():
    """The two protocol request/response pairs reproduce byte-for-byte."""
    with criterion("wire-golden", 1.0):
        server = ContextServer(ContextService())
        server.start()
        try:
            for path, request_file, response_file in (
                ("/mcp/call", "call_request.json", "call_response.json"),
                ("/mcp-server/mcp", "query_request.json", "query_response.json"),
            ):
                request = urllib.request.Request(
                    server.base_url + path,
                    data=(GOLDEN / request_file).read_bytes(),
                    headers={"Content-Type": "application/json"},
                    method="POST",
                )
                with urllib.request.urlopen(request, timeout=5) as response:
                    assert response.read() == (GOLDEN / response_file).read_bytes()
        finally:
            server.stop()


def test_derivative_correctness_500_seeded():
    """500 seeded expressions: symbolic vs central differences, rel err <= 1e-5."""
    with criterion("derivative-correctness", 30.0):
        rng = random.Random(20260810)
        exercised = 0
        for _ in range(500):
            e = canonicalize(gen_expr(rng, symbols=("x",), depth=3))
            d = differentiate(e, "x")
            probed = False
            for _ in range(12):
                x = rng.uniform(-2.0, 2.0)
                if abs(x) < 0.05:
                    continue
                if any(try_eval(e, {"x": x + off}) is None for off in (-1e-6, 0.0, 1e-6)):
                    continue
                sym_v = try_eval(d, {"x": x})
                if sym_v is None or abs(sym_v) > 1e6:
                    continue
                fd = central_difference(e, "x", {"x": x})
                assert abs(fd - sym_v) <= 1e-5 * (1.0 + abs(sym_v)), print_expr(e)
                probed = True
            exercised += probed
        assert exercised >= 300


def test_solver_and_determinant_oracles():
    """Root residuals <= 1e-8*(1+max coeff); 200 determinants vs cofactor to 1e-10."""
    with criterion("solver-determinant-oracles", 30.0):
        registry = default_registry()
        rng = random.Random(20260810)
        for _ in range(120):
            degree = rng.randint(1, 8)
            coeffs = [rng.randint(-9, 9) for _ in range(degree)] + [rng.randint(1, 9)]
            text = " + ".join(f"{c}*t^{k}" for k, c in enumerate(coeffs))
            result = registry.execute("solve_equation", {"equation": f"{text} = 0", "wrt": "t"})
            assert result.ok
            bound = 1e-8 * (1.0 + max(abs(c) for c in coeffs))
            for root in result.output["roots"]:
                z = complex(root["re"], root["im"])
                assert abs(poly_eval([float(c) for c in coeffs], z)) <= bound

        for _ in range(200):
            n = rng.randint(1, 4)
            matrix = [[rng.uniform(-3, 3) for _ in range(n)] for _ in range(n)]
            got = registry.execute("matrix_determinant", {"matrix": matrix}).output["value"]
            want = cofactor_determinant(matrix)
            assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_oracle_completeness_60_instances():
    """Canonical-trace agent scores 100 (70+20+10), accuracy true, on 12x5 instances."""
    with criterion("oracle-completeness", 300.0):
        service = ContextService()
        for template in bundle_load():
            for seed in range(5):
                instance = instantiate(template, seed)
                episode = run_episode(
                    OracleAgent(instance), instance, service, f"acc/{instance.instance_id}"
                )
                episode = reconstruct(episode, instance, service)
                breakdown = score(episode, instance)
                assert breakdown.tool_usage == 70.0, (template.id, seed)
                assert breakdown.correctness == 20.0, (template.id, seed)
                assert breakdown.approach == 10.0, (template.id, seed)
                assert breakdown.partial_total == 100.0, (template.id, seed)
                assert breakdown.accuracy is True, (template.id, seed)


def test_kinetic_energy_end_to_end():
    """With A=1, B=3, C=2, m=2 the pipeline yields t*=1, K*=1, vs a dense-grid oracle."""
    with criterion("kinetic-energy-end-to-end", 10.0):
        template = bundle_load()[0]
        instance = instantiate(template, 0, overrides={"A": 1, "B": 3, "C": 2, "m": 2})

        service = ContextService()
        episode = run_episode(OracleAgent(instance), instance, service, "kin")
        breakdown = score(reconstruct(episode, instance, service), instance)
        assert breakdown.accuracy

        t_star = instance.reference["t_star"]["value"]
        k_star = instance.reference["K_star"]["value"]

        # independent oracle: dense grid scan of K(t) on [0, 3] plus local refinement
        kinetic = parse("0.5*2*(3*t^2 - 6*t + 2)^2")

        def K(t: float) -> float:
            return evaluate(kinetic, {"t": t}).value

        coarse = [i * 1e-4 for i in range(30001)]
        values = [K(t) for t in coarse]
        interior = [
            i for i in range(1, len(coarse) - 1) if values[i] >= values[i - 1] and values[i] >= values[i + 1]
        ]
        assert interior, "no interior local maximum found by the grid"
        best = max(interior, key=lambda i: values[i])
        lo, hi = coarse[best - 1], coarse[best + 1]
        for _ in range(60):  # ternary refinement around the grid winner
            m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
            if K(m1) < K(m2):
                lo = m1
            else:
                hi = m2
        t_grid = (lo + hi) / 2
        assert abs(t_grid - t_star) <= 1e-6
        assert abs(K(t_grid) - k_star) <= 1e-6
        assert abs(t_star - 1.0) <= 1e-9
        assert abs(k_star - 1.0) <= 1e-9


def test_violation_handling():
    """Multi-call reconstructs with strictly lower compliance; no marker, no accuracy."""
    with criterion("violation-handling", 10.0):
        template = bundle_load()[0]
        instance = instantiate(template, 0, overrides={"A": 1, "B": 3, "C": 2, "m": 2})
        service = ContextService()

        compliant = score(
            reconstruct(
                run_episode(OracleAgent(instance), instance, service, "v/ok"), instance, service
            ),
            instance,
        )
        episode = run_episode(
            ViolationAgent(instance, "multi_call"), instance, service, "v/multi"
        )
        episode = reconstruct(episode, instance, service)
        split = score(episode, instance)
        assert episode.reconstructed is True
        assert split.compliance < compliant.compliance
        assert split.partial_total < compliant.partial_total

        marker_less = run_episode(
            ViolationAgent(instance, "no_marker"), instance, service, "v/nomark"
        )
        marker_less = reconstruct(marker_less, instance, service)
        assert score(marker_less, instance).accuracy is False


def test_determinism_and_resumability(tmp_path):
    """Kill a parallel-8 run mid-way, resume, compare to an uninterrupted serial run."""
    with criterion("determinism-resumability", 300.0):
        instances = [instantiate(t, s) for t in bundle_load() for s in range(5)]
        serial = run(["oracle"], instances, RunConfig(models=("oracle",), parallelism=1))

        resume_dir = tmp_path / "interrupted"
        killed = run(
            ["oracle"],
            instances,
            RunConfig(models=("oracle",), parallelism=8, resume_dir=resume_dir, stop_after=25),
        )
        assert killed.partial
        resumed = run(
            ["oracle"], instances, RunConfig(models=("oracle",), parallelism=8, resume_dir=resume_dir)
        )
        assert resumed.csv() == serial.csv()
        assert resumed.summary_csv() == serial.summary_csv()


def test_template_validation_25_seeds():
    """Every bundled template is stable under the perturbation battery, 25 seeds."""
    with criterion("template-validation", 300.0):
        for template in bundle_load():
            report = validate(template, 25)
            assert report.all_stable, (
                template.id,
                [s.messages for s in report.seeds if not s.stable],
            )


def test_difficulty_bucketing():
    """Buckets {6,7,8,9,10,15} emitted; the degrading agent's curve never increases."""
    with criterion("difficulty-bucketing", 60.0):
        instances = [instantiate(t, s) for t in bundle_load() for s in range(2)]
        report = run(["degrading"], instances, RunConfig(models=("degrading",), parallelism=4))
        buckets = report.buckets()
        assert [b["bucket"] for b in buckets] == [6, 7, 8, 9, 10, 15]
        curve = [b["accuracy_pct"] for b in buckets if b["accuracy_pct"] is not None]
        assert len(curve) >= 5
        assert all(a >= b for a, b in zip(curve, curve[1:])), curve
        lines = report.buckets_csv().strip().split("\n")
        assert [line.split(",")[1] for line in lines[1:]] == ["6", "7", "8", "9", "10", "15"]
