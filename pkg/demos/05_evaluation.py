#!/usr/bin/env python3
# Score episodes on the 100-point rubric: a perfect canonical replay, a
# protocol violator whose trace gets reconstructed, and the aggregate
# difficulty curve of a deliberately degrading agent.

from toolrig.agents import OracleAgent, ViolationAgent
from toolrig.bank import bundle_load, instantiate
from toolrig.evaluation import RunConfig, reconstruct, run, run_episode, score
from toolrig.server import ContextService

templates = bundle_load()
instance = instantiate(templates[0], 0, overrides={"A": 1, "B": 3, "C": 2, "m": 2})
service = ContextService()


def evaluate(agent, run_id):
    episode = run_episode(agent, instance, service, run_id)
    episode = reconstruct(episode, instance, service)
    breakdown = score(episode, instance)
    print(f"\n{run_id}")
    print(f"  tool_usage {breakdown.tool_usage:5.1f}/70   correctness {breakdown.correctness:4.1f}/20"
          f"   approach {breakdown.approach:4.1f}/10   partial {breakdown.partial_total:5.1f}/100")
    print(f"  accuracy={breakdown.accuracy} fidelity={breakdown.trace_fidelity:.3f}"
          f" verification={breakdown.verification_score:.2f} compliance={breakdown.compliance}"
          f" reconstructed={episode.reconstructed}")


evaluate(OracleAgent(instance), "oracle-replay")
evaluate(ViolationAgent(instance, "multi_call"), "multi-call-violator")
evaluate(ViolationAgent(instance, "manual"), "manual-arithmetic")
evaluate(ViolationAgent(instance, "no_marker"), "missing-marker")

# Aggregate reporting: accuracy per minimum-step bucket for a scripted agent
# that gives up beyond 7 canonical steps.
instances = [instantiate(t, s) for t in templates for s in (0, 1)]
report = run(["degrading", "oracle"], instances,
             RunConfig(models=("degrading", "oracle"), parallelism=4))
print("\naccuracy by min-step bucket:")
print(report.buckets_csv())
print(report.summary_csv())
