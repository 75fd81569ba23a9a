#!/usr/bin/env python3
# The parametric problem bank: templates, seeded instances, and the
# perturbation battery that every shipped template must survive.

from toolrig.bank import bundle_load, instantiate, validate

templates = bundle_load()
print(f"{len(templates)} bundled templates:")
for t in templates:
    flags = " [adversarial]" if t.adversarial else ""
    print(f"  {t.id}  {t.domain:<14} min_steps={t.min_steps}{flags}")

# One template, many distinct test cases: sampling is a pure function of
# (template, seed).
kinetic = templates[0]
for seed in (0, 1, 2):
    inst = instantiate(kinetic, seed)
    print(f"\n{inst.instance_id}: params "
          f"A={inst.bindings['A']} B={inst.bindings['B']} C={inst.bindings['C']} m={inst.bindings['m']}")
    print("  reference:", {k: round(v["value"], 6) for k, v in inst.reference.items()})

# The canonical trace is concretized by actually running the tools; expected
# outputs are frozen into the instance.
inst = instantiate(kinetic, 0, overrides={"A": 1, "B": 3, "C": 2, "m": 2})
print("\npinned instance trace:")
for step in inst.trace:
    marker = "  [checkpoint]" if step.checkpoint else ""
    print(f"  {step.step_id} {step.tool_id}{marker}")
print("  final answer:", inst.final_answer())

# Validation re-runs the trace under input perturbations, tolerance shifts,
# and commutative reordering.
report = validate(kinetic, 10)
print(f"\nvalidate({kinetic.id}, 10 seeds): all_stable={report.all_stable}")

adversarial = [t for t in templates if t.adversarial]
for t in adversarial:
    inst = instantiate(t, 0)
    noted = {s.step_id: list(s.expected_notes) for s in inst.trace if s.expected_notes}
    print(f"{t.id} expected diagnostics: {noted}")
