"""Refactor the three benchmark models and show what each step did."""

from cdrefactor import generators, io, run
from cdrefactor.metrics import measure
from cdrefactor.oracle import max_removable

for name in ("tc1", "tc2"):
    model = generators.generate(generators.TestCaseSpec(name))
    print(f"== {name} before ==")
    print(io.emit_cdm(model))
    result = run(model)
    for s in result.trace:
        print(f"  step {s.index}: {s.rule} at {s.focus} on {s.key.attr_name}:{s.key.type_name} "
              f"group={list(s.group)} -> removed {s.delta.copies_removed}"
              + (f", created {s.created}" if s.created else ""))
    print(f"== {name} after ==")
    print(io.emit_cdm(result.model))
    report = measure(model, result, max_removable(model))
    print(f"m={report.m} n={report.n} effectiveness={report.effectiveness}\n")

# Test case 3 is too large for the exhaustive search; its maximum is known.
tc3 = generators.tc3()
result = run(tc3)
report = measure(tc3, result, n_max=generators.TC3_MAX_REMOVABLE)
print(f"tc3: {result.steps} steps, sizes {tc3.sizes()} -> {result.model.sizes()}, "
      f"m={report.m}, effectiveness={report.effectiveness}")
