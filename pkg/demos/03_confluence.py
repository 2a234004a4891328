"""Random application orders usually agree, but not always.

Three root classes share clones pairwise.  Whichever R3 group is taken
first leaves a different set of clones behind.
"""

from cdrefactor import EngineConfig, Model, check_confluence, generators, io, run

for name in ("tc1", "tc2"):
    rep = check_confluence(generators.generate(generators.TestCaseSpec(name)), runs=50)
    print(f"{name}: {rep.outcomes} distinct result(s) over {rep.runs} seeded runs")

m = Model()
m.add_class("K0", {"b": "T", "c": "T"})
m.add_class("K2", {"a": "T", "b": "T", "c": "T"})
m.add_class("K4", {"a": "T"})
rep = check_confluence(m, runs=50)
print(f"triangle: {rep.outcomes} distinct results; seeds {rep.counterexample} disagree")
for seed in rep.counterexample:
    out = run(m, EngineConfig(seed=seed))
    print(f"-- seed {seed}: removed {out.copies_removed}")
    print(io.emit_cdm(out.model))
