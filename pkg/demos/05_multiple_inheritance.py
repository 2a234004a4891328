"""Multi mode: a class may have several superclasses."""

from cdrefactor import MULTI, EngineConfig, Model, io, run

m = Model(MULTI)
m.add_class("P")
m.add_class("Q")
m.add_class("A", {"x": "T"}, ["P", "Q"])
m.add_class("B", {"x": "T"}, ["P", "Q"])
m.add_class("C", {"x": "T"}, ["P"])
print(io.emit_cdm(m))

# Both P and Q could receive x; the one with more direct subclasses wins.
result = run(m, EngineConfig(MULTI))
for s in result.trace:
    print(f"{s.rule} at {s.focus}: group {list(s.group)}")
print(io.emit_cdm(result.model))

# With overlap, R3 also gathers classes that already have a superclass.
m = Model(MULTI)
m.add_class("Base")
m.add_class("Kid", {"z": "T"}, ["Base"])
m.add_class("Loner", {"z": "T"})
for overlap in (False, True):
    out = run(m, EngineConfig(MULTI, allow_overlap=overlap))
    print(f"allow_overlap={overlap}: removed {out.copies_removed}")
