"""Hand-built multiple-inheritance models run in multi mode."""

import pytest

from cdrefactor.engine import EngineConfig, run
from cdrefactor.model import MULTI, Model, validate
from cdrefactor.rules import R1, find_matches_r1

from props import preservation_violations


def build(classes):
    m = Model(MULTI)
    for name, attrs, supers in classes:
        m.add_class(name, attrs, supers)
    return m


T = "T"

MODELS = {
    "diamond_pull_up": [
        ("Top", {}, []), ("L", {"a": T}, ["Top"]), ("R", {"b": T}, ["Top"]), ("Bot", {}, ["L", "R"]),
        ("S1", {"z": T}, ["Bot"]), ("S2", {"z": T}, ["Bot"]),
    ],
    "two_qualifying_superclasses": [
        ("P", {}, []), ("Q", {}, []),
        ("A", {"x": T}, ["P", "Q"]), ("B", {"x": T}, ["P", "Q"]), ("C", {"x": T}, ["P"]),
    ],
    "shared_child_r2": [
        ("P", {}, []), ("Q", {}, []),
        ("A", {"v": T}, ["P"]), ("B", {"v": T}, ["P", "Q"]), ("C", {}, ["P"]), ("D", {"w": T}, ["Q"]),
    ],
    "mixin_roots": [
        ("Named", {"name": "S"}, []), ("Dated", {"date": "D"}, []),
        ("Doc", {"name": "S"}, []), ("Event", {"date": "D"}, []),
    ],
    "clash_blocked_pull_up": [
        ("P", {"x": "U"}, []), ("Q", {}, []),
        ("A", {"x": T}, ["Q"]), ("B", {"x": T}, ["Q"]), ("C", {}, ["P", "Q"]),
    ],
    "deep_lattice": [
        ("R", {}, []), ("S1", {}, ["R"]), ("S2", {}, ["R"]),
        ("A", {"k": T}, ["S1"]), ("B", {"k": T}, ["S1", "S2"]), ("C", {"k": T}, ["S2"]),
    ],
    "two_keys_two_parents": [
        ("P", {}, []), ("Q", {}, []),
        ("A", {"x": T, "y": T}, ["P", "Q"]), ("B", {"x": T, "y": T}, ["P", "Q"]),
    ],
    "root_and_child_clone": [
        ("Base", {}, []), ("Kid", {"z": T}, ["Base"]), ("Loner", {"z": T}, []), ("Other", {"z": T}, []),
    ],
    "wide_fan_in": [
        ("P1", {}, []), ("P2", {}, []), ("P3", {}, []),
        ("X", {"a": T}, ["P1", "P2", "P3"]), ("Y", {"a": T}, ["P1", "P2"]), ("Z", {"a": T}, ["P3"]),
    ],
    "no_clones": [
        ("P", {"p": T}, []), ("Q", {"q": T}, []), ("C", {"c": T}, ["P", "Q"]),
    ],
    "types_differ": [
        ("P", {}, []), ("A", {"x": T}, ["P"]), ("B", {"x": "U"}, ["P"]), ("C", {"x": T}, ["P"]),
    ],
}


@pytest.fixture(params=sorted(MODELS))
def multi_model(request):
    return request.param, build(MODELS[request.param])


def _no_duplicate_inherited_names(model):
    return [v for v in validate(model) if "clash" in v.invariant]


def test_suite_size():
    assert len(MODELS) >= 10


def test_multi_models_are_valid(multi_model):
    _, m = multi_model
    assert validate(m) == []


@pytest.mark.parametrize("overlap", [False, True])
def test_run_keeps_model_sound(multi_model, overlap):
    _, m = multi_model
    r = run(m, EngineConfig(MULTI, allow_overlap=overlap))
    assert r.converged
    assert validate(r.model) == []
    assert _no_duplicate_inherited_names(r.model) == []
    assert preservation_violations(m, r) == []
    assert r.potential_final == len(m.properties) - r.copies_removed


def test_pull_up_prefers_the_larger_superclass():
    m = build(MODELS["two_qualifying_superclasses"])
    first = find_matches_r1(m)
    # both qualify; P has three direct subclasses, Q only two
    assert [m.entities[x.focus].name for x in first] == ["P", "Q"]
    r = run(m, EngineConfig(MULTI))
    assert r.trace[0].rule == R1 and r.trace[0].focus == "P"
    assert r.copies_removed == 2


def test_equal_sized_superclasses_fall_back_to_name():
    m = build([
        ("Big", {}, []), ("Small", {}, []),
        ("A", {"x": T}, ["Big", "Small"]), ("B", {"x": T}, ["Big", "Small"]), ("C", {"x": T}, ["Big"]),
        ("D", {"x": T}, ["Small"]),
    ])
    # Big {A,B,C} and Small {A,B,D} tie on size
    names = [m.entities[x.focus].name for x in find_matches_r1(m)]
    assert names == ["Big", "Small"]
    r = run(m, EngineConfig(MULTI))
    assert r.trace[0].focus == "Big"
    assert validate(r.model) == []


def test_diamond_pull_up_result():
    m = build(MODELS["diamond_pull_up"])
    r = run(m, EngineConfig(MULTI))
    assert [(s.rule, s.focus) for s in r.trace] == [(R1, "Bot")]
    assert len(r.model.entity_by_name("Bot").owned_attributes) == 1


def test_clash_guard_blocks_pull_up():
    m = build(MODELS["clash_blocked_pull_up"])
    # pulling x:T into Q would give C two different x's
    assert find_matches_r1(m) == []
    r = run(m, EngineConfig(MULTI))
    assert _no_duplicate_inherited_names(r.model) == []


def test_overlap_groups_non_roots():
    m = build(MODELS["root_and_child_clone"])
    plain = run(m, EngineConfig(MULTI))
    wide = run(m, EngineConfig(MULTI, allow_overlap=True))
    assert plain.copies_removed == 1
    assert wide.copies_removed == 2
    kid = wide.model.entity_by_name("Kid")
    assert len(kid.generalisations) == 2
