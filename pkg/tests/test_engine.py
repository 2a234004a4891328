import random

import pytest
from hypothesis import given, settings, strategies as st

from cdrefactor import generators
from cdrefactor.engine import EngineConfig, ReplayError, check_confluence, replay, run, step
from cdrefactor.io import emit_cdm
from cdrefactor.isomorphism import isomorphic
from cdrefactor.model import InvalidModelError, Model, validate
from cdrefactor.rules import R1, R2, R3, find_matches_r1

from randmodels import corpus, random_model


def test_step_on_tc3_is_r3(tc3_model):
    m = tc3_model.copy()
    match, delta = step(m, EngineConfig())
    assert match.rule == R3
    assert delta.classes_created == 1


def test_step_at_fixed_point_returns_none(tc1):
    out = run(tc1).model
    assert step(out, EngineConfig()) is None


def test_step_prefers_r1_over_r2():
    m = Model()
    m.add_class("P")
    m.add_class("Q", {"y": "T"}, ["P"])
    m.add_class("S", {"y": "T"}, ["P"])
    m.add_class("R")
    m.add_class("A", {"x": "T"}, ["R"])
    m.add_class("B", {"x": "T"}, ["R"])
    m.add_class("C", {}, ["R"])
    match, _ = step(m, EngineConfig())
    assert match.rule == R1


def test_run_tc3(tc3_model):
    r = run(tc3_model)
    assert r.steps == 10
    assert [s.rule for s in r.trace] == [R3] + [R1] * 9
    assert (r.classes_created, r.copies_removed) == (1, 4990)
    assert r.converged


def test_run_tc1(tc1):
    r = run(tc1)
    assert r.steps == 1
    (s,) = r.trace
    assert s.rule == R2 and set(s.group) == {"B", "C", "D"} and s.key.attr_name == "b"
    assert (r.classes_created, r.copies_removed) == (1, 2)


def test_run_tc2(tc2):
    r = run(tc2)
    assert [s.rule for s in r.trace] == [R1, R1, R3]
    assert (r.classes_created, r.copies_removed) == (1, 3)


def test_run_empty_model():
    m = Model()
    r = run(m)
    assert r.steps == 0
    assert isomorphic(r.model, m)


def test_run_does_not_touch_input(tc1):
    before = emit_cdm(tc1)
    run(tc1)
    assert emit_cdm(tc1) == before


def test_run_rejects_invalid_model():
    m = Model()
    m.add_entity("A")
    m.add_entity("A")
    with pytest.raises(InvalidModelError):
        run(m)


def test_max_steps_reports_non_convergence(tc3_model):
    r = run(tc3_model, EngineConfig(max_steps=3))
    assert r.steps == 3
    assert not r.converged
    assert run(tc3_model, EngineConfig(max_steps=10)).converged


def test_bad_config():
    with pytest.raises(ValueError):
        EngineConfig(max_steps=-1)
    with pytest.raises(ValueError):
        EngineConfig(mode="dual")


def test_potential_accounting(tc2):
    r = run(tc2)
    assert r.potential_final == r.potential_initial - sum(s.delta.copies_removed for s in r.trace)


def test_trace_indices_consecutive(tc3_model):
    r = run(tc3_model)
    assert [s.index for s in r.trace] == list(range(r.steps))


def test_deterministic_runs_identical(tc2):
    a, b = run(tc2), run(tc2.copy())
    assert emit_cdm(a.model) == emit_cdm(b.model)
    assert [s.to_dict() for s in a.trace] == [s.to_dict() for s in b.trace]


def _trace_key(r):
    return [s.to_dict() for s in r.trace]


@pytest.mark.parametrize("kind", ["tc1", "tc2", "tc3", "stress"])
def test_incremental_matches_full_rescan_on_benchmarks(kind):
    m = generators.generate(generators.TestCaseSpec(kind, 5))
    fast = run(m, EngineConfig(incremental=True))
    slow = run(m, EngineConfig(incremental=False))
    assert _trace_key(fast) == _trace_key(slow)


def test_incremental_matches_full_rescan_on_random_models():
    for m in corpus(21, 300, max_classes=8, max_attrs=8):
        assert _trace_key(run(m)) == _trace_key(run(m, EngineConfig(incremental=False)))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000), st.one_of(st.none(), st.integers(0, 1000)))
def test_termination_and_priority(seed, order_seed):
    m = random_model(random.Random(seed))
    r = run(m, EngineConfig(seed=order_seed))
    assert r.steps <= len(m.properties)
    assert validate(r.model) == []
    replayed = replay(m, r.trace, check_priority=True)
    assert emit_cdm(replayed) == emit_cdm(r.model)


def test_replay_detects_priority_violation(tc2):
    r = run(tc2)
    bad = [r.trace[2]]  # the R3 step, while both R1 matches are still pending
    with pytest.raises(ReplayError):
        replay(tc2, bad, check_priority=True)


def test_replay_rejects_foreign_trace(tc1, tc2):
    with pytest.raises(ReplayError):
        replay(tc2, run(tc1).trace)


def test_confluence_on_benchmarks(tc1, tc2):
    assert check_confluence(tc1, 30).confluent
    assert check_confluence(tc2, 30).confluent


def test_confluence_counterexample_is_reproducible():
    # three roots, three equally large R3 groups: the first choice strands clones
    m = Model()
    m.add_class("K0", {"b": "T", "c": "T"})
    m.add_class("K2", {"a": "T", "b": "T", "c": "T"})
    m.add_class("K4", {"a": "T"})
    rep = check_confluence(m, 40)
    assert not rep.confluent
    s1, s2 = rep.counterexample
    a = run(m, EngineConfig(seed=s1)).model
    b = run(m, EngineConfig(seed=s2)).model
    assert not isomorphic(a, b)
