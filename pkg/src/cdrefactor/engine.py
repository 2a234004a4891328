"""Fixed-point scheduler.

After every application the scheduler restarts from R1, so R1 always has
priority over R2 and R2 over R3.  Each application removes at least one
property, which bounds the number of steps by the initial property count.
"""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import dataclass, field

from . import rules
from .model import MODES, SINGLE, Model, require_valid
from .rules import R1, R2, R3, ApplyDelta, CloneKey, Match


@dataclass
class EngineConfig:
    mode: str = SINGLE
    seed: int | None = None  # None selects the deterministic match order
    allow_overlap: bool = False
    max_steps: int | None = None
    incremental: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.max_steps is not None and self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")

    @property
    def deterministic(self) -> bool:
        return self.seed is None


@dataclass
class TraceStep:
    index: int
    rule: str
    focus: str
    key: CloneKey
    group: tuple[str, ...]
    delta: ApplyDelta
    created: str | None = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "rule": self.rule,
            "focus": self.focus,
            "key": {"attr_name": self.key.attr_name, "type_name": self.key.type_name},
            "group": list(self.group),
            "created": self.created,
            "delta": {
                "copies_removed": self.delta.copies_removed,
                "classes_created": self.delta.classes_created,
            },
        }


@dataclass
class RunResult:
    model: Model
    trace: list[TraceStep]
    steps: int
    potential_initial: int
    potential_final: int
    converged: bool
    elapsed_ms: float
    input_sizes: tuple[int, int, int] = (0, 0, 0)
    rule_counts: dict[str, int] = field(default_factory=dict)

    @property
    def copies_removed(self) -> int:
        return sum(s.delta.copies_removed for s in self.trace)

    @property
    def classes_created(self) -> int:
        return sum(s.delta.classes_created for s in self.trace)


def _detect(model: Model, config: EngineConfig, rule: str) -> list[Match]:
    if rule == R1:
        return rules.find_matches_r1(model, check=False)
    if rule == R2:
        return rules.find_matches_r2(model, check=False)
    return rules.find_matches_r3(model, check=False, overlap=config.allow_overlap)


def _select(model: Model, config: EngineConfig, rng: random.Random | None) -> Match | None:
    for rule in (R1, R2, R3):
        matches = _detect(model, config, rule)
        if matches:
            return rng.choice(matches) if rng is not None else matches[0]
    return None


def step(model: Model, config: EngineConfig, rng: random.Random | None = None):
    """Apply the highest-priority match; return (match, delta) or None at a fixed point."""
    if rng is None and config.seed is not None:
        rng = random.Random(config.seed)
    m = _select(model, config, rng)
    if m is None:
        return None
    return m, rules.apply(model, m)


class _Scheduler:
    """Deterministic match selection without rescanning the whole model.

    R1 and R2 matches at a class depend only on its direct subclasses and
    their owned attributes, so after an application only the classes touched
    by it (and their superclasses) need re-examination.  Candidate foci sit in
    name-ordered heaps; the first focus that still has matches is the one a
    full rescan would pick.  R3 is rescanned in full, and only when R1 and R2
    are exhausted.
    """

    def __init__(self, model: Model, config: EngineConfig):
        self.model = model
        self.config = config
        self.heaps: dict[str, list] = {R1: [], R2: []}
        self.queued: dict[str, set[int]] = {R1: set(), R2: set()}
        for eid, e in model.entities.items():
            if len(e.specialisations) >= 2:
                self.push(eid)

    def push(self, eid: int) -> None:
        name = self.model.entities[eid].name
        for rule in (R1, R2):
            if eid not in self.queued[rule]:
                self.queued[rule].add(eid)
                heapq.heappush(self.heaps[rule], (name, eid))

    def _first(self, rule: str, finder) -> Match | None:
        heap, queued = self.heaps[rule], self.queued[rule]
        while heap:
            _, eid = heap[0]
            found = finder(self.model, eid)
            if found:
                return found[0]
            heapq.heappop(heap)
            queued.discard(eid)
        return None

    def next_match(self) -> Match | None:
        m = self._first(R1, rules.r1_at)
        if m is None:
            m = self._first(R2, rules.r2_at)
        if m is None:
            found = rules.find_matches_r3(self.model, check=False, overlap=self.config.allow_overlap)
            m = found[0] if found else None
        return m

    def touched(self, m: Match, delta: ApplyDelta) -> None:
        model = self.model
        dirty = set()
        for eid in (m.focus, delta.created_entity):
            if eid is not None:
                dirty.add(eid)
                dirty.update(model.parents(eid))
        for eid in m.group:
            dirty.update(model.parents(eid))
        for eid in dirty:
            self.push(eid)


def run(model: Model, config: EngineConfig | None = None, inplace: bool = False) -> RunResult:
    """Apply rules until no rule matches (or ``max_steps`` is reached)."""
    config = config or EngineConfig()
    work = model if inplace else model.copy()
    work.mode = config.mode
    require_valid(work)
    input_sizes = work.sizes()
    potential_initial = len(work.properties)
    rng = random.Random(config.seed) if config.seed is not None else None
    sched = None
    if config.deterministic and config.incremental and config.mode == SINGLE:
        sched = _Scheduler(work, config)

    trace: list[TraceStep] = []
    converged = False
    t0 = time.perf_counter()
    while True:
        if config.max_steps is not None and len(trace) >= config.max_steps:
            converged = sched.next_match() is None if sched else _select(work, config, None) is None
            break
        m = sched.next_match() if sched else _select(work, config, rng)
        if m is None:
            converged = True
            break
        focus_name = work.entities[m.focus].name
        group_names = tuple(work.entities[i].name for i in m.group)
        delta = rules.apply(work, m)
        created = work.entities[delta.created_entity].name if delta.created_entity else None
        trace.append(TraceStep(len(trace), m.rule, focus_name, m.key, group_names, delta, created))
        if sched:
            sched.touched(m, delta)
    elapsed = (time.perf_counter() - t0) * 1000.0

    counts = {r: 0 for r in (R1, R2, R3)}
    for s in trace:
        counts[s.rule] += 1
    return RunResult(
        model=work,
        trace=trace,
        steps=len(trace),
        potential_initial=potential_initial,
        potential_final=len(work.properties),
        converged=converged,
        elapsed_ms=elapsed,
        input_sizes=input_sizes,
        rule_counts=counts,
    )


class ReplayError(Exception):
    """A trace step could not be re-applied to the model."""


def replay(model: Model, trace: list[TraceStep], check_priority: bool = False) -> Model:
    """Re-apply a trace to a copy of ``model`` and return the result.

    Steps are resolved by entity names, so no detection is needed.  With
    ``check_priority`` the replay also verifies that no R1 match was pending
    when an R2 or R3 step fired, and no R2 match when an R3 step fired.
    """
    work = model.copy()
    for s in trace:
        if check_priority and s.rule in (R2, R3):
            if rules.find_matches_r1(work, check=False):
                raise ReplayError(f"step {s.index}: {s.rule} fired while an R1 match existed")
            if s.rule == R3 and rules.find_matches_r2(work, check=False):
                raise ReplayError(f"step {s.index}: R3 fired while an R2 match existed")
        try:
            focus = work.entity_by_name(s.focus).id
            group = tuple(work.entity_by_name(n).id for n in s.group)
        except KeyError as exc:
            raise ReplayError(f"step {s.index}: {exc}") from None
        carrier = work.owned_by_name(group[0], s.key.attr_name)
        if carrier is None:
            raise ReplayError(f"step {s.index}: {s.group[0]!r} does not own {s.key}")
        m = Match(s.rule, focus, s.key, group, carrier, work.revision)
        try:
            delta = rules.apply(work, m)
        except rules.StaleMatchError as exc:
            raise ReplayError(f"step {s.index}: {exc}") from None
        if (delta.copies_removed, delta.classes_created) != (
            s.delta.copies_removed, s.delta.classes_created
        ):
            raise ReplayError(f"step {s.index}: delta differs from the recorded one")
        created = work.entities[delta.created_entity].name if delta.created_entity else None
        if created != s.created:
            raise ReplayError(f"step {s.index}: created {created!r}, trace says {s.created!r}")
    return work


@dataclass
class ConfluenceReport:
    runs: int
    seeds: list[int]
    outcomes: int  # number of pairwise non-isomorphic results
    counterexample: tuple[int, int] | None = None  # two seeds with different results

    @property
    def confluent(self) -> bool:
        return self.outcomes <= 1


def check_confluence(model: Model, runs: int = 100, base_seed: int = 0,
                     config: EngineConfig | None = None) -> ConfluenceReport:
    """Run the engine under ``runs`` seeded random orders and compare the results."""
    from .isomorphism import canonical_form

    config = config or EngineConfig()
    seeds = list(range(base_seed, base_seed + runs))
    first_seed: dict[tuple, int] = {}
    counter = None
    for seed in seeds:
        cfg = EngineConfig(config.mode, seed, config.allow_overlap, config.max_steps)
        form = canonical_form(run(model, cfg).model)
        if form not in first_seed:
            if first_seed and counter is None:
                counter = (next(iter(first_seed.values())), seed)
            first_seed[form] = seed
    return ConfluenceReport(runs, seeds, len(first_seed), counter)
