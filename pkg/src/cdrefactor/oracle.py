"""Exhaustive search for the best achievable refactoring of a small model.

Every rule-conformant application sequence is explored: all R1 matches, one
R2 branch per qualifying clone key at each class (not only the largest group)
and one R3 branch per clone key shared by root classes.  States are memoised
on their canonical form, so sequences reaching isomorphic models are searched
once.  The objective is lexicographic: remove as many copies as possible,
then create as few classes as possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import rules
from .engine import TraceStep
from .isomorphism import canonical_form
from .model import Model, require_valid
from .rules import Match

DEFAULT_MAX_STATES = 200_000


class OracleInconsistencyError(RuntimeError):
    """The engine removed more copies than the oracle says is possible."""


@dataclass(frozen=True)
class OracleBudget:
    max_states: int = DEFAULT_MAX_STATES
    max_depth: int | None = None  # None: the model's property count

    def __post_init__(self):
        if self.max_states <= 0 or (self.max_depth is not None and self.max_depth <= 0):
            raise ValueError("budget limits must be positive")


@dataclass
class OracleResult:
    n_max: int
    min_new_classes: int
    witness: list[TraceStep] = field(default_factory=list)
    states_explored: int = 0
    exact: bool = True


def all_moves(model: Model, overlap: bool = False) -> list[Match]:
    moves = rules.find_matches_r1(model, check=False)
    moves += rules.find_matches_r2(model, check=False, all_groups=True)
    moves += rules.find_matches_r3(model, check=False, overlap=overlap)
    return moves


class _BudgetExceeded(Exception):
    pass


class _Search:
    def __init__(self, budget: OracleBudget, max_depth: int, overlap: bool, memoise: bool):
        self.budget = budget
        self.max_depth = max_depth
        self.overlap = overlap
        self.memoise = memoise
        self.memo: dict[tuple, tuple[int, int]] = {}
        self.states = 0
        self.exact = True

    def value(self, model: Model, depth: int) -> tuple[int, int]:
        """(copies removed, classes created) of the best continuation."""
        key = canonical_form(model) if self.memoise else None
        if key is not None and key in self.memo:
            return self.memo[key]
        self.states += 1
        if self.states > self.budget.max_states:
            self.exact = False
            raise _BudgetExceeded
        moves = all_moves(model, self.overlap)
        if moves and depth >= self.max_depth:
            self.exact = False
            moves = []
        best = (0, 0)
        for m in moves:
            nxt = model.copy()
            d = rules.apply(nxt, m)
            sub = self.value(nxt, depth + 1)
            cand = (d.copies_removed + sub[0], d.classes_created + sub[1])
            if _better(cand, best):
                best = cand
        if key is not None:
            self.memo[key] = best
        return best


def _better(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] > b[0] or (a[0] == b[0] and a[1] < b[1])


def max_removable(
    model: Model,
    budget: OracleBudget | None = None,
    overlap: bool = False,
    memoise: bool = True,
) -> OracleResult:
    """Maximum removable clone copies and the fewest new classes achieving it.

    If the budget runs out, the result has ``exact=False`` and holds the best
    sequence found so far (a lower bound).
    """
    budget = budget or OracleBudget()
    require_valid(model)
    work = model.copy()
    max_depth = budget.max_depth or max(len(work.properties), 1)
    search = _Search(budget, max_depth, overlap, memoise)
    try:
        best = search.value(work, 0)
    except _BudgetExceeded:
        return _greedy_bound(work, search)
    witness = _witness(work, search, best)
    return OracleResult(best[0], best[1], witness, search.states, search.exact)


def _witness(model: Model, search: _Search, best: tuple[int, int]) -> list[TraceStep]:
    """Walk down from the root, always taking a move that preserves the optimum."""
    trace: list[TraceStep] = []
    cur, target, depth = model.copy(), best, 0
    while target != (0, 0):
        for m in all_moves(cur, search.overlap):
            nxt = cur.copy()
            d = rules.apply(nxt, m)
            sub = search.value(nxt, depth + 1)
            if (d.copies_removed + sub[0], d.classes_created + sub[1]) == target:
                trace.append(_step(cur, nxt, m, d, len(trace)))
                cur, depth = nxt, depth + 1
                target = sub
                break
        else:  # pragma: no cover - memo table guarantees a move exists
            raise RuntimeError("witness reconstruction failed")
    return trace


def _step(before: Model, after: Model, m: Match, d, index: int) -> TraceStep:
    created = after.entities[d.created_entity].name if d.created_entity else None
    return TraceStep(
        index,
        m.rule,
        before.entities[m.focus].name,
        m.key,
        tuple(before.entities[i].name for i in m.group),
        d,
        created,
    )


def _greedy_bound(model: Model, search: _Search) -> OracleResult:
    """Fallback after budget exhaustion: follow first moves to a fixed point."""
    cur = model.copy()
    trace: list[TraceStep] = []
    removed = created = 0
    while True:
        moves = all_moves(cur, search.overlap)
        if not moves:
            break
        nxt = cur.copy()
        d = rules.apply(nxt, moves[0])
        trace.append(_step(cur, nxt, moves[0], d, len(trace)))
        removed += d.copies_removed
        created += d.classes_created
        cur = nxt
    return OracleResult(removed, created, trace, search.states, exact=False)


def effectiveness(m: int, n: int) -> float:
    """Share of removable clone copies that were actually removed."""
    if m < 0 or n < 0:
        raise ValueError("counts must be non-negative")
    if m > n:
        raise OracleInconsistencyError(f"removed {m} copies but at most {n} are removable")
    return 1.0 if n == 0 else m / n
