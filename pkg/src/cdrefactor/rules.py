"""The three clone-removal rules: detection and in-place application.

R1  pull up an attribute owned by every direct subclass of a class.
R2  extract a new intermediate superclass for the largest strict subset of
    direct subclasses sharing an attribute.
R3  create a new root class for root classes sharing an attribute.

Detection functions are pure.  ``apply`` mutates the model and refuses a match
computed against an older revision.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .model import MULTI, Model, ModelError, require_valid, validate

R1, R2, R3 = "R1", "R2", "R3"
RULES = (R1, R2, R3)

_CLASH = ("inherited attribute clash", "inherited name clash", "duplicate attribute name")
_MAX_SUFFIX = 1_000_000


class StaleMatchError(ModelError):
    """The model changed since the match was detected."""


class NameExhaustedError(RuntimeError):
    """No fresh name could be derived for a generated class."""


@dataclass(frozen=True, order=True)
class CloneKey:
    attr_name: str
    type_name: str

    def __str__(self) -> str:
        return f"{self.attr_name}:{self.type_name}"


@dataclass(frozen=True)
class Match:
    rule: str
    focus: int | None
    key: CloneKey
    group: tuple[int, ...]
    carrier: int
    revision: int


@dataclass(frozen=True)
class ApplyDelta:
    copies_removed: int
    classes_created: int
    created_entity: int | None = None
    created_generalizations: tuple[int, ...] = field(default_factory=tuple)


def owned_keys(model: Model, eid: int) -> dict[CloneKey, int]:
    out = {}
    for pid in model.entities[eid].owned_attributes:
        p = model.properties[pid]
        out[CloneKey(p.name, model.types[p.type_ref].name)] = pid
    return out


def _by_name(model: Model, ids) -> tuple[int, ...]:
    return tuple(sorted(ids, key=lambda i: model.entities[i].name))


def _match(model: Model, rule: str, focus, key: CloneKey, group, owners=None) -> Match:
    group = _by_name(model, group)
    first = group[0]
    carrier = owners[first] if owners is not None else owned_keys(model, first)[key]
    return Match(rule, focus, key, group, carrier, model.revision)


def _clash_free(model: Model, m: Match) -> bool:
    trial = model.copy()
    _apply(trial, m)
    return not any(v.invariant in _CLASH for v in validate(trial))


# -- detection ----------------------------------------------------------


def r1_at(model: Model, focus: int) -> list[Match]:
    """R1 matches with the given focus, ordered by clone key."""
    subs = model.children(focus)
    if len(subs) < 2:
        return []
    key_sets = [owned_keys(model, s) for s in subs]
    common = set(key_sets[0])
    for ks in key_sets[1:]:
        common &= ks.keys()
        if not common:
            return []
    ordered = _by_name(model, subs)
    first = subs.index(ordered[0])
    out = [
        Match(R1, focus, key, ordered, key_sets[first][key], model.revision)
        for key in sorted(common)
    ]
    if model.mode == MULTI:
        out = [m for m in out if _clash_free(model, m)]
    return out


def _r2_candidates(model: Model, focus: int) -> list[Match]:
    subs = model.children(focus)
    if len(subs) < 3:
        return []
    owners: dict[CloneKey, dict[int, int]] = defaultdict(dict)
    for s in subs:
        for key, pid in owned_keys(model, s).items():
            owners[key][s] = pid
    cands = [
        (-len(o), key, o) for key, o in owners.items() if 2 <= len(o) < len(subs)
    ]
    cands.sort(key=lambda c: (c[0], c[1]))
    return [_match(model, R2, focus, key, o, o) for _, key, o in cands]


def r2_at(model: Model, focus: int, all_groups: bool = False) -> list[Match]:
    """R2 matches with the given focus.

    By default only the largest qualifying group is returned (ties go to the
    smallest clone key).  ``all_groups`` returns one match per qualifying key,
    largest first, which is what exhaustive search needs.
    """
    cands = _r2_candidates(model, focus)
    if model.mode == MULTI:
        cands = [m for m in cands if _clash_free(model, m)]
    return cands if all_groups else cands[:1]


def _r1_order(model: Model, m: Match):
    name = model.entities[m.focus].name
    if model.mode == MULTI:
        # several superclasses may compete for the same copies: prefer the one
        # with the most direct subclasses
        return (-len(m.group), name, m.key)
    return (name, m.key)


def find_matches_r1(model: Model, check: bool = True) -> list[Match]:
    if check:
        require_valid(model)
    out = []
    for eid, e in model.entities.items():
        if len(e.specialisations) >= 2:
            out.extend(r1_at(model, eid))
    out.sort(key=lambda m: _r1_order(model, m))
    return out


def find_matches_r2(model: Model, check: bool = True, all_groups: bool = False) -> list[Match]:
    if check:
        require_valid(model)
    foci = [e for e in model.entities.values() if len(e.specialisations) >= 3]
    foci.sort(key=lambda e: e.name)
    out = []
    for e in foci:
        out.extend(r2_at(model, e.id, all_groups))
    return out


def find_matches_r3(model: Model, check: bool = True, overlap: bool = False) -> list[Match]:
    """R3 matches, one per clone key, largest group first.

    With ``overlap`` (multi mode only) every owner of the key joins the group,
    not just root classes, so non-root owners gain a second superclass.
    """
    if check:
        require_valid(model)
    overlap = overlap and model.mode == MULTI
    owners: dict[CloneKey, dict[int, int]] = defaultdict(dict)
    for eid, e in model.entities.items():
        if e.generalisations and not overlap:
            continue
        for key, pid in owned_keys(model, eid).items():
            owners[key][eid] = pid
    cands = sorted(
        ((-len(o), key, o) for key, o in owners.items() if len(o) >= 2),
        key=lambda c: (c[0], c[1]),
    )
    out = []
    for _, key, o in cands:
        group = _by_name(model, o)
        out.append(Match(R3, group[0], key, group, o[group[0]], model.revision))
    if model.mode == MULTI:
        out = [m for m in out if _clash_free(model, m)]
    return out


# -- application ----------------------------------------------------------


def fresh_name(model: Model, base: str) -> str:
    if not model.has_entity_name(base):
        return base
    for k in range(1, _MAX_SUFFIX):
        name = f"{base}_{k}"
        if not model.has_entity_name(name):
            return name
    raise NameExhaustedError(f"no fresh name for {base!r}")


def _check_current(model: Model, m: Match) -> None:
    if m.revision != model.revision:
        raise StaleMatchError(
            f"{m.rule} match computed at revision {m.revision}, model is at {model.revision}"
        )
    for eid in m.group:
        if eid not in model.entities:
            raise StaleMatchError(f"group member {eid} no longer exists")
        pid = model.owned_by_name(eid, m.key.attr_name)
        if pid is None or model.type_name(pid) != m.key.type_name:
            raise StaleMatchError(f"{model.entities[eid].name!r} does not own {m.key}")
    carrier = model.properties.get(m.carrier)
    if carrier is None or carrier.owner not in m.group or carrier.name != m.key.attr_name:
        raise StaleMatchError("carrier attribute is not a group member's clone")
    if m.rule in (R1, R2):
        subs = set(model.children(m.focus))
        members = set(m.group)
        if m.rule == R1 and members != subs:
            raise StaleMatchError("R1 group is not the full set of direct subclasses")
        if m.rule == R2 and not (members < subs):
            raise StaleMatchError("R2 group is not a strict subset of direct subclasses")


def _remove_copies(model: Model, m: Match, new_owner: int) -> int:
    model.move_property(m.carrier, new_owner)
    removed = 0
    for eid in m.group:
        pid = model.owned_by_name(eid, m.key.attr_name)
        if pid is not None:
            model.delete_property(pid)
            removed += 1
    return removed


def _apply(model: Model, m: Match) -> ApplyDelta:
    if m.rule == R1:
        removed = _remove_copies(model, m, m.focus)
        return ApplyDelta(removed, 0)
    if m.rule == R2:
        focus = model.entities[m.focus]
        e = model.add_entity(fresh_name(model, f"{focus.name}_2_{m.key.attr_name}"), generated=True)
        up = model.add_generalization(focus.id, e.id)
        members = set(m.group)
        for gid in list(focus.specialisations):
            if model.generalizations[gid].specific in members:
                model.redirect_generalization(gid, e.id)
        removed = _remove_copies(model, m, e.id)
        return ApplyDelta(removed, 1, e.id, (up.id,))
    if m.rule == R3:
        rep = min(model.entities[i].name for i in m.group)
        e = model.add_entity(fresh_name(model, f"{rep}_3_{m.key.attr_name}"), generated=True)
        removed = _remove_copies(model, m, e.id)
        gens = tuple(model.add_generalization(e.id, c).id for c in m.group)
        return ApplyDelta(removed, 1, e.id, gens)
    raise ValueError(f"unknown rule {m.rule!r}")


def apply(model: Model, m: Match) -> ApplyDelta:
    """Apply a match produced by ``find_matches_*`` on this model state."""
    _check_current(model, m)
    return _apply(model, m)
