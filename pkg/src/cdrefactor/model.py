"""In-memory class-diagram model.

Four element kinds: TypeDef, Entity, Property and Generalization.  Elements
refer to each other by integer ids that are never reused inside one model, so
deleting or reparenting an element is a local edit.  Both ends of every
generalization link are kept in sync by the mutation methods.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

SINGLE = "single"
MULTI = "multi"
MODES = (SINGLE, MULTI)


class ModelError(Exception):
    """Base class for model-level failures."""


class UnknownElementError(ModelError, KeyError):
    """An id or name that does not resolve inside the model."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown element"


class StructuralError(ModelError):
    """The generalization graph is not acyclic."""


class InvalidModelError(ModelError):
    """Raised when an operation requires a model that validates cleanly."""

    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        head = "; ".join(str(v) for v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"model is invalid: {head}{more}")


@dataclass
class TypeDef:
    id: int
    name: str


@dataclass
class Property:
    id: int
    name: str
    type_ref: int
    owner: int


@dataclass
class Entity:
    id: int
    name: str
    owned_attributes: list[int] = field(default_factory=list)
    # generalization ids; specialisations link down, generalisations link up
    specialisations: set[int] = field(default_factory=set)
    generalisations: set[int] = field(default_factory=set)
    generated: bool = False


@dataclass
class Generalization:
    id: int
    general: int
    specific: int


@dataclass(frozen=True)
class Violation:
    invariant: str
    ids: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.invariant}: {self.message}"


class Model:
    """Container for the four element kinds.

    ``revision`` is bumped by every mutation; rule matches record it so that a
    match computed against an older state can be refused.
    """

    def __init__(self, mode: str = SINGLE):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.types: dict[int, TypeDef] = {}
        self.entities: dict[int, Entity] = {}
        self.properties: dict[int, Property] = {}
        self.generalizations: dict[int, Generalization] = {}
        self.revision = 0
        self._next_id = 1
        self._entity_names: dict[str, int] = {}
        self._type_names: dict[str, int] = {}

    # -- construction ---------------------------------------------------

    def _fresh_id(self) -> int:
        i = self._next_id
        self._next_id += 1
        return i

    def _touch(self) -> None:
        self.revision += 1

    def add_type(self, name: str) -> TypeDef:
        t = TypeDef(self._fresh_id(), name)
        self.types[t.id] = t
        self._type_names.setdefault(name, t.id)
        self._touch()
        return t

    def add_entity(self, name: str, generated: bool = False) -> Entity:
        e = Entity(self._fresh_id(), name, generated=generated)
        self.entities[e.id] = e
        self._entity_names.setdefault(name, e.id)
        self._touch()
        return e

    def add_property(self, owner: int, name: str, type_ref: int) -> Property:
        ent = self.entity(owner)
        if type_ref not in self.types:
            raise UnknownElementError(f"unknown type id {type_ref}")
        p = Property(self._fresh_id(), name, type_ref, owner)
        self.properties[p.id] = p
        ent.owned_attributes.append(p.id)
        self._touch()
        return p

    def add_generalization(self, general: int, specific: int) -> Generalization:
        sup = self.entity(general)
        sub = self.entity(specific)
        g = Generalization(self._fresh_id(), general, specific)
        self.generalizations[g.id] = g
        sup.specialisations.add(g.id)
        sub.generalisations.add(g.id)
        self._touch()
        return g

    def add_class(
        self,
        name: str,
        attributes: Mapping[str, str] | Iterable[tuple[str, str]] = (),
        extends: Iterable[str] = (),
    ) -> Entity:
        """Add an entity with attributes given as ``name -> type name``.

        Types are created on demand and superclasses are looked up by name.
        """
        ent = self.add_entity(name)
        items = attributes.items() if isinstance(attributes, Mapping) else attributes
        for attr, tname in items:
            tid = self._type_names.get(tname)
            if tid is None:
                tid = self.add_type(tname).id
            self.add_property(ent.id, attr, tid)
        for sup in extends:
            self.add_generalization(self.entity_by_name(sup).id, ent.id)
        return ent

    # -- mutation -------------------------------------------------------

    def delete_property(self, pid: int) -> None:
        p = self.properties.pop(pid, None)
        if p is None:
            raise UnknownElementError(f"unknown property id {pid}")
        self.entities[p.owner].owned_attributes.remove(pid)
        self._touch()

    def move_property(self, pid: int, new_owner: int) -> None:
        p = self.property(pid)
        dest = self.entity(new_owner)
        self.entities[p.owner].owned_attributes.remove(pid)
        dest.owned_attributes.append(pid)
        p.owner = new_owner
        self._touch()

    def redirect_generalization(self, gid: int, new_general: int) -> None:
        g = self.generalization(gid)
        dest = self.entity(new_general)
        self.entities[g.general].specialisations.discard(gid)
        dest.specialisations.add(gid)
        g.general = new_general
        self._touch()

    def delete_generalization(self, gid: int) -> None:
        g = self.generalizations.pop(gid, None)
        if g is None:
            raise UnknownElementError(f"unknown generalization id {gid}")
        self.entities[g.general].specialisations.discard(gid)
        self.entities[g.specific].generalisations.discard(gid)
        self._touch()

    # -- lookup ---------------------------------------------------------

    def entity(self, eid: int) -> Entity:
        try:
            return self.entities[eid]
        except KeyError:
            raise UnknownElementError(f"unknown entity id {eid}") from None

    def property(self, pid: int) -> Property:
        try:
            return self.properties[pid]
        except KeyError:
            raise UnknownElementError(f"unknown property id {pid}") from None

    def generalization(self, gid: int) -> Generalization:
        try:
            return self.generalizations[gid]
        except KeyError:
            raise UnknownElementError(f"unknown generalization id {gid}") from None

    def entity_by_name(self, name: str) -> Entity:
        eid = self._entity_names.get(name)
        if eid is None:
            raise UnknownElementError(f"no entity named {name!r}")
        return self.entities[eid]

    def type_by_name(self, name: str) -> TypeDef:
        tid = self._type_names.get(name)
        if tid is None:
            raise UnknownElementError(f"no type named {name!r}")
        return self.types[tid]

    def has_entity_name(self, name: str) -> bool:
        return name in self._entity_names

    def has_type_name(self, name: str) -> bool:
        return name in self._type_names

    def type_name(self, pid: int) -> str:
        return self.types[self.properties[pid].type_ref].name

    def parents(self, eid: int) -> list[int]:
        return [self.generalizations[g].general for g in self.entity(eid).generalisations]

    def children(self, eid: int) -> list[int]:
        return [self.generalizations[g].specific for g in self.entity(eid).specialisations]

    def owned_by_name(self, eid: int, name: str) -> int | None:
        for pid in self.entities[eid].owned_attributes:
            if self.properties[pid].name == name:
                return pid
        return None

    # -- size accounting ------------------------------------------------

    def sizes(self) -> tuple[int, int, int]:
        """(classes, attributes, generalizations)."""
        return len(self.entities), len(self.properties), len(self.generalizations)

    def total_size(self) -> int:
        """Entities + properties + generalizations; TypeDefs are not counted."""
        return sum(self.sizes())

    def copy(self) -> "Model":
        m = Model(self.mode)
        m.types = {i: TypeDef(t.id, t.name) for i, t in self.types.items()}
        m.entities = {
            i: Entity(
                e.id,
                e.name,
                list(e.owned_attributes),
                set(e.specialisations),
                set(e.generalisations),
                e.generated,
            )
            for i, e in self.entities.items()
        }
        m.properties = {
            i: Property(p.id, p.name, p.type_ref, p.owner) for i, p in self.properties.items()
        }
        m.generalizations = {
            i: Generalization(g.id, g.general, g.specific)
            for i, g in self.generalizations.items()
        }
        m.revision = self.revision
        m._next_id = self._next_id
        m._entity_names = dict(self._entity_names)
        m._type_names = dict(self._type_names)
        return m

    def __repr__(self) -> str:
        c, a, g = self.sizes()
        return f"<Model {self.mode} classes={c} attributes={a} generalizations={g}>"


# -- derived queries ----------------------------------------------------


def direct_subclasses(model: Model, eid: int) -> set[int]:
    return set(model.children(eid))


def roots(model: Model) -> set[int]:
    return {e.id for e in model.entities.values() if not e.generalisations}


def _find_cycle(model: Model) -> list[int] | None:
    """Return the entity ids of one generalization cycle, or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    colour = dict.fromkeys(model.entities, WHITE)
    for start in model.entities:
        if colour[start] != WHITE:
            continue
        stack = [(start, iter(model.parents(start)))]
        path = [start]
        colour[start] = GREY
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = BLACK
                stack.pop()
                path.pop()
            elif nxt not in colour:
                continue  # dangling, reported elsewhere
            elif colour[nxt] == GREY:
                return path[path.index(nxt):]
            elif colour[nxt] == WHITE:
                colour[nxt] = GREY
                stack.append((nxt, iter(model.parents(nxt))))
                path.append(nxt)
    return None


def _topological(model: Model) -> list[int]:
    """Entities ordered so that every superclass precedes its subclasses."""
    indeg = {eid: len(e.generalisations) for eid, e in model.entities.items()}
    ready = [eid for eid, d in indeg.items() if d == 0]
    order = []
    while ready:
        eid = ready.pop()
        order.append(eid)
        for child in model.children(eid):
            indeg[child] -= 1
            if indeg[child] == 0:
                ready.append(child)
    if len(order) != len(model.entities):
        raise StructuralError("generalization graph contains a cycle")
    return order


def _flattened_props(model: Model) -> dict[int, dict[str, frozenset[int]]]:
    """Per entity: attribute name -> ids of all visible properties with it."""
    flat: dict[int, dict[str, frozenset[int]]] = {}
    for eid in _topological(model):
        e = model.entities[eid]
        parents = model.parents(eid)
        if len(parents) == 1:
            acc = dict(flat[parents[0]])
        else:
            merged: dict[str, set[int]] = defaultdict(set)
            for p in parents:
                for name, ids in flat[p].items():
                    merged[name] |= ids
            acc = {name: frozenset(ids) for name, ids in merged.items()}
        for pid in e.owned_attributes:
            name = model.properties[pid].name
            acc[name] = acc.get(name, frozenset()) | {pid}
        flat[eid] = acc
    return flat


def flattened_attributes(model: Model, eid: int) -> set[tuple[str, str]]:
    """Owned plus inherited (attribute name, type name) pairs of an entity."""
    model.entity(eid)
    if _find_cycle(model) is not None:
        raise StructuralError("generalization graph contains a cycle")
    seen = {eid}
    todo = [eid]
    out = set()
    while todo:
        cur = todo.pop()
        for pid in model.entities[cur].owned_attributes:
            out.add((model.properties[pid].name, model.type_name(pid)))
        for p in model.parents(cur):
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return out


def all_flattened_attributes(model: Model) -> dict[int, frozenset[tuple[str, str]]]:
    """flattened_attributes for every entity, computed in one pass."""
    flat = _flattened_props(model)
    return {
        eid: frozenset(
            (name, model.type_name(pid)) for name, ids in attrs.items() for pid in ids
        )
        for eid, attrs in flat.items()
    }


# -- validation ---------------------------------------------------------


def validate(model: Model) -> list[Violation]:
    """Check every metamodel invariant; an empty list means the model conforms."""
    out: list[Violation] = []

    def bad(invariant: str, ids: Iterable[int], message: str) -> None:
        out.append(Violation(invariant, tuple(ids), message))

    for kind, table in (("entity", model.entities), ("type", model.types)):
        by_name: dict[str, list[int]] = defaultdict(list)
        for el in table.values():
            if not el.name:
                bad("empty name", [el.id], f"{kind} {el.id} has an empty name")
            by_name[el.name].append(el.id)
        for name, ids in by_name.items():
            if len(ids) > 1:
                bad(f"duplicate {kind} name", ids, f"{len(ids)} {kind}s named {name!r}")

    for p in model.properties.values():
        if not p.name:
            bad("empty name", [p.id], f"property {p.id} has an empty name")
        if p.type_ref not in model.types:
            bad("dangling reference", [p.id], f"property {p.name!r} has unknown type {p.type_ref}")
        owner = model.entities.get(p.owner)
        if owner is None:
            bad("dangling reference", [p.id], f"property {p.name!r} has unknown owner {p.owner}")
        elif p.id not in owner.owned_attributes:
            bad("inverse link mismatch", [p.id, p.owner],
                f"property {p.name!r} missing from its owner's attributes")

    structural_ok = True
    for e in model.entities.values():
        names = [model.properties[pid].name for pid in e.owned_attributes if pid in model.properties]
        for pid in e.owned_attributes:
            p = model.properties.get(pid)
            if p is None or p.owner != e.id:
                bad("inverse link mismatch", [e.id, pid],
                    f"{e.name!r} lists attribute {pid} it does not own")
        for name in {n for n in names if names.count(n) > 1}:
            bad("duplicate attribute name", [e.id], f"{e.name!r} owns {name!r} more than once")
        for gid in e.specialisations:
            g = model.generalizations.get(gid)
            if g is None or g.general != e.id:
                structural_ok = False
                bad("inverse link mismatch", [e.id, gid],
                    f"{e.name!r} lists specialisation {gid} whose general is not {e.name!r}")
        for gid in e.generalisations:
            g = model.generalizations.get(gid)
            if g is None or g.specific != e.id:
                structural_ok = False
                bad("inverse link mismatch", [e.id, gid],
                    f"{e.name!r} lists generalisation {gid} whose specific is not {e.name!r}")
        if model.mode == SINGLE and len(e.generalisations) > 1:
            bad("multiple inheritance in single mode", [e.id],
                f"{e.name!r} has {len(e.generalisations)} superclasses")

    pairs: dict[tuple[int, int], list[int]] = defaultdict(list)
    for g in model.generalizations.values():
        sup, sub = model.entities.get(g.general), model.entities.get(g.specific)
        if sup is None or sub is None:
            structural_ok = False
            bad("dangling reference", [g.id], f"generalization {g.id} has an unknown end")
            continue
        if g.id not in sup.specialisations or g.id not in sub.generalisations:
            structural_ok = False
            bad("inverse link mismatch", [g.id],
                f"generalization {sub.name!r} -> {sup.name!r} not mirrored on both ends")
        if g.general == g.specific:
            bad("self generalization", [g.id], f"{sup.name!r} extends itself")
        pairs[(g.general, g.specific)].append(g.id)
    for (sup, sub), ids in pairs.items():
        if len(ids) > 1:
            bad("duplicate generalization", ids,
                f"{model.entities[sub].name!r} extends {model.entities[sup].name!r} {len(ids)} times")

    if not structural_ok:
        return out
    cycle = _find_cycle(model)
    if cycle is not None:
        bad("generalization cycle", cycle,
            "cycle through " + " -> ".join(model.entities[i].name for i in cycle))
        return out
    if any(v.invariant in ("dangling reference", "inverse link mismatch") for v in out):
        return out

    flat = _flattened_props(model)
    for eid, attrs in flat.items():
        parents = model.parents(eid)
        for name, ids in attrs.items():
            if len(ids) < 2:
                continue
            # report only where the clash first becomes visible
            if any(len(flat[p].get(name, ())) > 1 for p in parents):
                continue
            e = model.entities[eid]
            own = any(model.properties[pid].name == name for pid in e.owned_attributes)
            invariant = "inherited attribute clash" if own else "inherited name clash"
            bad(invariant, [eid, *sorted(ids)],
                f"{e.name!r} sees {len(ids)} distinct attributes named {name!r}")
    return out


def require_valid(model: Model) -> None:
    violations = validate(model)
    if violations:
        raise InvalidModelError(violations)


def ancestors(model: Model, eid: int) -> set[int]:
    seen: set[int] = set()
    todo = model.parents(eid)
    while todo:
        cur = todo.pop()
        if cur not in seen:
            seen.add(cur)
            todo.extend(model.parents(cur))
    return seen


def descendants(model: Model, eid: int) -> set[int]:
    seen: set[int] = set()
    todo = model.children(eid)
    while todo:
        cur = todo.pop()
        if cur not in seen:
            seen.add(cur)
            todo.extend(model.children(cur))
    return seen

