"""Canonical form and isomorphism test for models.

Entities written by the user keep their names, which are unique, so they
anchor the comparison.  Engine-generated entities get arbitrary names that
depend on the order rules fired; they are labelled instead by colour
refinement over (owned attributes, superclasses, subclasses), with
individualisation when refinement leaves ties.
"""

from __future__ import annotations

from .model import Model

def _attr_keys(model: Model, eid: int) -> tuple[tuple[str, str], ...]:
    e = model.entities[eid]
    return tuple(sorted((model.properties[p].name, model.type_name(p)) for p in e.owned_attributes))


def _refine(model: Model, colour: dict[int, int], gen: list[int],
            parents: dict[int, list[int]], children: dict[int, list[int]]) -> dict[int, int]:
    """Refine generated-entity colours until the partition is stable."""
    while True:
        sig: dict[int, tuple] = {}
        for eid in gen:
            sig[eid] = (
                colour[eid],
                tuple(sorted(colour[p] for p in parents[eid])),
                tuple(sorted(colour[c] for c in children[eid])),
            )
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        offset = _gen_offset(colour, gen)
        new = dict(colour)
        for eid in gen:
            new[eid] = offset + ranks[sig[eid]]
        if len(set(new[e] for e in gen)) == len(set(colour[e] for e in gen)):
            return new
        colour = new


def _gen_offset(colour: dict[int, int], gen: list[int]) -> int:
    gset = set(gen)
    fixed = [c for e, c in colour.items() if e not in gset]
    return (max(fixed) + 1) if fixed else 0


def _serialise(model: Model, colour: dict[int, int], gen: list[int],
               originals: dict[int, str]) -> tuple:
    order = sorted(gen, key=lambda e: colour[e])
    label = dict(originals)
    for i, eid in enumerate(order):
        label[eid] = f"#{i}"
    records = []
    for eid in model.entities:
        records.append((
            label[eid],
            _attr_keys(model, eid),
            tuple(sorted(label[p] for p in model.parents(eid))),
        ))
    records.sort()
    types = tuple(sorted(t.name for t in model.types.values()))
    return (types, tuple(records))


def _search(model, colour, gen, parents, children, originals):
    colour = _refine(model, colour, gen, parents, children)
    cells: dict[int, list[int]] = {}
    for eid in gen:
        cells.setdefault(colour[eid], []).append(eid)
    ties = [c for c in cells.values() if len(c) > 1]
    if not ties:
        return _serialise(model, colour, gen, originals)
    # branch on the tied cell with the smallest colour
    cell = min(ties, key=lambda c: colour[c[0]])
    best = None
    for eid in cell:
        # double every colour, then give the chosen member the slot just below its cell
        trial = {e: 2 * c + 1 for e, c in colour.items()}
        trial[eid] = 2 * colour[eid]
        form = _search(model, trial, gen, parents, children, originals)
        if best is None or form < best:
            best = form
    return best


def canonical_form(model: Model) -> tuple:
    """A hashable value equal for two models iff they are isomorphic."""
    originals = {eid: e.name for eid, e in model.entities.items() if not e.generated}
    gen = [eid for eid, e in model.entities.items() if e.generated]
    # originals take colours from their names; generated ones start from
    # their owned attributes
    names = sorted(originals.values())
    name_rank = {n: i for i, n in enumerate(names)}
    colour = {eid: name_rank[n] for eid, n in originals.items()}
    if gen:
        keys = {eid: _attr_keys(model, eid) for eid in gen}
        ranks = {k: i for i, k in enumerate(sorted(set(keys.values())))}
        base = len(names)
        for eid in gen:
            colour[eid] = base + ranks[keys[eid]]
    parents = {eid: model.parents(eid) for eid in gen}
    children = {eid: model.children(eid) for eid in gen}
    return _search(model, colour, gen, parents, children, originals)


def isomorphic(m1: Model, m2: Model) -> bool:
    if m1.sizes() != m2.sizes():
        return False
    return canonical_form(m1) == canonical_form(m2)
