from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..model import SINGLE, Model
from ..model import validate as model_validate


class ParseError(ValueError):
    """A syntax or reference error in an input document.

    ``line`` and ``column`` are 1-based; 0 means the position is not known.
    """

    def __init__(self, message: str, line: int = 0, column: int = 0, token: str | None = None,
                 path: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        self.path = path
        where = f"{line}:{column}: " if line else ""
        ctx = f" at {path}" if path else ""
        tok = f" (near {token!r})" if token is not None else ""
        super().__init__(f"{where}{message}{tok}{ctx}")


_GENERATED_NAME = re.compile(r"^.+_[23]_.+$")


def looks_generated(name: str) -> bool:
    """Names produced by R2/R3 contain ``_2_`` or ``_3_``; files carry no other marker."""
    return _GENERATED_NAME.match(name) is not None


@dataclass
class Decl:
    """A named thing read from a document, with its source position."""

    name: str
    line: int = 0
    column: int = 0


@dataclass
class ClassDecl(Decl):
    attributes: list[tuple[Decl, Decl]] = field(default_factory=list)  # (attribute, type)
    supers: list[Decl] = field(default_factory=list)
    path: str | None = None


def build_model(types: list[Decl], classes: list[ClassDecl], mode: str, validate: bool) -> Model:
    """Turn parsed declarations into a model, reporting problems as ParseErrors."""
    m = Model(mode)

    def fail(msg: str, d: Decl, path: str | None = None):
        raise ParseError(msg, d.line, d.column, d.name, path)

    for t in types:
        if m.has_type_name(t.name):
            fail("duplicate type name", t)
        m.add_type(t.name)
    where: dict[int, ClassDecl] = {}
    for c in classes:
        if m.has_entity_name(c.name):
            fail("duplicate entity name", c, c.path)
        where[m.add_entity(c.name, generated=looks_generated(c.name)).id] = c
    for eid, c in where.items():
        seen = set()
        for attr, tname in c.attributes:
            if attr.name in seen:
                fail("duplicate attribute name", attr, c.path)
            seen.add(attr.name)
            if not m.has_type_name(tname.name):
                fail("unknown type", tname, c.path)
            m.add_property(eid, attr.name, m.type_by_name(tname.name).id)
        if mode == SINGLE and len(c.supers) > 1:
            fail("multiple extends in single mode", c.supers[1], c.path)
        for sup in c.supers:
            if not m.has_entity_name(sup.name):
                fail("unknown superclass", sup, c.path)
            m.add_generalization(m.entity_by_name(sup.name).id, eid)
    if validate:
        violations = model_validate(m)
        if violations:
            v = violations[0]
            d = next((where[i] for i in v.ids if i in where), Decl(""))
            raise ParseError(str(v), d.line, d.column, path=getattr(d, "path", None))
    return m
