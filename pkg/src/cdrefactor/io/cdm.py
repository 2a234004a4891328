"""CDM: a small plain-text class-diagram notation.

    # comment
    type T
    class A { a : T; }
    class B extends A { b : T; }

Whitespace is insignificant.  ``extends`` may list several superclasses
separated by commas, but only in multi mode.  Declarations may refer to
classes and types declared later in the file.
"""

from __future__ import annotations

import re

from ..model import SINGLE, Model
from .common import ClassDecl, Decl, ParseError, build_model

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[{}:;,])"
)
_KEYWORDS = {"type", "class", "extends"}


def _tokens(text: str):
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError("unexpected character", line, col, text[pos])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("ident", "punct"):
            yield kind, m.group(), line, col
        pos = m.end()
    yield "eof", "", line, pos - line_start + 1


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, line, col = self.next()
        if val != value or kind == "eof":
            raise ParseError(f"expected {value!r}", line, col, val or "end of input")

    def ident(self, what: str) -> Decl:
        kind, val, line, col = self.next()
        if kind != "ident" or val in _KEYWORDS:
            raise ParseError(f"expected {what}", line, col, val or "end of input")
        return Decl(val, line, col)

    def program(self):
        types: list[Decl] = []
        classes: list[ClassDecl] = []
        while True:
            kind, val, line, col = self.peek()
            if kind == "eof":
                return types, classes
            if val == "type":
                self.next()
                types.append(self.ident("type name"))
            elif val == "class":
                self.next()
                classes.append(self.class_body())
            else:
                raise ParseError("expected 'type' or 'class'", line, col, val)

    def class_body(self) -> ClassDecl:
        head = self.ident("class name")
        decl = ClassDecl(head.name, head.line, head.column)
        if self.peek()[1] == "extends":
            self.next()
            decl.supers.append(self.ident("superclass name"))
            while self.peek()[1] == ",":
                self.next()
                decl.supers.append(self.ident("superclass name"))
        self.expect("{")
        while self.peek()[1] != "}":
            attr = self.ident("attribute name or '}'")
            self.expect(":")
            tname = self.ident("type name")
            self.expect(";")
            decl.attributes.append((attr, tname))
        self.expect("}")
        return decl


def parse_cdm(text: str, mode: str = SINGLE, validate: bool = True) -> Model:
    types, classes = _Parser(text).program()
    return build_model(types, classes, mode, validate)


def emit_cdm(model: Model) -> str:
    """Types first, then classes by name; attributes keep their stored order."""
    lines = [f"type {t.name}" for t in sorted(model.types.values(), key=lambda t: t.name)]
    for e in sorted(model.entities.values(), key=lambda e: e.name):
        if lines:
            lines.append("")
        supers = sorted(model.entities[p].name for p in model.parents(e.id))
        ext = f" extends {', '.join(supers)}" if supers else ""
        lines.append(f"class {e.name}{ext} {{")
        for pid in e.owned_attributes:
            p = model.properties[pid]
            lines.append(f"    {p.name} : {model.types[p.type_ref].name};")
        lines.append("}")
    return "\n".join(lines) + "\n"
