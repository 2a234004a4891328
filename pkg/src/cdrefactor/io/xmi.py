"""XMI dialect with EMF-style positional references.

    <?xml version="1.0" encoding="UTF-8"?>
    <Model xmi:version="2.0" xmlns:xmi="http://www.omg.org/XMI">
      <types name="T"/>
      <entities name="A">
        <ownedAttribute name="a" type="//@types.0"/>
      </entities>
      <entities name="B">
        <generalisation general="//@entities.1"/>
      </entities>
    </Model>

References are zero-based positions in document order.  Generalizations are
stored under their subclass; the superclass side is rebuilt on load.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from xml.parsers import expat
from xml.sax.saxutils import escape

from ..model import SINGLE, Model
from .common import ClassDecl, Decl, ParseError, build_model

XMI_NS = "http://www.omg.org/XMI"
_REF = re.compile(r"^//@(types|entities)\.(\d+)$")


@dataclass
class _Node:
    tag: str
    attrs: dict[str, str]
    line: int
    column: int
    children: list["_Node"] = field(default_factory=list)


def _read_tree(text: str) -> _Node:
    parser = expat.ParserCreate()
    stack: list[_Node] = []
    root: list[_Node] = []

    def start(tag, attrs):
        node = _Node(tag, attrs, parser.CurrentLineNumber, parser.CurrentColumnNumber + 1)
        if stack:
            stack[-1].children.append(node)
        else:
            root.append(node)
        stack.append(node)

    def end(tag):
        stack.pop()

    def chars(data):
        if data.strip() and stack:
            raise ParseError("unexpected text content", parser.CurrentLineNumber,
                             parser.CurrentColumnNumber + 1, data.strip()[:20])

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    try:
        parser.Parse(text.encode("utf-8") if isinstance(text, str) else text, True)
    except expat.ExpatError as exc:
        raise ParseError(f"malformed XML: {expat.ErrorString(exc.code)}", exc.lineno,
                         exc.offset + 1) from None
    return root[0]


def _name(node: _Node, path: str) -> Decl:
    name = node.attrs.get("name")
    if not name:
        raise ParseError(f"<{node.tag}> lacks a name", node.line, node.column, path=path)
    return Decl(name, node.line, node.column)


def _resolve(node: _Node, attr: str, kind: str, names: list[str], path: str) -> Decl:
    ref = node.attrs.get(attr)
    if ref is None:
        raise ParseError(f"<{node.tag}> lacks {attr!r}", node.line, node.column, path=path)
    m = _REF.match(ref)
    if m is None or m.group(1) != kind:
        raise ParseError(f"malformed reference, expected //@{kind}.<index>", node.line,
                         node.column, ref, path)
    idx = int(m.group(2))
    if idx >= len(names):
        raise ParseError("unresolvable reference", node.line, node.column, ref, path)
    return Decl(names[idx], node.line, node.column)


def parse_xmi(text: str, mode: str = SINGLE, validate: bool = True) -> Model:
    root = _read_tree(text)
    if root.tag.split(":")[-1] != "Model":
        raise ParseError(f"root element must be <Model>, found <{root.tag}>", root.line,
                         root.column)
    type_nodes, entity_nodes = [], []
    for child in root.children:
        if child.tag == "types":
            type_nodes.append(child)
        elif child.tag == "entities":
            entity_nodes.append(child)
        else:
            raise ParseError(f"unknown element kind <{child.tag}>", child.line, child.column,
                             path=f"/Model/{child.tag}")
    types = [_name(n, f"//@types.{i}") for i, n in enumerate(type_nodes)]
    entities = [_name(n, f"//@entities.{i}") for i, n in enumerate(entity_nodes)]
    type_names = [t.name for t in types]
    entity_names = [e.name for e in entities]

    classes = []
    for i, node in enumerate(entity_nodes):
        path = f"//@entities.{i}"
        decl = ClassDecl(entities[i].name, node.line, node.column, path=path)
        n_attr = n_gen = 0
        for child in node.children:
            if child.tag == "ownedAttribute":
                cpath = f"{path}/@ownedAttribute.{n_attr}"
                n_attr += 1
                attr = _name(child, cpath)
                decl.attributes.append((attr, _resolve(child, "type", "types", type_names, cpath)))
            elif child.tag == "generalisation":
                cpath = f"{path}/@generalisation.{n_gen}"
                n_gen += 1
                decl.supers.append(_resolve(child, "general", "entities", entity_names, cpath))
            else:
                raise ParseError(f"unknown element kind <{child.tag}>", child.line,
                                 child.column, path=path)
        classes.append(decl)
    return build_model(types, classes, mode, validate)


def _q(value: str) -> str:
    return '"' + escape(value, {'"': "&quot;"}) + '"'


def emit_xmi(model: Model) -> str:
    types = sorted(model.types.values(), key=lambda t: t.name)
    entities = sorted(model.entities.values(), key=lambda e: e.name)
    tpos = {t.id: i for i, t in enumerate(types)}
    epos = {e.id: i for i, e in enumerate(entities)}
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<Model xmi:version="2.0" xmlns:xmi="{XMI_NS}">',
    ]
    for t in types:
        out.append(f"  <types name={_q(t.name)}/>")
    for e in entities:
        parents = sorted(model.parents(e.id), key=lambda p: epos[p])
        if not e.owned_attributes and not parents:
            out.append(f"  <entities name={_q(e.name)}/>")
            continue
        out.append(f"  <entities name={_q(e.name)}>")
        for pid in e.owned_attributes:
            p = model.properties[pid]
            out.append(
                f'    <ownedAttribute name={_q(p.name)} type="//@types.{tpos[p.type_ref]}"/>'
            )
        for p in parents:
            out.append(f'    <generalisation general="//@entities.{epos[p]}"/>')
        out.append("  </entities>")
    out.append("</Model>")
    return "\n".join(out) + "\n"
