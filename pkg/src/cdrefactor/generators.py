"""The benchmark models: test cases 1-3 and the stress series.

Test cases 1 and 2 are fixed small models with known optimal outcomes.  A
stress model of N copies is built from test case 2 without class D and its
subclasses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Model

KINDS = ("tc1", "tc2", "tc3", "stress")

# Clone copies removable from test case 3 in principle: 5000 attributes, ten
# distinct (name, type) pairs.  The exhaustive oracle cannot reach this size.
TC3_MAX_REMOVABLE = 4990


@dataclass(frozen=True)
class TestCaseSpec:
    kind: str
    copies: int = 1

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown test case {self.kind!r}")
        if self.copies < 1:
            raise ValueError("copies must be >= 1")


def tc1() -> Model:
    m = Model()
    m.add_type("T")
    m.add_class("R")
    m.add_class("A", {"a": "T"}, extends=["R"])
    m.add_class("B", {"a": "T", "b": "T"}, extends=["R"])
    m.add_class("C", {"b": "T"}, extends=["R"])
    m.add_class("D", {"b": "T"}, extends=["R"])
    return m


def _tc2_reduct(m: Model, suffix: str = "", own_attr: str = "a1") -> None:
    m.add_class(f"A{suffix}", {own_attr: "T"})
    m.add_class(f"B{suffix}", {"x": "T"}, extends=[f"A{suffix}"])
    m.add_class(f"C{suffix}", {"x": "T"}, extends=[f"A{suffix}"])
    m.add_class(f"G{suffix}", {"x": "T"})


def tc2() -> Model:
    m = Model()
    m.add_type("T")
    _tc2_reduct(m)
    m.add_class("D", {"d1": "T"})
    m.add_class("E", {"y": "T"}, extends=["D"])
    m.add_class("F", {"y": "T"}, extends=["D"])
    return m


def tc3(classes: int = 500, attributes: int = 10) -> Model:
    m = Model()
    m.add_type("T")
    width = len(str(classes - 1))
    attrs = {f"a{j}": "T" for j in range(attributes)}
    for i in range(classes):
        m.add_class(f"C{i:0{width}d}", attrs)
    return m


def stress(copies: int) -> Model:
    """``copies`` renamed copies of test case 2 minus D, E and F.

    The shared attribute ``x`` keeps its name across copies so that its
    clones span copies; each copy's A class keeps a distinct attribute
    ``a1_<i>``.
    """
    if copies < 1:
        raise ValueError("copies must be >= 1")
    m = Model()
    m.add_type("T")
    for i in range(copies):
        _tc2_reduct(m, f"_{i}", f"a1_{i}")
    return m


def generate(spec: TestCaseSpec) -> Model:
    if spec.kind == "tc1":
        return tc1()
    if spec.kind == "tc2":
        return tc2()
    if spec.kind == "tc3":
        return tc3()
    return stress(spec.copies)


def known_max_removable(spec: TestCaseSpec) -> int | None:
    """Known maximum of removable copies for models too large to search."""
    return TC3_MAX_REMOVABLE if spec.kind == "tc3" else None
