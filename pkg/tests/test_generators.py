import pytest

from cdrefactor import generators
from cdrefactor.generators import TestCaseSpec, generate, known_max_removable
from cdrefactor.model import validate


@pytest.mark.parametrize(
    "spec, sizes",
    [
        (TestCaseSpec("tc1"), (5, 5, 4)),
        (TestCaseSpec("tc2"), (7, 7, 4)),
        (TestCaseSpec("tc3"), (500, 5000, 0)),
        (TestCaseSpec("stress", 1000), (4000, 4000, 2000)),
        (TestCaseSpec("stress", 5000), (20000, 20000, 10000)),
    ],
)
def test_size_table(spec, sizes):
    m = generate(spec)
    assert m.sizes() == sizes
    assert m.total_size() == sum(sizes)
    assert validate(m) == []


def test_stress_10000_totals():
    m = generators.stress(10000)
    assert m.sizes() == (40000, 40000, 20000)
    assert m.total_size() == 100_000


def test_tc3_names():
    m = generators.tc3()
    names = sorted(e.name for e in m.entities.values())
    assert names[0] == "C000" and names[-1] == "C499"
    owned = {m.properties[p].name for p in m.entity_by_name("C123").owned_attributes}
    assert owned == {f"a{j}" for j in range(10)}


def test_stress_copies_share_x():
    m = generators.stress(3)
    xs = [p for p in m.properties.values() if p.name == "x"]
    assert len(xs) == 9


def test_known_maximum():
    assert known_max_removable(TestCaseSpec("tc3")) == 4990
    assert known_max_removable(TestCaseSpec("tc1")) is None


@pytest.mark.parametrize("args", [("tc9",), ("stress", 0)])
def test_bad_spec(args):
    with pytest.raises(ValueError):
        TestCaseSpec(*args)
