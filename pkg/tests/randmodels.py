"""Small random class diagrams for property and acceptance tests."""

from __future__ import annotations

import random

from cdrefactor.model import MULTI, SINGLE, Model, validate

NAMES = "abcd"
TYPES = "TUV"


def random_model(
    rng: random.Random,
    max_classes: int = 6,
    max_attrs: int = 6,
    max_types: int = 3,
    mode: str = SINGLE,
    p_parent: float = 0.6,
    p_second_parent: float = 0.3,
) -> Model:
    """A valid model with at most the given numbers of classes, attributes and types.

    Names and types are drawn from small pools so clones are common.
    """
    m = Model(mode)
    n_types = rng.randint(1, max_types)
    for t in TYPES[:n_types]:
        m.add_type(t)
    n_classes = rng.randint(1, max_classes)
    ids = []
    for i in range(n_classes):
        e = m.add_entity(f"K{i}")
        if ids and rng.random() < p_parent:
            parents = [rng.choice(ids)]
            if mode == MULTI and len(ids) > 1 and rng.random() < p_second_parent:
                other = rng.choice(ids)
                if other != parents[0]:
                    parents.append(other)
            for p in parents:
                m.add_generalization(p, e.id)
        ids.append(e.id)
    n_attrs = rng.randint(max_attrs // 2, max_attrs)
    tries = 0
    while len(m.properties) < n_attrs and tries < 20 * max_attrs:
        tries += 1
        owner = rng.choice(ids)
        # skewed draws so that equal (name, type) pairs are common
        name = NAMES[min(int(rng.expovariate(1.0)), len(NAMES) - 1)]
        tname = TYPES[min(int(rng.expovariate(1.5)), n_types - 1)]
        trial = m.copy()
        trial.add_property(owner, name, trial.type_by_name(tname).id)
        if not validate(trial):
            m = trial
    return m


def corpus(seed: int, count: int, **kw) -> list[Model]:
    rng = random.Random(seed)
    return [random_model(rng, **kw) for _ in range(count)]
