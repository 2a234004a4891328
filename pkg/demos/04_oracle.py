"""Compare the engine with the exhaustive search on a handful of small models."""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from randmodels import random_model  # noqa: E402

from cdrefactor import max_removable, run  # noqa: E402

rng = random.Random(7)
for i in range(10):
    m = random_model(rng)
    best = max_removable(m)
    got = run(m)
    print(f"model {i}: {m.sizes()} engine removed {got.copies_removed}, "
          f"best possible {best.n_max} ({best.states_explored} states searched)")
