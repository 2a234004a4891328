"""Time the engine on growing stress models."""

import time

from cdrefactor import generators, run

for copies in (1000, 5000, 10000):
    model = generators.stress(copies)
    t0 = time.perf_counter()
    result = run(model)
    wall = time.perf_counter() - t0
    print(f"{copies:>6} copies  {model.total_size():>7} elements  "
          f"removed {result.copies_removed:>6}  created {result.classes_created}  {wall:.2f}s")
