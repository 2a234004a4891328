"""Run statistics: clones removed, classes created, effectiveness, timing."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from .engine import ReplayError, RunResult, replay
from .isomorphism import canonical_form
from .model import Model
from .oracle import OracleResult, effectiveness


class MetricsPairingError(ValueError):
    """The run result was not produced from the given input model."""


@dataclass(frozen=True)
class Sizes:
    classes: int
    attributes: int
    generalizations: int
    total: int

    @classmethod
    def of(cls, model: Model) -> "Sizes":
        c, a, g = model.sizes()
        return cls(c, a, g, c + a + g)


@dataclass
class MetricsReport:
    input_sizes: Sizes
    output_sizes: Sizes
    m: int
    classes_created: int
    steps: int
    rule_counts: dict[str, int]
    execution_ms: float
    n: int | None = None
    effectiveness: float | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        # n and effectiveness are omitted, not null, when no maximum is known
        for k in ("n", "effectiveness"):
            if d[k] is None:
                del d[k]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")


def measure(
    input: Model,
    result: RunResult,
    oracle: OracleResult | None = None,
    *,
    n_max: int | None = None,
    verify: bool = True,
) -> MetricsReport:
    """Summarise a run of the engine on ``input``.

    The removable maximum comes from an exact oracle result or, for models the
    oracle cannot handle, from ``n_max``.  With ``verify`` the trace is replayed
    on ``input`` and must reproduce ``result.model``.
    """
    if input.sizes() != result.input_sizes or len(input.properties) != result.potential_initial:
        raise MetricsPairingError("input sizes do not match the run's recorded input")
    if verify:
        try:
            replayed = replay(input, result.trace)
        except ReplayError as exc:
            raise MetricsPairingError(f"trace does not replay on input: {exc}") from None
        if canonical_form(replayed) != canonical_form(result.model):
            raise MetricsPairingError("replayed trace does not reproduce the run's output")
    m = result.copies_removed
    n = n_max
    if oracle is not None and oracle.exact:
        n = oracle.n_max
    return MetricsReport(
        input_sizes=Sizes.of(input),
        output_sizes=Sizes.of(result.model),
        m=m,
        classes_created=result.classes_created,
        steps=result.steps,
        rule_counts=dict(result.rule_counts),
        execution_ms=result.elapsed_ms,
        n=n,
        effectiveness=None if n is None else effectiveness(m, n),
    )
