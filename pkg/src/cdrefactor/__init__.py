"""Batch removal of attribute clones from class diagrams.

Three rewriting rules (pull up attribute, extract superclass, create root
class) are applied to a fixed point by a priority scheduler.  The package also
provides an exhaustive optimality oracle, an isomorphism test for comparing
results, and CDM/XMI model formats.
"""

from .engine import EngineConfig, RunResult, TraceStep, check_confluence, replay, run, step
from .isomorphism import canonical_form, isomorphic
from .model import (
    MULTI,
    SINGLE,
    Entity,
    Generalization,
    InvalidModelError,
    Model,
    Property,
    TypeDef,
    direct_subclasses,
    flattened_attributes,
    roots,
    validate,
)
from .oracle import OracleBudget, OracleResult, effectiveness, max_removable
from .rules import ApplyDelta, CloneKey, Match, apply, find_matches_r1, find_matches_r2, find_matches_r3

__version__ = "0.1.0"
