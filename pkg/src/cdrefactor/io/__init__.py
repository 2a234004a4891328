"""Text formats: the CDM class-diagram notation and an EMF-style XMI dialect."""

from __future__ import annotations

from pathlib import Path

from ..model import SINGLE, Model
from .common import ParseError, looks_generated
from .cdm import emit_cdm, parse_cdm
from .xmi import emit_xmi, parse_xmi

FORMATS = ("cdm", "xmi")

__all__ = [
    "FORMATS",
    "ParseError",
    "emit",
    "emit_cdm",
    "emit_xmi",
    "format_for",
    "load",
    "looks_generated",
    "parse_cdm",
    "parse_xmi",
    "save",
]


def format_for(path: str | Path, override: str | None = None) -> str:
    if override:
        if override not in FORMATS:
            raise ValueError(f"unknown format {override!r}")
        return override
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix not in FORMATS:
        raise ValueError(f"cannot infer format from {str(path)!r}; use --format")
    return suffix


def parse(text: str, fmt: str, mode: str = SINGLE, validate: bool = True) -> Model:
    if fmt == "cdm":
        return parse_cdm(text, mode=mode, validate=validate)
    return parse_xmi(text, mode=mode, validate=validate)


def emit(model: Model, fmt: str) -> str:
    return emit_cdm(model) if fmt == "cdm" else emit_xmi(model)


def load(path: str | Path, fmt: str | None = None, mode: str = SINGLE, validate: bool = True) -> Model:
    fmt = format_for(path, fmt)
    return parse(Path(path).read_text(encoding="utf-8"), fmt, mode, validate)


def save(model: Model, path: str | Path, fmt: str | None = None) -> None:
    fmt = format_for(path, fmt)
    Path(path).write_text(emit(model, fmt), encoding="utf-8")

