"""Intermediate representation of a parsed source-corpus annotation."""

from __future__ import annotations

from dataclasses import dataclass, field

# unit kinds per source corpus
ARGMICRO_KINDS = ("proponent", "opponent", "neutral")
PERSESSAYS_KINDS = ("major_claim", "claim", "premise", "neutral")


@dataclass(frozen=True)
class Segment:
    seg_id: str
    text: str
    span: tuple[int, int] | None = None


@dataclass(frozen=True)
class Unit:
    unit_id: str
    kind: str
    stance: str | None = None  # "for" | "against" on persessays claims
    span: tuple[int, int] | None = None


@dataclass(frozen=True)
class Relation:
    rel_id: str
    source: str
    target: str
    label: str


@dataclass(frozen=True)
class SourceGraph:
    doc_id: str
    segments: tuple[Segment, ...]
    units: tuple[Unit, ...]
    relations: tuple[Relation, ...]
    topic: str = ""
