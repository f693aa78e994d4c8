"""Parsing and conversion of brat-standoff persuasive-essay annotations.

An .ann file carries entity lines (``T1\tMajorClaim 503 575\t<text>``),
attribute lines (``A1\tStance T2 For``) and relation lines
(``R1\tsupports Arg1:T2 Arg2:T1``) over a companion .txt file.  Character
offsets are code-point offsets into the text file.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path

from .errors import ConversionError, ParseError
from .example_edges import TemplateLexicon, detect_example_candidates
from .jaas import JaasDocument, JaasEdge, JaasNode, propagate_polarity
from .sources import Relation, Segment, SourceGraph, Unit

log = logging.getLogger(__name__)

_ENTITY_KINDS = {"MajorClaim": "major_claim", "Claim": "claim", "Premise": "premise"}
_REL_LABELS = ("supports", "attacks")
_STANCES = {"For": "for", "Against": "against"}
_SENT_END = re.compile(r"[.!?…]+")


def parse_persessays(text_bytes: bytes, ann_bytes: bytes,
                     doc_id: str = "", path=None) -> SourceGraph:
    """Parse one .txt/.ann brat pair into a SourceGraph.

    Entities become units with spans; Stance attributes attach to the
    referenced unit; stretches of text outside every entity span are
    sentence-split into neutral units.
    """
    text = text_bytes.decode("utf-8")
    entities: dict[str, Unit] = {}
    spans: dict[str, list[tuple[int, int]]] = {}
    stances: dict[str, str] = {}
    relations: list[Relation] = []

    for lineno, raw in enumerate(ann_bytes.decode("utf-8").splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        tid, _, rest = line.partition("\t")
        if tid.startswith("T"):
            header, _, _surface = rest.partition("\t")
            parts = header.split(" ", 1)
            if len(parts) != 2:
                raise ParseError("malformed entity line", path=path, line=lineno)
            kind_name, span_str = parts
            if kind_name not in _ENTITY_KINDS:
                raise ParseError(f"unknown entity type {kind_name!r}", path=path, line=lineno)
            frags = []
            for frag in span_str.split(";"):
                try:
                    start, end = (int(x) for x in frag.split())
                except ValueError as exc:
                    raise ParseError(f"bad span {frag!r}", path=path, line=lineno) from exc
                frags.append((start, end))
            spans[tid] = frags
            entities[tid] = Unit(tid, _ENTITY_KINDS[kind_name],
                                 span=(frags[0][0], frags[-1][1]))
        elif tid.startswith("A"):
            parts = rest.split()
            if len(parts) == 2:  # binary attribute, not used here
                continue
            if len(parts) != 3:
                raise ParseError("malformed attribute line", path=path, line=lineno)
            name, target, value = parts
            if name != "Stance":
                continue
            if target not in entities:
                raise ParseError(f"attribute on unknown entity {target!r}", path=path, line=lineno)
            if value not in _STANCES:
                raise ParseError(f"unknown stance value {value!r}", path=path, line=lineno)
            stances[target] = _STANCES[value]
        elif tid.startswith("R"):
            parts = rest.split()
            if len(parts) != 3 or not (parts[1].startswith("Arg1:") and parts[2].startswith("Arg2:")):
                raise ParseError("malformed relation line", path=path, line=lineno)
            label = parts[0]
            if label not in _REL_LABELS:
                raise ParseError(f"unknown relation label {label!r}", path=path, line=lineno)
            source, target = parts[1][5:], parts[2][5:]
            for end in (source, target):
                if end not in entities:
                    raise ParseError(f"relation endpoint {end!r} unknown", path=path, line=lineno)
            relations.append(Relation(tid, source, target, label))
        # other brat line types (events, normalizations) are not used

    units = [
        Unit(u.unit_id, u.kind, stance=stances.get(u.unit_id), span=u.span)
        for u in entities.values()
    ]
    segments = [
        Segment(tid, " ".join(text[s:e] for s, e in spans[tid]), entities[tid].span)
        for tid in entities
    ]

    for n_id, (start, end, sent) in enumerate(_neutral_sentences(text, spans.values()), start=1):
        uid = f"N{n_id}"
        units.append(Unit(uid, "neutral", span=(start, end)))
        segments.append(Segment(uid, sent, (start, end)))

    units.sort(key=lambda u: (u.span[0], u.unit_id))
    segments.sort(key=lambda s: (s.span[0], s.seg_id))
    return SourceGraph(
        doc_id=doc_id,
        segments=tuple(segments),
        units=tuple(units),
        relations=tuple(relations),
        topic=text.split("\n", 1)[0].strip(),
    )


def _neutral_sentences(text, span_groups):
    """Yield (start, end, sentence) for sentences outside all entity spans."""
    covered = [False] * len(text)
    for frags in span_groups:
        for s, e in frags:
            for i in range(s, min(e, len(text))):
                covered[i] = True

    gaps: list[tuple[int, int]] = []
    start = None
    for i, c in enumerate(covered):
        if not c and start is None:
            start = i
        elif c and start is not None:
            gaps.append((start, i))
            start = None
    if start is not None:
        gaps.append((start, len(text)))

    for gs, ge in gaps:
        chunk = text[gs:ge]
        pos = 0
        for m in _SENT_END.finditer(chunk):
            yield from _trimmed(chunk, pos, m.end(), gs)
            pos = m.end()
        yield from _trimmed(chunk, pos, len(chunk), gs)


def _trimmed(chunk, start, end, offset):
    piece = chunk[start:end]
    lead = len(piece) - len(piece.lstrip())
    trail = len(piece) - len(piece.rstrip())
    s, e = start + lead, end - trail
    if e > s and re.search(r"\w", chunk[s:e]):
        yield offset + s, offset + e, chunk[s:e]


def to_jaas_persessays(
    src: SourceGraph, templates: TemplateLexicon
) -> tuple[JaasDocument, list[str]]:
    """Convert a parsed essay to the joint scheme.

    major_claim units become mcl, supports/attacks become sup/reb, claim
    stances become pro/opp, and premises receive polarity by propagation
    from their stance-bearing ancestors.  Returns the document plus the
    edge ids of sup edges whose source text matches an exemplification
    template (stage-1 candidates for the manual exa review).
    """
    seg_text = {s.seg_id: s.text for s in src.segments}
    roles: dict[str, str | None] = {}
    for u in src.units:
        if u.kind == "major_claim":
            roles[u.unit_id] = "mcl"
        elif u.kind == "neutral":
            roles[u.unit_id] = "neut"
        elif u.kind == "claim" and u.stance is not None:
            roles[u.unit_id] = "pro" if u.stance == "for" else "opp"
        else:
            roles[u.unit_id] = None

    kind_of = {u.unit_id: u.kind for u in src.units}
    edges = []
    for r in src.relations:
        for end in (r.source, r.target):
            if kind_of.get(end) == "neutral":
                raise ConversionError(
                    f"{src.doc_id}: relation {r.rel_id} touches neutral unit {end}"
                )
        edges.append(JaasEdge(
            r.rel_id, r.source, r.target, "node",
            "sup" if r.label == "supports" else "reb",
        ))

    nodes = tuple(
        JaasNode(
            adu_id=u.unit_id,
            role=roles[u.unit_id],
            text=seg_text.get(u.unit_id, ""),
            order_index=i,
            char_span=u.span,
        )
        for i, u in enumerate(src.units)
    )
    doc = JaasDocument(
        doc_id=src.doc_id,
        source_corpus="persessays",
        topic_text=src.topic,
        nodes=nodes,
        edges=tuple(edges),
    )
    doc, unreachable = propagate_polarity(doc)
    if unreachable:
        log.warning("%s: %d unit(s) unreachable from any stance anchor: %s",
                    src.doc_id, len(unreachable), ", ".join(unreachable))

    flagged = [e for e in detect_example_candidates(doc, templates)
               if doc_edge_type(doc, e) == "sup"]
    return doc, flagged


def doc_edge_type(doc: JaasDocument, edge_id: str) -> str:
    for e in doc.edges:
        if e.edge_id == edge_id:
            return e.edge_type
    raise KeyError(edge_id)


def convert_directory(
    directory, templates: TemplateLexicon
) -> tuple[list[JaasDocument], list[tuple[str, str, str]]]:
    """Convert every .txt/.ann pair under a directory, sorted by name.

    Returns the documents and the stage-1 exa candidates as
    (doc_id, edge_id, source_text) triples ready for a review file.
    """
    docs: list[JaasDocument] = []
    candidates: list[tuple[str, str, str]] = []
    for txt in sorted(Path(directory).glob("*.txt")):
        ann = txt.with_suffix(".ann")
        if not ann.exists():
            raise ParseError("missing companion .ann file", path=str(txt))
        src = parse_persessays(txt.read_bytes(), ann.read_bytes(),
                               doc_id=txt.stem, path=str(ann))
        doc, flagged = to_jaas_persessays(src, templates)
        docs.append(doc)
        by_id = {n.adu_id: n for n in doc.nodes}
        for eid in flagged:
            edge = next(e for e in doc.edges if e.edge_id == eid)
            candidates.append((doc.doc_id, eid, by_id[edge.source].text))
    return docs, candidates
