"""Parsing and conversion of arggraph XML microtext annotations.

The dialect looks like::

    <arggraph id="micro_b001" topic_id="waste_separation" stance="pro">
      <edu id="e1"><![CDATA[...]]></edu>
      <adu id="a1" type="opp"/>
      <edge id="c6" src="e1" trg="a1" type="seg"/>
      <edge id="c1" src="a1" trg="a5" type="reb"/>
      <edge id="c3" src="a3" trg="c1" type="und"/>
    </arggraph>

seg edges attach elementary units (text carriers) to argumentative units;
they are consumed during conversion to rebuild node text.  Non-seg edges
may target either a unit or another edge.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

from .errors import ConversionError, ParseError
from .jaas import JaasDocument, JaasEdge, JaasNode
from .sources import Relation, Segment, SourceGraph, Unit

_EDGE_LABELS = ("seg", "sup", "exa", "add", "reb", "und")
_ADU_TYPES = {"pro": "proponent", "opp": "opponent", "neut": "neutral"}


def parse_argmicro(xml_bytes: bytes, path=None) -> SourceGraph:
    """Parse one arggraph XML file into a SourceGraph."""
    try:
        root = ET.fromstring(xml_bytes)
    except ET.ParseError as exc:
        line = exc.position[0] if exc.position else None
        raise ParseError(f"malformed XML: {exc}", path=path, line=line) from exc
    if root.tag != "arggraph":
        raise ParseError(f"expected <arggraph> root, got <{root.tag}>", path=path)

    doc_id = root.get("id", "")
    topic = root.get("topic_id", "") or ""

    segments: list[Segment] = []
    units: list[Unit] = []
    relations: list[Relation] = []
    seg_like_ids: set[str] = set()  # edus and joints both carry/relay text

    for el in root:
        if el.tag == "edu":
            seg_id = el.get("id", "")
            segments.append(Segment(seg_id, (el.text or "").strip()))
            seg_like_ids.add(seg_id)
        elif el.tag == "joint":
            # a joint merges several edus; it carries no text of its own
            seg_id = el.get("id", "")
            segments.append(Segment(seg_id, ""))
            seg_like_ids.add(seg_id)
        elif el.tag == "adu":
            adu_type = el.get("type", "")
            if adu_type not in _ADU_TYPES:
                raise ParseError(f"unknown adu type {adu_type!r}", path=path)
            units.append(Unit(el.get("id", ""), _ADU_TYPES[adu_type]))
        elif el.tag == "edge":
            label = el.get("type", "")
            if label not in _EDGE_LABELS:
                raise ParseError(f"unknown edge type {label!r}", path=path)
            relations.append(
                Relation(el.get("id", ""), el.get("src", ""), el.get("trg", ""), label)
            )
        # other elements (comments, metadata) are ignored

    unit_ids = {u.unit_id for u in units}
    rel_ids = {r.rel_id for r in relations}
    known = seg_like_ids | unit_ids
    for r in relations:
        if r.source not in known:
            raise ParseError(f"edge {r.rel_id}: unknown source {r.source!r}", path=path)
        if r.target not in known | rel_ids:
            raise ParseError(f"edge {r.rel_id}: unknown target {r.target!r}", path=path)

    return SourceGraph(
        doc_id=doc_id,
        segments=tuple(segments),
        units=tuple(units),
        relations=tuple(relations),
        topic=topic,
    )


def to_jaas_argmicro(src: SourceGraph) -> JaasDocument:
    """Convert a parsed microtext graph to the joint scheme.

    Roles: proponent units become pro, opponent units opp; proponent units
    with no outgoing argumentative edge become mcl.  seg relations are
    consumed to assemble node text.  Non-und edges that target another
    edge (linked premises) are retargeted to that edge's source unit so
    that only und edges ever point at edges.
    """
    seg_rels = [r for r in src.relations if r.label == "seg"]
    arg_rels = [r for r in src.relations if r.label != "seg"]
    unit_ids = {u.unit_id for u in src.units}
    seg_pos = {s.seg_id: i for i, s in enumerate(src.segments)}
    seg_text = {s.seg_id: s.text for s in src.segments}

    # follow seg chains (edu -> [joint ->] adu) to collect text carriers
    seg_children: dict[str, list[str]] = {}
    for r in seg_rels:
        seg_children.setdefault(r.target, []).append(r.source)

    def carriers(unit_id: str) -> list[str]:
        found: list[str] = []
        stack = list(seg_children.get(unit_id, []))
        while stack:
            sid = stack.pop()
            if sid in seg_pos:
                found.append(sid)
            stack.extend(seg_children.get(sid, []))
        return sorted(found, key=seg_pos.__getitem__)

    unit_text = {
        u.unit_id: " ".join(t for t in (seg_text[c] for c in carriers(u.unit_id)) if t)
        for u in src.units
    }

    # reading order: position of the first text carrier, file order as fallback
    def order_key(iu):
        i, u = iu
        cs = carriers(u.unit_id)
        return (seg_pos[cs[0]], i) if cs else (len(src.segments) + i, i)

    ordered = sorted(enumerate(src.units), key=order_key)
    order_index = {u.unit_id: k for k, (_, u) in enumerate(ordered)}

    has_outgoing = {r.source for r in arg_rels}
    roles: dict[str, str] = {}
    found_mcl = False
    for u in src.units:
        if u.kind == "neutral":
            roles[u.unit_id] = "neut"
        elif u.kind == "proponent" and u.unit_id not in has_outgoing:
            roles[u.unit_id] = "mcl"
            found_mcl = True
        else:
            roles[u.unit_id] = "pro" if u.kind == "proponent" else "opp"
    if not found_mcl:
        raise ConversionError(f"{src.doc_id}: no root proponent claim identifiable")

    rel_by_id = {r.rel_id: r for r in arg_rels}
    edges = []
    for r in arg_rels:
        if r.target in unit_ids:
            edges.append(JaasEdge(r.rel_id, r.source, r.target, "node", r.label))
            continue
        attacked = rel_by_id.get(r.target)
        if attacked is None:
            raise ConversionError(f"{src.doc_id}: edge {r.rel_id} targets a seg relation")
        if r.label == "und":
            edges.append(JaasEdge(r.rel_id, r.source, r.target, "edge", "und"))
        elif r.label == "reb":
            raise ConversionError(
                f"{src.doc_id}: reb edge {r.rel_id} targets an edge (expected und)"
            )
        else:  # sup/add/exa joining the attacked edge's source as co-premise
            edges.append(JaasEdge(r.rel_id, r.source, attacked.source, "node", r.label))

    nodes = tuple(
        JaasNode(
            adu_id=u.unit_id,
            role=roles[u.unit_id],
            text=unit_text[u.unit_id],
            order_index=order_index[u.unit_id],
        )
        for _, u in ordered
    )
    return JaasDocument(
        doc_id=src.doc_id,
        source_corpus="argmicro",
        topic_text=src.topic,
        nodes=nodes,
        edges=tuple(edges),
    )


def convert_directory(directory) -> list[JaasDocument]:
    """Parse and convert every .xml file under a directory, sorted by name."""
    docs = []
    for path in sorted(Path(directory).glob("*.xml")):
        src = parse_argmicro(path.read_bytes(), path=str(path))
        docs.append(to_jaas_argmicro(src))
    return docs
