"""In-memory argumentation graphs under the joint annotation scheme.

A document is a topic plus typed nodes (mcl / pro / opp / neut) and typed
edges (sup / add / exa / reb / und).  und edges attack another edge; all
other edge types connect two nodes.  Everything here is immutable and
side-effect free; graph problems are reported as data, not exceptions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

ROLES = ("mcl", "pro", "opp", "neut")
EDGE_TYPES = ("sup", "add", "exa", "reb", "und")
SOURCE_CORPORA = ("argmicro", "persessays")

# edge types that preserve the polarity of their source relative to the target
_PRESERVING = ("sup", "add", "exa")


@dataclass(frozen=True)
class JaasNode:
    adu_id: str
    role: str | None  # None = argumentative, polarity not assigned yet
    text: str
    order_index: int
    char_span: tuple[int, int] | None = None


@dataclass(frozen=True)
class JaasEdge:
    edge_id: str
    source: str
    target: str
    target_kind: str  # "node" | "edge"
    edge_type: str


@dataclass(frozen=True)
class JaasDocument:
    doc_id: str
    source_corpus: str
    topic_text: str
    nodes: tuple[JaasNode, ...]
    edges: tuple[JaasEdge, ...]

    @property
    def dual_mcl(self) -> bool:
        return sum(1 for n in self.nodes if n.role == "mcl") == 2

    def node(self, adu_id: str) -> JaasNode:
        for n in self.nodes:
            if n.adu_id == adu_id:
                return n
        raise KeyError(adu_id)


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str  # offending node/edge id (or doc id for document-level rules)
    message: str


@dataclass(frozen=True)
class ValidationReport:
    doc_id: str
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class CorpusStats:
    texts: int
    adus_total: int
    adus_by_role: dict  # role -> (count, percent)
    edges_by_type: dict  # edge_type -> count


def validate_graph(doc: JaasDocument) -> ValidationReport:
    """Check every scheme invariant; returns all violations found.

    A role of None (polarity not yet propagated) is legal in memory and is
    not flagged here, so validation can run both before and after
    propagation.
    """
    out: list[Violation] = []
    node_ids: set[str] = set()
    edge_ids = {e.edge_id for e in doc.edges}

    seen_order: set[int] = set()
    for n in doc.nodes:
        if n.adu_id in node_ids:
            out.append(Violation("duplicate-node-id", n.adu_id, "node id repeated"))
        node_ids.add(n.adu_id)
        if n.role is not None and n.role not in ROLES:
            out.append(Violation("bad-role", n.adu_id, f"unknown role {n.role!r}"))
        if n.order_index in seen_order:
            out.append(Violation("duplicate-order-index", n.adu_id,
                                 f"order_index {n.order_index} repeated"))
        seen_order.add(n.order_index)
        if n.role != "neut" and not n.text.strip():
            out.append(Violation("empty-text", n.adu_id, "non-neutral node without text"))

    mcl = [n.adu_id for n in doc.nodes if n.role == "mcl"]
    if not mcl:
        out.append(Violation("missing-mcl", doc.doc_id, "no major-claim node"))
    elif len(mcl) > 2:
        out.append(Violation("too-many-mcl", doc.doc_id, f"{len(mcl)} major claims"))
    elif len(mcl) == 2 and doc.source_corpus != "persessays":
        out.append(Violation("dual-mcl-outside-persessays", doc.doc_id,
                             "two major claims in a non-persessays document"))

    seen_edge_ids: set[str] = set()
    for e in doc.edges:
        if e.edge_id in seen_edge_ids:
            out.append(Violation("duplicate-edge-id", e.edge_id, "edge id repeated"))
        seen_edge_ids.add(e.edge_id)
        if e.edge_type not in EDGE_TYPES:
            out.append(Violation("bad-edge-type", e.edge_id, f"unknown type {e.edge_type!r}"))
        if e.source not in node_ids:
            out.append(Violation("dangling-source", e.edge_id, f"source {e.source!r} is not a node"))
        if e.target_kind == "node":
            if e.target not in node_ids:
                out.append(Violation("dangling-target", e.edge_id, f"target {e.target!r} is not a node"))
            if e.edge_type == "und":
                out.append(Violation("und-must-target-edge", e.edge_id,
                                     "und edge targets a node"))
            if e.source == e.target:
                out.append(Violation("self-loop", e.edge_id, "edge source equals target"))
        elif e.target_kind == "edge":
            if e.target not in edge_ids:
                out.append(Violation("dangling-target", e.edge_id, f"target {e.target!r} is not an edge"))
            if e.edge_type != "und":
                out.append(Violation("only-und-may-target-edge", e.edge_id,
                                     f"{e.edge_type} edge targets an edge"))
        else:
            out.append(Violation("bad-target-kind", e.edge_id, f"target_kind {e.target_kind!r}"))

    out.extend(_find_cycles(doc, node_ids))
    return ValidationReport(doc.doc_id, tuple(out))


def _find_cycles(doc: JaasDocument, node_ids: set[str]) -> list[Violation]:
    """Detect cycles in the node-to-node edge subgraph (DFS, three colors)."""
    succ: dict[str, list[str]] = {nid: [] for nid in node_ids}
    for e in doc.edges:
        if e.target_kind == "node" and e.source in node_ids and e.target in node_ids:
            succ[e.source].append(e.target)

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {nid: WHITE for nid in node_ids}
    out: list[Violation] = []

    for start in succ:
        if color[start] != WHITE:
            continue
        stack = [(start, iter(succ[start]))]
        color[start] = GRAY
        while stack:
            nid, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GRAY:
                    out.append(Violation("node-cycle", nxt, "node is on a node-edge cycle"))
                elif color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[nid] = BLACK
                stack.pop()
    return out


def propagate_polarity(doc: JaasDocument) -> tuple[JaasDocument, list[str]]:
    """Assign pro/opp to every unassigned argumentative node.

    Anchors are mcl nodes (the pro reference) and nodes that already carry
    pro or opp (explicit stance).  Walking a node's outgoing edge chain
    toward an anchor, sup/add/exa preserve polarity and reb flips it; an
    und edge makes its source the opposite of the attacked edge's source.
    Nodes with no path to an anchor (or on a cycle of unassigned nodes)
    are assigned neut and returned in the second element.
    """
    nodes = {n.adu_id: n for n in doc.nodes}
    edges = {e.edge_id: e for e in doc.edges}
    first_out: dict[str, JaasEdge] = {}
    for e in doc.edges:
        first_out.setdefault(e.source, e)

    UNREACHABLE = "unreachable"
    memo: dict[str, str] = {}

    def polarity(adu_id: str, visiting: set[str]) -> str:
        if adu_id in memo:
            return memo[adu_id]
        node = nodes.get(adu_id)
        if node is None:
            return UNREACHABLE
        if node.role == "mcl":
            return "pro"
        if node.role in ("pro", "opp"):
            return node.role
        if node.role == "neut":
            return UNREACHABLE
        if adu_id in visiting:  # cycle of unassigned nodes
            return UNREACHABLE
        visiting.add(adu_id)
        edge = first_out.get(adu_id)
        if edge is None:
            result = UNREACHABLE
        elif edge.target_kind == "edge":
            attacked = edges.get(edge.target)
            if attacked is None:
                result = UNREACHABLE
            else:
                result = _flip(polarity(attacked.source, visiting))
        elif edge.edge_type in _PRESERVING:
            result = polarity(edge.target, visiting)
        else:  # reb, or an und that (invalidly) targets a node: both attack
            result = _flip(polarity(edge.target, visiting))
        visiting.discard(adu_id)
        memo[adu_id] = result
        return result

    unreachable: list[str] = []
    new_nodes = []
    for n in doc.nodes:
        if n.role is None:
            pol = polarity(n.adu_id, set())
            if pol == UNREACHABLE:
                unreachable.append(n.adu_id)
                new_nodes.append(replace(n, role="neut"))
            else:
                new_nodes.append(replace(n, role=pol))
        else:
            new_nodes.append(n)
    return replace(doc, nodes=tuple(new_nodes)), unreachable


def _flip(polarity: str) -> str:
    if polarity == "pro":
        return "opp"
    if polarity == "opp":
        return "pro"
    return polarity  # unreachable stays unreachable


def polarity_deltas(doc: JaasDocument) -> list[tuple[str, str, str]]:
    """Recompute pro/opp from the edge structure and diff against stored roles.

    Returns (adu_id, stored_role, recomputed_role) for every argumentative
    node where the two disagree.  Used to report, never overwrite, the
    released labels.
    """
    stripped_nodes = tuple(
        replace(n, role=None) if n.role in ("pro", "opp") else n for n in doc.nodes
    )
    recomputed, _ = propagate_polarity(replace(doc, nodes=stripped_nodes))
    by_id = {n.adu_id: n for n in recomputed.nodes}
    out = []
    for n in doc.nodes:
        if n.role in ("pro", "opp") and by_id[n.adu_id].role != n.role:
            out.append((n.adu_id, n.role, by_id[n.adu_id].role))
    return out


def corpus_stats(corpus: list[JaasDocument]) -> CorpusStats:
    """Role and edge-type censuses over a corpus, with role percentages."""
    role_counts = {r: 0 for r in ROLES}
    edge_counts = {t: 0 for t in EDGE_TYPES}
    for doc in corpus:
        for n in doc.nodes:
            if n.role is None:
                raise ValueError(f"{doc.doc_id}/{n.adu_id}: unassigned role in stats input")
            role_counts[n.role] += 1
        for e in doc.edges:
            edge_counts[e.edge_type] += 1
    total = sum(role_counts.values())
    by_role = {
        r: (c, round(100.0 * c / total, 1) if total else 0.0)
        for r, c in role_counts.items()
    }
    return CorpusStats(
        texts=len(corpus),
        adus_total=total,
        adus_by_role=by_role,
        edges_by_type=edge_counts,
    )


# ---------------------------------------------------------------------------
# JSON serialization (one file per corpus; schema field names are fixed)

def _node_to_json(n: JaasNode) -> dict:
    if n.role not in ROLES:
        raise ValueError(f"node {n.adu_id}: role must be resolved before serialization")
    return {
        "adu_id": n.adu_id,
        "role": n.role,
        "text": n.text,
        "char_span": list(n.char_span) if n.char_span is not None else None,
        "order_index": n.order_index,
    }


def _edge_to_json(e: JaasEdge) -> dict:
    return {
        "edge_id": e.edge_id,
        "source": e.source,
        "target": e.target,
        "target_kind": e.target_kind,
        "edge_type": e.edge_type,
    }


def corpus_to_json(corpus_name: str, documents: list[JaasDocument]) -> str:
    payload = {
        "corpus": corpus_name,
        "documents": [
            {
                "doc_id": d.doc_id,
                "source_corpus": d.source_corpus,
                "topic_text": d.topic_text,
                "nodes": [_node_to_json(n) for n in d.nodes],
                "edges": [_edge_to_json(e) for e in d.edges],
            }
            for d in documents
        ],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def save_corpus(path, corpus_name: str, documents: list[JaasDocument]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(corpus_to_json(corpus_name, documents))


def _node_from_json(obj: dict) -> JaasNode:
    role = obj["role"]
    if role not in ROLES:
        raise ValueError(f"bad role {role!r} for node {obj.get('adu_id')!r}")
    span = obj.get("char_span")
    return JaasNode(
        adu_id=obj["adu_id"],
        role=role,
        text=obj["text"],
        order_index=obj["order_index"],
        char_span=tuple(span) if span is not None else None,
    )


def _edge_from_json(obj: dict) -> JaasEdge:
    if obj["edge_type"] not in EDGE_TYPES:
        raise ValueError(f"bad edge_type {obj['edge_type']!r} for edge {obj.get('edge_id')!r}")
    if obj["target_kind"] not in ("node", "edge"):
        raise ValueError(f"bad target_kind {obj['target_kind']!r} for edge {obj.get('edge_id')!r}")
    return JaasEdge(
        edge_id=obj["edge_id"],
        source=obj["source"],
        target=obj["target"],
        target_kind=obj["target_kind"],
        edge_type=obj["edge_type"],
    )


def corpus_from_json(text: str) -> tuple[str, list[JaasDocument]]:
    payload = json.loads(text)
    try:
        docs = [
            JaasDocument(
                doc_id=d["doc_id"],
                source_corpus=d["source_corpus"],
                topic_text=d["topic_text"],
                nodes=tuple(_node_from_json(n) for n in d["nodes"]),
                edges=tuple(_edge_from_json(e) for e in d["edges"]),
            )
            for d in payload["documents"]
        ]
        return payload["corpus"], docs
    except KeyError as exc:
        raise ValueError(f"missing field {exc} in corpus file") from exc


def load_corpus(path) -> tuple[str, list[JaasDocument]]:
    with open(path, encoding="utf-8") as f:
        return corpus_from_json(f.read())
