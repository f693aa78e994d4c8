"""Fixed-layout sparse feature vectors with neighbor-unit context.

Per unit, one block of ``lexical | punctuation | morphosyntactic`` counts;
the final vector concatenates the previous, current and next units'
blocks (absent neighbors contribute zeros).  With the standard 255-entry
marker lexicon a block is 255 + 5 + 783 = 1,043 wide and the full vector
3 x 1,043 = 3,129.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .textprep import AnalyzedAdu, MarkerLexicon, MOODS, TENSES

PUNCT_CHARS = (",", ":", ";", "?", "!")
TARGET_TAGS = ("NOUN", "PRON", "VERB", "ADJ", "ADV")
_TAG_INDEX = {t: i for i, t in enumerate(TARGET_TAGS)}
_NGRAM_OFFSET = {2: 0, 3: 25, 4: 150}  # 25 + 125 + 625 = 775 n-gram slots
NGRAM_SLOTS = 775
VERB_SLOTS = 8  # 3 tenses + 2 moods + 3 persons
MORPHO_DIM = NGRAM_SLOTS + VERB_SLOTS

FEATURE_SETS = ("lexical_only", "all_without_markers", "all_without_prev", "all")


@dataclass(frozen=True)
class FeatureLayout:
    lexical_dim: int = 255

    @property
    def punct_dim(self) -> int:
        return len(PUNCT_CHARS)

    @property
    def morpho_dim(self) -> int:
        return MORPHO_DIM

    @property
    def block_dim(self) -> int:
        return self.lexical_dim + self.punct_dim + self.morpho_dim

    @property
    def total_dim(self) -> int:
        return 3 * self.block_dim

    def ngram_slot(self, tags: tuple[str, ...]) -> int:
        """Bijection from 2/3/4-tuples over the five target tags to [0, 775)."""
        n = len(tags)
        idx = 0
        for t in tags:
            idx = idx * 5 + _TAG_INDEX[t]
        return _NGRAM_OFFSET[n] + idx

    def punct_slot(self, char: str) -> int:
        return self.lexical_dim + PUNCT_CHARS.index(char)

    def morpho_base(self) -> int:
        return self.lexical_dim + self.punct_dim

    def verb_slot(self, kind: str, value) -> int:
        base = self.morpho_base() + NGRAM_SLOTS
        if kind == "tense":
            return base + TENSES.index(value)
        if kind == "mood":
            return base + 3 + MOODS.index(value)
        if kind == "person":
            return base + 5 + (value - 1)
        raise ValueError(kind)


@dataclass(frozen=True)
class FeatureVector:
    adu_id: str
    doc_id: str
    label: str | None  # "pro" | "opp" | None
    slots: dict  # slot index -> count


def lexical_features(adu: AnalyzedAdu, lex: MarkerLexicon) -> dict[int, int]:
    """Greedy longest-match phrase counts over the (non-punct) lemma sequence.

    Matches never overlap, so single-word entries inside a matched
    multi-word phrase are not counted again.
    """
    lemmas = [t.lemma.lower() for t in adu.tokens if not t.is_punct]
    max_len = max((len(p) for p, _ in lex.entries), default=0)
    counts: dict[int, int] = {}
    i = 0
    while i < len(lemmas):
        for n in range(min(max_len, len(lemmas) - i), 0, -1):
            slot = lex.slot_index.get(tuple(lemmas[i:i + n]))
            if slot is not None:
                counts[slot] = counts.get(slot, 0) + 1
                i += n
                break
        else:
            i += 1
    return counts


def punct_features(adu: AnalyzedAdu, layout: FeatureLayout) -> dict[int, int]:
    """Counts of comma, colon, semicolon, question and exclamation marks."""
    counts: dict[int, int] = {}
    for ch in adu.surface:
        if ch in PUNCT_CHARS:
            slot = layout.punct_slot(ch)
            counts[slot] = counts.get(slot, 0) + 1
    return counts


def morpho_features(adu: AnalyzedAdu, layout: FeatureLayout) -> dict[int, int]:
    """POS n-gram (N in 2..4) and verb tense/mood/person counts.

    Tokens outside the five target tags (and punctuation) are dropped
    before n-grams are formed, so n-grams bridge the gaps they leave.
    """
    base = layout.morpho_base()
    counts: dict[int, int] = {}
    tags = [t.pos for t in adu.tokens if t.pos in _TAG_INDEX]
    for n in (2, 3, 4):
        for i in range(len(tags) - n + 1):
            slot = base + layout.ngram_slot(tuple(tags[i:i + n]))
            counts[slot] = counts.get(slot, 0) + 1
    for t in adu.tokens:
        if t.pos == "VERB" and t.verb_feats is not None:
            vf = t.verb_feats
            if vf.tense is not None:
                slot = layout.verb_slot("tense", vf.tense)
                counts[slot] = counts.get(slot, 0) + 1
            if vf.mood is not None:
                slot = layout.verb_slot("mood", vf.mood)
                counts[slot] = counts.get(slot, 0) + 1
            if vf.person is not None:
                slot = layout.verb_slot("person", vf.person)
                counts[slot] = counts.get(slot, 0) + 1
    return counts


def unit_block(adu: AnalyzedAdu, lex: MarkerLexicon, layout: FeatureLayout) -> dict[int, int]:
    """All three families for one unit, laid out within a single block."""
    block = dict(lexical_features(adu, lex))
    block.update(punct_features(adu, layout))
    block.update(morpho_features(adu, layout))
    return block


def context_vector(prev: dict | None, cur: dict, nxt: dict | None,
                   layout: FeatureLayout) -> dict[int, int]:
    """Concatenate [prev | cur | next] blocks; absent neighbors stay zero."""
    out: dict[int, int] = {}
    d = layout.block_dim
    if prev:
        out.update(prev)
    for slot, c in cur.items():
        out[d + slot] = c
    if nxt:
        for slot, c in nxt.items():
            out[2 * d + slot] = c
    return out


def extract_corpus(docs, analyses: dict[str, AnalyzedAdu],
                   lex: MarkerLexicon, layout: FeatureLayout) -> list[FeatureVector]:
    """Feature vectors for every unit of every document, in reading order.

    Context neighbors are taken over all units of a document regardless of
    role; only pro/opp units carry a label.  Analyses are keyed by the
    corpus-wide ``doc_id:adu_id`` (plain adu_id accepted as a fallback);
    units without an analysis contribute punctuation counts only.
    """
    out: list[FeatureVector] = []
    for doc in docs:
        ordered = sorted(doc.nodes, key=lambda n: n.order_index)
        blocks = []
        for node in ordered:
            adu = analyses.get(f"{doc.doc_id}:{node.adu_id}", analyses.get(node.adu_id))
            adu = AnalyzedAdu(node.adu_id, (), text=node.text) if adu is None \
                else replace(adu, text=node.text)
            blocks.append(unit_block(adu, lex, layout))
        for i, node in enumerate(ordered):
            vec = context_vector(
                blocks[i - 1] if i > 0 else None,
                blocks[i],
                blocks[i + 1] if i + 1 < len(blocks) else None,
                layout,
            )
            label = node.role if node.role in ("pro", "opp") else None
            out.append(FeatureVector(node.adu_id, doc.doc_id, label, vec))
    return out


# ---------------------------------------------------------------------------
# ablation masks

def kept_ranges(feature_set: str, layout: FeatureLayout) -> list[tuple[int, int]]:
    """Half-open slot ranges retained by a feature-set mask."""
    d, lex = layout.block_dim, layout.lexical_dim
    if feature_set == "all":
        return [(0, 3 * d)]
    if feature_set == "lexical_only":
        return [(b * d, b * d + lex) for b in range(3)]
    if feature_set == "all_without_markers":
        return [(b * d + lex, (b + 1) * d) for b in range(3)]
    if feature_set == "all_without_prev":
        return [(d, 3 * d)]
    raise ValueError(f"unknown feature set {feature_set!r}")


def apply_mask(vec: FeatureVector, feature_set: str, layout: FeatureLayout) -> FeatureVector:
    ranges = kept_ranges(feature_set, layout)
    slots = {s: c for s, c in vec.slots.items() if any(a <= s < b for a, b in ranges)}
    return replace(vec, slots=slots)


# ---------------------------------------------------------------------------
# matrix file I/O: one JSON object per line, slots sorted by index

def write_matrix(path, vectors: list[FeatureVector]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for v in vectors:
            row = {
                "adu_id": v.adu_id,
                "doc_id": v.doc_id,
                "label": v.label,
                "slots": [[s, v.slots[s]] for s in sorted(v.slots)],
            }
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


def load_matrix(path) -> list[FeatureVector]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            row = json.loads(line)
            out.append(FeatureVector(
                row["adu_id"], row["doc_id"], row["label"],
                {int(s): c for s, c in row["slots"]},
            ))
    return out


def to_csr(vectors: list[FeatureVector], layout: FeatureLayout) -> sp.csr_matrix:
    """Stack vectors into a CSR matrix (one row per vector, float64)."""
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for v in vectors:
        for s in sorted(v.slots):
            indices.append(s)
            data.append(float(v.slots[s]))
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int32), np.asarray(indptr, dtype=np.int32)),
        shape=(len(vectors), layout.total_dim),
    )
