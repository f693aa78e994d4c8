"""Detection and manual review of exemplification ("exa") support edges.

Stage 1 flags every support edge whose source text contains a template
phrase; stage 2 is a human pass over a TSV review file whose accepted
rows are rewritten from sup to exa.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import FormatError
from .textprep import tokenize

REVIEW_HEADER = "edge_id\tdoc_id\tsource_text\tdecision"
_DECISIONS = ("exa", "sup")


@dataclass(frozen=True)
class TemplateLexicon:
    """Lowercase multi-word phrases that mark exemplification."""

    phrases: tuple[tuple[str, ...], ...]  # each phrase as a token tuple

    def __post_init__(self):
        if not self.phrases:
            raise ValueError("template lexicon must not be empty")
        if len(set(self.phrases)) != len(self.phrases):
            raise ValueError("duplicate template phrase")


def load_templates(path) -> TemplateLexicon:
    """One phrase per line, UTF-8; blank lines and #-comments skipped."""
    phrases = []
    with open(path, encoding="utf-8") as f:
        for raw in f:
            line = raw.strip()
            if line and not line.startswith("#"):
                phrases.append(tuple(line.lower().split()))
    return TemplateLexicon(tuple(phrases))


def detect_example_candidates(doc, templates: TemplateLexicon, analyses=None) -> list[str]:
    """Edge ids of sup/exa edges whose source text contains a template phrase.

    Matching is case-insensitive over the token sequence; when tagged
    analyses are supplied the lemma sequence is used instead of surface
    forms, so inflected template words still hit.
    """
    flagged = []
    text_by_id = {n.adu_id: n.text for n in doc.nodes}
    for e in doc.edges:
        if e.edge_type not in ("sup", "exa"):
            continue
        if analyses is not None and e.source in analyses:
            words = [t.lemma.lower() for t in analyses[e.source].tokens if not t.is_punct]
        else:
            words = [form.lower() for form, is_punct in tokenize(text_by_id[e.source])
                     if not is_punct]
        if _contains_any(words, templates.phrases):
            flagged.append(e.edge_id)
    return flagged


def _contains_any(words: list[str], phrases) -> bool:
    for phrase in phrases:
        n = len(phrase)
        for i in range(len(words) - n + 1):
            if tuple(words[i:i + n]) == phrase:
                return True
    return False


def write_review_file(path, candidates) -> None:
    """Write stage-1 candidates as TSV rows (decision prefilled as exa).

    ``candidates`` holds (doc_id, edge_id, source_text) triples; reviewers
    flip rejected rows' decision back to sup before re-ingestion.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(REVIEW_HEADER + "\n")
        for doc_id, edge_id, source_text in candidates:
            text = source_text.replace("\t", " ").replace("\n", " ")
            f.write(f"{edge_id}\t{doc_id}\t{text}\texa\n")


def read_review_file(path) -> dict[tuple[str, str], str]:
    """Parse a reviewed TSV into {(doc_id, edge_id): decision}."""
    decisions: dict[tuple[str, str], str] = {}
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines or lines[0] != REVIEW_HEADER:
        raise FormatError("bad review file header", line=1)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise FormatError("expected 4 tab-separated columns", line=lineno)
        edge_id, doc_id, _text, decision = parts
        if decision not in _DECISIONS:
            raise FormatError(f"decision must be one of {_DECISIONS}, got {decision!r}",
                              line=lineno)
        decisions[(doc_id, edge_id)] = decision
    return decisions


def apply_review(docs, decisions: dict[tuple[str, str], str]):
    """Rewrite sup edges accepted in review to exa; returns new documents."""
    out = []
    for doc in docs:
        new_edges = tuple(
            replace(e, edge_type="exa")
            if decisions.get((doc.doc_id, e.edge_id)) == "exa" and e.edge_type == "sup"
            else e
            for e in doc.edges
        )
        out.append(replace(doc, edges=new_edges))
    return out
