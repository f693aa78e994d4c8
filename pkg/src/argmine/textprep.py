"""Tokenization and ingestion of tagged analyses and lexical resources.

Morphological analysis is not performed here: the pipeline consumes a
pre-tagged file (any tagger that emits the four-column format below will
do), which keeps the core testable with fixtures and independent of any
particular analyzer.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field

from .errors import FormatError, LexiconSizeWarning

POS_TAGS = ("NOUN", "PRON", "VERB", "ADJ", "ADV", "OTHER")
TENSES = ("past", "present", "future")
MOODS = ("indicative", "imperative")
PERSONS = (1, 2, 3)
LEXICON_CATEGORIES = ("discourse_marker", "modal")
EXPECTED_LEXICON_SIZE = 255

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


def tokenize(text: str) -> list[tuple[str, bool]]:
    """Split on whitespace and punctuation boundaries.

    Every punctuation character becomes its own token; returns
    (form, is_punct) pairs in surface order.
    """
    return [(m.group(0), not m.group(0)[0].isalnum() and m.group(0)[0] != "_")
            for m in _TOKEN_RE.finditer(text)]


@dataclass(frozen=True)
class VerbFeats:
    tense: str | None = None
    mood: str | None = None
    person: int | None = None


@dataclass(frozen=True)
class Token:
    form: str
    lemma: str
    pos: str
    verb_feats: VerbFeats | None = None
    is_stopword: bool = False
    is_punct: bool = False


@dataclass(frozen=True)
class AnalyzedAdu:
    adu_id: str
    tokens: tuple[Token, ...]
    text: str = ""  # raw ADU text when known; joined forms otherwise

    @property
    def surface(self) -> str:
        return self.text if self.text else " ".join(t.form for t in self.tokens)


_HEADER_RE = re.compile(r"#\s*adu_id\s*=\s*(\S+)")


def load_tagged(conll_bytes: bytes, stopwords: frozenset[str] = frozenset()
                ) -> dict[str, AnalyzedAdu]:
    """Read tagged units from the four-column tab-separated format.

    Blocks are separated by blank lines and introduced by a
    ``# adu_id = <id>`` header.  Columns are FORM, LEMMA, POS and an
    optional FEATS column of ``Key=Value`` pairs joined with ``|``
    (Tense/Mood/Person; anything else is ignored).  Unknown POS tags map
    to OTHER.  Punctuation tokens are never stop words.
    """
    out: dict[str, AnalyzedAdu] = {}
    current_id: str | None = None
    tokens: list[Token] = []

    def flush(lineno):
        nonlocal current_id, tokens
        if tokens and current_id is None:
            raise FormatError("token lines before any adu_id header", line=lineno)
        if current_id is not None:
            out[current_id] = AnalyzedAdu(current_id, tuple(tokens))
        current_id, tokens = None, []

    lines = conll_bytes.decode("utf-8").splitlines()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            flush(lineno)
            continue
        if line.startswith("#"):
            m = _HEADER_RE.match(line)
            if m:
                if current_id is not None:
                    flush(lineno)
                current_id = m.group(1)
            continue
        cols = line.split("\t")
        if len(cols) not in (3, 4):
            raise FormatError(f"expected 3 or 4 columns, got {len(cols)}", line=lineno)
        if current_id is None:
            raise FormatError("token line before any adu_id header", line=lineno)
        form, lemma, pos = cols[0], cols[1], cols[2]
        pos = pos if pos in POS_TAGS else "OTHER"
        feats = _parse_feats(cols[3]) if len(cols) == 4 and pos == "VERB" else None
        is_punct = bool(form) and not any(c.isalnum() or c == "_" for c in form)
        out_stop = (not is_punct) and lemma.lower() in stopwords
        tokens.append(Token(form, lemma, pos, feats, out_stop, is_punct))
    flush(len(lines))
    return out


def _parse_feats(feats_col: str) -> VerbFeats | None:
    if not feats_col.strip() or feats_col.strip() == "_":
        return None
    tense = mood = person = None
    for pair in feats_col.split("|"):
        key, _, value = pair.partition("=")
        key, value = key.strip().lower(), value.strip().lower()
        if key == "tense" and value in TENSES:
            tense = value
        elif key == "mood" and value in MOODS:
            mood = value
        elif key == "person" and value in ("1", "2", "3"):
            person = int(value)
    if tense is None and mood is None and person is None:
        return None
    return VerbFeats(tense, mood, person)


def write_tagged(analyses: dict[str, AnalyzedAdu]) -> str:
    """Inverse of load_tagged (used for fixtures and the tagger script)."""
    blocks = []
    for adu_id, adu in analyses.items():
        lines = [f"# adu_id = {adu_id}"]
        for t in adu.tokens:
            feats = []
            if t.verb_feats is not None:
                if t.verb_feats.tense:
                    feats.append(f"Tense={t.verb_feats.tense}")
                if t.verb_feats.mood:
                    feats.append(f"Mood={t.verb_feats.mood}")
                if t.verb_feats.person:
                    feats.append(f"Person={t.verb_feats.person}")
            cols = [t.form, t.lemma, t.pos]
            if feats:
                cols.append("|".join(feats))
            lines.append("\t".join(cols))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


@dataclass(frozen=True)
class MarkerLexicon:
    """Discourse-marker and modal-word phrases with stable slot indices."""

    entries: tuple[tuple[tuple[str, ...], str], ...]  # (lemma phrase, category)
    slot_index: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "slot_index",
                           {phrase: i for i, (phrase, _) in enumerate(self.entries)})

    def __len__(self) -> int:
        return len(self.entries)


def load_lexicon(path) -> MarkerLexicon:
    """Load the marker lexicon (TSV: lemma phrase, tab, category).

    The feature layout is sized to whatever the file holds; a size other
    than 255 raises LexiconSizeWarning but does not stop the pipeline.
    """
    entries: list[tuple[tuple[str, ...], str]] = []
    seen: set[tuple[str, ...]] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError("expected 'phrase<TAB>category'", line=lineno)
            phrase = tuple(parts[0].lower().split())
            category = parts[1].strip()
            if category not in LEXICON_CATEGORIES:
                raise FormatError(f"bad category {category!r}", line=lineno)
            if phrase in seen:
                raise FormatError(f"duplicate entry {' '.join(phrase)!r}", line=lineno)
            seen.add(phrase)
            entries.append((phrase, category))
    if len(entries) != EXPECTED_LEXICON_SIZE:
        warnings.warn(
            f"marker lexicon has {len(entries)} entries, expected {EXPECTED_LEXICON_SIZE}",
            LexiconSizeWarning,
            stacklevel=2,
        )
    return MarkerLexicon(tuple(entries))


def load_stopwords(path) -> frozenset[str]:
    """One lemma per line; blank lines and #-comments skipped."""
    words = set()
    with open(path, encoding="utf-8") as f:
        for raw in f:
            line = raw.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return frozenset(words)
