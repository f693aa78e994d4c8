"""Deterministic synthetic demo corpus in the arggraph XML dialect.

Generates microtext-shaped documents (one proponent root, 3-5 argument
units attached by sup/add/exa/reb/und moves) plus the matching tagged
file, sized and class-balanced like the real microtext corpus.  Argument
polarity is planted lexically: pro and opp units carry markers from
disjoint subsets of the shipped lexicon, punctuation and morphosyntax
are uninformative noise, so marker features dominate by construction.

The real corpora, where available, always take precedence over this
generator; it exists so the experiment pipeline can be exercised
end-to-end without them.
"""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .folds import adu_uid
from .textprep import AnalyzedAdu, Token, VerbFeats, write_tagged

PRO_MARKERS = (
    "поэтому", "следовательно", "например", "конечно",
    "кроме того", "итак", "я считать", "безусловно",
)
OPP_MARKERS = (
    "однако", "зато", "хотя", "напротив",
    "тем не менее", "вряд ли", "нельзя", "я сомневаться",
)
MODAL_NOISE = ("нужно", "можно", "надо", "мочь", "хотеть", "следовать")

NOUNS = (
    "человек", "школа", "город", "работа", "спорт", "музыка", "закон",
    "природа", "книга", "ребёнок", "учитель", "урок", "жизнь", "общество",
    "страна", "вопрос", "решение", "система", "наука", "техника",
    "интернет", "телефон", "машина", "дорога", "дом", "семья", "друг",
    "здоровье", "еда", "вода", "воздух", "энергия", "культура", "язык",
    "история", "успех", "город", "отдых", "труд", "выбор",
)
VERBS = (
    "думать", "помогать", "мешать", "работать", "учиться", "развивать",
    "улучшать", "ухудшать", "создавать", "менять", "решать", "начинать",
    "использовать", "защищать", "поддерживать", "получать", "терять",
    "платить", "экономить", "строить",
)
ADJS = (
    "хороший", "плохой", "большой", "маленький", "новый", "старый",
    "быстрый", "медленный", "полезный", "вредный", "сложный", "простой",
    "умный", "сильный", "слабый", "дорогой", "дешёвый", "интересный",
)
ADVS = ("быстро", "медленно", "хорошо", "плохо", "легко", "трудно",
        "тихо", "громко", "честно", "открыто")
PRONS = ("я", "мы", "он", "она", "они", "вы")
STOPS = ("и", "в", "на", "с", "за", "у", "о", "для", "по", "к")  # OTHER pos
TOPICS = ("школьная форма", "раздельный сбор мусора", "платные дороги",
          "домашние задания", "городские парки", "онлайн обучение",
          "общественный транспорт", "видеоигры")


def _content_token(rng) -> Token:
    kind = rng.choice(("NOUN", "VERB", "ADJ", "ADV", "PRON", "STOP"),
                      p=(0.34, 0.22, 0.16, 0.08, 0.08, 0.12))
    if kind == "NOUN":
        w = str(rng.choice(NOUNS))
        return Token(w, w, "NOUN")
    if kind == "VERB":
        w = str(rng.choice(VERBS))
        feats = VerbFeats(
            tense=str(rng.choice(("past", "present", "future"))),
            mood="indicative",
            person=int(rng.integers(1, 4)),
        )
        return Token(w, w, "VERB", verb_feats=feats)
    if kind == "ADJ":
        w = str(rng.choice(ADJS))
        return Token(w, w, "ADJ")
    if kind == "ADV":
        w = str(rng.choice(ADVS))
        return Token(w, w, "ADV")
    if kind == "PRON":
        w = str(rng.choice(PRONS))
        return Token(w, w, "PRON")
    w = str(rng.choice(STOPS))
    return Token(w, w, "OTHER", is_stopword=True)


def _marker_tokens(rng, role: str) -> list[Token]:
    pool = PRO_MARKERS if role == "pro" else OPP_MARKERS
    r = rng.random()
    if r < 0.88:
        phrases = [str(rng.choice(pool))]
        if rng.random() < 0.25:
            phrases.append(str(rng.choice(pool)))
    elif r < 0.92:  # small amount of cross-class noise
        other = OPP_MARKERS if role == "pro" else PRO_MARKERS
        phrases = [str(rng.choice(other))]
    else:
        return []
    return [Token(w, w, "OTHER") for p in phrases for w in p.split()]


def _punct(rng) -> Token:
    ch = str(rng.choice((".", ".", ".", ",", "!", "?")))
    return Token(ch, ch, "OTHER", is_punct=True)


def _adu_tokens(rng, role: str | None) -> list[Token]:
    tokens: list[Token] = []
    if role in ("pro", "opp"):
        tokens.extend(_marker_tokens(rng, role))
    n_content = int(rng.integers(7, 15))
    for _ in range(n_content):
        tokens.append(_content_token(rng))
        if rng.random() < 0.08:
            tokens.append(Token(",", ",", "OTHER", is_punct=True))
    if rng.random() < 0.3:
        tokens.append(Token(str(rng.choice(MODAL_NOISE)),
                            str(rng.choice(MODAL_NOISE)), "OTHER"))
    tokens.append(_punct(rng))
    return tokens


def _detok(tokens: list[Token]) -> str:
    parts: list[str] = []
    for t in tokens:
        if t.is_punct and parts:
            parts[-1] += t.form
        else:
            parts.append(t.form)
    return " ".join(parts)


def _doc_structure(rng, n_args: int):
    """Plan (role, move) per argument unit against already-placed units.

    Returns a list of (role, edge_type, target) where target is a unit
    index (mcl = 0) or ("edge", edge_index).  Unit polarity follows the
    attack parity of the chosen move.
    """
    roles = ["mcl"]
    edges = []  # (edge_type, source_idx, target: ("node", i) | ("edge", j))
    polarity = {0: "pro"}
    for u in range(1, n_args + 1):
        want_opp = rng.random() < 0.205
        placed = False
        for _ in range(20):
            move = rng.random()
            if move < 0.12 and edges:
                j = int(rng.integers(0, len(edges)))
                src_pol = polarity[edges[j][1]]
                if move < 0.06:
                    # undercut: source opposes the attacked edge's source
                    pol = "opp" if src_pol == "pro" else "pro"
                    if (pol == "opp") == want_opp:
                        edges.append(("und", u, ("edge", j)))
                        polarity[u] = pol
                        placed = True
                        break
                else:
                    # linked support joining the edge's source
                    pol = src_pol
                    if (pol == "opp") == want_opp:
                        edges.append(("add", u, ("edge", j)))
                        polarity[u] = pol
                        placed = True
                        break
            else:
                t = int(rng.integers(0, u))
                etype = str(rng.choice(("sup", "exa", "reb"), p=(0.7, 0.1, 0.2)))
                pol = polarity[t] if etype != "reb" else \
                    ("opp" if polarity[t] == "pro" else "pro")
                if (pol == "opp") == want_opp:
                    edges.append((etype, u, ("node", t)))
                    polarity[u] = pol
                    placed = True
                    break
        if not placed:  # force a direct move on the major claim
            etype = "reb" if want_opp else "sup"
            edges.append((etype, u, ("node", 0)))
            polarity[u] = "opp" if want_opp else "pro"
        roles.append(polarity[u])
    return roles, edges


def generate_corpus(out_dir, n_docs: int = 283, seed: int = 0,
                    doc_prefix: str = "micro_s"):
    """Write XML files plus the tagged file; returns (xml_dir, tagged_path)."""
    out_dir = Path(out_dir)
    xml_dir = out_dir / "xml"
    xml_dir.mkdir(parents=True, exist_ok=True)
    analyses: dict[str, AnalyzedAdu] = {}

    for d in range(n_docs):
        rng = np.random.default_rng([seed, d])
        doc_id = f"{doc_prefix}{d + 1:03d}"
        n_args = int(rng.integers(3, 6))
        roles, edges = _doc_structure(rng, n_args)

        adu_tokens = [
            _adu_tokens(rng, None if roles[u] == "mcl" else roles[u])
            for u in range(n_args + 1)
        ]
        # reading order: supportive body first, claim last (as in microtexts)
        lines = []
        topic = str(rng.choice(TOPICS))
        lines.append(f'<arggraph id="{doc_id}" topic_id="{escape(topic)}" stance="pro">')
        order = list(range(1, n_args + 1)) + [0]
        edu_of = {}
        for pos, u in enumerate(order, start=1):
            edu_of[u] = pos
            text = _detok(adu_tokens[u])
            lines.append(f'  <edu id="e{pos}"><![CDATA[{text}]]></edu>')
        for pos, u in enumerate(order, start=1):
            xml_type = "pro" if roles[u] in ("mcl", "pro") else "opp"
            lines.append(f'  <adu id="a{u + 1}" type="{xml_type}"/>')
        n_edge = 0
        for u in order:
            n_edge += 1
            lines.append(f'  <edge id="c{n_edge}" src="e{edu_of[u]}" trg="a{u + 1}" type="seg"/>')
        edge_xml_id = {}
        for j, (etype, src, target) in enumerate(edges):
            n_edge += 1
            edge_xml_id[j] = f"c{n_edge}"
            trg = f"a{target[1] + 1}" if target[0] == "node" else edge_xml_id[target[1]]
            lines.append(f'  <edge id="c{n_edge}" src="a{src + 1}" trg="{trg}" type="{etype}"/>')
        lines.append("</arggraph>")
        (xml_dir / f"{doc_id}.xml").write_text("\n".join(lines) + "\n", encoding="utf-8")

        for u in range(n_args + 1):
            uid = adu_uid(doc_id, f"a{u + 1}")
            analyses[uid] = AnalyzedAdu(uid, tuple(adu_tokens[u]))

    tagged_path = out_dir / "tagged.tsv"
    tagged_path.write_text(write_tagged(analyses), encoding="utf-8")
    return xml_dir, tagged_path
