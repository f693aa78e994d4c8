import itertools
import random

import pytest
from hypothesis import given, strategies as st

from argmine.features import (FEATURE_SETS, FeatureLayout, FeatureVector,
                              apply_mask, context_vector, extract_corpus,
                              kept_ranges, lexical_features, load_matrix,
                              morpho_features, punct_features, unit_block,
                              write_matrix)
from argmine.jaas import JaasDocument, JaasEdge, JaasNode
from argmine.textprep import (AnalyzedAdu, MarkerLexicon, Token, VerbFeats)

LAYOUT = FeatureLayout(lexical_dim=255)


def word(form, pos="NOUN", lemma=None, feats=None):
    return Token(form, lemma or form, pos, verb_feats=feats)


def adu(tokens, adu_id="a1", text=""):
    return AnalyzedAdu(adu_id, tuple(tokens), text=text)


SMALL_LEX = MarkerLexicon(((("например",), "discourse_marker"),
                           (("нужно",), "modal"),
                           (("я", "думаю"), "discourse_marker")))


class TestLexical:
    def test_single_word_counts(self):
        a = adu([word("нужно", "OTHER"), word("учиться", "VERB"), word("например", "OTHER")])
        block = lexical_features(a, SMALL_LEX)
        assert block == {1: 1, 0: 1}

    def test_empty_adu(self):
        assert lexical_features(adu([]), SMALL_LEX) == {}

    def test_longest_match_suppresses_inner_words(self):
        # hand-enumerated oracle: "я думаю" consumes both tokens, so a
        # hypothetical single-word entry inside it must not fire
        lex = MarkerLexicon(((("я",), "modal"), (("я", "думаю"), "discourse_marker")))
        a = adu([word("я", "PRON"), word("думаю", "VERB", lemma="думаю")])
        assert lexical_features(a, lex) == {1: 1}
        # but a lone "я" elsewhere still counts
        a2 = adu([word("я", "PRON"), word("думаю", "VERB", lemma="думаю"), word("я", "PRON")])
        assert lexical_features(a2, lex) == {1: 1, 0: 1}

    def test_punctuation_skipped_in_lemma_sequence(self):
        a = adu([word("я", "PRON"), Token(",", ",", "OTHER", is_punct=True),
                 word("думаю", "VERB", lemma="думаю")])
        # the comma breaks adjacency: lemma sequence is built without punct
        assert lexical_features(a, SMALL_LEX) == {2: 1}


class TestPunct:
    def test_question_and_exclamation(self):
        assert punct_features(adu([], text="Зачем? Затем!"), LAYOUT) == {
            LAYOUT.punct_slot("?"): 1, LAYOUT.punct_slot("!"): 1}

    def test_comma_semicolon_colon(self):
        assert punct_features(adu([], text="a, b; c: d"), LAYOUT) == {
            LAYOUT.punct_slot(","): 1, LAYOUT.punct_slot(";"): 1,
            LAYOUT.punct_slot(":"): 1}

    def test_no_marks(self):
        assert punct_features(adu([], text="просто текст без знаков"), LAYOUT) == {}

    def test_falls_back_to_token_forms(self):
        a = adu([word("да"), Token("!", "!", "OTHER", is_punct=True)])
        assert punct_features(a, LAYOUT) == {LAYOUT.punct_slot("!"): 1}


class TestMorpho:
    def test_ngram_counts(self):
        a = adu([word("w1", "NOUN"), word("w2", "VERB"), word("w3", "ADJ"), word("w4", "NOUN")])
        block = morpho_features(a, LAYOUT)
        base = LAYOUT.morpho_base()
        bigrams = {s - base: c for s, c in block.items() if s - base < 25}
        assert bigrams == {
            LAYOUT.ngram_slot(("NOUN", "VERB")): 1,
            LAYOUT.ngram_slot(("VERB", "ADJ")): 1,
            LAYOUT.ngram_slot(("ADJ", "NOUN")): 1,
        }
        n3 = sum(c for s, c in block.items() if 25 <= s - base < 150)
        n4 = sum(c for s, c in block.items() if 150 <= s - base < 775)
        assert (n3, n4) == (2, 1)

    def test_single_verb_tense(self):
        a = adu([word("шёл", "VERB", feats=VerbFeats(tense="past"))])
        block = morpho_features(a, LAYOUT)
        assert block == {LAYOUT.verb_slot("tense", "past"): 1}

    def test_other_and_punct_dropped_before_ngrams(self):
        a = adu([word("w1", "NOUN"), word("и", "OTHER"),
                 Token(".", ".", "OTHER", is_punct=True), word("w2", "VERB")])
        block = morpho_features(a, LAYOUT)
        base = LAYOUT.morpho_base()
        assert block == {base + LAYOUT.ngram_slot(("NOUN", "VERB")): 1}

    def test_slot_arithmetic(self):
        assert 25 + 125 + 625 + 8 == 783 == LAYOUT.morpho_dim

    def test_ngram_slot_bijection(self):
        tags = ("NOUN", "PRON", "VERB", "ADJ", "ADV")
        seen = set()
        for n in (2, 3, 4):
            for combo in itertools.product(tags, repeat=n):
                slot = LAYOUT.ngram_slot(combo)
                assert 0 <= slot < 775
                seen.add(slot)
        assert len(seen) == 775


class TestContext:
    def test_dimensions(self):
        assert LAYOUT.block_dim == 1043
        assert LAYOUT.total_dim == 3129

    def test_single_adu_doc_uses_middle_block_only(self):
        cur = {0: 2, 1042: 1}
        vec = context_vector(None, cur, None, LAYOUT)
        assert vec == {1043: 2, 2085: 1}
        assert all(1043 <= s < 2086 for s in vec)

    def test_first_of_two(self):
        vec = context_vector(None, {0: 1}, {5: 2}, LAYOUT)
        assert vec == {1043: 1, 2 * 1043 + 5: 2}

    def test_neighbor_blocks_are_verbatim_copies(self):
        nodes = tuple(
            JaasNode(f"a{i}", "pro" if i else "mcl", f"текст {i}!", i)
            for i in range(3)
        )
        doc = JaasDocument("d", "argmicro", "t", nodes,
                          (JaasEdge("c1", "a1", "a0", "node", "sup"),
                           JaasEdge("c2", "a2", "a0", "node", "sup")))
        analyses = {
            f"d:a{i}": adu([word(w) for w in ("слово",) * (i + 1)], adu_id=f"a{i}")
            for i in range(3)
        }
        vecs = extract_corpus([doc], analyses, SMALL_LEX,
                              FeatureLayout(lexical_dim=len(SMALL_LEX)))
        lay = FeatureLayout(lexical_dim=len(SMALL_LEX))
        d = lay.block_dim
        blocks = []
        for v in vecs:
            blocks.append({s - d: c for s, c in v.slots.items() if d <= s < 2 * d})
        for i, v in enumerate(vecs):
            prev = {s: c for s, c in v.slots.items() if s < d}
            nxt = {s - 2 * d: c for s, c in v.slots.items() if s >= 2 * d}
            assert prev == (blocks[i - 1] if i > 0 else {})
            assert nxt == (blocks[i + 1] if i + 1 < len(vecs) else {})


class TestExtract:
    def make_docs(self, n_docs=3):
        docs, analyses = [], {}
        rng = random.Random(5)
        for d in range(n_docs):
            nodes = []
            for i in range(3):
                role = "mcl" if i == 0 else rng.choice(["pro", "opp"])
                nodes.append(JaasNode(f"a{i}", role, "текст, да!", i))
                analyses[f"d{d}:a{i}"] = adu(
                    [word("например", "OTHER"), word("школа", "NOUN")], adu_id=f"a{i}")
            docs.append(JaasDocument(f"d{d}", "argmicro", "t", tuple(nodes), ()))
        return docs, analyses

    def test_permutation_equivariance(self):
        docs, analyses = self.make_docs()
        lay = FeatureLayout(lexical_dim=len(SMALL_LEX))
        a = {v.adu_id + v.doc_id: v for v in extract_corpus(docs, analyses, SMALL_LEX, lay)}
        b = {v.adu_id + v.doc_id: v for v in
             extract_corpus(list(reversed(docs)), analyses, SMALL_LEX, lay)}
        assert a == b

    def test_counts_nonnegative_and_in_range(self):
        docs, analyses = self.make_docs()
        lay = FeatureLayout(lexical_dim=len(SMALL_LEX))
        for v in extract_corpus(docs, analyses, SMALL_LEX, lay):
            assert all(isinstance(c, int) and c > 0 for c in v.slots.values())
            assert all(0 <= s < lay.total_dim for s in v.slots)

    def test_labels_only_on_pro_opp(self):
        docs, analyses = self.make_docs()
        lay = FeatureLayout(lexical_dim=len(SMALL_LEX))
        for v in extract_corpus(docs, analyses, SMALL_LEX, lay):
            role = next(n.role for d in docs if d.doc_id == v.doc_id
                        for n in d.nodes if n.adu_id == v.adu_id)
            assert (v.label is None) == (role == "mcl")


class TestMasks:
    def test_without_markers_zeroes_exactly_marker_slots(self):
        dropped = set(range(LAYOUT.total_dim))
        for a, b in kept_ranges("all_without_markers", LAYOUT):
            dropped -= set(range(a, b))
        expected = set()
        for blk in range(3):
            expected |= set(range(blk * 1043, blk * 1043 + 255))
        assert dropped == expected

    def test_without_prev_zeroes_first_block(self):
        dropped = set(range(LAYOUT.total_dim))
        for a, b in kept_ranges("all_without_prev", LAYOUT):
            dropped -= set(range(a, b))
        assert dropped == set(range(0, 1043))

    def test_all_keeps_everything(self):
        assert kept_ranges("all", LAYOUT) == [(0, 3129)]

    def test_lexical_only_keeps_markers_in_all_blocks(self):
        kept = set()
        for a, b in kept_ranges("lexical_only", LAYOUT):
            kept |= set(range(a, b))
        assert kept == {b * 1043 + s for b in range(3) for s in range(255)}

    def test_apply_mask_on_vector(self):
        vec = FeatureVector("a", "d", "pro", {0: 1, 300: 2, 1043: 3, 2000: 4})
        masked = apply_mask(vec, "all_without_prev", LAYOUT)
        assert masked.slots == {1043: 3, 2000: 4}

    def test_mask_names_fixed_order(self):
        assert FEATURE_SETS == ("lexical_only", "all_without_markers",
                                "all_without_prev", "all")


class TestMatrixIO:
    def test_round_trip(self, tmp_path):
        vectors = [
            FeatureVector("a1", "d1", "pro", {3: 1, 1500: 2}),
            FeatureVector("a2", "d1", None, {}),
        ]
        path = tmp_path / "m.jsonl"
        write_matrix(path, vectors)
        assert load_matrix(path) == vectors

    def test_deterministic_bytes(self, tmp_path):
        vectors = [FeatureVector("a1", "d1", "opp", {9: 1, 2: 4})]
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_matrix(p1, vectors)
        write_matrix(p2, vectors)
        assert p1.read_bytes() == p2.read_bytes()


@given(st.lists(st.sampled_from(["NOUN", "PRON", "VERB", "ADJ", "ADV", "OTHER"]),
                max_size=12))
def test_block_dimension_property(tags):
    a = adu([word(f"w{i}", pos) for i, pos in enumerate(tags)], text="и, вот!")
    block = unit_block(a, SMALL_LEX, FeatureLayout(lexical_dim=len(SMALL_LEX)))
    lay = FeatureLayout(lexical_dim=len(SMALL_LEX))
    assert all(0 <= s < lay.block_dim for s in block)
    assert all(c > 0 for c in block.values())
