import numpy as np
import pytest
from hypothesis import given, strategies as st

from argmine.errors import TooFewInstances
from argmine.folds import (FoldPlan, load_plan, make_folds, plan_to_json,
                           save_plan, stratified_fold_indices)
from argmine.jaas import JaasDocument, JaasNode


def corpus_with(n_pro, n_opp, per_doc=5):
    docs = []
    labels = (["pro"] * n_pro) + (["opp"] * n_opp)
    i = 0
    d = 0
    while i < len(labels):
        chunk = labels[i:i + per_doc]
        nodes = [JaasNode("m", "mcl", "тема", 0)]
        nodes += [JaasNode(f"a{j}", lab, "текст", j + 1) for j, lab in enumerate(chunk)]
        docs.append(JaasDocument(f"d{d}", "argmicro", "t", tuple(nodes), ()))
        i += per_doc
        d += 1
    return docs


class TestStratifiedIndices:
    def test_example_eight_two(self):
        y = np.array([0] * 8 + [1] * 2)
        folds = stratified_fold_indices(y, 5, seed=7)
        assert sorted(len(f) for f in folds) == [2, 2, 2, 2, 2]
        assert sum(1 for f in folds if (y[f] == 1).any()) == 2

    def test_disjoint_and_exhaustive(self):
        y = np.array([0] * 13 + [1] * 7)
        folds = stratified_fold_indices(y, 4, seed=1)
        flat = np.concatenate(folds)
        assert sorted(flat.tolist()) == list(range(20))

    @given(st.integers(5, 60), st.integers(5, 25), st.integers(2, 6),
           st.integers(0, 2 ** 31))
    def test_stratification_within_one(self, n_pro, n_opp, k, seed):
        y = np.array([0] * n_pro + [1] * n_opp)
        folds = stratified_fold_indices(y, k, seed)
        rate = n_opp / (n_pro + n_opp)
        sizes = [len(f) for f in folds]
        assert max(sizes) - min(sizes) <= 1
        for f in folds:
            minority = int((y[f] == 1).sum())
            assert abs(minority - rate * len(f)) <= 1


class TestMakeFolds:
    def test_too_few_instances(self):
        with pytest.raises(TooFewInstances):
            make_folds(corpus_with(10, 3), k=5, seed=0)

    def test_plan_covers_all_labeled(self):
        docs = corpus_with(20, 10)
        plan = make_folds(docs, k=5, seed=3)
        uids = {u for f in plan.folds for u in f}
        assert len(uids) == 30
        assert all(":" in u for u in uids)

    def test_same_seed_byte_identical(self, tmp_path):
        docs = corpus_with(20, 10)
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        save_plan(p1, make_folds(docs, k=5, seed=9))
        save_plan(p2, make_folds(docs, k=5, seed=9))
        assert p1.read_bytes() == p2.read_bytes()

    def test_different_seed_differs(self):
        docs = corpus_with(30, 15)
        assert make_folds(docs, k=5, seed=1) != make_folds(docs, k=5, seed=2)

    def test_round_trip(self, tmp_path):
        docs = corpus_with(20, 10)
        plan = make_folds(docs, k=5, seed=4)
        path = tmp_path / "plan.json"
        save_plan(path, plan)
        assert load_plan(path) == plan

    def test_document_unit_keeps_docs_whole(self):
        docs = corpus_with(40, 20, per_doc=4)
        plan = make_folds(docs, k=5, seed=2, unit="document")
        fold_of = {}
        for i, fold in enumerate(plan.folds):
            for uid in fold:
                fold_of[uid.split(":")[0]] = fold_of.get(uid.split(":")[0], set()) | {i}
        assert all(len(s) == 1 for s in fold_of.values())
        uids = {u for f in plan.folds for u in f}
        assert len(uids) == 60

    def test_fold_of_mapping(self):
        plan = FoldPlan(2, 0, "adu", (("d:a", "d:b"), ("d:c",)))
        assert plan.fold_of() == {"d:a": 0, "d:b": 0, "d:c": 1}
