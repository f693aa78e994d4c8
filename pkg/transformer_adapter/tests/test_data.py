import json

import numpy as np
import pytest

from transformer_adapter.data import (SchemaError, load_fold_plan,
                                      load_labeled_units, write_predictions)
from transformer_adapter.finetune import macro_f1, stratified_fold_indices


class TestLoaders:
    def test_labeled_units_in_reading_order(self, smoke_inputs):
        units = load_labeled_units(smoke_inputs["jaas"])
        assert len(units) == 50
        assert all(u.label in ("pro", "opp") for u in units)
        assert units[0].uid.startswith("smoke01:")

    def test_bad_corpus_rejected(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"nope": 1}', encoding="utf-8")
        with pytest.raises(SchemaError):
            load_labeled_units(bad)

    def test_fold_plan(self, smoke_inputs):
        plan = load_fold_plan(smoke_inputs["plan"])
        assert plan.k == 5
        assert sum(len(f) for f in plan.folds) == 50

    def test_bad_plan_rejected(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"k": "three"}', encoding="utf-8")
        with pytest.raises(SchemaError):
            load_fold_plan(bad)


class TestWriter:
    def test_exact_field_set(self, tmp_path):
        path = tmp_path / "p.jsonl"
        write_predictions(path, [{
            "adu_id": "d:a", "gold": "pro", "pred": "opp", "score": 0.7,
            "model": "m", "fold": 1, "run": 0, "extra": "dropped",
        }])
        row = json.loads(path.read_text(encoding="utf-8"))
        assert set(row) == {"adu_id", "gold", "pred", "score", "model", "fold", "run"}


class TestProtocolHelpers:
    def test_macro_f1_perfect(self):
        assert macro_f1([0, 1, 0], [0, 1, 0]) == 1.0

    def test_stratified_folds_balanced(self):
        y = np.array([0] * 32 + [1] * 8)
        folds = stratified_fold_indices(y, 3, seed=4)
        flat = np.sort(np.concatenate(folds))
        assert flat.tolist() == list(range(40))
        rate = 8 / 40
        for f in folds:
            assert abs(int((y[f] == 1).sum()) - rate * len(f)) <= 1
