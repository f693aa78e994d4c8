import math

import numpy as np
import pytest

from argmine.errors import DegenerateData
from argmine.gbt import grad_hess, logistic_loss, sigmoid, train_gbt
from argmine.models import encode_labels, model_from_json, model_to_json, predict
from tests.conftest import separable_data, xor_data


class TestGradients:
    def test_analytic_values_at_half(self):
        g, h = grad_hess([1.0], [0.0])
        assert g[0] == pytest.approx(-0.5)
        assert h[0] == pytest.approx(0.25)

    def test_matches_central_finite_differences(self):
        rng = np.random.default_rng(42)
        eps = 1e-3
        for _ in range(100):
            y = float(rng.integers(0, 2))
            s = float(rng.uniform(-4.0, 4.0))
            f = lambda t: logistic_loss([y], [t])
            g_fd = (f(s + eps) - f(s - eps)) / (2 * eps)
            h_fd = (f(s + eps) - 2 * f(s) + f(s - eps)) / eps ** 2
            g, h = grad_hess([y], [s])
            assert abs(g_fd - g[0]) < 1e-6 * max(abs(g[0]), 1e-3)
            assert abs(h_fd - h[0]) < 1e-6 * max(abs(h[0]), 1e-3)


def training_losses(X, y, **kw):
    """Loss after each boosting round, recomputed from the stored trees."""
    model = train_gbt(X, y, **kw)
    y01 = encode_labels(y).astype(float)
    from argmine.models import as_csr, raw_scores
    from dataclasses import replace

    losses = []
    for k in range(len(model.trees) + 1):
        partial = replace(model, trees=model.trees[:k])
        losses.append(logistic_loss(y01, raw_scores(partial, X)))
    return losses


class TestTraining:
    def test_xor_depth2(self):
        X, y = xor_data()
        model = train_gbt(X, y, n_trees=150, max_depth=2, learning_rate=0.1,
                          l2_lambda=1.0, seed=0)
        labels, _ = predict(model, X)
        assert np.mean(labels == np.array(y)) == 1.0

    def test_separable(self):
        X, y = separable_data()
        model = train_gbt(X, y, n_trees=50, max_depth=2, learning_rate=0.3,
                          l2_lambda=1.0, seed=0)
        labels, _ = predict(model, X)
        assert np.mean(labels == np.array(y)) == 1.0

    def test_single_class_rejected(self):
        with pytest.raises(DegenerateData):
            train_gbt(np.eye(4), ["opp"] * 4)

    @pytest.mark.parametrize("lr", [0.1, 0.3, 1.0])
    def test_loss_nonincreasing_per_round(self, lr):
        rng = np.random.default_rng(7)
        for _ in range(5):
            n, d = int(rng.integers(8, 30)), int(rng.integers(2, 6))
            X = rng.integers(0, 3, size=(n, d)).astype(float)
            y01 = rng.integers(0, 2, size=n)
            if y01.min() == y01.max():
                y01[0] = 1 - y01[0]
            y = ["opp" if v else "pro" for v in y01]
            losses = training_losses(X, y, n_trees=25, max_depth=3,
                                     learning_rate=lr, l2_lambda=1.0, seed=0)
            for before, after in zip(losses, losses[1:]):
                assert after <= before + 1e-12

    def test_infinite_lambda_gives_zero_leaves_and_base_class(self):
        X, y = xor_data()
        model = train_gbt(X, y, n_trees=10, max_depth=2, learning_rate=0.3,
                          l2_lambda=math.inf, seed=0)
        for tree in model.trees:
            assert np.all(tree.value == 0.0)
        labels, scores = predict(model, X)
        assert np.all(scores == sigmoid(model.base_score))
        assert set(labels) == {"pro"}  # p = 0.5 exactly, ties go to pro

    def test_large_lambda_shrinks_leaves(self):
        X, y = xor_data()
        model = train_gbt(X, y, n_trees=10, max_depth=2, learning_rate=0.3,
                          l2_lambda=1e12, seed=0)
        assert max(abs(v) for t in model.trees for v in t.value) < 1e-9

    def test_label_swap_symmetry(self):
        rng = np.random.default_rng(3)
        X = rng.integers(0, 3, size=(30, 5)).astype(float)
        y01 = rng.integers(0, 2, size=30)
        y01[0] = 1 - y01[0]
        y = ["opp" if v else "pro" for v in y01]
        swapped = ["pro" if v == "opp" else "opp" for v in y]
        a = train_gbt(X, y, n_trees=30, max_depth=3, seed=0)
        b = train_gbt(X, swapped, n_trees=30, max_depth=3, seed=0)
        acc_a = np.mean(predict(a, X)[0] == np.array(y))
        acc_b = np.mean(predict(b, X)[0] == np.array(swapped))
        assert acc_a == pytest.approx(acc_b, abs=1e-12)

    def test_deterministic(self):
        X, y = xor_data()
        a = train_gbt(X, y, n_trees=20, max_depth=2, seed=1)
        b = train_gbt(X, y, n_trees=20, max_depth=2, seed=1)
        _, sa = predict(a, X)
        _, sb = predict(b, X)
        assert np.array_equal(sa, sb)


class TestPredict:
    def test_probability_scores(self):
        X, y = separable_data()
        model = train_gbt(X, y, n_trees=20, max_depth=2, seed=0)
        _, scores = predict(model, X)
        assert np.all((0.0 < scores) & (scores < 1.0))

    def test_half_probability_ties_to_pro(self):
        X, y = xor_data()
        model = train_gbt(X, y, n_trees=1, max_depth=2, learning_rate=0.0, seed=0)
        labels, scores = predict(model, X)
        assert np.all(scores == 0.5) and set(labels) == {"pro"}

    def test_serialize_round_trip_bit_exact(self):
        rng = np.random.default_rng(11)
        X = rng.integers(0, 3, size=(25, 4)).astype(float)
        y01 = rng.integers(0, 2, size=25)
        y01[0] = 1 - y01[0]
        y = ["opp" if v else "pro" for v in y01]
        model = train_gbt(X, y, n_trees=15, max_depth=4, seed=2)
        again = model_from_json(model_to_json(model))
        probe = rng.integers(0, 3, size=(30, 4)).astype(float)
        _, s1 = predict(model, probe)
        _, s2 = predict(again, probe)
        assert np.array_equal(s1, s2)
