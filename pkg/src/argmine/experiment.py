"""The four train/test variants under outer 5-fold / inner 3-fold CV.

Folds always live on the test corpus; when training spans both corpora,
the outer training set is the whole other corpus plus the test corpus
minus the held-out fold.  Per (run, fold) the grid is searched on the
training rows only, the winner retrained on all of them, and the fold
predicted once; gold labels of a fold are only read after its
predictions exist.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .errors import ProtocolViolation
from .features import FEATURE_SETS, FeatureLayout, kept_ranges
from .folds import FoldPlan, adu_uid
from .gridsearch import grid_search
from .learners import DEFAULT_GRIDS, derive_seed, train_model
from .metrics import MetricsReport, PredictionRecord, compute_metrics
from .models import predict

VARIANTS = {
    "am-am": (("argmicro",), "argmicro"),
    "pe-pe": (("persessays",), "persessays"),
    "am+pe-am": (("argmicro", "persessays"), "argmicro"),
    "am+pe-pe": (("argmicro", "persessays"), "persessays"),
}


@dataclass(frozen=True)
class CorpusFeatures:
    """Labeled feature rows of one corpus, aligned with corpus-wide unit ids."""

    name: str
    uids: tuple[str, ...]
    X: sp.csr_matrix
    labels: object  # int-indexable sequence of "pro"/"opp"
    layout: FeatureLayout

    @classmethod
    def from_vectors(cls, name, vectors, layout: FeatureLayout):
        from .features import to_csr

        labeled = [v for v in vectors if v.label in ("pro", "opp")]
        return cls(
            name=name,
            uids=tuple(adu_uid(v.doc_id, v.adu_id) for v in labeled),
            X=to_csr(labeled, layout),
            labels=tuple(v.label for v in labeled),
            layout=layout,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    train_corpora: tuple[str, ...]
    test_corpus: str
    model: str
    feature_set: str = "all"
    seed: int = 0
    runs: int = 1
    k: int = 5
    inner_k: int = 3
    grid: tuple = ()  # empty: default grid for the model kind
    jobs: int = 1

    @property
    def variant(self) -> str:
        return "+".join(self.train_corpora) + "->" + self.test_corpus

    @property
    def tag(self) -> str:
        return f"{self.model}:{self.variant}:{self.feature_set}"


def masked_matrix(X: sp.csr_matrix, feature_set: str, layout: FeatureLayout) -> sp.csr_matrix:
    """Zero every slot outside the feature set's kept ranges (dimension unchanged)."""
    keep = np.zeros(layout.total_dim, dtype=bool)
    for a, b in kept_ranges(feature_set, layout):
        keep[a:b] = True
    out = X.copy()
    out.data = np.where(keep[out.indices], out.data, 0.0)
    out.eliminate_zeros()
    return out


def _fold_task(config, corpora, plan, run, fold):
    test_cf = corpora[config.test_corpus]
    pos = {uid: i for i, uid in enumerate(test_cf.uids)}
    test_positions = [pos[uid] for uid in plan.folds[fold]]
    held_out = set(test_positions)
    train_positions = [i for i in range(len(test_cf.uids)) if i not in held_out]

    X_parts = [test_cf.X[train_positions]]
    y_train = [test_cf.labels[i] for i in train_positions]
    for name in config.train_corpora:
        if name == config.test_corpus:
            continue
        other = corpora[name]
        X_parts.append(other.X)
        y_train.extend(other.labels[i] for i in range(len(other.uids)))
    X_train = sp.vstack(X_parts, format="csr")

    grid = tuple(config.grid) or DEFAULT_GRIDS[config.model]
    params = grid_search(X_train, y_train, grid, config.model,
                         inner_k=config.inner_k,
                         seed=derive_seed(config.seed, run, fold, 1))
    model = train_model(config.model, X_train, y_train, params,
                        derive_seed(config.seed, run, fold, 2))
    pred_labels, scores = predict(model, test_cf.X[test_positions])
    return test_positions, pred_labels, scores, params


def run_experiment(config: ExperimentConfig, corpora: dict, plan: FoldPlan,
                   on_fold_predicted=None):
    """Returns (MetricsReport, prediction records, chosen params per (run, fold)).

    Outputs are byte-stable for a given config regardless of ``jobs``;
    the on_fold_predicted hook is only supported single-process.
    """
    if config.test_corpus not in corpora:
        raise ProtocolViolation(f"unknown test corpus {config.test_corpus!r}")
    for name in config.train_corpora:
        if name not in corpora:
            raise ProtocolViolation(f"unknown train corpus {name!r}")
    test_cf = corpora[config.test_corpus]
    plan_uids = {uid for f in plan.folds for uid in f}
    if plan_uids != set(test_cf.uids):
        raise ProtocolViolation("fold plan does not cover the test corpus's labeled units")
    if plan.k != config.k:
        raise ProtocolViolation(f"fold plan has k={plan.k}, config expects k={config.k}")
    if on_fold_predicted is not None and config.jobs > 1:
        raise ValueError("fold callbacks require jobs=1")

    masked = {
        name: replace(cf, X=masked_matrix(cf.X, config.feature_set, cf.layout))
        for name, cf in corpora.items()
    }
    tasks = [(run, fold) for run in range(config.runs) for fold in range(plan.k)]

    results = {}
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futs = {
                (run, fold): pool.submit(_fold_task, config, masked, plan, run, fold)
                for run, fold in tasks
            }
            for key, fut in futs.items():
                results[key] = fut.result()
    else:
        for run, fold in tasks:
            results[(run, fold)] = _fold_task(config, masked, plan, run, fold)
            if on_fold_predicted is not None:
                on_fold_predicted(run, fold)

    records: list[PredictionRecord] = []
    chosen: dict[tuple[int, int], dict] = {}
    for run, fold in tasks:
        test_positions, pred_labels, scores, params = results[(run, fold)]
        chosen[(run, fold)] = params
        for i, p, s in zip(test_positions, pred_labels, scores):
            records.append(PredictionRecord(
                adu_id=test_cf.uids[i],
                gold=test_cf.labels[i],
                pred=str(p),
                score=float(s),
                model=config.tag,
                fold=fold,
                run=run,
            ))
    return compute_metrics(records), records, chosen


def run_ablation(config: ExperimentConfig, corpora: dict, plan: FoldPlan) -> dict:
    """The four feature-set columns, in fixed order, sharing one fold plan."""
    out = {}
    for fs in FEATURE_SETS:
        report, records, chosen = run_experiment(replace(config, feature_set=fs),
                                                 corpora, plan)
        out[fs] = (report, records, chosen)
    return out


def render_ablation(results: dict, variant: str) -> str:
    """Console table shaped like the feature-importance results table."""
    header = f"{'variant':<12}" + "".join(f"{fs:>24}" for fs in FEATURE_SETS)
    mean_row = f"{variant:<12}"
    for fs in FEATURE_SETS:
        report = results[fs][0]
        m, s = report.mean["macro_f1"]
        mean_row += f"{m:>16.4f}±{s:<7.4f}"
    return header + "\n" + mean_row + "\n"
