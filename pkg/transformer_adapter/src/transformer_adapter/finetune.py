"""Fold-wise fine-tuning of a sequence-classification encoder.

Mirrors the toolkit's protocol: per outer fold of the shared plan, the
hyperparameter grid is searched with stratified inner 3-fold CV on the
training units only, the winner is fine-tuned on the whole training
split, and the held-out fold is predicted once with an opp-probability
score (threshold 0.5, ties to pro).  Each (run, fold) derives its own
seed, so repeated runs differ only through their seeds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from torch.utils.data import DataLoader, TensorDataset

from .data import FoldPlan, LabeledUnit, load_fold_plan, load_labeled_units, write_predictions

DEFAULT_CHECKPOINT = "DeepPavlov/rubert-base-cased"
LABEL_TO_ID = {"pro": 0, "opp": 1}


@dataclass(frozen=True)
class FinetuneConfig:
    checkpoint: str = DEFAULT_CHECKPOINT
    epochs_grid: tuple = (3, 5, 7)
    lr_grid: tuple = (1e-3, 1e-4, 5e-5, 1e-5, 1e-6, 1e-7)
    batch_grid: tuple = (4, 8, 16, 32)
    runs: int = 5
    inner_k: int = 3
    max_length: int = 128
    seed: int = 0

    def grid(self) -> list[dict]:
        return [
            {"epochs": e, "lr": lr, "batch_size": b}
            for e in self.epochs_grid for lr in self.lr_grid for b in self.batch_grid
        ]


def derive_seed(*parts) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def stratified_fold_indices(y01, k: int, seed: int) -> list[np.ndarray]:
    """Same balanced stratification as the toolkit's fold planner."""
    y01 = np.asarray(y01)
    n = len(y01)
    rng = np.random.default_rng([seed])
    sizes = [n // k + (1 if f < n % k else 0) for f in range(k)]
    class_order = sorted(np.unique(y01), key=lambda c: (int((y01 == c).sum()), c))
    quota = {c: [int((y01 == c).sum()) // k] * k for c in class_order}
    capacity = [sizes[f] - sum(quota[c][f] for c in class_order) for f in range(k)]
    for c in class_order:
        taken = set()
        for _ in range(int((y01 == c).sum()) % k):
            f = max((i for i in range(k) if i not in taken),
                    key=lambda i: (capacity[i], -i))
            quota[c][f] += 1
            capacity[f] -= 1
            taken.add(f)
    folds = [[] for _ in range(k)]
    for c in class_order:
        idx = np.flatnonzero(y01 == c)
        idx = idx[rng.permutation(len(idx))]
        pos = 0
        for f in range(k):
            folds[f].extend(int(i) for i in idx[pos:pos + quota[c][f]])
            pos += quota[c][f]
    return [np.asarray(sorted(f), dtype=np.int64) for f in folds]


def macro_f1(gold01, pred01) -> float:
    gold01 = np.asarray(gold01)
    pred01 = np.asarray(pred01)
    f1s = []
    for cls in (0, 1):
        tp = int(((pred01 == cls) & (gold01 == cls)).sum())
        fp = int(((pred01 == cls) & (gold01 != cls)).sum())
        fn = int(((pred01 != cls) & (gold01 == cls)).sum())
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        f1s.append(2 * p * r / (p + r) if p + r else 0.0)
    return sum(f1s) / 2.0


def _load_model_and_tokenizer(checkpoint: str):
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(checkpoint)
    model = AutoModelForSequenceClassification.from_pretrained(checkpoint, num_labels=2)
    return model, tokenizer


def _encode(tokenizer, texts, max_length):
    enc = tokenizer(list(texts), padding=True, truncation=True,
                    max_length=max_length, return_tensors="pt")
    return enc["input_ids"], enc["attention_mask"]


def _finetune(checkpoint, texts, y01, params, max_length, seed):
    torch.manual_seed(seed)
    model, tokenizer = _load_model_and_tokenizer(checkpoint)
    input_ids, attention_mask = _encode(tokenizer, texts, max_length)
    labels = torch.tensor(y01, dtype=torch.long)
    dataset = TensorDataset(input_ids, attention_mask, labels)
    generator = torch.Generator().manual_seed(seed)
    loader = DataLoader(dataset, batch_size=params["batch_size"], shuffle=True,
                        generator=generator)
    optimizer = torch.optim.AdamW(model.parameters(), lr=params["lr"])
    model.train()
    for _ in range(params["epochs"]):
        for ids, mask, y in loader:
            optimizer.zero_grad()
            out = model(input_ids=ids, attention_mask=mask, labels=y)
            out.loss.backward()
            optimizer.step()
    return model, tokenizer


def _predict_proba(model, tokenizer, texts, max_length, batch_size=32) -> np.ndarray:
    model.eval()
    probs = []
    with torch.no_grad():
        for start in range(0, len(texts), batch_size):
            ids, mask = _encode(tokenizer, texts[start:start + batch_size], max_length)
            logits = model(input_ids=ids, attention_mask=mask).logits
            probs.append(torch.softmax(logits, dim=-1)[:, LABEL_TO_ID["opp"]].numpy())
    return np.concatenate(probs) if probs else np.zeros(0)


def _search_grid(config, texts, y01, seed) -> dict:
    grid = config.grid()
    if len(grid) == 1:
        return grid[0]
    folds = stratified_fold_indices(y01, config.inner_k, seed)
    all_idx = np.arange(len(y01))
    best, best_score = None, -1.0
    for gi, params in enumerate(grid):
        scores = []
        for fi, test_idx in enumerate(folds):
            train_idx = np.setdiff1d(all_idx, test_idx)
            model, tokenizer = _finetune(
                config.checkpoint, [texts[i] for i in train_idx], y01[train_idx],
                params, config.max_length, derive_seed(seed, gi, fi))
            proba = _predict_proba(model, tokenizer, [texts[i] for i in test_idx],
                                   config.max_length)
            scores.append(macro_f1(y01[test_idx], (proba > 0.5).astype(int)))
        score = float(np.mean(scores))
        if score > best_score:
            best, best_score = params, score
    return best


def finetune_and_predict(jaas_path, plan_path, out_dir, config: FinetuneConfig) -> dict:
    """Write one prediction file per (run, fold) plus a summary.

    Returns the summary dict: chosen hyperparameters and macro-F1 per
    (run, fold), aggregated both ways (mean over folds within each run,
    and across-run means per fold), since either convention may be
    wanted downstream.
    """
    units = load_labeled_units(jaas_path)
    plan = load_fold_plan(plan_path)
    by_uid = {u.uid: u for u in units}
    plan_uids = {uid for fold in plan.folds for uid in fold}
    missing = plan_uids - set(by_uid)
    if missing:
        raise ValueError(f"fold plan references unknown units: {sorted(missing)[:3]} ...")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model_tag = f"transformer:{config.checkpoint}"

    summary = {"checkpoint": config.checkpoint, "runs": config.runs,
               "per_run_fold": {}, "chosen_params": {}}
    f1_matrix = np.zeros((config.runs, plan.k))
    files = []
    for run in range(config.runs):
        for fold_id, fold in enumerate(plan.folds):
            test_uids = list(fold)
            train_uids = [u.uid for u in units if u.uid not in set(test_uids)]
            train_texts = [by_uid[u].text for u in train_uids]
            y_train = np.array([LABEL_TO_ID[by_uid[u].label] for u in train_uids])

            params = _search_grid(config, train_texts, y_train,
                                  derive_seed(config.seed, run, fold_id, 1))
            model, tokenizer = _finetune(
                config.checkpoint, train_texts, y_train, params,
                config.max_length, derive_seed(config.seed, run, fold_id, 2))
            proba = _predict_proba(model, tokenizer,
                                   [by_uid[u].text for u in test_uids],
                                   config.max_length)
            rows = []
            gold01, pred01 = [], []
            for uid, p in zip(test_uids, proba):
                pred = "opp" if p > 0.5 else "pro"
                rows.append({"adu_id": uid, "gold": by_uid[uid].label,
                             "pred": pred, "score": float(p),
                             "model": model_tag, "fold": fold_id, "run": run})
                gold01.append(LABEL_TO_ID[by_uid[uid].label])
                pred01.append(LABEL_TO_ID[pred])
            path = out_dir / f"preds.run{run}.fold{fold_id}.jsonl"
            write_predictions(path, rows)
            files.append(str(path))
            f1 = macro_f1(gold01, pred01)
            f1_matrix[run, fold_id] = f1
            summary["per_run_fold"][f"run{run}/fold{fold_id}"] = f1
            summary["chosen_params"][f"run{run}/fold{fold_id}"] = params

    run_means = f1_matrix.mean(axis=1)
    fold_means = f1_matrix.mean(axis=0)
    summary["macro_f1_by_run_then_mean"] = {
        "per_run": run_means.tolist(),
        "mean": float(run_means.mean()),
        "std": float(run_means.std(ddof=1)) if config.runs > 1 else 0.0,
    }
    summary["macro_f1_by_fold_across_runs"] = {
        "per_fold": fold_means.tolist(),
        "mean": float(fold_means.mean()),
        "std": float(fold_means.std(ddof=1)) if plan.k > 1 else 0.0,
    }
    summary["files"] = files
    with open(out_dir / "summary.json", "w", encoding="utf-8", newline="\n") as f:
        json.dump(summary, f, ensure_ascii=False, indent=2)
        f.write("\n")
    return summary
