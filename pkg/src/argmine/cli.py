"""Command-line front end: convert / stats / featurize / folds / train / eval / ablate / ensemble.

Exit codes: 0 success, 2 parse/format/validation problems, 3 protocol
violations (stale fold plans, misaligned prediction sets).  Every
subcommand is deterministic given identical inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import argmicro, persessays
from .errors import (ConversionError, FormatError, MisalignedPredictionSets,
                     ParseError, ProtocolViolation, TooFewInstances)
from .example_edges import (apply_review, load_templates, read_review_file,
                            write_review_file)
from .experiment import (CorpusFeatures, ExperimentConfig, VARIANTS,
                         render_ablation, run_ablation, run_experiment)
from .features import (FEATURE_SETS, FeatureLayout, extract_corpus,
                       load_matrix, write_matrix)
from .folds import load_plan, make_folds, save_plan
from .jaas import corpus_stats, load_corpus, polarity_deltas, save_corpus, validate_graph
from .learners import train_model
from .metrics import (compute_metrics, load_predictions, render_report,
                      report_to_json, write_predictions)
from .models import save_model
from .ensemble import or_rule_ensemble
from .textprep import load_lexicon, load_stopwords, load_tagged


def _data_path(name: str) -> Path:
    return Path(str(resources.files("argmine").joinpath("data", name)))


def _read_config(path) -> dict:
    """key = value lines; '#' comments; values are plain strings."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError("expected 'key = value'", line=lineno)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _merge_config(args: argparse.Namespace, defaults: dict) -> None:
    """Resolve option values as: explicit flag > config file > default.

    Experiment options are declared with None defaults so an explicitly
    passed flag is distinguishable from an absent one.
    """
    cfg = _read_config(args.config) if getattr(args, "config", None) else {}
    for key, raw in cfg.items():
        if key not in defaults:
            raise FormatError(f"unknown config key {key!r}")
        if getattr(args, key) is not None:
            continue  # explicit flag wins
        if isinstance(defaults[key], int):
            setattr(args, key, int(raw))
        elif key == "features":
            setattr(args, key, raw.split())
        else:
            setattr(args, key, raw)
    for key, value in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


# ---------------------------------------------------------------------------
# subcommands

def cmd_convert(args) -> int:
    templates = load_templates(args.templates or _data_path("exa_templates.txt"))
    if args.argmicro:
        if not Path(args.argmicro).is_dir():
            print(f"error: {args.argmicro}: not a directory", file=sys.stderr)
            return 2
        docs = argmicro.convert_directory(args.argmicro)
        corpus_name = "argmicro"
        candidates = []
    else:
        if not Path(args.persessays).is_dir():
            print(f"error: {args.persessays}: not a directory", file=sys.stderr)
            return 2
        docs, candidates = persessays.convert_directory(args.persessays, templates)
        corpus_name = "persessays"

    if not args.skip_exa:
        if args.write_review and candidates:
            write_review_file(args.write_review, candidates)
            print(f"{len(candidates)} exa candidate(s) written to {args.write_review}")
        if args.review:
            docs = apply_review(docs, read_review_file(args.review))

    bad = 0
    for doc in docs:
        report = validate_graph(doc)
        for v in report.violations:
            bad += 1
            print(f"error: {doc.doc_id}: {v.rule}: {v.subject}: {v.message}", file=sys.stderr)
    if bad:
        return 2
    save_corpus(args.output, corpus_name, docs)
    print(f"{len(docs)} document(s) -> {args.output}")
    return 0


def _stats_row(name, stats) -> str:
    cells = [f"{name:<12}", f"{stats.texts:>6,}"]
    for role in ("pro", "opp", "mcl", "neut"):
        count, pct = stats.adus_by_role[role]
        cells.append(f"{count:>8,} ({pct:.1f}%)")
    cells.append(f"{stats.adus_total:>8,} (100%)")
    return "".join(cells)


def cmd_stats(args) -> int:
    header = (f"{'corpus':<12}{'texts':>6}"
              + "".join(f"{r:>17}" for r in ("pro", "opp", "mcl", "neut"))
              + f"{'all':>16}")
    print(header)
    all_docs = []
    for path in args.files:
        name, docs = load_corpus(path)
        all_docs.extend(docs)
        stats = corpus_stats(docs)
        print(_stats_row(name, stats))
        edge_row = "  ".join(f"{t} {c:,}" for t, c in stats.edges_by_type.items() if c)
        print(f"{'':<12}edges: {edge_row or 'none'}")
        deltas = sum(len(polarity_deltas(d)) for d in docs)
        print(f"{'':<12}polarity-propagation deltas vs stored roles: {deltas:,}")
    if len(args.files) > 1:
        print(_stats_row("combined", corpus_stats(all_docs)))
    return 0


def cmd_featurize(args) -> int:
    _, docs = load_corpus(args.jaas)
    stopwords = load_stopwords(args.stopwords or _data_path("stopwords.txt"))
    lexicon = load_lexicon(args.lexicon or _data_path("marker_lexicon.tsv"))
    analyses = load_tagged(Path(args.tagged).read_bytes(), stopwords)
    layout = FeatureLayout(lexical_dim=len(lexicon))
    vectors = extract_corpus(docs, analyses, lexicon, layout)
    write_matrix(args.output, vectors)
    labeled = sum(1 for v in vectors if v.label is not None)
    print(f"{len(vectors)} vector(s) ({labeled} labeled, dim {layout.total_dim}) -> {args.output}")
    return 0


def cmd_folds(args) -> int:
    _, docs = load_corpus(args.jaas)
    plan = make_folds(docs, k=args.k, seed=args.seed, unit=args.unit)
    save_plan(args.output, plan)
    print(f"{plan.k} fold(s) over {sum(len(f) for f in plan.folds)} unit(s) -> {args.output}")
    return 0


def cmd_train(args) -> int:
    vectors = [v for v in load_matrix(args.features) if v.label is not None]
    layout = FeatureLayout(lexical_dim=args.lexical_dim)
    cf = CorpusFeatures.from_vectors("train", vectors, layout)
    params = json.loads(args.params) if args.params else {}
    model = train_model(args.model, cf.X, list(cf.labels), params, args.seed)
    save_model(args.output, model)
    print(f"{args.model} model on {len(cf.uids)} unit(s) -> {args.output}")
    return 0


def _load_corpora(feature_args, lexical_dim) -> dict:
    layout = FeatureLayout(lexical_dim=lexical_dim)
    corpora = {}
    for item in feature_args:
        name, sep, path = item.partition("=")
        if not sep:
            raise FormatError(f"--features expects name=path, got {item!r}")
        corpora[name] = CorpusFeatures.from_vectors(name, load_matrix(path), layout)
    return corpora


def _experiment_config(args) -> ExperimentConfig:
    if args.variant:
        if args.variant not in VARIANTS:
            raise FormatError(f"unknown variant {args.variant!r} "
                              f"(choose from {', '.join(VARIANTS)})")
        train_corpora, test_corpus = VARIANTS[args.variant]
    else:
        if not (args.train and args.test):
            raise FormatError("give either --variant or both --train and --test")
        train_corpora, test_corpus = tuple(args.train.split(",")), args.test
    grid = tuple(json.loads(args.grid)) if args.grid else ()
    return ExperimentConfig(
        train_corpora=train_corpora,
        test_corpus=test_corpus,
        model=args.model,
        feature_set=args.feature_set,
        seed=args.seed,
        runs=args.runs,
        k=args.k,
        grid=grid,
        jobs=args.jobs,
    )


def _check_io(args) -> None:
    if not args.folds:
        raise FormatError("--folds is required (flag or config)")
    if not args.output:
        raise FormatError("--output is required (flag or config)")
    if not args.features:
        raise FormatError("at least one --features NAME=FILE is required")


def cmd_eval(args) -> int:
    if args.predictions:
        records = load_predictions(args.predictions)
        report = compute_metrics(records)
        if args.output:
            outdir = Path(args.output)
            outdir.mkdir(parents=True, exist_ok=True)
            (outdir / "metrics.json").write_text(report_to_json(report), encoding="utf-8")
        print(render_report(report, title=f"[{args.predictions}]"), end="")
        return 0
    _check_io(args)
    config = _experiment_config(args)
    corpora = _load_corpora(args.features, args.lexical_dim)
    plan = load_plan(args.folds)
    report, records, chosen = run_experiment(config, corpora, plan)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    write_predictions(outdir / "predictions.jsonl", records)
    (outdir / "metrics.json").write_text(report_to_json(report), encoding="utf-8")
    (outdir / "chosen_params.json").write_text(
        json.dumps({f"run{r}/fold{f}": p for (r, f), p in sorted(chosen.items())},
                   ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    print(render_report(report, title=f"[{config.tag}]"), end="")
    return 0


def cmd_ablate(args) -> int:
    _check_io(args)
    config = _experiment_config(args)
    corpora = _load_corpora(args.features, args.lexical_dim)
    plan = load_plan(args.folds)
    results = run_ablation(config, corpora, plan)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    for fs in FEATURE_SETS:
        report, records, _ = results[fs]
        write_predictions(outdir / f"predictions.{fs}.jsonl", records)
        (outdir / f"metrics.{fs}.json").write_text(report_to_json(report), encoding="utf-8")
    table = render_ablation(results, config.variant)
    (outdir / "ablation.txt").write_text(table, encoding="utf-8")
    print(table, end="")
    return 0


def cmd_ensemble(args) -> int:
    a = load_predictions(args.preds_a)
    b = load_predictions(args.preds_b)
    merged = or_rule_ensemble(a, b, minority=args.minority)
    write_predictions(args.output, merged)
    report = compute_metrics(merged)
    print(render_report(report, title=f"[ensemble of {args.preds_a} + {args.preds_b}]"), end="")
    print(f"macro-F1 {report.pooled.macro_f1:.4f}")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="argmine",
                                     description="Argument-unit corpus and classification toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert a source corpus to the joint scheme JSON")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--argmicro", metavar="DIR", help="directory of arggraph .xml files")
    src.add_argument("--persessays", metavar="DIR", help="directory of brat .txt/.ann pairs")
    p.add_argument("--templates", metavar="FILE", help="exa template phrases (default: bundled)")
    p.add_argument("--review", metavar="FILE", help="reviewed exa decisions to apply")
    p.add_argument("--write-review", metavar="FILE", help="write stage-1 exa candidates here")
    p.add_argument("--skip-exa", action="store_true", help="skip exa detection entirely")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("stats", help="corpus census (texts, roles, edges)")
    p.add_argument("files", nargs="+", metavar="JAAS_FILE")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("featurize", help="extract context feature vectors")
    p.add_argument("--jaas", required=True)
    p.add_argument("--tagged", required=True, help="tagged-token file")
    p.add_argument("--lexicon", help="marker lexicon TSV (default: bundled)")
    p.add_argument("--stopwords", help="stop-word list (default: bundled)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("folds", help="build a stratified fold plan")
    p.add_argument("--jaas", required=True)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unit", choices=("adu", "document"), default="adu")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_folds)

    p = sub.add_parser("train", help="train one model on every labeled unit of a matrix")
    p.add_argument("--features", required=True)
    p.add_argument("--model", choices=("svm", "bagging", "gbt"), required=True)
    p.add_argument("--params", help="hyperparameters as a JSON object")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lexical-dim", type=int, default=255)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_train)

    for name, help_text in (("eval", "cross-validated experiment"),
                            ("ablate", "the four feature-set ablation columns")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key = value config file (flags override)")
        p.add_argument("--features", action="append", metavar="NAME=FILE",
                       help="feature matrix per corpus (repeatable)")
        if name == "eval":
            p.add_argument("--predictions", metavar="FILE",
                           help="score an existing prediction file instead of training")
        p.add_argument("--variant", help="am-am | pe-pe | am+pe-am | am+pe-pe")
        p.add_argument("--train", help="comma-separated training corpus names")
        p.add_argument("--test", help="test corpus name")
        p.add_argument("--folds", help="fold plan JSON")
        p.add_argument("--model", choices=("svm", "bagging", "gbt"))
        p.add_argument("--feature-set", choices=FEATURE_SETS)
        p.add_argument("--grid", help="hyperparameter grid as a JSON array of objects")
        p.add_argument("--seed", type=int)
        p.add_argument("--runs", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--jobs", type=int)
        p.add_argument("--lexical-dim", type=int)
        p.add_argument("-o", "--output", help="output directory")
        p.set_defaults(func=cmd_eval if name == "eval" else cmd_ablate)

    p = sub.add_parser("ensemble", help="minority-OR merge of two prediction files")
    p.add_argument("preds_a")
    p.add_argument("preds_b")
    p.add_argument("--minority", default="opp")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_ensemble)

    return parser


_DEFAULTS = {
    "model": "gbt", "feature_set": "all", "seed": 0, "runs": 1, "k": 5,
    "jobs": 1, "lexical_dim": 255, "variant": None, "train": None,
    "test": None, "grid": None, "folds": None, "features": [], "output": None,
    "predictions": None,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "config"):
            _merge_config(args, _DEFAULTS)
        return args.func(args)
    except (ParseError, ConversionError, FormatError, TooFewInstances,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MisalignedPredictionSets, ProtocolViolation) as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
