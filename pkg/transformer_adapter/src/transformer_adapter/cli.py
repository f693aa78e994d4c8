"""Command-line entry point: fine-tune over a shared fold plan and emit predictions."""

from __future__ import annotations

import argparse
import sys

from .data import SchemaError
from .finetune import DEFAULT_CHECKPOINT, FinetuneConfig, finetune_and_predict


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transformer-adapter",
        description="Fine-tune an encoder for pro/opp unit classification "
                    "over a shared fold plan; writes prediction files in the "
                    "toolkit's JSON-lines schema.")
    parser.add_argument("--jaas", required=True, help="corpus JSON file")
    parser.add_argument("--folds", required=True, help="fold plan JSON file")
    parser.add_argument("--checkpoint", default=DEFAULT_CHECKPOINT,
                        help="pretrained model name or local path")
    parser.add_argument("--epochs", default="3,5,7",
                        help="comma-separated epoch grid")
    parser.add_argument("--learning-rates", default="1e-3,1e-4,5e-5,1e-5,1e-6,1e-7",
                        help="comma-separated learning-rate grid")
    parser.add_argument("--batch-sizes", default="4,8,16,32",
                        help="comma-separated batch-size grid")
    parser.add_argument("--runs", type=int, default=5)
    parser.add_argument("--max-length", type=int, default=128)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("-o", "--output", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = FinetuneConfig(
        checkpoint=args.checkpoint,
        epochs_grid=tuple(int(x) for x in args.epochs.split(",")),
        lr_grid=tuple(float(x) for x in args.learning_rates.split(",")),
        batch_grid=tuple(int(x) for x in args.batch_sizes.split(",")),
        runs=args.runs,
        max_length=args.max_length,
        seed=args.seed,
    )
    try:
        summary = finetune_and_predict(args.jaas, args.folds, args.output, config)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # model download/initialization failures
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(f"{len(summary['files'])} prediction file(s) -> {args.output}")
    mean = summary["macro_f1_by_run_then_mean"]["mean"]
    print(f"macro-F1 (mean over runs of fold means): {mean:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
