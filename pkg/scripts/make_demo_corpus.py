#!/usr/bin/env python3
"""Generate the synthetic demo corpus (arggraph XML + tagged file).

Example:
    python scripts/make_demo_corpus.py --out demo_corpus --docs 283 --seed 0
    argmine convert --argmicro demo_corpus/xml -o demo.jaas.json
    argmine featurize --jaas demo.jaas.json --tagged demo_corpus/tagged.tsv -o demo.features.jsonl
"""

import argparse

from argmine.simdata import generate_corpus


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--docs", type=int, default=283)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    xml_dir, tagged = generate_corpus(args.out, n_docs=args.docs, seed=args.seed)
    print(f"xml: {xml_dir}\ntagged: {tagged}")


if __name__ == "__main__":
    main()
