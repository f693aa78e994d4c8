#!/usr/bin/env python3
"""Tag a converted corpus with mystem into the four-column tagged format.

Requires the mystem binary (https://yandex.ru/dev/mystem) on PATH.  Any
other tagger works as long as it emits the same format: per unit a
``# adu_id = <doc_id>:<adu_id>`` header followed by
FORM<TAB>LEMMA<TAB>POS[<TAB>Tense=..|Mood=..|Person=..] lines.

Example:
    python scripts/tag_with_mystem.py corpus.jaas.json -o corpus.tagged.tsv
"""

import argparse
import json
import shutil
import subprocess
import sys

from argmine.jaas import load_corpus
from argmine.textprep import tokenize

# mystem coarse categories -> the five target tags (everything else OTHER)
POS_MAP = {"S": "NOUN", "SPRO": "PRON", "V": "VERB", "A": "ADJ", "ADV": "ADV"}
TENSE_MAP = {"прош": "past", "наст": "present", "непрош": "future"}
MOOD_MAP = {"изъяв": "indicative", "пов": "imperative"}
PERSON_MAP = {"1-л": "1", "2-л": "2", "3-л": "3"}


def mystem_analyze(text: str) -> dict:
    proc = subprocess.run(
        ["mystem", "-n", "-i", "--format", "json"],
        input=text.encode("utf-8"), capture_output=True, check=True,
    )
    out = {}
    for line in proc.stdout.decode("utf-8").splitlines():
        if not line.strip():
            continue
        entry = json.loads(line)
        analysis = entry.get("analysis") or []
        if analysis:
            out[entry["text"].strip().lower()] = analysis[0]
    return out


def gram_to_columns(gram: str):
    parts = gram.replace("=", ",").split(",")
    pos = POS_MAP.get(parts[0], "OTHER")
    feats = []
    if pos == "VERB":
        for p in parts:
            if p in TENSE_MAP:
                feats.append(f"Tense={TENSE_MAP[p]}")
            elif p in MOOD_MAP:
                feats.append(f"Mood={MOOD_MAP[p]}")
            elif p in PERSON_MAP:
                feats.append(f"Person={PERSON_MAP[p]}")
    return pos, "|".join(feats)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("jaas_file")
    parser.add_argument("-o", "--output", required=True)
    args = parser.parse_args()

    if shutil.which("mystem") is None:
        print("error: mystem binary not found on PATH", file=sys.stderr)
        return 1

    _, docs = load_corpus(args.jaas_file)
    with open(args.output, "w", encoding="utf-8", newline="\n") as f:
        for doc in docs:
            full_text = "\n".join(n.text for n in doc.nodes if n.text)
            lemmas = mystem_analyze(full_text)
            for node in doc.nodes:
                f.write(f"# adu_id = {doc.doc_id}:{node.adu_id}\n")
                for form, is_punct in tokenize(node.text):
                    if is_punct:
                        f.write(f"{form}\t{form}\tPUNCT\n")
                        continue
                    info = lemmas.get(form.lower())
                    if info is None:
                        f.write(f"{form}\t{form.lower()}\tOTHER\n")
                        continue
                    pos, feats = gram_to_columns(info.get("gr", ""))
                    lemma = info.get("lex", form.lower())
                    if feats:
                        f.write(f"{form}\t{lemma}\t{pos}\t{feats}\n")
                    else:
                        f.write(f"{form}\t{lemma}\t{pos}\n")
                f.write("\n")
    print(f"tagged -> {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
