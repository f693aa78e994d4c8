import json
from pathlib import Path

import pytest
import torch

OPP_WORD = "однако"
PRO_WORD = "поэтому"
FILLERS = ("школа", "мусор", "город", "человек", "работа", "вопрос")


def make_corpus(n_labeled=50, opp_every=4):
    """12 small documents, 50 labeled units, ~1/4 opp, marker-word signal."""
    docs = []
    made = 0
    doc_idx = 0
    while made < n_labeled:
        doc_idx += 1
        doc_id = f"smoke{doc_idx:02d}"
        take = min(5 if doc_idx % 2 else 4, n_labeled - made)
        nodes = [{
            "adu_id": "a0", "role": "mcl",
            "text": "тема важная .", "char_span": None, "order_index": 0,
        }]
        edges = []
        for i in range(1, take + 1):
            made += 1
            role = "opp" if made % opp_every == 0 else "pro"
            lead = OPP_WORD if role == "opp" else PRO_WORD
            fill = " ".join(FILLERS[(made + j) % len(FILLERS)] for j in range(3))
            nodes.append({
                "adu_id": f"a{i}", "role": role,
                "text": f"{lead} {fill} .", "char_span": None, "order_index": i,
            })
            edges.append({
                "edge_id": f"c{i}", "source": f"a{i}", "target": "a0",
                "target_kind": "node",
                "edge_type": "reb" if role == "opp" else "sup",
            })
        docs.append({
            "doc_id": doc_id, "source_corpus": "argmicro",
            "topic_text": "тема", "nodes": nodes, "edges": edges,
        })
    return {"corpus": "smoke", "documents": docs}


def stratified_plan(corpus, k=5, seed=0):
    pro, opp = [], []
    for doc in corpus["documents"]:
        for node in doc["nodes"]:
            if node["role"] in ("pro", "opp"):
                (pro if node["role"] == "pro" else opp).append(
                    f"{doc['doc_id']}:{node['adu_id']}")
    folds = [[] for _ in range(k)]
    for i, uid in enumerate(opp):
        folds[i % k].append(uid)
    for i, uid in enumerate(pro):
        folds[(k - 1 - i) % k].append(uid)
    return {"k": k, "seed": seed, "unit": "adu", "folds": folds}


def tagged_file_text(corpus):
    blocks = []
    for doc in corpus["documents"]:
        for node in doc["nodes"]:
            lines = [f"# adu_id = {doc['doc_id']}:{node['adu_id']}"]
            for word in node["text"].split():
                if word == ".":
                    lines.append(".\t.\tPUNCT")
                else:
                    lines.append(f"{word}\t{word}\tNOUN")
            blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


@pytest.fixture(scope="session")
def smoke_inputs(tmp_path_factory):
    root = tmp_path_factory.mktemp("smoke_inputs")
    corpus = make_corpus()
    jaas = root / "smoke.jaas.json"
    jaas.write_text(json.dumps(corpus, ensure_ascii=False, indent=2) + "\n",
                    encoding="utf-8")
    plan = root / "plan.json"
    plan.write_text(json.dumps(stratified_plan(corpus), ensure_ascii=False) + "\n",
                    encoding="utf-8")
    tagged = root / "smoke.tagged.tsv"
    tagged.write_text(tagged_file_text(corpus), encoding="utf-8")
    return {"root": root, "jaas": jaas, "plan": plan, "tagged": tagged,
            "corpus": corpus}


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory, smoke_inputs):
    """A trainable sequence-classification checkpoint built offline."""
    from tokenizers import Tokenizer, models, normalizers, pre_tokenizers, processors
    from transformers import (BertConfig, BertForSequenceClassification,
                              PreTrainedTokenizerFast)

    words = sorted({
        w for doc in smoke_inputs["corpus"]["documents"]
        for node in doc["nodes"] for w in node["text"].split() if w != "."
    })
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "."] + words
    root = tmp_path_factory.mktemp("checkpoint")
    vocab_file = root / "vocab.txt"
    vocab_file.write_text("\n".join(vocab) + "\n", encoding="utf-8")

    tok = Tokenizer(models.WordPiece.from_file(str(vocab_file), unk_token="[UNK]"))
    tok.normalizer = normalizers.BertNormalizer(lowercase=True)
    tok.pre_tokenizer = pre_tokenizers.BertPreTokenizer()
    tok.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]", pair="[CLS] $A [SEP] $B:1 [SEP]:1",
        special_tokens=[("[CLS]", vocab.index("[CLS]")),
                        ("[SEP]", vocab.index("[SEP]"))])
    fast = PreTrainedTokenizerFast(
        tokenizer_object=tok, unk_token="[UNK]", pad_token="[PAD]",
        cls_token="[CLS]", sep_token="[SEP]", mask_token="[MASK]")

    torch.manual_seed(0)
    model = BertForSequenceClassification(BertConfig(
        vocab_size=len(vocab), hidden_size=32, num_hidden_layers=2,
        num_attention_heads=2, intermediate_size=64,
        max_position_embeddings=160, num_labels=2))
    ckpt = root / "ckpt"
    model.save_pretrained(ckpt)
    fast.save_pretrained(ckpt)
    return ckpt
