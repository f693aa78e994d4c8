import numpy as np
import pytest
from hypothesis import settings

from argmine.argmicro import convert_directory
from argmine.cli import _data_path
from argmine.experiment import CorpusFeatures
from argmine.features import FeatureLayout, extract_corpus
from argmine.simdata import generate_corpus
from argmine.textprep import load_lexicon, load_stopwords, load_tagged

settings.register_profile("default", deadline=None)
settings.load_profile("default")

ARGMICRO_XML = """<?xml version='1.0' encoding='UTF-8'?>
<arggraph id="micro_f001" topic_id="waste_separation" stance="pro">
  <edu id="e1"><![CDATA[Да, сортировать мусор неудобно и хлопотно.]]></edu>
  <edu id="e2"><![CDATA[Три разных пакета воняют на кухне.]]></edu>
  <edu id="e3"><![CDATA[Но всё же страна производит слишком много мусора,]]></edu>
  <edu id="e4"><![CDATA[и теряются ресурсы, когда сжигают то, что можно переработать.]]></edu>
  <edu id="e5"><![CDATA[Нам стоит разделять отходы!]]></edu>
  <adu id="a1" type="opp"/>
  <adu id="a2" type="opp"/>
  <adu id="a3" type="pro"/>
  <adu id="a4" type="pro"/>
  <adu id="a5" type="pro"/>
  <edge id="c6" src="e1" trg="a1" type="seg"/>
  <edge id="c7" src="e2" trg="a2" type="seg"/>
  <edge id="c8" src="e3" trg="a3" type="seg"/>
  <edge id="c9" src="e4" trg="a4" type="seg"/>
  <edge id="c10" src="e5" trg="a5" type="seg"/>
  <edge id="c1" src="a1" trg="a5" type="reb"/>
  <edge id="c2" src="a2" trg="a1" type="sup"/>
  <edge id="c3" src="a3" trg="c1" type="und"/>
  <edge id="c4" src="a4" trg="c3" type="add"/>
</arggraph>
"""

PERS_TXT = """Школьная форма нужна всем.
Я уверен, что школьная форма дисциплинирует. Например, дети меньше отвлекаются. Некоторые родители против.
Это просто мое наблюдение.
"""

PERS_ANN_ROWS = [
    ("T1", "MajorClaim", "Школьная форма нужна всем."),
    ("T2", "Claim", "школьная форма дисциплинирует"),
    ("T3", "Premise", "Например, дети меньше отвлекаются."),
    ("T4", "Claim", "Некоторые родители против"),
]


def build_pers_ann() -> str:
    lines = []
    for tid, kind, fragment in PERS_ANN_ROWS:
        start = PERS_TXT.index(fragment)
        lines.append(f"{tid}\t{kind} {start} {start + len(fragment)}\t{fragment}")
    lines.append("A1\tStance T2 For")
    lines.append("A2\tStance T4 Against")
    lines.append("R1\tsupports Arg1:T3 Arg2:T2")
    return "\n".join(lines) + "\n"


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon(_data_path("marker_lexicon.tsv"))


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords(_data_path("stopwords.txt"))


@pytest.fixture(scope="session")
def layout(lexicon):
    return FeatureLayout(lexical_dim=len(lexicon))


@pytest.fixture()
def argmicro_dir(tmp_path):
    d = tmp_path / "argmicro"
    d.mkdir()
    (d / "micro_f001.xml").write_text(ARGMICRO_XML, encoding="utf-8")
    return d


@pytest.fixture()
def pers_pair(tmp_path):
    d = tmp_path / "pers"
    d.mkdir()
    (d / "essay001.txt").write_text(PERS_TXT, encoding="utf-8")
    (d / "essay001.ann").write_text(build_pers_ann(), encoding="utf-8")
    return d


@pytest.fixture(scope="session")
def demo_corpus(tmp_path_factory, lexicon, stopwords):
    """Small synthetic corpus run through the real conversion/feature path."""
    root = tmp_path_factory.mktemp("demo")
    xml_dir, tagged = generate_corpus(root, n_docs=40, seed=11)
    docs = convert_directory(xml_dir)
    analyses = load_tagged(tagged.read_bytes(), stopwords)
    lay = FeatureLayout(lexical_dim=len(lexicon))
    vectors = extract_corpus(docs, analyses, lexicon, lay)
    cf = CorpusFeatures.from_vectors("argmicro", vectors, lay)
    return {"root": root, "xml_dir": xml_dir, "tagged": tagged, "docs": docs,
            "vectors": vectors, "features": cf, "layout": lay}


def separable_data():
    X = np.array([[2.0, 0.0], [3.0, 1.0], [-2.0, 0.0], [-3.0, -1.0]])
    y = ["opp", "opp", "pro", "pro"]
    return X, y


def xor_data():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
    y = ["pro", "pro", "opp", "opp"]
    return X, y
