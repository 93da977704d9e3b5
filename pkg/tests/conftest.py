import pathlib

import pytest

from opensos import parse

ROOT = pathlib.Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


@pytest.fixture(scope="session")
def corpus_docs():
    """Parsed corpus documents keyed by file stem."""
    return {p.stem: parse(p.read_text()) for p in sorted(CORPUS.glob("*.sos"))}


@pytest.fixture(scope="session")
def corpus_tsss(corpus_docs):
    """Every TSS declared anywhere in the corpus, keyed by name."""
    out = {}
    for doc in corpus_docs.values():
        for t in doc.tss_decls:
            out[t.name] = t
    return out
