import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from termforge.model import SourceRegistryEntry, Vocabulary


def make_vocab(*sources: tuple[str, int]) -> Vocabulary:
    """Vocabulary with registered sources, e.g. make_vocab(("MSH", 1), ("HGNC", 2))."""
    vocab = Vocabulary()
    for abbr, rank in sources:
        vocab.registry.register(
            SourceRegistryEntry(abbr, "test", rank, {"PT": 1, "SYM": 1, "SY": 2})
        )
    return vocab


def add_concept(vocab: Vocabulary, *terms, source="MSH", code=None, tty="PT"):
    """Create a concept whose atoms are the given term strings."""
    concept = vocab.new_concept()
    for i, term in enumerate(terms):
        vocab.add_atom(
            concept.mcid,
            term,
            source,
            code or f"C-{concept.mcid}",
            tty if i == 0 else "SY",
        )
    return concept


@pytest.fixture
def vocab():
    return make_vocab(("MSH", 1), ("HGNC", 2), ("DRUGBANK", 3))
