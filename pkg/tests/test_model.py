import itertools

import pytest

from termforge.errors import UnknownSource
from termforge.model import SourceRegistryEntry, Vocabulary

from conftest import make_vocab


def test_precedence_rank_wins(vocab):
    concept = vocab.new_concept()
    a_low = vocab.add_atom(concept.mcid, "aspirin", "DRUGBANK", "DB001", "PT")
    a_high = vocab.add_atom(concept.mcid, "acetylsalicylic acid", "MSH", "D001", "PT")
    assert concept.preferred_maid == a_high.maid
    assert a_low is not None


def test_single_atom_is_preferred(vocab):
    concept = vocab.new_concept()
    atom = vocab.add_atom(concept.mcid, "BRCA1", "HGNC", "HGNC:1100", "SYM")
    assert concept.preferred_maid == atom.maid


def test_tty_rank_tie_break(vocab):
    # Same source: PT (rank 1) beats SY (rank 2) regardless of add order.
    concept = vocab.new_concept()
    sy = vocab.add_atom(concept.mcid, "heart attack", "MSH", "D002", "SY")
    pt = vocab.add_atom(concept.mcid, "myocardial infarction", "MSH", "D002", "PT")
    assert concept.preferred_maid == pt.maid
    assert sy is not None


def test_tie_break_shortest_then_lexicographic(vocab):
    concept = vocab.new_concept()
    vocab.add_atom(concept.mcid, "bbbb", "MSH", "D003", "SY")
    short = vocab.add_atom(concept.mcid, "zzz", "MSH", "D003", "SY")
    assert concept.preferred_maid == short.maid
    lex = vocab.add_atom(concept.mcid, "aaa", "MSH", "D003", "SY")
    assert concept.preferred_maid == lex.maid


def test_unknown_source_raises(vocab):
    concept = vocab.new_concept()
    with pytest.raises(UnknownSource):
        vocab.add_atom(concept.mcid, "x", "NOPE", "D1", "PT")


def test_unlisted_tty_defaults_to_low_rank(vocab):
    concept = vocab.new_concept()
    odd = vocab.add_atom(concept.mcid, "thing", "MSH", "D4", "WEIRD")
    sy = vocab.add_atom(concept.mcid, "other thing", "MSH", "D4", "SY")
    assert concept.preferred_maid == sy.maid
    assert odd is not None


def test_duplicate_atom_is_noop(vocab):
    concept = vocab.new_concept()
    vocab.add_atom(concept.mcid, "BRCA1", "HGNC", "HGNC:1100", "SYM")
    before = dict(concept.atoms)
    assert vocab.add_atom(concept.mcid, "BRCA1", "HGNC", "HGNC:1100", "SYM") is None
    assert concept.atoms == before
    assert vocab.atom_count == 1


def test_duplicate_detected_across_concepts(vocab):
    c1 = vocab.new_concept()
    vocab.add_atom(c1.mcid, "BRCA1", "HGNC", "HGNC:1100", "SYM")
    c2 = vocab.new_concept()
    assert vocab.add_atom(c2.mcid, "BRCA1", "HGNC", "HGNC:1100", "SYM") is None


def test_preferred_selection_order_independent():
    atoms = [
        ("glucose", "MSH", "D5", "PT"),
        ("dextrose", "MSH", "D5", "SY"),
        ("blood sugar", "DRUGBANK", "DB5", "PT"),
        ("grape sugar", "HGNC", "G5", "SY"),
    ]
    chosen = set()
    for perm in itertools.permutations(atoms):
        vocab = make_vocab(("MSH", 1), ("HGNC", 2), ("DRUGBANK", 3))
        concept = vocab.new_concept()
        for term, src, code, tty in perm:
            vocab.add_atom(concept.mcid, term, src, code, tty)
        chosen.add(concept.atoms[concept.preferred_maid].term_string)
    assert chosen == {"glucose"}


def test_empty_term_rejected(vocab):
    concept = vocab.new_concept()
    with pytest.raises(ValueError):
        vocab.add_atom(concept.mcid, "   ", "MSH", "D6", "PT")


def test_unique_precedence_enforced():
    vocab = Vocabulary()
    vocab.registry.register(SourceRegistryEntry("A", "1", 1))
    with pytest.raises(ValueError):
        vocab.registry.register(SourceRegistryEntry("B", "1", 1))
