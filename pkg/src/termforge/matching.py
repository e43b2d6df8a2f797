"""The match cascade: exact, norm, and fuzzy stages over an indexed vocabulary."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .ids import id_serial
from .model import Atom, Vocabulary
from .normalize import DEFAULT_STOP_WORDS, normalize

DEFAULT_THETA = 0.6
DEFAULT_WEIGHTS = (0.5, 0.5)  # (token-set Jaccard, edit similarity)
FUZZY_TOP_K = 5


class MatchStage(Enum):
    EXACT = "exact"
    NORM = "norm"
    FUZZY = "fuzzy"
    NONE = "none"


@dataclass
class MatchResult:
    stage: MatchStage
    candidates: list[tuple[str, float]]  # (mcid, score), best first
    query_term: str

    @property
    def matched(self) -> bool:
        return self.stage is not MatchStage.NONE


def levenshtein(a: str, b: str) -> int:
    """Plain edit distance; inputs here are short normalized strings."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def similarity(
    a: str,
    b: str,
    stop_words: frozenset[str] = DEFAULT_STOP_WORDS,
    weights: tuple[float, float] = DEFAULT_WEIGHTS,
) -> float:
    """Blend of token-set Jaccard and normalized edit similarity, in [0, 1].

    Symmetric; 1.0 exactly when the normalized forms are identical and
    non-empty; 0.0 when either side normalizes to nothing.
    """
    na, nb = normalize(a, stop_words), normalize(b, stop_words)
    if not na or not nb:
        return 0.0
    sa, sb = set(na.tokens), set(nb.tokens)
    jaccard = len(sa & sb) / len(sa | sb)
    ja, jb = na.joined, nb.joined
    edit = 1.0 - levenshtein(ja, jb) / max(len(ja), len(jb))
    w_jac, w_edit = weights
    return w_jac * jaccard + w_edit * edit


def _posting_keys(token: str) -> set[str]:
    # Index the bare-plural form too so trivial 's' variants still share a key.
    keys = {token}
    if len(token) > 3 and token.endswith("s"):
        keys.add(token[:-1])
    return keys


class TermIndex:
    """Lookup structures kept in step with the vocabulary.

    by_source_code and by_raw back the exact stage, by_norm the norm stage,
    and token_postings blocks fuzzy candidate generation.
    """

    def __init__(self, stop_words: frozenset[str] = DEFAULT_STOP_WORDS) -> None:
        self.stop_words = stop_words
        self.by_source_code: dict[tuple[str, str], set[str]] = {}
        self.by_raw: dict[str, set[str]] = {}
        self.by_norm: dict[str, set[str]] = {}
        self.token_postings: dict[str, set[str]] = {}

    def add_atom(self, mcid: str, atom: Atom) -> None:
        self.by_source_code.setdefault(
            (atom.source_abbr, atom.code_in_source), set()
        ).add(mcid)
        self.by_raw.setdefault(atom.term_string, set()).add(mcid)
        normed = normalize(atom.term_string, self.stop_words)
        if normed:
            self.by_norm.setdefault(normed.joined, set()).add(mcid)
        for token in set(normed.tokens):
            for key in _posting_keys(token):
                self.token_postings.setdefault(key, set()).add(mcid)

    @classmethod
    def rebuild(
        cls, vocab: Vocabulary, stop_words: frozenset[str] = DEFAULT_STOP_WORDS
    ) -> "TermIndex":
        index = cls(stop_words)
        for mcid, atom in vocab.iter_atoms():
            index.add_atom(mcid, atom)
        return index

    def same_contents(self, other: "TermIndex") -> bool:
        return (
            self.by_source_code == other.by_source_code
            and self.by_raw == other.by_raw
            and self.by_norm == other.by_norm
            and self.token_postings == other.token_postings
        )


@dataclass
class StageCounters:
    exact: int = 0
    norm: int = 0
    fuzzy: int = 0


class Matcher:
    """Runs the three match stages in turn against a vocabulary + index."""

    def __init__(
        self,
        vocab: Vocabulary,
        index: TermIndex,
        theta: float = DEFAULT_THETA,
        weights: tuple[float, float] = DEFAULT_WEIGHTS,
    ) -> None:
        self.vocab = vocab
        self.index = index
        self.theta = theta
        self.weights = weights
        self.counters = StageCounters()

    @property
    def stop_words(self) -> frozenset[str]:
        return self.index.stop_words

    def exact_match(self, atom: Atom) -> MatchResult:
        self.counters.exact += 1
        hits = self.index.by_source_code.get(
            (atom.source_abbr, atom.code_in_source), set()
        )
        if not hits:
            hits = self.index.by_raw.get(atom.term_string, set())
        if not hits:
            return MatchResult(MatchStage.NONE, [], atom.term_string)
        ordered = sorted(hits, key=id_serial)
        return MatchResult(
            MatchStage.EXACT, [(mcid, 1.0) for mcid in ordered], atom.term_string
        )

    def norm_match(self, atom: Atom) -> MatchResult:
        self.counters.norm += 1
        normed = normalize(atom.term_string, self.stop_words)
        hits = self.index.by_norm.get(normed.joined, set()) if normed else set()
        if not hits:
            return MatchResult(MatchStage.NONE, [], atom.term_string)
        ordered = sorted(hits, key=id_serial)
        return MatchResult(
            MatchStage.NORM, [(mcid, 1.0) for mcid in ordered], atom.term_string
        )

    def fuzzy_match(self, atom: Atom, k: int = FUZZY_TOP_K) -> MatchResult:
        self.counters.fuzzy += 1
        normed = normalize(atom.term_string, self.stop_words)
        candidates: set[str] = set()
        for token in set(normed.tokens):
            for key in _posting_keys(token):
                candidates |= self.token_postings_row(key)
        scored = []
        for mcid in candidates:
            concept = self.vocab.concept(mcid)
            score = max(
                similarity(atom.term_string, a.term_string, self.stop_words, self.weights)
                for a in concept.atoms.values()
            )
            if score >= self.theta:
                scored.append((mcid, score))
        scored.sort(key=lambda pair: (-pair[1], id_serial(pair[0])))
        top = scored[:k]
        stage = MatchStage.FUZZY if top else MatchStage.NONE
        return MatchResult(stage, top, atom.term_string)

    def token_postings_row(self, key: str) -> set[str]:
        return self.index.token_postings.get(key, set())

    def run_cascade(self, atom: Atom) -> MatchResult:
        result = self.exact_match(atom)
        if result.matched:
            return result
        result = self.norm_match(atom)
        if result.matched:
            return result
        return self.fuzzy_match(atom)
