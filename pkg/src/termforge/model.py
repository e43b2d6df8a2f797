"""Core vocabulary model: atoms, concepts, source registry, preferred terms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import UnknownSource
from .ids import IdCounters, IdKind, id_serial

# TTYs absent from a source's rank table sort after every ranked one.
DEFAULT_TTY_RANK = 1000

AtomKey = tuple[str, str, str, str]  # (source_abbr, code_in_source, term_string, tty)


@dataclass(frozen=True)
class Atom:
    """One term string as it appears in one source."""

    maid: str
    term_string: str
    source_abbr: str
    code_in_source: str
    tty: str
    language: str = "en"
    species: str = "human"

    @property
    def key(self) -> AtomKey:
        return (self.source_abbr, self.code_in_source, self.term_string, self.tty)


@dataclass
class Concept:
    """A unit of meaning: a non-empty set of atoms with one preferred atom."""

    mcid: str
    atoms: dict[str, Atom] = field(default_factory=dict)
    preferred_maid: str = ""
    type_links: set[str] = field(default_factory=set)


@dataclass
class SourceRegistryEntry:
    source_abbr: str
    version: str
    precedence_rank: int
    tty_ranks: dict[str, int] = field(default_factory=dict)

    def tty_rank(self, tty: str) -> int:
        return self.tty_ranks.get(tty, DEFAULT_TTY_RANK)


class SourceRegistry:
    def __init__(self) -> None:
        self.entries: dict[str, SourceRegistryEntry] = {}

    def register(self, entry: SourceRegistryEntry) -> None:
        for other in self.entries.values():
            if (
                other.source_abbr != entry.source_abbr
                and other.precedence_rank == entry.precedence_rank
            ):
                raise ValueError(
                    f"precedence rank {entry.precedence_rank} already used by "
                    f"{other.source_abbr}"
                )
        self.entries[entry.source_abbr] = entry

    def get(self, source_abbr: str) -> SourceRegistryEntry:
        try:
            return self.entries[source_abbr]
        except KeyError:
            raise UnknownSource(f"source {source_abbr!r} is not registered") from None

    def __contains__(self, source_abbr: str) -> bool:
        return source_abbr in self.entries


def select_preferred_term(concept: Concept, registry: SourceRegistry) -> str:
    """Pick the preferred atom by source precedence, with deterministic tie-breaks.

    Chain: source precedence rank, TTY rank, shortest term, lexicographically
    smallest term, lowest MAID serial. Order-independent by construction.
    """
    if not concept.atoms:
        raise ValueError(f"concept {concept.mcid} has no atoms")

    def sort_key(atom: Atom):
        entry = registry.get(atom.source_abbr)
        return (
            entry.precedence_rank,
            entry.tty_rank(atom.tty),
            len(atom.term_string),
            atom.term_string,
            id_serial(atom.maid),
        )

    return min(concept.atoms.values(), key=sort_key).maid


class Vocabulary:
    """The unified concept store. Single writer; atoms belong to one concept."""

    def __init__(
        self,
        counters: Optional[IdCounters] = None,
        registry: Optional[SourceRegistry] = None,
    ) -> None:
        self.counters = counters or IdCounters()
        self.registry = registry or SourceRegistry()
        self.concepts: dict[str, Concept] = {}
        self._atom_owner: dict[str, str] = {}  # maid -> mcid
        self._atom_keys: dict[AtomKey, str] = {}  # atom tuple -> maid

    def __len__(self) -> int:
        return len(self.concepts)

    @property
    def atom_count(self) -> int:
        return len(self._atom_owner)

    def concept(self, mcid: str) -> Concept:
        return self.concepts[mcid]

    def owner_of(self, maid: str) -> str:
        return self._atom_owner[maid]

    def find_atom_key(self, key: AtomKey) -> Optional[str]:
        return self._atom_keys.get(key)

    def new_concept(self) -> Concept:
        concept = Concept(mcid=self.counters.mint(IdKind.CONCEPT))
        self.concepts[concept.mcid] = concept
        return concept

    def add_atom(
        self,
        mcid: str,
        term_string: str,
        source_abbr: str,
        code_in_source: str,
        tty: str,
        language: str = "en",
        species: str = "human",
    ) -> Optional[Atom]:
        """Add a term to a concept; returns None when the atom tuple already
        exists anywhere in the vocabulary (duplicate no-op)."""
        term_string = term_string.strip()
        if not term_string:
            raise ValueError("atom term_string is empty after trimming")
        if not tty:
            raise ValueError("atom TTY must be non-empty")
        key = (source_abbr, code_in_source, term_string, tty)
        if key in self._atom_keys:
            return None
        concept = self.concepts[mcid]
        atom = Atom(
            maid=self.counters.mint(IdKind.ATOM),
            term_string=term_string,
            source_abbr=source_abbr,
            code_in_source=code_in_source,
            tty=tty,
            language=language,
            species=species,
        )
        concept.atoms[atom.maid] = atom
        self._atom_owner[atom.maid] = mcid
        self._atom_keys[key] = atom.maid
        concept.preferred_maid = select_preferred_term(concept, self.registry)
        return atom

    def restore_concept(self, concept: Concept) -> None:
        """Install a fully-built concept as loaded from a release, preserving
        its recorded preferred atom instead of recomputing it."""
        if concept.mcid in self.concepts:
            raise ValueError(f"duplicate concept {concept.mcid}")
        for atom in concept.atoms.values():
            if atom.maid in self._atom_owner:
                raise ValueError(f"atom {atom.maid} already owned")
            self._atom_owner[atom.maid] = concept.mcid
            self._atom_keys[atom.key] = atom.maid
        self.concepts[concept.mcid] = concept

    def iter_atoms(self) -> Iterable[tuple[str, Atom]]:
        for mcid, concept in self.concepts.items():
            for atom in concept.atoms.values():
                yield mcid, atom
