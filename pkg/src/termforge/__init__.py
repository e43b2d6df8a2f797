"""termforge: a controlled-vocabulary integration engine.

Merges heterogeneous source vocabularies into one unified concept store via
an exact/norm/fuzzy match cascade with human review, mints MC/MA/MT
identifiers, maintains a Subclass_of semantic-type hierarchy, and exports
versioned pipe-delimited release tables.
"""

from .ids import IdCounters, IdKind, parse_id, render_id
from .integrate import Integrator, IntegrationOutcome, OutcomeKind, SourceConcept, Term
from .matching import Matcher, MatchResult, MatchStage, TermIndex, similarity
from .model import Atom, Concept, SourceRegistry, SourceRegistryEntry, Vocabulary
from .normalize import NormalizedString, normalize, strip_possessives
from .semnet import Hierarchy

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "Concept",
    "Hierarchy",
    "IdCounters",
    "IdKind",
    "IntegrationOutcome",
    "Integrator",
    "MatchResult",
    "MatchStage",
    "Matcher",
    "NormalizedString",
    "OutcomeKind",
    "SourceConcept",
    "SourceRegistry",
    "SourceRegistryEntry",
    "Term",
    "TermIndex",
    "Vocabulary",
    "normalize",
    "parse_id",
    "render_id",
    "similarity",
    "strip_possessives",
]
