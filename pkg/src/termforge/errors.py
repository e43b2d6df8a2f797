"""Exception hierarchy shared across the engine."""


class TermforgeError(Exception):
    """Base class for all engine errors."""


class CounterExhausted(TermforgeError):
    """An identifier counter would exceed its 8-digit space."""


class UnknownSource(TermforgeError):
    """An atom references a source abbreviation that is not registered."""


class EmptySourceConcept(TermforgeError):
    """A source concept arrived with no terms."""


class UnknownPending(TermforgeError):
    """No pending review with the given id."""


class AlreadyResolved(TermforgeError):
    """The pending review was already decided."""


class CandidateNotOffered(TermforgeError):
    """The chosen concept is not among the stored candidates."""


class AlreadyInitialized(TermforgeError):
    """The semantic-type hierarchy already has its top level."""


class UnknownParent(TermforgeError):
    """A parent type id does not exist."""


class UnknownType(TermforgeError):
    """A semantic-type id does not exist."""


class CycleDetected(TermforgeError):
    """The requested reparenting would create a cycle."""


class ImmutableNode(TermforgeError):
    """The root and the top-level types cannot be moved or deleted."""


class MissingColumn(TermforgeError):
    """A column declared in the adapter config is absent from the file header."""


class EmptyFile(TermforgeError):
    """The input file has a header but no data rows (or nothing at all)."""


class TooManyMalformedRows(TermforgeError):
    """More than the tolerated fraction of rows failed to parse."""


class InvariantViolation(TermforgeError):
    """The store failed a consistency check; refusing to proceed."""


class ChecksumMismatch(TermforgeError):
    """A release table does not match its recorded checksum."""


class DanglingReference(TermforgeError):
    """A release table references an id that no other table defines."""


class StoreLocked(TermforgeError):
    """Another process holds the store lock."""
