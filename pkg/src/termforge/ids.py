"""Identifier minting: two-letter prefix plus 8 zero-padded decimal digits."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import CounterExhausted

ID_DIGITS = 8
MAX_SERIAL = 10**ID_DIGITS

_ID_RE = re.compile(r"^(MC|MA|MT)(\d{8})$")


class IdKind(Enum):
    CONCEPT = "MC"
    ATOM = "MA"
    TYPE = "MT"

    @property
    def prefix(self) -> str:
        return self.value


def render_id(kind: IdKind, serial: int) -> str:
    """Render a serial as e.g. MC00001175."""
    if not 0 <= serial < MAX_SERIAL:
        raise CounterExhausted(f"serial {serial} outside [0, {MAX_SERIAL})")
    return f"{kind.prefix}{serial:0{ID_DIGITS}d}"


def parse_id(identifier: str) -> tuple[IdKind, int]:
    """Inverse of render_id; raises ValueError on malformed input."""
    m = _ID_RE.match(identifier)
    if m is None:
        raise ValueError(f"malformed identifier: {identifier!r}")
    return IdKind(m.group(1)), int(m.group(2))


def id_serial(identifier: str) -> int:
    return parse_id(identifier)[1]


@dataclass
class IdCounters:
    """Per-kind monotonic counters. Serials are never reused."""

    next_serial: dict[IdKind, int] = field(
        default_factory=lambda: {k: 0 for k in IdKind}
    )

    def mint(self, kind: IdKind) -> str:
        serial = self.next_serial[kind]
        if serial >= MAX_SERIAL:
            raise CounterExhausted(f"{kind.prefix} counter exhausted")
        self.next_serial[kind] = serial + 1
        return render_id(kind, serial)

    def peek(self, kind: IdKind) -> int:
        return self.next_serial[kind]

    def advance_to(self, kind: IdKind, serial: int) -> None:
        """Raise the counter floor; used when loading a release."""
        if serial > self.next_serial[kind]:
            self.next_serial[kind] = serial
