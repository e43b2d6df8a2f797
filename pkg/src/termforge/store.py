"""Versioned flat-file releases and the working store directory.

A release is five pipe-delimited tables plus a JSON manifest with row counts
and SHA-256 checksums. Pipes in values are escaped as \\| and backslashes as
\\\\. Rows are emitted in sorted order so exports are byte-stable.
"""

from __future__ import annotations

import hashlib
import json
import os
from datetime import datetime, timezone
from pathlib import Path

from .errors import (
    ChecksumMismatch,
    DanglingReference,
    InvariantViolation,
    StoreLocked,
)
from .ids import IdCounters, IdKind, id_serial
from .integrate import Integrator, PendingReview
from .model import (
    Atom,
    Concept,
    SourceRegistry,
    SourceRegistryEntry,
    Vocabulary,
    select_preferred_term,
)
from .semnet import Hierarchy, SemanticTypeNode

TABLE_NAMES = ("MCONSO", "MSTY", "MTYPES", "MSOURCES", "MCOUNTERS")
MANIFEST_NAME = "manifest.json"


def escape_field(value: str) -> str:
    return value.replace("\\", "\\\\").replace("|", "\\|")


def unescape_field(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            out.append(value[i + 1])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def split_row(line: str) -> list[str]:
    fields, cur, i = [], [], 0
    while i < len(line):
        ch = line[i]
        if ch == "\\" and i + 1 < len(line):
            cur.append(line[i + 1])
            i += 2
        elif ch == "|":
            fields.append("".join(cur))
            cur = []
            i += 1
        else:
            cur.append(ch)
            i += 1
    fields.append("".join(cur))
    return fields


def join_row(fields: list[str]) -> str:
    return "|".join(escape_field(f) for f in fields)


# -- validation --------------------------------------------------------------


def validate_vocabulary(vocab: Vocabulary) -> None:
    """Model invariants checked before export; raises InvariantViolation."""
    seen_maids: set[str] = set()
    for mcid, concept in vocab.concepts.items():
        if not concept.atoms:
            raise InvariantViolation(f"{mcid} has no atoms")
        if concept.preferred_maid not in concept.atoms:
            raise InvariantViolation(f"{mcid} preferred atom is not a member")
        for maid in concept.atoms:
            if maid in seen_maids:
                raise InvariantViolation(f"{maid} belongs to two concepts")
            seen_maids.add(maid)
    for kind, prefix in ((IdKind.CONCEPT, "MC"), (IdKind.ATOM, "MA")):
        top = vocab.counters.peek(kind)
        ids = (
            vocab.concepts.keys()
            if kind is IdKind.CONCEPT
            else (maid for maid in seen_maids)
        )
        for identifier in ids:
            if id_serial(identifier) >= top:
                raise InvariantViolation(
                    f"{identifier} at or above the {prefix} counter"
                )


# -- export ------------------------------------------------------------------


def _mconso_rows(vocab: Vocabulary) -> list[str]:
    rows = []
    for mcid in sorted(vocab.concepts, key=id_serial):
        concept = vocab.concepts[mcid]
        for maid in sorted(concept.atoms, key=id_serial):
            atom = concept.atoms[maid]
            flag = "P" if maid == concept.preferred_maid else "S"
            rows.append(
                join_row(
                    [
                        mcid,
                        maid,
                        atom.term_string,
                        atom.source_abbr,
                        atom.code_in_source,
                        atom.tty,
                        flag,
                        atom.language,
                        atom.species,
                    ]
                )
            )
    return rows


def _msty_rows(vocab: Vocabulary) -> list[str]:
    rows = []
    for mcid in sorted(vocab.concepts, key=id_serial):
        for mtid in sorted(vocab.concepts[mcid].type_links, key=id_serial):
            rows.append(join_row([mcid, mtid]))
    return rows


def _mtypes_rows(hierarchy: Hierarchy) -> list[str]:
    rows = []
    for mtid in sorted(hierarchy.nodes, key=id_serial):
        node = hierarchy.nodes[mtid]
        parents = ",".join(sorted(node.parents, key=id_serial))
        rows.append(join_row([mtid, node.label, node.source_of_label, parents]))
    return rows


def _msources_rows(vocab: Vocabulary) -> list[str]:
    rows = []
    for abbr in sorted(vocab.registry.entries):
        entry = vocab.registry.entries[abbr]
        ranks = ";".join(
            f"{tty}:{rank}" for tty, rank in sorted(entry.tty_ranks.items())
        )
        rows.append(
            join_row([abbr, entry.version, str(entry.precedence_rank), ranks])
        )
    return rows


def _mcounters_rows(counters: IdCounters) -> list[str]:
    return [
        join_row([kind.prefix, str(counters.next_serial[kind])]) for kind in IdKind
    ]


def export_release(
    vocab: Vocabulary,
    hierarchy: Hierarchy,
    label: str,
    out_dir: str | Path,
    timestamp: str | None = None,
) -> dict:
    """Write the five tables plus manifest; returns the manifest dict."""
    validate_vocabulary(vocab)
    hierarchy.assert_acyclic()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    tables = {
        "MCONSO": _mconso_rows(vocab),
        "MSTY": _msty_rows(vocab),
        "MTYPES": _mtypes_rows(hierarchy),
        "MSOURCES": _msources_rows(vocab),
        "MCOUNTERS": _mcounters_rows(vocab.counters),
    }
    manifest = {
        "label": label,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(),
        "tables": {},
    }
    for name in TABLE_NAMES:
        content = "".join(row + "\n" for row in tables[name]).encode("utf-8")
        (out / name).write_bytes(content)
        manifest["tables"][name] = {
            "rows": len(tables[name]),
            "sha256": hashlib.sha256(content).hexdigest(),
        }
    (out / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest


# -- load --------------------------------------------------------------------


def _read_table(directory: Path, name: str, manifest: dict) -> list[list[str]]:
    content = (directory / name).read_bytes()
    expected = manifest["tables"][name]["sha256"]
    actual = hashlib.sha256(content).hexdigest()
    if actual != expected:
        raise ChecksumMismatch(f"{name}: expected {expected}, found {actual}")
    return [split_row(line) for line in content.decode("utf-8").splitlines()]


def load_release(directory: str | Path) -> tuple[Vocabulary, Hierarchy, dict]:
    """Reconstruct state from a release dir; re-export is byte-identical."""
    directory = Path(directory)
    manifest = json.loads((directory / MANIFEST_NAME).read_text(encoding="utf-8"))

    counters_rows = _read_table(directory, "MCOUNTERS", manifest)
    counters = IdCounters()
    prefix_to_kind = {kind.prefix: kind for kind in IdKind}
    for prefix, value in counters_rows:
        counters.next_serial[prefix_to_kind[prefix]] = int(value)

    registry = SourceRegistry()
    for fields in _read_table(directory, "MSOURCES", manifest):
        abbr, version, rank, ranks = fields
        tty_ranks = {}
        if ranks:
            for item in ranks.split(";"):
                tty, _, r = item.partition(":")
                tty_ranks[tty] = int(r)
        registry.register(
            SourceRegistryEntry(abbr, version, int(rank), tty_ranks)
        )

    hierarchy = Hierarchy()
    mtypes = _read_table(directory, "MTYPES", manifest)
    for mtid, label, source_of_label, parents in mtypes:
        parent_set = set(parents.split(",")) if parents else set()
        hierarchy.nodes[mtid] = SemanticTypeNode(mtid, label, source_of_label, parent_set)
    for node in hierarchy.nodes.values():
        for parent in node.parents:
            if parent not in hierarchy.nodes:
                raise DanglingReference(f"MTYPES parent {parent} undefined")
    roots = [m for m, n in hierarchy.nodes.items() if not n.parents]
    if len(roots) == 1:
        hierarchy.root_mtid = roots[0]
        hierarchy.top_mtids = sorted(
            (
                m
                for m, n in hierarchy.nodes.items()
                if n.parents == {hierarchy.root_mtid}
            ),
            key=id_serial,
        )
    elif roots:
        raise DanglingReference(f"multiple hierarchy roots: {roots}")
    hierarchy.assert_acyclic()

    vocab = Vocabulary(counters=counters, registry=registry)
    concepts: dict[str, Concept] = {}
    preferred_seen: dict[str, str] = {}
    for fields in _read_table(directory, "MCONSO", manifest):
        mcid, maid, term, abbr, code, tty, flag, language, species = fields
        concept = concepts.setdefault(mcid, Concept(mcid=mcid))
        concept.atoms[maid] = Atom(maid, term, abbr, code, tty, language, species)
        if flag == "P":
            if mcid in preferred_seen:
                raise InvariantViolation(f"{mcid} has two P rows")
            preferred_seen[mcid] = maid
            concept.preferred_maid = maid
    for mcid, concept in concepts.items():
        if mcid not in preferred_seen:
            raise InvariantViolation(f"{mcid} has no P row")
        vocab.restore_concept(concept)

    for mcid, mtid in _read_table(directory, "MSTY", manifest):
        if mcid not in vocab.concepts:
            raise DanglingReference(f"MSTY concept {mcid} not in MCONSO")
        if mtid not in hierarchy.nodes:
            raise DanglingReference(f"MSTY type {mtid} not in MTYPES")
        vocab.concepts[mcid].type_links.add(mtid)

    validate_vocabulary(vocab)
    return vocab, hierarchy, manifest


# -- working store -----------------------------------------------------------

PENDING_FILE = "pending.json"
LOCK_FILE = ".lock"


class StoreLock:
    """Exclusive per-directory lock; one CLI process owns the store."""

    def __init__(self, store_dir: str | Path) -> None:
        self.path = Path(store_dir) / LOCK_FILE

    def __enter__(self) -> "StoreLock":
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StoreLocked(f"store locked by {self.path}") from None
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))
        return self

    def __exit__(self, *exc) -> None:
        self.path.unlink(missing_ok=True)


def save_store(
    store_dir: str | Path,
    vocab: Vocabulary,
    hierarchy: Hierarchy,
    integrator: Integrator | None = None,
    label: str = "working",
    timestamp: str | None = None,
) -> None:
    store_dir = Path(store_dir)
    export_release(vocab, hierarchy, label, store_dir, timestamp=timestamp)
    state = {
        "pending_serial": integrator.pending_serial if integrator else 0,
        "pendings": [p.to_dict() for p in integrator.pendings.values()]
        if integrator
        else [],
        "decisions_by_reviewer": integrator.decisions_by_reviewer
        if integrator
        else {},
    }
    (store_dir / PENDING_FILE).write_text(
        json.dumps(state, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def load_store(store_dir: str | Path) -> tuple[Vocabulary, Hierarchy, dict, dict]:
    """Returns (vocab, hierarchy, manifest, pending-state)."""
    store_dir = Path(store_dir)
    vocab, hierarchy, manifest = load_release(store_dir)
    pending_path = store_dir / PENDING_FILE
    if pending_path.exists():
        state = json.loads(pending_path.read_text(encoding="utf-8"))
    else:
        state = {"pending_serial": 0, "pendings": [], "decisions_by_reviewer": {}}
    return vocab, hierarchy, manifest, state


def restore_integrator_state(integrator: Integrator, state: dict) -> None:
    integrator.pending_serial = int(state.get("pending_serial", 0))
    integrator.decisions_by_reviewer = dict(state.get("decisions_by_reviewer", {}))
    for raw in state.get("pendings", []):
        pending = PendingReview.from_dict(raw)
        integrator.pendings[pending.pending_id] = pending
