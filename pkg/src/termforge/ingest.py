"""Source file parsing into SourceConcept streams plus scope filtering.

Input data files: header row + pipe-delimited columns, UTF-8, LF endings.
Adapter configs: flat `key = value` lines, lists comma-separated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import EmptyFile, MissingColumn, TooManyMalformedRows
from .integrate import SourceConcept, Term

MALFORMED_TOLERANCE = 0.10

FORMAT_TAGS = ("concept_term_table", "gene_table", "variant_table")

# Default TTY for the name column per file shape.
_DEFAULT_NAME_TTY = {
    "concept_term_table": "PT",
    "gene_table": "SYM",
    "variant_table": "VAR",
}


@dataclass
class SourceAdapterConfig:
    source_abbr: str
    version: str
    format: str
    code_column: str
    name_column: str
    synonym_columns: list[str] = field(default_factory=list)
    synonym_delimiter: str = ";"
    name_tty: str = ""
    synonym_tty: str = "SY"
    language_column: str = ""
    species_column: str = ""
    default_language: str = "en"
    default_species: str = "human"
    languages: set[str] = field(default_factory=set)  # empty = allow all
    species: set[str] = field(default_factory=set)
    type_label: str = ""
    type_column: str = ""
    type_map: dict[str, str] = field(default_factory=dict)
    precedence_rank: int = 0
    tty_ranks: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.format not in FORMAT_TAGS:
            raise ValueError(f"unknown format tag {self.format!r}")
        if not self.name_tty:
            self.name_tty = _DEFAULT_NAME_TTY[self.format]

    @classmethod
    def from_file(cls, path: str | Path) -> "SourceAdapterConfig":
        raw: dict[str, str] = {}
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected `key = value`")
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip()

        def split_list(value: str) -> list[str]:
            return [item.strip() for item in value.split(",") if item.strip()]

        tty_ranks = {}
        type_map = {}
        for key, value in raw.items():
            if key.startswith("tty_rank."):
                tty_ranks[key[len("tty_rank."):]] = int(value)
            elif key.startswith("type_map."):
                type_map[key[len("type_map."):]] = value

        return cls(
            source_abbr=raw["source_abbr"],
            version=raw.get("version", "unversioned"),
            format=raw["format"],
            code_column=raw["code_column"],
            name_column=raw["name_column"],
            synonym_columns=split_list(raw.get("synonym_columns", "")),
            synonym_delimiter=raw.get("synonym_delimiter", ";"),
            name_tty=raw.get("name_tty", ""),
            synonym_tty=raw.get("synonym_tty", "SY"),
            language_column=raw.get("language_column", ""),
            species_column=raw.get("species_column", ""),
            default_language=raw.get("default_language", "en"),
            default_species=raw.get("default_species", "human"),
            languages=set(split_list(raw.get("languages", ""))),
            species=set(split_list(raw.get("species", ""))),
            type_label=raw.get("type_label", ""),
            type_column=raw.get("type_column", ""),
            type_map=type_map,
            precedence_rank=int(raw.get("precedence_rank", "0")),
            tty_ranks=tty_ranks,
        )


@dataclass
class ParseReport:
    total_rows: int = 0
    emitted_terms: int = 0
    skipped_rows: int = 0
    malformed: list[tuple[int, str]] = field(default_factory=list)  # (lineno, reason)


def parse_source(
    path: str | Path, config: SourceAdapterConfig
) -> tuple[list[SourceConcept], ParseReport]:
    """Parse a pipe-delimited file into source concepts, grouped by code.

    Order-preserving and deterministic; malformed rows are skipped and
    counted, fatally only past the tolerance fraction.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].strip():
        raise EmptyFile(f"{path} has no header row")
    header = [col.strip() for col in lines[0].split("|")]
    col_index = {name: i for i, name in enumerate(header)}

    needed = [config.code_column, config.name_column]
    needed += config.synonym_columns
    for col in (config.language_column, config.species_column, config.type_column):
        if col:
            needed.append(col)
    for col in needed:
        if col not in col_index:
            raise MissingColumn(f"column {col!r} not in header of {path}")

    data_lines = [(i + 2, line) for i, line in enumerate(lines[1:]) if line.strip()]
    if not data_lines:
        raise EmptyFile(f"{path} has a header but no data rows")

    report = ParseReport(total_rows=len(data_lines))
    grouped: dict[str, SourceConcept] = {}

    def cell(row: list[str], col: str) -> str:
        return row[col_index[col]].strip()

    for lineno, line in data_lines:
        row = [c for c in line.split("|")]
        if len(row) != len(header):
            report.malformed.append((lineno, "column count mismatch"))
            report.skipped_rows += 1
            continue
        code = cell(row, config.code_column)
        name = cell(row, config.name_column)
        if not code:
            report.malformed.append((lineno, "empty code"))
            report.skipped_rows += 1
            continue
        language = (
            cell(row, config.language_column)
            if config.language_column
            else config.default_language
        )
        species = (
            cell(row, config.species_column)
            if config.species_column
            else config.default_species
        )

        sc = grouped.get(code)
        if sc is None:
            if not name:
                report.malformed.append((lineno, "empty name"))
                report.skipped_rows += 1
                continue
            sc = SourceConcept(
                source_abbr=config.source_abbr, code_in_source=code, terms=[]
            )
            grouped[code] = sc
            sc.terms.append(Term(name, config.name_tty, language, species))
            report.emitted_terms += 1

        if config.type_label and config.type_label not in sc.type_labels:
            sc.type_labels.append(config.type_label)
        if config.type_column:
            label = config.type_map.get(cell(row, config.type_column), "")
            if label and label not in sc.type_labels:
                sc.type_labels.append(label)

        seen = {(t.term_string, t.tty) for t in sc.terms}
        for col in config.synonym_columns:
            for value in cell(row, col).split(config.synonym_delimiter):
                value = value.strip().strip('"')
                if not value:
                    continue
                key = (value, config.synonym_tty)
                if key in seen:
                    continue
                seen.add(key)
                sc.terms.append(Term(value, config.synonym_tty, language, species))
                report.emitted_terms += 1

    if report.skipped_rows > MALFORMED_TOLERANCE * report.total_rows:
        raise TooManyMalformedRows(
            f"{report.skipped_rows}/{report.total_rows} rows malformed in {path}"
        )
    return list(grouped.values()), report


@dataclass
class FilterDecision:
    concept: Optional[SourceConcept]  # None when fully dropped
    dropped_terms: int = 0
    reason: str = ""  # "language" / "species" / "" when kept intact


def scope_filter(sc: SourceConcept, config: SourceAdapterConfig) -> FilterDecision:
    """Drop terms (or the whole concept) outside the language/species scope."""
    kept, dropped = [], 0
    reason = ""
    for term in sc.terms:
        if config.species and term.species not in config.species:
            dropped += 1
            reason = reason or "species"
            continue
        if config.languages and term.language not in config.languages:
            dropped += 1
            reason = reason or "language"
            continue
        kept.append(term)
    if not kept:
        return FilterDecision(None, dropped, reason)
    if dropped == 0:
        return FilterDecision(sc)
    filtered = SourceConcept(
        source_abbr=sc.source_abbr,
        code_in_source=sc.code_in_source,
        terms=kept,
        type_labels=list(sc.type_labels),
    )
    return FilterDecision(filtered, dropped, reason)
