"""Concept vocabulary and pre-trained word-vector ingestion.

The vocabulary is the union of the class sets of all segmentation sources,
with dense integer ids. Id 0 is always the reserved "background" concept so
that every grid cell, sketched or not, stays encodable.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError

BACKGROUND_ID = 0
BACKGROUND_LABEL = "background"


@dataclass(frozen=True)
class Concept:
    concept_id: int
    label: str
    source: str


@dataclass(frozen=True)
class ConceptVocabulary:
    """Dense-id concept set: ids 0..m-1, background at id 0, unique labels."""

    entries: tuple[Concept, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("vocabulary is empty")
        ids = [e.concept_id for e in self.entries]
        if ids != list(range(len(self.entries))):
            raise ValueError(f"concept ids must be dense 0..{len(self.entries) - 1}, got {ids}")
        first = self.entries[0]
        if first.label != BACKGROUND_LABEL:
            raise ValueError(f"concept id 0 must be {BACKGROUND_LABEL!r}, got {first.label!r}")
        seen: set[str] = set()
        for entry in self.entries:
            if entry.label in seen:
                raise ValueError(f"duplicate label {entry.label!r}")
            seen.add(entry.label)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.entries)

    def label_of(self, concept_id: int) -> str:
        return self.entries[concept_id].label


@dataclass(frozen=True)
class WordVectorTable:
    """One resolved vector per vocabulary label; multi-token labels are token means."""

    width: int
    rows: dict[str, np.ndarray]

    def matrix(self, vocab: ConceptVocabulary) -> np.ndarray:
        """Stack label vectors into an (m, width) float64 matrix in id order."""
        return np.stack([self.rows[label] for label in vocab.labels]).astype(np.float64)


def load_vocabulary(path: str | Path) -> ConceptVocabulary:
    """Parse a vocabulary file: one ``<id>\\t<label>\\t<source>`` record per line."""
    text = Path(path).read_text(encoding="utf-8")
    entries: list[Concept] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(fields)}")
        raw_id, label, source = fields
        try:
            concept_id = int(raw_id)
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad concept id {raw_id!r}") from None
        if concept_id < 0:
            raise FormatError(f"{path}:{lineno}: negative concept id {concept_id}")
        entries.append(Concept(concept_id, label.strip().lower(), source.strip()))
    if not entries:
        raise FormatError(f"{path}: no vocabulary records")
    return ConceptVocabulary(tuple(entries))


def load_word_vectors(path: str | Path, vocab: ConceptVocabulary) -> WordVectorTable:
    """Load a text-format word-vector file and resolve every vocabulary label.

    Accepts the common export format ``<token> <v1> ... <vw>``, one record per
    line, with an optional leading ``<count> <dim>`` header. Labels made of
    several tokens (e.g. "potted plant") resolve to the component-wise mean of
    their token vectors. Any vocabulary token missing from the file is an
    error that names all the missing tokens.
    """
    needed: set[str] = set()
    for label in vocab.labels:
        needed.update(label.split())

    found: dict[str, np.ndarray] = {}
    width: int | None = None
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            parts = line.rstrip("\n").split(" ")
            if lineno == 1 and len(parts) == 2:
                try:
                    int(parts[0]), int(parts[1])
                    continue  # token-count/dimension header
                except ValueError:
                    pass
            if not line.strip():
                continue
            token, raw_values = parts[0], parts[1:]
            if width is None:
                width = len(raw_values)
                if width == 0:
                    raise FormatError(f"{path}:{lineno}: record has no vector components")
            elif len(raw_values) != width:
                raise FormatError(
                    f"{path}:{lineno}: expected {width} components, got {len(raw_values)}"
                )
            if token not in needed or token in found:
                continue
            try:
                found[token] = np.array([float(v) for v in raw_values], dtype=np.float64)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-numeric vector component") from None

    missing = sorted(needed - set(found))
    if missing:
        raise ValueError(f"word vectors missing for tokens: {', '.join(missing)}")
    assert width is not None

    rows: dict[str, np.ndarray] = {}
    for label in vocab.labels:
        tokens = label.split()
        rows[label] = np.mean([found[t] for t in tokens], axis=0)
    return WordVectorTable(width=width, rows=rows)
