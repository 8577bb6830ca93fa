"""Per-concept low-dimensional coordinates and their on-disk table format.

The table maps every concept id to a d-dimensional point derived from word
vectors. Coordinates are normalized per dimension to [-1, 1] by the recorded
max-abs scale, and stored as 32-bit-exact values so that downstream float32
storage paths are lossless.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError
from .tsne import TsneParams, compute_affinities, kl_divergence, tsne_optimize
from .vocab import ConceptVocabulary, WordVectorTable

_HEADER_TAG = "SEMB"
_FORMAT_VERSION = 1


@dataclass(frozen=True)
class EmbeddingTable:
    """Normalized concept coordinates: row i holds the point for concept id i."""

    d: int
    labels: tuple[str, ...]
    coords: np.ndarray  # (m, d) float32 in [-1, 1]
    scale: np.ndarray  # (d,) per-dimension max-abs used for normalization

    def __post_init__(self) -> None:
        coords = np.asarray(self.coords)
        if coords.shape != (len(self.labels), self.d):
            raise ValueError(f"coords shape {coords.shape} != ({len(self.labels)}, {self.d})")
        if not np.all(np.isfinite(coords)):
            raise ValueError("coordinates contain non-finite values")
        if np.abs(coords).max(initial=0.0) > 1.0:
            raise ValueError("coordinates outside [-1, 1]")
        if len(np.asarray(self.scale)) != self.d:
            raise ValueError("scale must have one entry per dimension")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def concept_ids(self) -> np.ndarray:
        return np.arange(len(self.labels))


def build_embedding_table(vocab: ConceptVocabulary, coords: np.ndarray) -> EmbeddingTable:
    """Normalize raw embedded coordinates into a table for the vocabulary.

    Each dimension is divided by its max-abs value so everything lands in
    [-1, 1]; an all-zero dimension keeps scale 1.0 by convention.
    """
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[0] != len(vocab):
        raise ValueError(f"expected one coordinate row per concept, got shape {coords.shape}")
    if not np.all(np.isfinite(coords)):
        raise ValueError("coordinates contain non-finite values")
    scale = np.abs(coords).max(axis=0)
    scale[scale == 0.0] = 1.0
    normalized = (coords / scale).astype(np.float32)
    return EmbeddingTable(d=coords.shape[1], labels=vocab.labels, coords=normalized, scale=scale)


def embed_concepts(
    vocab: ConceptVocabulary,
    vectors: WordVectorTable,
    d: int,
    params: TsneParams | None = None,
) -> tuple[EmbeddingTable, float]:
    """Full embedding pipeline: word vectors -> t-SNE -> normalized table.

    Perplexity is capped at (m - 1) / 3. Concepts whose word vectors collide
    exactly are perturbed by seeded noise of magnitude 1e-8 (later id moves)
    so bandwidth calibration stays well-posed. Returns the table and the
    final KL divergence of the optimization.
    """
    params = params or TsneParams()
    points = vectors.matrix(vocab)
    points = _perturb_duplicates(points, params.seed)
    params = params.capped(len(vocab))
    affinities = compute_affinities(points, params.perplexity)
    embedded = tsne_optimize(affinities, d, params)
    table = build_embedding_table(vocab, embedded)
    return table, kl_divergence(affinities, embedded)


def _perturb_duplicates(points: np.ndarray, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    points = points.copy()
    seen: dict[bytes, int] = {}
    for i in range(points.shape[0]):
        key = points[i].tobytes()
        while key in seen:
            noise = rng.standard_normal(points.shape[1])
            points[i] = points[i] + noise * (1e-8 / np.linalg.norm(noise))
            key = points[i].tobytes()
        seen[key] = i
    return points


def persist_embedding_table(table: EmbeddingTable, path: str | Path) -> None:
    """Write the table as UTF-8 text; the round trip through load is exact."""
    lines = [f"{_HEADER_TAG} {_FORMAT_VERSION} {len(table)} {table.d}"]
    lines.append(" ".join(repr(float(s)) for s in table.scale))
    for concept_id, label in enumerate(table.labels):
        coords = " ".join(repr(float(c)) for c in table.coords[concept_id])
        lines.append(f"{concept_id}\t{label}\t{coords}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_embedding_table(path: str | Path) -> EmbeddingTable:
    """Read a table written by :func:`persist_embedding_table`."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise FormatError(f"{path}: empty embedding table file")

    header = lines[0].split(" ")
    if len(header) != 4 or header[0] != _HEADER_TAG:
        raise FormatError(f"{path}: bad header {lines[0]!r}")
    try:
        version, m, d = int(header[1]), int(header[2]), int(header[3])
    except ValueError:
        raise FormatError(f"{path}: non-numeric header fields in {lines[0]!r}") from None
    if version != _FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format version {version}")
    if m < 1 or d < 1:
        raise FormatError(f"{path}: invalid dimensions m={m} d={d}")
    if len(lines) != 2 + m:
        raise FormatError(f"{path}: expected {m} concept rows, found {len(lines) - 2}")

    try:
        scale = np.array([float(v) for v in lines[1].split(" ")], dtype=np.float64)
    except ValueError:
        raise FormatError(f"{path}: non-numeric scale line") from None
    if scale.shape != (d,):
        raise FormatError(f"{path}: scale line has {scale.shape[0]} values, expected {d}")

    labels: list[str] = []
    coords = np.empty((m, d), dtype=np.float32)
    for row_index, line in enumerate(lines[2:]):
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"{path}: concept row needs 3 tab-separated fields: {line!r}")
        raw_id, label, raw_coords = fields
        try:
            concept_id = int(raw_id)
        except ValueError:
            raise FormatError(f"{path}: bad concept id {raw_id!r}") from None
        if concept_id != row_index:
            raise FormatError(f"{path}: concept ids must be dense ascending, got {concept_id}")
        values = raw_coords.split(" ")
        if len(values) != d:
            raise FormatError(f"{path}: row {concept_id} has {len(values)} coords, expected {d}")
        try:
            coords[row_index] = [float(v) for v in values]
        except ValueError:
            raise FormatError(f"{path}: non-numeric coordinate in row {concept_id}") from None
        labels.append(label)

    try:
        return EmbeddingTable(d=d, labels=tuple(labels), coords=coords, scale=scale)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
