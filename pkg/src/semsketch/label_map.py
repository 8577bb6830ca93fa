"""Pixel-wise label maps and their majority-vote grid aggregation.

Label maps arrive as `SLM1` binary files (one per segmentation source) and
are pooled into a single n x n grid: each grid cell takes the concept id
that occurs most often among all pixels of all sources falling into it,
with ties broken by the smallest id. Sources of different resolutions are
each partitioned against their own dimensions, which amounts to a
non-aspect-ratio-preserving down-scale per source.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError

MAGIC = b"SLM1"
# magic, u32 width, u32 height, u8 source-tag length -- all little-endian
_FIXED_HEADER = struct.Struct("<4sIIB")


@dataclass(frozen=True)
class LabelMap:
    """Per-pixel concept assignment from one segmentation source."""

    source: str
    cells: np.ndarray  # (height, width) uint16 concept ids

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells)
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise ValueError(f"label map must be at least 1x1, got shape {cells.shape}")

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def width(self) -> int:
        return self.cells.shape[1]


@dataclass(frozen=True)
class GridMap:
    """Row-major n x n grid of concept ids."""

    n: int
    cells: np.ndarray  # (n*n,) concept ids

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"grid side must be >= 1, got {self.n}")
        if np.asarray(self.cells).shape != (self.n * self.n,):
            raise ValueError(f"grid needs exactly {self.n * self.n} cells")


def parse_label_map(data: bytes, vocab_size: int | None = None) -> LabelMap:
    """Decode an `SLM1` payload; the decode is lossless and bit-exact.

    With ``vocab_size`` given, every concept id is checked against it.
    """
    if len(data) < _FIXED_HEADER.size:
        raise FormatError(f"label map truncated: {len(data)} bytes is shorter than the header")
    magic, width, height, tag_len = _FIXED_HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError(f"bad label map magic {magic!r}")
    if width < 1 or height < 1:
        raise FormatError(f"invalid label map dimensions {width}x{height}")
    body_start = _FIXED_HEADER.size + tag_len
    expected = body_start + width * height * 2
    if len(data) != expected:
        raise FormatError(f"label map payload is {len(data)} bytes, expected {expected}")
    source = data[_FIXED_HEADER.size : body_start].decode("utf-8")
    ids = np.frombuffer(data, dtype="<u2", offset=body_start).reshape(height, width)
    if vocab_size is not None and ids.max() >= vocab_size:
        raise FormatError(f"label map contains concept id {int(ids.max())} >= m={vocab_size}")
    return LabelMap(source=source, cells=ids.copy())


def write_label_map(lmap: LabelMap) -> bytes:
    """Encode a label map to `SLM1` bytes; inverse of :func:`parse_label_map`."""
    tag = lmap.source.encode("utf-8")
    if len(tag) > 255:
        raise ValueError(f"source tag longer than 255 bytes: {lmap.source!r}")
    header = _FIXED_HEADER.pack(MAGIC, lmap.width, lmap.height, len(tag))
    return header + tag + np.ascontiguousarray(lmap.cells, dtype="<u2").tobytes()


def _bin_edges(extent: int, n: int) -> np.ndarray:
    return np.array([(i * extent) // n for i in range(n + 1)], dtype=np.int64)


def aggregate(maps: Sequence[LabelMap] | Iterable[LabelMap], n: int) -> GridMap:
    """Pool one or more label maps into the n x n majority grid.

    Cell (r, c) counts every pixel with row in [floor(r*H/n), floor((r+1)*H/n))
    and column in [floor(c*W/n), floor((c+1)*W/n)) of each source map, and
    takes the most frequent concept id; ties go to the smallest id.
    """
    maps = list(maps)
    if not maps:
        raise ValueError("aggregate needs at least one label map")
    if n < 1:
        raise ValueError(f"grid side must be >= 1, got {n}")
    limit = min(min(lm.width, lm.height) for lm in maps)
    if n > limit:
        raise ValueError(f"grid side {n} exceeds the smallest map dimension {limit}")

    id_count = int(max(int(lm.cells.max()) for lm in maps)) + 1
    counts = np.zeros(n * n * id_count, dtype=np.int64)
    for lm in maps:
        row_bin = np.searchsorted(_bin_edges(lm.height, n), np.arange(lm.height), side="right") - 1
        col_bin = np.searchsorted(_bin_edges(lm.width, n), np.arange(lm.width), side="right") - 1
        cell_index = row_bin[:, None] * n + col_bin[None, :]
        keys = cell_index.astype(np.int64) * id_count + lm.cells
        counts += np.bincount(keys.ravel(), minlength=counts.size)

    winners = counts.reshape(n * n, id_count).argmax(axis=1)  # argmax = smallest id on ties
    return GridMap(n=n, cells=winners.astype(np.uint16))
