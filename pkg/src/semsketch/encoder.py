"""Feature vector encodings: concept-embedding grids, one-hot baseline, quantization.

A grid of n x n concept ids becomes an n^2 * d vector by substituting each
cell with its concept's embedding point and concatenating the cells in
row-major order. Query sketches go through the same path, so cells stay
aligned between queries and stored vectors and the L1 distance decomposes
cell by cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingTable
from .label_map import GridMap

#: Total bit count of the one-hot reference encoding used for storage ratios.
BASELINE_BITS = 245760

_SUPPORTED_BITS = (8, 16, 32)


@dataclass(frozen=True)
class EncoderConfig:
    """Spatial side n, embedding dims d, and stored bits per dimension."""

    n: int = 32
    d: int = 2
    bits: int = 32

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"grid side must be >= 1, got {self.n}")
        if self.d not in (2, 3):
            raise ValueError(f"embedding dims must be 2 or 3, got {self.d}")
        if self.bits not in _SUPPORTED_BITS:
            raise ValueError(f"bits per dimension must be one of {_SUPPORTED_BITS}, got {self.bits}")

    @property
    def dims(self) -> int:
        return self.n * self.n * self.d


@dataclass(frozen=True)
class FeatureVector:
    """An n^2 * d encoding; every d-slice is one cell's embedding point."""

    n: int
    d: int
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        if values.shape != (self.n * self.n * self.d,):
            raise ValueError(f"expected {self.n * self.n * self.d} values, got shape {values.shape}")


@dataclass(frozen=True)
class BaselineBinaryVector:
    """One-hot reference encoding: one bit per (cell, concept) pair."""

    n: int
    m: int
    bits: np.ndarray  # (n*n*m,) bool, exactly one set bit per cell block


@dataclass(frozen=True)
class QuantizedVector:
    """Storage form of a feature vector at 8, 16, or 32 bits per dimension."""

    n: int
    d: int
    bits: int
    codes: np.ndarray  # uint8 / uint16 codes, or raw float32 for bits=32


def encode_grid(grid: GridMap, table: EmbeddingTable) -> FeatureVector:
    """Substitute every grid cell with its embedding point, row-major."""
    cells = np.asarray(grid.cells)
    if cells.max(initial=0) >= len(table):
        raise ValueError(f"grid contains concept id {int(cells.max())} unknown to the table (m={len(table)})")
    values = table.coords[cells].astype(np.float64).ravel()
    return FeatureVector(n=grid.n, d=table.d, values=values)


def encode_baseline(grid: GridMap, m: int) -> BaselineBinaryVector:
    """One-hot encode a grid against an m-concept vocabulary."""
    cells = np.asarray(grid.cells, dtype=np.int64)
    if cells.max(initial=0) >= m:
        raise ValueError(f"grid contains concept id {int(cells.max())} >= m={m}")
    bits = np.zeros(grid.n * grid.n * m, dtype=bool)
    bits[np.arange(cells.size) * m + cells] = True
    return BaselineBinaryVector(n=grid.n, m=m, bits=bits)


def _checked_values(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise ValueError("vector contains non-finite values")
    if np.abs(values).max(initial=0.0) > 1.0 + 1e-9:
        raise ValueError(f"vector values outside [-1, 1]: max abs {np.abs(values).max():.12g}")
    return np.clip(values, -1.0, 1.0)


def quantize(vec: FeatureVector, bits: int) -> QuantizedVector:
    """Map values from [-1, 1] onto b-bit codes; bits=32 keeps raw float32."""
    if bits not in _SUPPORTED_BITS:
        raise ValueError(f"bits per dimension must be one of {_SUPPORTED_BITS}, got {bits}")
    values = _checked_values(vec.values)
    if bits == 32:
        codes = values.astype(np.float32)
    else:
        levels = (1 << bits) - 1
        dtype = np.uint8 if bits == 8 else np.uint16
        codes = np.rint((values + 1.0) * 0.5 * levels).astype(dtype)
    return QuantizedVector(n=vec.n, d=vec.d, bits=bits, codes=codes)


def dequantize(q: QuantizedVector) -> FeatureVector:
    """Invert the affine code map; exact for the 32-bit float path."""
    if q.bits == 32:
        values = q.codes.astype(np.float64)
    else:
        levels = (1 << q.bits) - 1
        values = q.codes.astype(np.float64) / levels * 2.0 - 1.0
    return FeatureVector(n=q.n, d=q.d, values=values)


def l1_distance(a: FeatureVector | np.ndarray, b: FeatureVector | np.ndarray) -> float:
    """Manhattan distance sum |a_i - b_i|."""
    av = a.values if isinstance(a, FeatureVector) else np.asarray(a, dtype=np.float64)
    bv = b.values if isinstance(b, FeatureVector) else np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape:
        raise ValueError(f"length mismatch: {av.shape} vs {bv.shape}")
    return float(np.sum(np.abs(av - bv)))


def storage_report(config: EncoderConfig, baseline_bits: int = BASELINE_BITS) -> tuple[int, float]:
    """Bits per stored vector and the ratio against the one-hot baseline."""
    if baseline_bits <= 0:
        raise ValueError(f"baseline bit count must be positive, got {baseline_bits}")
    bits = config.n * config.n * config.d * config.bits
    return bits, bits / baseline_bits
