"""Seeded synthetic corpora for benchmarking without real segmentation data.

Synthetic vectors are built exactly like real ones: a fake concept coordinate
table is drawn once, then every stored vector is a random grid encoded
against it, so each d-slice is a valid embedding point and scan distances
are representative.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .encoder import EncoderConfig
from .store import VectorStore


def synthetic_concept_coords(m: int, d: int, seed: int) -> np.ndarray:
    """Uniform [-1, 1] coordinate table for m fake concepts."""
    if m < 2:
        raise ValueError(f"need at least 2 concepts, got {m}")
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(m, d)).astype(np.float32)


def synthetic_grid_vectors(
    coords: np.ndarray, n: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Encode ``count`` random grids against a coordinate table."""
    m, d = coords.shape
    cells = rng.integers(0, m, size=(count, n * n))
    return coords[cells].reshape(count, n * n * d).astype(np.float64)

def generate_synthetic_store(
    path: str | Path, count: int, config: EncoderConfig, m: int = 64, seed: int = 0
) -> VectorStore:
    """Create a store of ``count`` seeded synthetic vectors at ``path``."""
    if count < 1:
        raise ValueError(f"synthetic store needs at least 1 vector, got {count}")
    coords = synthetic_concept_coords(m, config.d, seed)
    rng = np.random.default_rng(seed + 1)
    store = VectorStore.create(path, config)
    step = max(1, (64 << 20) // max(1, 8 * config.dims))
    for start in range(0, count, step):
        stop = min(start + step, count)
        store.extend(range(start, stop), synthetic_grid_vectors(coords, config.n, stop - start, rng))
    return store


def synthetic_queries(config: EncoderConfig, num: int, seed: int, m: int = 64) -> list[np.ndarray]:
    """Random sketch-like query vectors for a store of the given config."""
    if num < 1:
        raise ValueError(f"need at least 1 query, got {num}")
    coords = synthetic_concept_coords(m, config.d, seed)
    rng = np.random.default_rng(seed + 2)
    return list(synthetic_grid_vectors(coords, config.n, num, rng))
