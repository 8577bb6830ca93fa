"""HTTP facade for the sketch-query loop.

Endpoints:
    GET  /api/concepts  -> palette: [{id, label, color: [r, g, b]}]
    POST /api/ingest    -> multipart: "meta" JSON part {segment_id},
                           one or more "maps" SLM1 parts
    POST /api/query     -> {n, cells, k} -> {results: [...]}
    GET  /api/info      -> {n, d, b, count, vocabulary_size}

Queries are read-only against the store; ingestion is serialized through
the store's single-writer contract.
"""

from __future__ import annotations

import colorsys
import json
import threading
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from pydantic import BaseModel, Field

from .embedding import EmbeddingTable
from .encoder import encode_grid, quantize
from .errors import FormatError
from .label_map import GridMap, aggregate, parse_label_map
from .store import VectorStore

#: Golden-angle hue step, in degrees, for well-spread deterministic colors.
_HUE_STEP_DEG = 137.508
_SATURATION = 0.8
_VALUE = 0.95


@dataclass(frozen=True)
class PaletteEntry:
    concept_id: int
    label: str
    display_color: tuple[int, int, int]


def palette_color(concept_id: int) -> tuple[int, int, int]:
    """Deterministic, pairwise-distinct display color for a concept id."""
    hue = (concept_id * _HUE_STEP_DEG) % 360.0
    r, g, b = colorsys.hsv_to_rgb(hue / 360.0, _SATURATION, _VALUE)
    return int(round(r * 255)), int(round(g * 255)), int(round(b * 255))


def build_palette(table: EmbeddingTable) -> list[PaletteEntry]:
    return [
        PaletteEntry(concept_id=i, label=label, display_color=palette_color(i))
        for i, label in enumerate(table.labels)
    ]


class SketchRequest(BaseModel):
    n: int = Field(ge=1)
    cells: list[int]
    k: int = Field(ge=1)


def create_app(table: EmbeddingTable, store: VectorStore) -> FastAPI:
    """Wire the embedding table and a store into the query/ingest endpoints."""
    if store.config.d != table.d:
        raise ValueError(f"store d={store.config.d} does not match table d={table.d}")

    app = FastAPI(title="semsketch")
    palette = build_palette(table)
    write_lock = threading.Lock()
    m = len(table)
    n = store.config.n

    @app.get("/api/concepts")
    def concepts() -> list[dict]:
        return [
            {"id": entry.concept_id, "label": entry.label, "color": list(entry.display_color)}
            for entry in palette
        ]

    @app.get("/api/info")
    def info() -> dict:
        return {
            "n": n,
            "d": store.config.d,
            "b": store.config.bits,
            "count": len(store),
            "vocabulary_size": m,
        }

    @app.post("/api/ingest")
    async def ingest(
        meta: str = Form(...), maps: list[UploadFile] = File(...)
    ) -> dict:
        try:
            segment_id = int(json.loads(meta)["segment_id"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            raise HTTPException(status_code=400, detail="meta part must be JSON with a segment_id")
        if segment_id < 0:
            raise HTTPException(status_code=400, detail="segment_id must be non-negative")
        try:
            parsed = [parse_label_map(await part.read(), vocab_size=m) for part in maps]
            grid = aggregate(parsed, n)
        except (FormatError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        vector = quantize(encode_grid(grid, table), store.config.bits)
        with write_lock:
            try:
                store.append(segment_id, vector)
            except ValueError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
        return {"segment_id": segment_id, "count": len(store)}

    @app.post("/api/query")
    def query(request: SketchRequest) -> dict:
        if request.n != n:
            raise HTTPException(status_code=400, detail=f"sketch n={request.n}, store expects n={n}")
        if len(request.cells) != n * n:
            raise HTTPException(
                status_code=400, detail=f"sketch needs {n * n} cells, got {len(request.cells)}"
            )
        bad = [c for c in request.cells if c < 0 or c >= m]
        if bad:
            raise HTTPException(status_code=400, detail=f"unknown concept id {bad[0]}")
        grid = GridMap(n=n, cells=np.asarray(request.cells, dtype=np.uint16))
        results = store.knn(encode_grid(grid, table), request.k)
        return {
            "results": [
                {"segment_id": r.segment_id, "distance": r.distance, "rank": r.rank}
                for r in results
            ]
        }

    return app
