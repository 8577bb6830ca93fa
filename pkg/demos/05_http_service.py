#!/usr/bin/env python3
"""Drive the HTTP facade end to end without a network socket.

Uses the in-process test client against the real app: fetch the palette,
ingest label maps over multipart, and run sketch queries. `semsketch serve`
exposes exactly these endpoints over a real socket.
"""

import json
import tempfile
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

from semsketch import (
    ConceptVocabulary,
    EncoderConfig,
    LabelMap,
    VectorStore,
    aggregate,
    build_embedding_table,
    write_label_map,
)
from semsketch.service import create_app
from semsketch.vocab import Concept

rng = np.random.default_rng(12)
LABELS = ["background", "sky", "grass", "road", "person", "car"]
vocab = ConceptVocabulary(tuple(Concept(i, l, "demo") for i, l in enumerate(LABELS)))
table = build_embedding_table(vocab, rng.normal(size=(len(LABELS), 2)) * 2)
config = EncoderConfig(n=8, d=2, bits=32)

with tempfile.TemporaryDirectory() as tmp:
    store = VectorStore.create(Path(tmp) / "svc.svs", config, scale=table.scale)
    client = TestClient(create_app(table, store))

    print("GET /api/info ->", client.get("/api/info").json())

    palette = client.get("/api/concepts").json()
    print("GET /api/concepts ->")
    for entry in palette:
        print(f"  {entry['id']}: {entry['label']:<10} rgb{tuple(entry['color'])}")

    # -----------------------------------------------------------------------
    # Ingest three street scenes; one arrives as two sources that the server
    # pools into a single grid.
    # -----------------------------------------------------------------------
    def street(seed):
        r = np.random.default_rng(seed)
        img = np.full((48, 48), 2, np.uint16)
        img[:20] = 1
        img[28:36] = 3
        c = r.integers(0, 40)
        img[30:34, c : c + 8] = 5
        return LabelMap(source=f"cam{seed}", cells=img)

    for sid in (1, 2):
        body = write_label_map(street(sid))
        r = client.post(
            "/api/ingest",
            data={"meta": json.dumps({"segment_id": sid})},
            files=[("maps", (f"{sid}.slm", body, "application/octet-stream"))],
        )
        print(f"POST /api/ingest segment {sid} -> {r.status_code}")

    multi = [street(31), street(32)]
    r = client.post(
        "/api/ingest",
        data={"meta": json.dumps({"segment_id": 3})},
        files=[("maps", (f"3.{i}.slm", write_label_map(m), "application/octet-stream"))
               for i, m in enumerate(multi)],
    )
    print(f"POST /api/ingest segment 3 (two sources) -> {r.status_code}, "
          f"count now {client.get('/api/info').json()['count']}")

    # -----------------------------------------------------------------------
    # Query: sketch the pooled grid of segment 3 and expect it at rank 1
    # with distance exactly zero (32-bit storage is lossless).
    # -----------------------------------------------------------------------
    grid = aggregate(multi, config.n)
    body = {"n": config.n, "cells": [int(c) for c in grid.cells], "k": 3}
    results = client.post("/api/query", json=body).json()["results"]
    print("POST /api/query (segment 3's own grid) ->")
    for item in results:
        print(f"  rank {item['rank']}: segment {item['segment_id']} "
              f"distance {item['distance']:.4f}")

    # validation surface
    bad = client.post("/api/query", json={"n": 8, "cells": [999] * 64, "k": 1})
    print(f"invalid concept id -> HTTP {bad.status_code}: {bad.json()['detail']}")
    store.close()
