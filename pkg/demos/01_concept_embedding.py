#!/usr/bin/env python3
"""Build a 2-D concept embedding from word vectors, step by step.

Walks the full pipeline: vocabulary -> word vectors -> perplexity-calibrated
affinities -> gradient descent -> normalized table on disk. Everything is
seeded, so the output table is identical on every run.
"""

from pathlib import Path

import numpy as np

from semsketch import (
    TsneParams,
    compute_affinities,
    embed_concepts,
    kl_divergence,
    load_embedding_table,
    load_vocabulary,
    load_word_vectors,
    persist_embedding_table,
)

OUT_DIR = Path(__file__).parent / "output"
OUT_DIR.mkdir(exist_ok=True)

# ---------------------------------------------------------------------------
# A toy vocabulary: indoor/outdoor/animal concepts from two fake sources.
# Real deployments take the union of the class sets of the segmentation
# networks they run; "background" always sits at id 0.
# ---------------------------------------------------------------------------
LABELS = [
    "background", "person", "grass", "sky", "tree", "road", "water",
    "building", "car", "dog", "cat", "horse", "bird", "chair", "sofa",
    "table", "wall", "floor", "boat", "train", "mountain",
]

vocab_path = OUT_DIR / "vocabulary.tsv"
vocab_path.write_text(
    "\n".join(f"{i}\t{label}\t{'voc' if i < 12 else 'ade20k'}" for i, label in enumerate(LABELS))
    + "\n"
)
vocab = load_vocabulary(vocab_path)
print(f"vocabulary: {len(vocab)} concepts, background at id 0")

# ---------------------------------------------------------------------------
# Synthetic "pre-trained" word vectors. We plant them in three loose groups
# (outdoor scenery / animals / indoor objects) so the reduction has real
# structure to find. A production setup reads a word2vec-style text export.
# ---------------------------------------------------------------------------
rng = np.random.default_rng(2024)
groups = {
    "outdoor": ["grass", "sky", "tree", "road", "water", "mountain", "boat", "train"],
    "animal": ["person", "dog", "cat", "horse", "bird"],
    "indoor": ["chair", "sofa", "table", "wall", "floor", "building", "car"],
}
centers = {"outdoor": rng.normal(size=50), "animal": rng.normal(size=50), "indoor": rng.normal(size=50)}
lines = []
for label in LABELS:
    group = next((g for g, members in groups.items() if label in members), None)
    base = centers[group] if group else np.zeros(50)
    vec = base + rng.normal(size=50) * 0.4
    lines.append(label + " " + " ".join(f"{v:.5f}" for v in vec))
vectors_path = OUT_DIR / "word_vectors.txt"
vectors_path.write_text("\n".join(lines) + "\n")

word_vectors = load_word_vectors(vectors_path, vocab)
print(f"word vectors: width {word_vectors.width}")

# ---------------------------------------------------------------------------
# The reduction itself. Perplexity is capped at (m-1)/3 for m concepts, so
# the requested 30 becomes 20/3 here. Affinity rows are calibrated so each
# row's conditional entropy is log2(perplexity) bits.
# ---------------------------------------------------------------------------
params = TsneParams(seed=7)
points = word_vectors.matrix(vocab)
affinities = compute_affinities(points, params.capped(len(vocab)).perplexity)
print(f"affinities: sum={affinities.sum():.9f}, symmetric, zero diagonal")

table, final_kl = embed_concepts(vocab, word_vectors, d=2, params=params)
print(f"embedded {len(table)} concepts to d=2, final KL divergence {final_kl:.4f}")

# ---------------------------------------------------------------------------
# Inspect the result: nearby concepts should be semantic neighbors.
# ---------------------------------------------------------------------------
def neighbors(label, count=3):
    i = table.labels.index(label)
    dists = np.abs(table.coords - table.coords[i]).sum(axis=1)
    order = np.argsort(dists)
    return [table.labels[j] for j in order[1 : count + 1]]

for label in ("dog", "grass", "chair"):
    print(f"  nearest to {label}: {', '.join(neighbors(label))}")

table_path = OUT_DIR / "concepts.semb"
persist_embedding_table(table, table_path)
reloaded = load_embedding_table(table_path)
assert np.array_equal(reloaded.coords, table.coords)
print(f"table persisted to {table_path} and reloads exactly")
