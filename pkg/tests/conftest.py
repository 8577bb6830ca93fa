"""Shared fixtures: tiny vocabularies, word-vector files, controlled tables."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from semsketch import ConceptVocabulary, build_embedding_table
from semsketch.vocab import Concept

BASE_LABELS = ["background", "person", "grass", "sky", "dog", "cat"]

EXTRA_LABELS = [
    "tree", "road", "water", "building", "car", "horse", "bird", "boat",
    "chair", "potted plant", "train", "mountain", "sand", "snow", "wall",
]


def make_vocab(labels: list[str]) -> ConceptVocabulary:
    return ConceptVocabulary(tuple(Concept(i, label, "test") for i, label in enumerate(labels)))


def write_vocab_file(path: Path, labels: list[str]) -> Path:
    lines = [f"{i}\t{label}\ttest" for i, label in enumerate(labels)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_word_vector_file(
    path: Path, labels: list[str], width: int = 8, seed: int = 11, header: bool = False
) -> Path:
    """Deterministic synthetic word vectors covering every token of ``labels``."""
    rng = np.random.default_rng(seed)
    tokens: list[str] = []
    for label in labels:
        for token in label.split():
            if token not in tokens:
                tokens.append(token)
    lines = []
    if header:
        lines.append(f"{len(tokens)} {width}")
    for token in tokens:
        values = rng.normal(size=width)
        lines.append(token + " " + " ".join(f"{v:.6f}" for v in values))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def base_vocab() -> ConceptVocabulary:
    return make_vocab(BASE_LABELS)


@pytest.fixture
def controlled_table(base_vocab):
    """Embedding with hand-placed points: dog and cat close, background far."""
    coords = np.array(
        [
            [0.0, 0.0],  # background
            [4.0, -4.0],  # person
            [-4.0, 2.0],  # grass
            [2.0, 4.0],  # sky
            [3.0, 2.0],  # dog
            [3.2, 2.2],  # cat
        ]
    )
    return build_embedding_table(base_vocab, coords)
