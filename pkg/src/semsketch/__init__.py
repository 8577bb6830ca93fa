"""Sketchable concept-map retrieval.

Pixel-wise semantic label maps are pooled into n x n majority grids, each
cell is replaced by a low-dimensional concept coordinate learned from word
vectors, and the concatenated n^2*d vectors are searched exactly with L1
nearest neighbors over an append-only quantized store.
"""

from .embedding import (
    EmbeddingTable,
    build_embedding_table,
    embed_concepts,
    load_embedding_table,
    persist_embedding_table,
)
from .encoder import (
    BASELINE_BITS,
    BaselineBinaryVector,
    EncoderConfig,
    FeatureVector,
    QuantizedVector,
    dequantize,
    encode_baseline,
    encode_grid,
    l1_distance,
    quantize,
    storage_report,
)
from .errors import FormatError
from .label_map import GridMap, LabelMap, aggregate, parse_label_map, write_label_map
from .store import BenchmarkReport, QueryResult, VectorStore
from .tsne import (
    TsneParams,
    compute_affinities,
    conditional_affinities,
    kl_divergence,
    tsne_gradient,
    tsne_optimize,
)
from .vocab import ConceptVocabulary, WordVectorTable, load_vocabulary, load_word_vectors

__version__ = "0.1.0"

__all__ = [
    "BASELINE_BITS",
    "BaselineBinaryVector",
    "BenchmarkReport",
    "ConceptVocabulary",
    "EmbeddingTable",
    "EncoderConfig",
    "FeatureVector",
    "FormatError",
    "GridMap",
    "LabelMap",
    "QuantizedVector",
    "QueryResult",
    "TsneParams",
    "VectorStore",
    "WordVectorTable",
    "aggregate",
    "build_embedding_table",
    "compute_affinities",
    "conditional_affinities",
    "dequantize",
    "embed_concepts",
    "encode_baseline",
    "encode_grid",
    "kl_divergence",
    "l1_distance",
    "load_embedding_table",
    "load_vocabulary",
    "load_word_vectors",
    "parse_label_map",
    "persist_embedding_table",
    "quantize",
    "storage_report",
    "tsne_gradient",
    "tsne_optimize",
    "write_label_map",
]
