"""Bi-gram graph corpus analytics.

A corpus is represented as a weighted directed graph of its adjacent
token pairs; analytics are derived from graph attributes: greedy
coloring tags, k-core vocabulary reduction, a color-agreement
similarity coefficient between corpora, per-token color embeddings,
cross-corpus coloring projection, and color-guided sentence generation.
"""

from ._files import SchemaError
from .baselines import (BowClassifier, TfidfModel, bow_predict, bow_scores, bow_train,
                        cosine, evaluate_predictions, jaccard, pearson, tfidf_centroid,
                        tfidf_embed, tfidf_fit)
from .coloring import (ChromaticVector, Coloring, ColoringMismatchError,
                       ImproperColoringError, ProjectionResult, SimilarityResult,
                       check_properness, chromatic_similarity, color_graph, embed_text,
                       load_coloring, project_coloring, save_coloring, similarity_matrix,
                       tag_distribution_by_color, undirected_neighbors)
from .corpus import (Corpus, CorpusFormatError, Document, IngestConfig, load_corpus,
                     load_labeled_corpus, read_stopwords, tokenize)
from .graph import (BigramGraph, DegreeView, build_graph, degree_view, load_graph,
                    merge, save_graph)
from .kcore import (CoreDecomposition, KCoreError, KCoreSubgraph, core_decomposition,
                    core_report, extract_kcore, reduce_corpus)
from .walker import (GeneratedSentence, PathFinder, PathSegment, WalkerConfig,
                     WalkerError, find_path, generate, path_density, sample_color_plan)

__version__ = "0.1.0"

__all__ = [
    "BigramGraph",
    "BowClassifier",
    "ChromaticVector",
    "Coloring",
    "ColoringMismatchError",
    "CoreDecomposition",
    "Corpus",
    "CorpusFormatError",
    "DegreeView",
    "Document",
    "GeneratedSentence",
    "ImproperColoringError",
    "IngestConfig",
    "KCoreError",
    "KCoreSubgraph",
    "PathFinder",
    "PathSegment",
    "ProjectionResult",
    "SchemaError",
    "SimilarityResult",
    "TfidfModel",
    "WalkerConfig",
    "WalkerError",
    "bow_predict",
    "bow_scores",
    "bow_train",
    "build_graph",
    "check_properness",
    "chromatic_similarity",
    "color_graph",
    "core_decomposition",
    "core_report",
    "cosine",
    "degree_view",
    "embed_text",
    "evaluate_predictions",
    "extract_kcore",
    "find_path",
    "generate",
    "jaccard",
    "load_coloring",
    "load_corpus",
    "load_graph",
    "load_labeled_corpus",
    "merge",
    "path_density",
    "pearson",
    "project_coloring",
    "read_stopwords",
    "reduce_corpus",
    "sample_color_plan",
    "save_coloring",
    "save_graph",
    "similarity_matrix",
    "tag_distribution_by_color",
    "tfidf_centroid",
    "tfidf_embed",
    "tfidf_fit",
    "tokenize",
    "undirected_neighbors",
]
