"""Graph coloring and the analytics derived from color labels.

Coloring is greedy and deterministic: nodes are visited in a fixed
strategy order and each gets the smallest color not used by any
undirected neighbor. Determinism is what makes labels comparable
across graphs colored with the same strategy, which the similarity
coefficient and cross-corpus projection rely on.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from ._files import SchemaError, atomic_write_bytes, canonical_json_bytes
from .corpus import Corpus, Document
from .graph import BigramGraph, degree_view

__all__ = [
    "COLORING_SCHEMA_VERSION",
    "ChromaticVector",
    "Coloring",
    "ColoringMismatchError",
    "ImproperColoringError",
    "ProjectionResult",
    "STRATEGIES",
    "SimilarityResult",
    "UNKNOWN_LABEL",
    "check_properness",
    "chromatic_similarity",
    "color_graph",
    "embed_text",
    "load_coloring",
    "project_coloring",
    "save_coloring",
    "similarity_matrix",
    "tag_distribution_by_color",
    "undirected_neighbors",
]

STRATEGIES = ("degree_desc", "lexicographic")
COLORING_SCHEMA_VERSION = 1
UNKNOWN_LABEL = -1
UNANNOTATED_TAG = "UNK"


class ImproperColoringError(RuntimeError):
    """A produced coloring assigned equal colors to adjacent nodes."""


class ColoringMismatchError(ValueError):
    """A coloring does not belong to the given graph or is not comparable."""


@dataclass(frozen=True)
class Coloring:
    """A total node -> color map with the number of colors used.

    Labels are contiguous integers starting at 0. ``algorithm_id``
    records the producing strategy; colorings are only comparable when
    their algorithm ids match. ``graph_hash`` ties the coloring to the
    exact graph it was computed on.
    """

    labels: dict[str, int]
    num_colors: int
    algorithm_id: str
    graph_hash: str

    def label(self, token: str) -> int:
        """Color of ``token``, or UNKNOWN_LABEL for tokens not colored."""
        return self.labels.get(token, UNKNOWN_LABEL)


@dataclass(frozen=True)
class ChromaticVector:
    """Per-token color labels of one text; UNKNOWN_LABEL marks unknown tokens."""

    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)

    def coverage(self) -> float:
        if not self.values:
            return 0.0
        known = sum(1 for v in self.values if v != UNKNOWN_LABEL)
        return known / len(self.values)


@dataclass(frozen=True)
class SimilarityResult:
    """Color-agreement similarity between two colored graphs.

    ``shared`` counts tokens present in both node sets, ``agreeing``
    counts shared tokens whose colors match, and ``score`` is their
    ratio (0.0 when nothing is shared, so disjoint vocabularies never
    divide by zero).
    """

    shared: int
    agreeing: int
    score: float


@dataclass(frozen=True)
class ProjectionResult:
    """Vectors from applying one graph's coloring to a foreign corpus."""

    vectors: tuple[ChromaticVector, ...]
    coverage: float


def undirected_neighbors(g: BigramGraph) -> dict[str, frozenset[str]]:
    """Neighbor sets ignoring edge direction and self-loops."""
    adj: dict[str, set[str]] = {v: set() for v in g.nodes}
    for src, dst in g.edges:
        if src != dst:
            adj[src].add(dst)
            adj[dst].add(src)
    return {v: frozenset(ns) for v, ns in adj.items()}


def check_properness(g: BigramGraph, labels: Mapping[str, int]) -> None:
    """Exhaustively verify a proper coloring over all edges.

    Self-loops are exempt (a node trivially shares its own color).
    Raises ImproperColoringError on any uncolored node or any edge
    joining two equal-colored distinct nodes.
    """
    missing = [v for v in g.nodes if v not in labels]
    if missing:
        raise ImproperColoringError(f"{len(missing)} nodes have no color, e.g. {missing[0]!r}")
    for src, dst in g.edges:
        if src != dst and labels[src] == labels[dst]:
            raise ImproperColoringError(
                f"edge ({src!r}, {dst!r}) joins two nodes of color {labels[src]}")


def color_graph(g: BigramGraph, strategy: str = "degree_desc") -> Coloring:
    """Greedily color the undirected simplification of ``g``.

    ``degree_desc`` visits nodes by total degree descending (ties broken
    lexicographically); ``lexicographic`` visits in token order. The
    result is deterministic for a given graph and strategy, and its
    properness is verified before returning. An empty graph yields an
    empty coloring with zero colors.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown coloring strategy: {strategy!r} (expected one of {STRATEGIES})")
    adj = undirected_neighbors(g)
    if strategy == "degree_desc":
        totals = degree_view(g).total_degree
        order = sorted(g.nodes, key=lambda t: (-totals[t], t))
    else:
        order = sorted(g.nodes)
    labels: dict[str, int] = {}
    for node in order:
        used = {labels[u] for u in adj[node] if u in labels}
        color = 0
        while color in used:
            color += 1
        labels[node] = color
    num_colors = max(labels.values()) + 1 if labels else 0
    check_properness(g, labels)
    return Coloring(labels, num_colors, f"greedy-{strategy}-v1", g.content_hash())


def _check_pair(g: BigramGraph, coloring: Coloring) -> None:
    if coloring.graph_hash != g.content_hash():
        raise ColoringMismatchError(
            f"coloring was computed on a different graph "
            f"(expected hash {coloring.graph_hash[:12]}..., got {g.content_hash()[:12]}...)")


def chromatic_similarity(g1: BigramGraph, c1: Coloring,
                         g2: BigramGraph, c2: Coloring) -> SimilarityResult:
    """Fraction of shared-vocabulary tokens whose color labels agree.

    The shared count is computed first; when it is zero the score is
    0.0 with no division. Labels are only comparable between colorings
    produced by the same algorithm, which is checked.
    """
    _check_pair(g1, c1)
    _check_pair(g2, c2)
    if c1.algorithm_id != c2.algorithm_id:
        raise ColoringMismatchError(
            f"colorings are not comparable: {c1.algorithm_id!r} vs {c2.algorithm_id!r}")
    common = g1.nodes & g2.nodes
    shared = len(common)
    if shared == 0:
        return SimilarityResult(0, 0, 0.0)
    agreeing = sum(1 for token in common if c1.labels[token] == c2.labels[token])
    return SimilarityResult(shared, agreeing, agreeing / shared)


def similarity_matrix(items: Sequence[tuple[BigramGraph, Coloring]]) -> list[list[float]]:
    """Pairwise similarity scores; symmetric with unit diagonal for
    non-empty graphs (an empty graph shares nothing, even with itself)."""
    n = len(items)
    matrix = [[0.0] * n for _ in range(n)]
    for i in range(n):
        gi, ci = items[i]
        for j in range(i, n):
            gj, cj = items[j]
            score = chromatic_similarity(gi, ci, gj, cj).score
            matrix[i][j] = score
            matrix[j][i] = score
    return matrix


def embed_text(doc: Document, coloring: Coloring) -> ChromaticVector:
    """Map each token to its color label; unknown tokens map to -1.

    The vector length always equals the token count. Distinct token
    sequences can share an embedding: the map is not injective.
    """
    return ChromaticVector(tuple(coloring.labels.get(t, UNKNOWN_LABEL) for t in doc.tokens))


def project_coloring(coloring: Coloring, foreign: Corpus) -> ProjectionResult:
    """Apply a coloring to every document of a foreign corpus.

    Coverage is the fraction of foreign tokens that received a real
    label (0.0 for a corpus with no tokens at all).
    """
    vectors = tuple(embed_text(doc, coloring) for doc in foreign.docs)
    total = sum(len(v) for v in vectors)
    known = sum(1 for v in vectors for x in v.values if x != UNKNOWN_LABEL)
    coverage = known / total if total else 0.0
    return ProjectionResult(vectors, coverage)


def tag_distribution_by_color(coloring: Coloring,
                              annotations: Mapping[str, str]) -> dict[int, dict[str, float]]:
    """Normalized tag histogram per color label.

    ``annotations`` maps tokens to external tag strings (part of
    speech, entity type, anything); tokens without an annotation are
    counted under "UNK". Each color's histogram sums to 1.
    """
    counts: dict[int, Counter[str]] = {}
    for token, color in coloring.labels.items():
        tag = annotations.get(token, UNANNOTATED_TAG)
        counts.setdefault(color, Counter())[tag] += 1
    result: dict[int, dict[str, float]] = {}
    for color in sorted(counts):
        total = sum(counts[color].values())
        result[color] = {tag: n / total for tag, n in sorted(counts[color].items())}
    return result


def coloring_payload(coloring: Coloring) -> dict:
    """Canonical on-disk structure with lexicographically sorted labels."""
    return {
        "version": COLORING_SCHEMA_VERSION,
        "algorithm_id": coloring.algorithm_id,
        "graph_hash": coloring.graph_hash,
        "num_colors": coloring.num_colors,
        "labels": dict(sorted(coloring.labels.items())),
    }


def save_coloring(coloring: Coloring, path) -> None:
    atomic_write_bytes(path, canonical_json_bytes(coloring_payload(coloring)))


def load_coloring(path) -> Coloring:
    """Load a coloring file, enforcing the label-range invariants."""
    name = str(path)
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{name}: not valid JSON: {exc.msg}") from exc
    if not isinstance(payload, dict):
        raise SchemaError(f"{name}: coloring file must hold a JSON object")
    if payload.get("version") != COLORING_SCHEMA_VERSION:
        raise SchemaError(f"{name}: unsupported coloring schema version {payload.get('version')!r}")
    labels = payload.get("labels")
    num_colors = payload.get("num_colors")
    algorithm_id = payload.get("algorithm_id")
    graph_hash = payload.get("graph_hash")
    if not isinstance(labels, dict) or not all(
            isinstance(t, str) and isinstance(c, int) and not isinstance(c, bool)
            for t, c in labels.items()):
        raise SchemaError(f"{name}: 'labels' must map tokens to integer colors")
    if not isinstance(algorithm_id, str) or not isinstance(graph_hash, str):
        raise SchemaError(f"{name}: 'algorithm_id' and 'graph_hash' must be strings")
    if not isinstance(num_colors, int) or isinstance(num_colors, bool):
        raise SchemaError(f"{name}: 'num_colors' must be an integer")
    if labels:
        seen = set(labels.values())
        if min(seen) < 0 or max(seen) + 1 != num_colors or len(seen) != num_colors:
            raise SchemaError(f"{name}: labels must cover 0..num_colors-1 with no gaps")
    elif num_colors != 0:
        raise SchemaError(f"{name}: empty labels require num_colors == 0")
    return Coloring(dict(labels), num_colors, algorithm_id, graph_hash)
