"""Weighted directed bi-gram graph: construction, queries, persistence.

Nodes are the unique tokens of a corpus; a directed edge (u, v) carries
the number of times v immediately follows u inside a single document.
Adjacent-token windows never cross document boundaries. A finished
graph is immutable and safe for unlimited concurrent readers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import pairwise
from pathlib import Path

from ._files import SchemaError, atomic_write_bytes, canonical_json_bytes, sha256_hex
from .corpus import Corpus

__all__ = [
    "BigramGraph",
    "DegreeView",
    "GRAPH_SCHEMA_VERSION",
    "build_graph",
    "degree_view",
    "graph_from_payload",
    "load_graph",
    "merge",
    "save_graph",
]

GRAPH_SCHEMA_VERSION = 1


class BigramGraph:
    """Immutable weighted directed simple graph over token strings.

    Every edge endpoint is a node, every weight is a positive integer,
    and (src, dst) appears at most once: the weight is the multiplicity.
    Self-loops (a token following itself) are stored with their count.
    """

    __slots__ = ("nodes", "edges", "source_id", "_succ", "_pred", "_hash")

    def __init__(self, nodes=(), edges=None, source_id: str = ""):
        edges = dict(edges) if edges else {}
        nodes = frozenset(nodes)
        for (src, dst), weight in edges.items():
            if src not in nodes or dst not in nodes:
                raise SchemaError(f"edge ({src!r}, {dst!r}) has an endpoint outside the node set")
            if not isinstance(weight, int) or isinstance(weight, bool) or weight < 1:
                raise SchemaError(f"edge ({src!r}, {dst!r}) has invalid weight {weight!r}")
        self.nodes = nodes
        self.edges = edges
        self.source_id = source_id
        succ: dict[str, list[str]] = {}
        pred: dict[str, list[str]] = {}
        for src, dst in edges:
            succ.setdefault(src, []).append(dst)
            pred.setdefault(dst, []).append(src)
        self._succ = {v: tuple(sorted(ns)) for v, ns in succ.items()}
        self._pred = {v: tuple(sorted(ns)) for v, ns in pred.items()}
        self._hash = None

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def bigram_total(self) -> int:
        """Total number of bi-gram occurrences (sum of edge weights)."""
        return sum(self.edges.values())

    def successors(self, token: str) -> tuple[str, ...]:
        return self._succ.get(token, ())

    def predecessors(self, token: str) -> tuple[str, ...]:
        return self._pred.get(token, ())

    def has_edge(self, src: str, dst: str) -> bool:
        return (src, dst) in self.edges

    def weight(self, src: str, dst: str) -> int:
        """Weight of edge (src, dst); 0 when the edge is absent."""
        return self.edges.get((src, dst), 0)

    def to_payload(self) -> dict:
        """Canonical on-disk structure: sorted nodes, index-based edges."""
        nodes = sorted(self.nodes)
        index = {token: i for i, token in enumerate(nodes)}
        edges = sorted([index[s], index[d], w] for (s, d), w in self.edges.items())
        return {
            "version": GRAPH_SCHEMA_VERSION,
            "source_id": self.source_id,
            "nodes": nodes,
            "edges": edges,
        }

    def canonical_bytes(self) -> bytes:
        return canonical_json_bytes(self.to_payload())

    def content_hash(self) -> str:
        if self._hash is None:
            self._hash = sha256_hex(self.canonical_bytes())
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigramGraph):
            return NotImplemented
        return (self.nodes == other.nodes and self.edges == other.edges
                and self.source_id == other.source_id)

    def __hash__(self):
        return hash(self.content_hash())

    def __repr__(self) -> str:
        return (f"BigramGraph(nodes={self.node_count}, edges={self.edge_count}, "
                f"source_id={self.source_id!r})")


@dataclass(frozen=True)
class DegreeView:
    """Unweighted in/out/total degrees over distinct edges.

    A self-loop at v contributes 1 to in_degree(v) and 1 to
    out_degree(v), hence 2 to total_degree(v).
    """

    in_degree: dict[str, int]
    out_degree: dict[str, int]
    total_degree: dict[str, int]


def build_graph(corpus: Corpus) -> BigramGraph:
    """Build the bi-gram graph of a corpus.

    Nodes are all tokens appearing in at least one document; each edge
    weight counts occurrences of that adjacent pair across documents.
    An empty corpus yields an empty graph.
    """
    nodes: set[str] = set()
    counts: Counter[tuple[str, str]] = Counter()
    for doc in corpus.docs:
        nodes.update(doc.tokens)
        counts.update(pairwise(doc.tokens))
    return BigramGraph(nodes, counts, corpus.source_id)


def _merge_source_ids(a: str, b: str) -> str:
    parts = (set(a.split("+")) | set(b.split("+"))) - {""}
    return "+".join(sorted(parts))


def merge(a: BigramGraph, b: BigramGraph) -> BigramGraph:
    """Union of node sets with summed edge weights.

    Associative and commutative; the empty graph is the identity, and
    merging the graphs of two corpus shards equals building the graph
    of the concatenated corpus.
    """
    counts = Counter(a.edges)
    counts.update(b.edges)
    return BigramGraph(a.nodes | b.nodes, counts, _merge_source_ids(a.source_id, b.source_id))


def degree_view(g: BigramGraph) -> DegreeView:
    """Per-node unweighted degrees over distinct edges."""
    in_deg = {v: len(g.predecessors(v)) for v in g.nodes}
    out_deg = {v: len(g.successors(v)) for v in g.nodes}
    total = {v: in_deg[v] + out_deg[v] for v in g.nodes}
    return DegreeView(in_deg, out_deg, total)


def save_graph(g: BigramGraph, path) -> None:
    """Write the canonical graph JSON (atomic write-then-rename)."""
    atomic_write_bytes(path, g.canonical_bytes())


def load_graph(path) -> BigramGraph:
    """Load a graph file; the round trip through save_graph is exact.

    Raises SchemaError on version mismatch, malformed structure,
    dangling edge endpoints, duplicate edges, or invalid weights.
    """
    import json

    name = str(path)
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{name}: not valid JSON: {exc.msg}") from exc
    return graph_from_payload(payload, name)


def graph_from_payload(payload, name: str = "<payload>") -> BigramGraph:
    """Validate a parsed graph payload and construct the graph."""
    if not isinstance(payload, dict):
        raise SchemaError(f"{name}: graph file must hold a JSON object")
    version = payload.get("version")
    if version != GRAPH_SCHEMA_VERSION:
        raise SchemaError(f"{name}: unsupported graph schema version {version!r}")
    nodes = payload.get("nodes")
    edges = payload.get("edges")
    source_id = payload.get("source_id", "")
    if not isinstance(nodes, list) or not all(isinstance(t, str) for t in nodes):
        raise SchemaError(f"{name}: 'nodes' must be a list of strings")
    if len(set(nodes)) != len(nodes):
        raise SchemaError(f"{name}: duplicate node entries")
    if not isinstance(edges, list):
        raise SchemaError(f"{name}: 'edges' must be a list")
    if not isinstance(source_id, str):
        raise SchemaError(f"{name}: 'source_id' must be a string")
    edge_map: dict[tuple[str, str], int] = {}
    for entry in edges:
        if (not isinstance(entry, list) or len(entry) != 3
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in entry)):
            raise SchemaError(f"{name}: edge entry {entry!r} is not [src, dst, weight]")
        si, di, weight = entry
        if not (0 <= si < len(nodes)) or not (0 <= di < len(nodes)):
            raise SchemaError(f"{name}: edge {entry!r} references an absent node")
        key = (nodes[si], nodes[di])
        if key in edge_map:
            raise SchemaError(f"{name}: duplicate edge {key!r}")
        if weight < 1:
            raise SchemaError(f"{name}: edge {entry!r} has non-positive weight")
        edge_map[key] = weight
    return BigramGraph(nodes, edge_map, source_id)
