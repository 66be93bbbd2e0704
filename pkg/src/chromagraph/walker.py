"""Random color-guided text generation over a bi-gram graph.

A sentence is planned as a sequence of color labels drawn from a Beta
distribution, then realized by walking inter-word paths: for each
planned color a word of that color is drawn, a protocol-optimal
directed path from the previous word is found, and the path minus its
final word is appended. The final target word is appended after the
loop so the sentence ends where the walk ends (disable with
``append_final_word=False`` to drop it instead).

Path protocols are scored per edge and minimized by an exact
uniform-cost search bounded by ``max_hops``:

  min_weight   cost(u, v) = weight(u, v)
  max_weight   cost(u, v) = 1 + W_max - weight(u, v)
  min_density  cost(u, v) = total_degree(v)
  max_density  cost(u, v) = 1 + D_max - total_degree(v)

All costs are >= 1, so a cheapest walk never repeats a node and the
search over (node, hop-count) states is exact for simple paths within
the hop bound. Equal-cost ties go to the lexicographically smallest
token sequence, which keeps generation fully reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from heapq import heappop, heappush
from itertools import pairwise

from .coloring import Coloring, ColoringMismatchError
from .graph import BigramGraph, degree_view

__all__ = [
    "GeneratedSentence",
    "PROTOCOLS",
    "PathFinder",
    "PathSegment",
    "WalkerConfig",
    "WalkerError",
    "find_path",
    "generate",
    "path_density",
    "sample_color_plan",
]

PROTOCOLS = ("max_weight", "min_weight", "max_density", "min_density")


class WalkerError(ValueError):
    """Generation or path search cannot proceed on this input."""


@dataclass(frozen=True)
class WalkerConfig:
    sentence_len: int
    protocol: str = "min_weight"
    beta_alpha: float = 2.0
    beta_beta: float = 5.0
    seed: int = 0
    max_hops: int = 12
    max_retries: int = 8
    append_final_word: bool = True

    def __post_init__(self):
        if self.sentence_len < 1:
            raise ValueError("sentence_len must be positive")
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol: {self.protocol!r} (expected one of {PROTOCOLS})")
        if self.beta_alpha <= 0 or self.beta_beta <= 0:
            raise ValueError("beta parameters must be positive")
        if self.max_hops < 1 or self.max_retries < 1:
            raise ValueError("max_hops and max_retries must be positive")


@dataclass(frozen=True)
class PathSegment:
    """One leg of the walk: the found path from source to target.

    A jump is a flagged discontinuity recorded when no path exists
    within the hop bound after all retries; its path is just
    (source, target) and it claims no edge traversal.
    """

    source: str
    target: str
    path: tuple[str, ...]
    jump: bool = False


@dataclass(frozen=True)
class GeneratedSentence:
    tokens: tuple[str, ...]
    color_plan: tuple[int, ...]
    segments: tuple[PathSegment, ...]

    def validate(self, g: BigramGraph) -> None:
        """Check structural invariants against the source graph.

        Non-jump segments must traverse existing directed edges only,
        segments must chain, and the token sequence must equal the
        concatenation of all segment paths minus their final words,
        optionally followed by the last target word.
        """
        for seg in self.segments:
            if seg.jump:
                if seg.path != (seg.source, seg.target):
                    raise WalkerError(f"jump segment {seg.source!r}->{seg.target!r} has a path")
                continue
            if not seg.path or seg.path[0] != seg.source or seg.path[-1] != seg.target:
                raise WalkerError(f"segment path does not span {seg.source!r}->{seg.target!r}")
            for u, v in pairwise(seg.path):
                if not g.has_edge(u, v):
                    raise WalkerError(f"segment uses missing edge {u!r}->{v!r}")
        for a, b in pairwise(self.segments):
            if a.target != b.source:
                raise WalkerError(f"segments do not chain at {a.target!r}/{b.source!r}")
        unknown = [t for t in self.tokens if t not in g.nodes]
        if unknown:
            raise WalkerError(f"sentence contains unknown token {unknown[0]!r}")
        if self.segments:
            body = [t for seg in self.segments for t in seg.path[:-1]]
            closed = body + [self.segments[-1].target]
            if list(self.tokens) not in (body, closed):
                raise WalkerError("tokens do not match the segment concatenation")


def sample_color_plan(coloring: Coloring, config: WalkerConfig,
                      rng: random.Random) -> list[int]:
    """Draw ``sentence_len`` color labels, Beta-skewed toward low labels.

    Each draw is floor(u * num_colors) for u ~ Beta(alpha, beta),
    clamped into the valid label range. Greedy coloring makes low
    classes largest, so the default Beta(2, 5) skew compensates for the
    non-uniform class sizes.
    """
    k = coloring.num_colors
    if k < 1:
        raise WalkerError("coloring has no colors (empty graph)")
    plan = []
    for _ in range(config.sentence_len):
        u = rng.betavariate(config.beta_alpha, config.beta_beta)
        plan.append(min(int(u * k), k - 1))
    return plan


def path_density(g: BigramGraph, path) -> int:
    """Sum of total degrees over every token on the path."""
    totals = degree_view(g).total_degree
    return sum(totals[t] for t in path)


def _edge_costs(g: BigramGraph, protocol: str) -> dict[tuple[str, str], int]:
    if protocol == "min_weight":
        return dict(g.edges)
    if protocol == "max_weight":
        w_max = max(g.edges.values(), default=0)
        return {e: 1 + w_max - w for e, w in g.edges.items()}
    totals = degree_view(g).total_degree
    if protocol == "min_density":
        return {(s, d): totals[d] for s, d in g.edges}
    d_max = max(totals.values(), default=0)
    return {(s, d): 1 + d_max - totals[d] for s, d in g.edges}


class PathFinder:
    """Reusable protocol-optimal path search over one graph.

    Caches per-edge costs, hop-bounded reachability, and found paths, so
    repeated queries (as in sentence generation) stay cheap.
    """

    def __init__(self, g: BigramGraph, protocol: str = "min_weight", max_hops: int = 12):
        if protocol not in PROTOCOLS:
            raise WalkerError(f"unknown protocol: {protocol!r} (expected one of {PROTOCOLS})")
        if max_hops < 1:
            raise WalkerError("max_hops must be positive")
        self.graph = g
        self.protocol = protocol
        self.max_hops = max_hops
        self._cost = _edge_costs(g, protocol)
        self._reach: dict[str, frozenset[str]] = {}
        self._memo: dict[tuple[str, str], tuple[str, ...] | None] = {}

    def _reachable(self, source: str) -> frozenset[str]:
        cached = self._reach.get(source)
        if cached is not None:
            return cached
        seen = {source}
        frontier = [source]
        for _ in range(self.max_hops):
            if not frontier:
                break
            nxt = []
            for v in frontier:
                for u in self.graph.successors(v):
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        result = frozenset(seen)
        self._reach[source] = result
        return result

    def find(self, source: str, target: str) -> tuple[str, ...] | None:
        """Cheapest simple path source -> target, or None if unreachable.

        Uniform-cost search over (node, hops) states; the heap orders
        entries by (cost, token sequence) so the first target pop is the
        optimal path with the lexicographically smallest tie-break.
        """
        if source not in self.graph.nodes:
            raise WalkerError(f"unknown token: {source!r}")
        if target not in self.graph.nodes:
            raise WalkerError(f"unknown token: {target!r}")
        if source == target:
            return (source,)
        key = (source, target)
        if key in self._memo:
            return self._memo[key]
        result = None
        if target in self._reachable(source):
            result = self._search(source, target)
        self._memo[key] = result
        return result

    def _search(self, source, target):
        cost_of = self._cost
        successors = self.graph.successors
        max_hops = self.max_hops
        heap = [(0, (source,))]
        settled: set[tuple[str, int]] = set()
        while heap:
            cost, path = heappop(heap)
            node = path[-1]
            if node == target:
                return path
            hops = len(path) - 1
            state = (node, hops)
            if state in settled or hops == max_hops:
                continue
            settled.add(state)
            for nxt in successors(node):
                heappush(heap, (cost + cost_of[(node, nxt)], path + (nxt,)))
        return None


def find_path(g: BigramGraph, source: str, target: str,
              protocol: str = "min_weight", max_hops: int = 12) -> tuple[str, ...] | None:
    """One-off protocol-optimal path query (see PathFinder)."""
    return PathFinder(g, protocol, max_hops).find(source, target)


def _words_by_color(coloring: Coloring) -> dict[int, tuple[str, ...]]:
    classes: dict[int, list[str]] = {}
    for token, color in coloring.labels.items():
        classes.setdefault(color, []).append(token)
    return {color: tuple(sorted(tokens)) for color, tokens in classes.items()}


def generate(g: BigramGraph, coloring: Coloring, config: WalkerConfig, *,
             finder: PathFinder | None = None) -> GeneratedSentence:
    """Generate one sentence; fully determined by (graph, coloring, config).

    A prepared PathFinder for the same graph/protocol/hop bound may be
    passed to share its caches across many generations. Structural
    invariants are validated on every call before returning.
    """
    if not g.nodes:
        raise WalkerError("cannot generate from an empty graph")
    if coloring.graph_hash != g.content_hash():
        raise ColoringMismatchError("coloring was computed on a different graph")
    if finder is None:
        finder = PathFinder(g, config.protocol, config.max_hops)
    elif (finder.graph.content_hash() != g.content_hash()
          or finder.protocol != config.protocol or finder.max_hops != config.max_hops):
        raise WalkerError("finder does not match the graph/protocol/max_hops of this call")

    rng = random.Random(config.seed)
    plan = sample_color_plan(coloring, config, rng)
    by_color = _words_by_color(coloring)

    def pick(color: int) -> str:
        words = by_color.get(color)
        if not words:
            raise WalkerError(f"no node carries color {color} (degenerate coloring)")
        return rng.choice(words)

    last = pick(plan[0])
    tokens: list[str] = []
    segments: list[PathSegment] = []
    for color in plan[1:]:
        path = None
        current = last
        for _ in range(config.max_retries):
            current = pick(color)
            path = finder.find(last, current)
            if path is not None:
                break
        if path is None:
            segment = PathSegment(last, current, (last, current), jump=True)
        else:
            segment = PathSegment(last, current, path)
        tokens.extend(segment.path[:-1])
        segments.append(segment)
        last = current
    if config.append_final_word:
        tokens.append(last)
    sentence = GeneratedSentence(tuple(tokens), tuple(plan), tuple(segments))
    sentence.validate(g)
    return sentence
