"""Shared fixtures: the pizza corpus, desk corpora, random graphs."""

from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import settings

from chromagraph import BigramGraph, Corpus, build_graph, tokenize

settings.register_profile("ci", deadline=None, max_examples=60)
settings.load_profile("ci")

ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = ROOT / "data"
DESK_NAMES = ("cooking", "music", "science", "sports", "travel", "weather")

PIZZA_LINES = (
    "I love eating pizza",
    "I usually enjoy having a pizza when it rains outside",
    "The art of making a pizza",
)

PIZZA_CORE_TOKENS = frozenset(
    {"i", "love", "eating", "pizza", "a", "having", "enjoy", "usually"})


def make_pizza_corpus() -> Corpus:
    return Corpus(tuple(tokenize(line) for line in PIZZA_LINES), "pizza")


@pytest.fixture(scope="session")
def pizza_corpus() -> Corpus:
    return make_pizza_corpus()


@pytest.fixture(scope="session")
def pizza_graph(pizza_corpus) -> BigramGraph:
    return build_graph(pizza_corpus)


@pytest.fixture(scope="session")
def desk_paths() -> list[Path]:
    return [DATA_DIR / "desk" / f"{name}.txt" for name in DESK_NAMES]


def random_graph(rng: random.Random, max_nodes: int, *, edge_factor: float = 2.0,
                 self_loops: bool = True, source_id: str = "random") -> BigramGraph:
    """Random directed graph with weights in 1..5 and occasional self-loops."""
    n = rng.randint(1, max_nodes)
    tokens = [f"w{i:03d}" for i in range(n)]
    edges = {}
    for _ in range(int(n * edge_factor)):
        u, v = rng.choice(tokens), rng.choice(tokens)
        if u == v and not (self_loops and rng.random() < 0.2):
            continue
        edges[(u, v)] = rng.randint(1, 5)
    return BigramGraph(tokens, edges, source_id)


_ACCEPTANCE_LABELS = {}


def register_criterion(number: int, label: str):
    """Tag an acceptance test so the terminal summary names it."""
    def mark(fn):
        _ACCEPTANCE_LABELS[fn.__name__] = (number, label)
        return fn
    return mark


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            number, label = _ACCEPTANCE_LABELS.get(name, (99, name))
            status = "PASS" if outcome == "passed" else "FAIL"
            lines.append((number, f"criterion {number:2d} [{label}]: {status}"))
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
