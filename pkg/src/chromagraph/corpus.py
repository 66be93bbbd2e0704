"""Corpus loading, normalization, and tokenization.

Raw text becomes documents according to the input format (one document
per line for plain text, one record per line for JSONL, one row per CSV
record), then each document is normalized: punctuation characters are
replaced with spaces, the text is lowercased unless disabled, it is
split on whitespace, and stopwords are dropped last.
"""

from __future__ import annotations

import csv
import io
import json
import string
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

__all__ = [
    "Corpus",
    "CorpusFormatError",
    "Document",
    "FORMATS",
    "IngestConfig",
    "load_corpus",
    "load_labeled_corpus",
    "read_stopwords",
    "tokenize",
]

FORMATS = ("plain", "jsonl", "csv")

DEFAULT_PUNCTUATION = frozenset(string.punctuation)


class CorpusFormatError(ValueError):
    """An input file does not parse under its declared format."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        where = path or "<input>"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line


@dataclass(frozen=True)
class IngestConfig:
    """Normalization settings applied to every document.

    ``text_field`` names the JSONL key or CSV column holding the text;
    ``label_field`` names the one holding a class label when a labeled
    corpus is loaded. Stopword matching happens after lowercasing, so
    stopword lists should be lowercase when ``lowercase`` is on.
    """

    lowercase: bool = True
    stopwords: frozenset[str] = frozenset()
    punctuation: frozenset[str] = DEFAULT_PUNCTUATION
    text_field: str = "text"
    label_field: str = "label"


@dataclass(frozen=True)
class Document:
    """One tokenized text, tokens in surface order."""

    tokens: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of tokenized documents."""

    docs: tuple[Document, ...]
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self):
        return iter(self.docs)

    def vocabulary(self) -> frozenset[str]:
        return frozenset(t for doc in self.docs for t in doc.tokens)

    def token_count(self) -> int:
        return sum(len(doc) for doc in self.docs)


@lru_cache(maxsize=None)
def _space_table(punctuation: frozenset[str]) -> dict[int, str]:
    return {ord(ch): " " for ch in punctuation}


def tokenize(text: str, config: IngestConfig = IngestConfig()) -> Document:
    """Split ``text`` into a normalized Document.

    Punctuation is replaced with spaces rather than deleted, so
    "pizza,when" yields two tokens instead of fusing into one. Total
    function: any input produces a (possibly empty) document.
    """
    cleaned = text.translate(_space_table(config.punctuation))
    if config.lowercase:
        cleaned = cleaned.lower()
    words = cleaned.split()
    if config.stopwords:
        words = [w for w in words if w not in config.stopwords]
    return Document(tuple(words))


def read_stopwords(path) -> frozenset[str]:
    """Read a stopword file, one token per line; blank lines are ignored."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(w.strip() for w in lines if w.strip())


def load_corpus(path, format: str = "plain", config: IngestConfig | None = None,
                source_id: str | None = None) -> Corpus:
    """Load and tokenize a corpus file.

    The returned corpus has one document per input record, in input
    order; records that tokenize to nothing are kept as empty documents.
    Raises FileNotFoundError for a missing file, CorpusFormatError (with
    a line number) for malformed records, ValueError for unknown formats.
    """
    config = config or IngestConfig()
    records = _read_records(path, format, config, with_labels=False)
    docs = tuple(tokenize(text, config) for text, _ in records)
    sid = source_id if source_id is not None else Path(path).name
    return Corpus(docs, sid)


def load_labeled_corpus(path, format: str = "csv", config: IngestConfig | None = None,
                        source_id: str | None = None) -> tuple[Corpus, tuple[str, ...]]:
    """Load a labeled corpus; returns (corpus, labels) aligned by index."""
    config = config or IngestConfig()
    records = _read_records(path, format, config, with_labels=True)
    docs = tuple(tokenize(text, config) for text, _ in records)
    labels = tuple(label for _, label in records)
    sid = source_id if source_id is not None else Path(path).name
    return Corpus(docs, sid), labels


def _read_records(path, format, config, with_labels):
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format: {format!r} (expected one of {FORMATS})")
    text = Path(path).read_text(encoding="utf-8")
    name = str(path)
    if format == "plain":
        if with_labels:
            raise CorpusFormatError("plain format carries no labels", name)
        return [(line, "") for line in text.splitlines()]
    if format == "jsonl":
        return _jsonl_records(text, config, name, with_labels)
    return _csv_records(text, config, name, with_labels)


def _jsonl_records(text, config, name, with_labels):
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"invalid JSON: {exc.msg}", name, lineno) from exc
        if not isinstance(obj, dict):
            raise CorpusFormatError("record is not a JSON object", name, lineno)
        if config.text_field not in obj:
            raise CorpusFormatError(f"record lacks field {config.text_field!r}", name, lineno)
        label = ""
        if with_labels:
            if config.label_field not in obj:
                raise CorpusFormatError(f"record lacks field {config.label_field!r}", name, lineno)
            label = str(obj[config.label_field])
        records.append((str(obj[config.text_field]), label))
    return records


def _csv_records(text, config, name, with_labels):
    if not text.strip():
        return []
    reader = csv.DictReader(io.StringIO(text))
    fields = reader.fieldnames or []
    if config.text_field not in fields:
        raise CorpusFormatError(f"missing column {config.text_field!r}", name, 1)
    if with_labels and config.label_field not in fields:
        raise CorpusFormatError(f"missing column {config.label_field!r}", name, 1)
    records = []
    for row in reader:
        value = row.get(config.text_field)
        if value is None:
            raise CorpusFormatError("row is missing columns", name, reader.line_num)
        label = ""
        if with_labels:
            raw = row.get(config.label_field)
            if raw is None:
                raise CorpusFormatError("row is missing columns", name, reader.line_num)
            label = str(raw)
        records.append((value, label))
    return records
