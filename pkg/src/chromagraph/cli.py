"""Command-line front end composing the library into pipelines.

Every command writes its outputs atomically (temp file + rename) and
emits a run manifest at <primary output>.manifest.json listing the
resolved options, input content hashes, all written files, the seed,
and wall time. Deterministic commands (build, color, kcore, psi,
embed, project) are byte-reproducible; generate is reproducible for a
fixed --seed.

Exit codes:
  0  success
  1  unexpected internal error
  2  usage error (bad flags, bad config file)
  3  missing input file or other I/O failure
  4  malformed corpus record
  5  artifact file violates its schema
  6  coloring does not match the graph (hash or algorithm)
  7  parameter invalid for this data (k above degeneracy, degenerate walk)
"""

from __future__ import annotations

import argparse
import gzip
import json
import os
import random
import sys
import time
from pathlib import Path

from ._files import SchemaError, atomic_write_bytes, canonical_json_bytes, sha256_file, sha256_hex
from .baselines import (bow_predict, bow_train, cosine, evaluate_predictions, jaccard,
                        pearson, tfidf_centroid, tfidf_fit)
from .coloring import (ColoringMismatchError, STRATEGIES, chromatic_similarity, color_graph,
                       embed_text, load_coloring, project_coloring, save_coloring,
                       similarity_matrix, tag_distribution_by_color)
from .corpus import (Corpus, CorpusFormatError, FORMATS, IngestConfig, load_corpus,
                     load_labeled_corpus, read_stopwords)
from .graph import BigramGraph, build_graph, graph_from_payload, load_graph, save_graph
from .kcore import KCoreError, core_decomposition, core_report, extract_kcore, reduce_corpus
from .walker import PROTOCOLS, WalkerConfig, WalkerError, generate

CACHE_ENV = "CHROMAGRAPH_CACHE_DIR"

_CONFIG_KEYS = ("lowercase", "stopwords", "punctuation", "text_field", "label_field")


class UsageError(ValueError):
    """Bad flag combination or bad --config content."""


def _read_config_file(path) -> dict:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: config is not valid JSON: {exc.msg}") from exc
    if not isinstance(payload, dict):
        raise UsageError(f"{path}: config must be a JSON object")
    unknown = set(payload) - set(_CONFIG_KEYS)
    if unknown:
        raise UsageError(f"{path}: unknown config keys: {sorted(unknown)}")
    return payload


def _ingest_config(args) -> IngestConfig:
    """Defaults, overridden by --config file entries, overridden by flags."""
    values = {
        "lowercase": True,
        "stopwords": frozenset(),
        "punctuation": IngestConfig().punctuation,
        "text_field": "text",
        "label_field": "label",
    }
    if getattr(args, "config", None):
        file_values = _read_config_file(args.config)
        if "stopwords" in file_values:
            file_values["stopwords"] = read_stopwords(file_values["stopwords"])
        if "punctuation" in file_values:
            file_values["punctuation"] = frozenset(file_values["punctuation"])
        values.update(file_values)
    if getattr(args, "stopwords", None):
        values["stopwords"] = read_stopwords(args.stopwords)
    if getattr(args, "no_lowercase", False):
        values["lowercase"] = False
    if getattr(args, "text_field", None):
        values["text_field"] = args.text_field
    if getattr(args, "label_field", None):
        values["label_field"] = args.label_field
    return IngestConfig(**values)


def _config_summary(config: IngestConfig) -> dict:
    return {
        "lowercase": config.lowercase,
        "stopword_count": len(config.stopwords),
        "punctuation": "".join(sorted(config.punctuation)),
        "text_field": config.text_field,
        "label_field": config.label_field,
    }


def _write_manifest(command: str, options: dict, inputs, outputs, seed, t0) -> None:
    manifest = {
        "command": command,
        "options": options,
        "inputs": {str(p): sha256_file(p) for p in inputs},
        "outputs": [str(p) for p in outputs],
        "seed": seed,
        "wall_time_s": round(time.perf_counter() - t0, 6),
    }
    atomic_write_bytes(str(outputs[0]) + ".manifest.json", canonical_json_bytes(manifest))


def _input_files(args) -> list:
    extra = []
    if getattr(args, "config", None):
        extra.append(args.config)
    if getattr(args, "stopwords", None):
        extra.append(args.stopwords)
    return extra


# -- build ------------------------------------------------------------------

def _cache_key(raw: bytes, format: str, source_id, config: IngestConfig) -> str:
    desc = json.dumps({
        "format": format,
        "source_id": source_id,
        "lowercase": config.lowercase,
        "stopwords": sorted(config.stopwords),
        "punctuation": sorted(config.punctuation),
        "text_field": config.text_field,
    }, sort_keys=True)
    return sha256_hex(raw + desc.encode("utf-8"))


def _build_graph_cached(path, format: str, config: IngestConfig, source_id) -> BigramGraph:
    cache_dir = os.environ.get(CACHE_ENV)
    if not cache_dir:
        return build_graph(load_corpus(path, format, config, source_id))
    raw = Path(path).read_bytes()
    key = _cache_key(raw, format, source_id, config)
    cache_path = Path(cache_dir) / f"graph-{key}.json.gz"
    if cache_path.exists():
        payload = json.loads(gzip.decompress(cache_path.read_bytes()).decode("utf-8"))
        return graph_from_payload(payload, str(cache_path))
    graph = build_graph(load_corpus(path, format, config, source_id))
    atomic_write_bytes(cache_path, gzip.compress(graph.canonical_bytes()))
    return graph


def _cmd_build(args):
    t0 = time.perf_counter()
    config = _ingest_config(args)
    graph = _build_graph_cached(args.corpus, args.format, config, args.source_id)
    save_graph(graph, args.output)
    _write_manifest("build", {
        "format": args.format,
        "source_id": graph.source_id,
        "ingest": _config_summary(config),
        "nodes": graph.node_count,
        "edges": graph.edge_count,
    }, [args.corpus, *_input_files(args)], [args.output], None, t0)


# -- color ------------------------------------------------------------------

def _cmd_color(args):
    t0 = time.perf_counter()
    graph = load_graph(args.graph)
    coloring = color_graph(graph, args.strategy)
    save_coloring(coloring, args.output)
    _write_manifest("color", {
        "strategy": args.strategy,
        "num_colors": coloring.num_colors,
        "algorithm_id": coloring.algorithm_id,
    }, [args.graph, *_input_files(args)], [args.output], None, t0)


# -- kcore ------------------------------------------------------------------

def _cmd_kcore(args):
    t0 = time.perf_counter()
    if args.max == (args.k is not None):
        raise UsageError("pass exactly one of --k N or --max")
    graph = load_graph(args.graph)
    decomp = core_decomposition(graph)
    core = extract_kcore(graph, None if args.max else args.k, decomposition=decomp,
                         largest_component_only=args.largest_component)
    report = core_report(decomp, core)
    atomic_write_bytes(args.output, canonical_json_bytes(report))
    vocab_path = args.vocab_output or str(args.output) + ".vocab.txt"
    atomic_write_bytes(vocab_path, ("\n".join(sorted(core.retained)) + "\n").encode("utf-8")
                       if core.retained else b"")
    _write_manifest("kcore", {
        "k": core.k,
        "max": args.max,
        "largest_component": args.largest_component,
        "degeneracy": decomp.degeneracy,
    }, [args.graph, *_input_files(args)], [args.output, vocab_path], None, t0)


# -- psi --------------------------------------------------------------------

def _cmd_psi(args):
    t0 = time.perf_counter()
    if not args.pair:
        raise UsageError("pass at least one --pair GRAPH COLORING")
    items = []
    ids = []
    for graph_path, coloring_path in args.pair:
        graph = load_graph(graph_path)
        coloring = load_coloring(coloring_path)
        chromatic_similarity(graph, coloring, graph, coloring)  # validates the pair
        items.append((graph, coloring))
        ids.append(graph.source_id or Path(graph_path).name)
    matrix = similarity_matrix(items)
    import csv
    import io
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + ids)
    for name, row in zip(ids, matrix):
        writer.writerow([name] + [repr(v) for v in row])
    atomic_write_bytes(args.output, buf.getvalue().encode("utf-8"))
    inputs = [p for pair in args.pair for p in pair]
    _write_manifest("psi", {"pairs": len(items)}, inputs + _input_files(args),
                    [args.output], None, t0)


# -- embed / project --------------------------------------------------------

def _vectors_jsonl(docs, vectors) -> bytes:
    lines = []
    for i, (doc, vec) in enumerate(zip(docs, vectors)):
        lines.append(canonical_json_bytes(
            {"doc": i, "tokens": list(doc.tokens), "values": list(vec.values)}).rstrip(b"\n"))
    return b"\n".join(lines) + (b"\n" if lines else b"")


def _cmd_embed(args):
    t0 = time.perf_counter()
    config = _ingest_config(args)
    coloring = load_coloring(args.coloring)
    corpus = load_corpus(args.corpus, args.format, config)
    vectors = [embed_text(doc, coloring) for doc in corpus.docs]
    atomic_write_bytes(args.output, _vectors_jsonl(corpus.docs, vectors))
    _write_manifest("embed", {
        "format": args.format,
        "ingest": _config_summary(config),
        "documents": len(corpus.docs),
    }, [args.coloring, args.corpus, *_input_files(args)], [args.output], None, t0)


def _cmd_project(args):
    t0 = time.perf_counter()
    config = _ingest_config(args)
    coloring = load_coloring(args.coloring)
    corpus = load_corpus(args.corpus, args.format, config)
    result = project_coloring(coloring, corpus)
    atomic_write_bytes(args.output, _vectors_jsonl(corpus.docs, result.vectors))
    print(f"coverage {result.coverage:.6f}")
    _write_manifest("project", {
        "format": args.format,
        "ingest": _config_summary(config),
        "documents": len(corpus.docs),
        "coverage": result.coverage,
    }, [args.coloring, args.corpus, *_input_files(args)], [args.output], None, t0)


# -- generate ---------------------------------------------------------------

def _cmd_generate(args):
    t0 = time.perf_counter()
    graph = load_graph(args.graph)
    coloring = load_coloring(args.coloring)
    config = WalkerConfig(
        sentence_len=args.sentence_len,
        protocol=args.protocol,
        beta_alpha=args.beta_alpha,
        beta_beta=args.beta_beta,
        seed=args.seed,
        max_hops=args.max_hops,
        max_retries=args.max_retries,
        append_final_word=not args.drop_final_word,
    )
    sentence = generate(graph, coloring, config)
    payload = {
        "sentence": " ".join(sentence.tokens),
        "tokens": list(sentence.tokens),
        "color_plan": list(sentence.color_plan),
        "segments": [{"source": s.source, "target": s.target,
                      "path": list(s.path), "jump": s.jump} for s in sentence.segments],
        "seed": args.seed,
    }
    atomic_write_bytes(args.output, canonical_json_bytes(payload))
    _write_manifest("generate", {
        "sentence_len": args.sentence_len,
        "protocol": args.protocol,
        "beta_alpha": args.beta_alpha,
        "beta_beta": args.beta_beta,
        "max_hops": args.max_hops,
        "max_retries": args.max_retries,
        "append_final_word": not args.drop_final_word,
    }, [args.graph, args.coloring, *_input_files(args)], [args.output], args.seed, t0)


# -- compare ----------------------------------------------------------------

def _pair_vector(matrix, n):
    return [matrix[i][j] for i in range(n) for j in range(i + 1, n)]


def _cmd_compare(args):
    t0 = time.perf_counter()
    if len(args.corpora) < 2:
        raise UsageError("compare needs at least two corpora")
    config = _ingest_config(args)
    corpora = [load_corpus(p, args.format, config) for p in args.corpora]
    graphs = [build_graph(c) for c in corpora]
    colorings = [color_graph(g, args.strategy) for g in graphs]
    n = len(corpora)

    chrom = similarity_matrix(list(zip(graphs, colorings)))
    union = Corpus(tuple(d for c in corpora for d in c.docs), "union")
    model = tfidf_fit(union)
    centroids = [tfidf_centroid(model, c) for c in corpora]
    cos = [[cosine(centroids[i], centroids[j]) for j in range(n)] for i in range(n)]
    vocabs = [c.vocabulary() for c in corpora]
    jac = [[jaccard(vocabs[i], vocabs[j]) for j in range(n)] for i in range(n)]

    pairs = [[i, j] for i in range(n) for j in range(i + 1, n)]
    chrom_v = _pair_vector(chrom, n)
    cos_v = _pair_vector(cos, n)
    jac_v = _pair_vector(jac, n)
    correlation = {}
    for name, other in (("chromatic_vs_cosine", cos_v), ("chromatic_vs_jaccard", jac_v)):
        try:
            correlation[name] = pearson(chrom_v, other)
        except ValueError as exc:
            correlation[name] = None
            correlation[name + "_note"] = str(exc)

    report = {
        "corpora": [c.source_id for c in corpora],
        "chromatic_similarity": chrom,
        "cosine_tfidf": cos,
        "jaccard": jac,
        "pairs": pairs,
        "pair_values": {"chromatic_similarity": chrom_v, "cosine_tfidf": cos_v, "jaccard": jac_v},
        "correlation": correlation,
    }
    atomic_write_bytes(args.output, canonical_json_bytes(report))
    _write_manifest("compare", {
        "format": args.format,
        "strategy": args.strategy,
        "ingest": _config_summary(config),
        "corpora": len(corpora),
    }, list(args.corpora) + _input_files(args), [args.output], None, t0)


# -- classify ---------------------------------------------------------------

def _cmd_classify(args):
    t0 = time.perf_counter()
    if not 0.0 < args.test_fraction < 1.0:
        raise UsageError("--test-fraction must be in (0, 1)")
    config = _ingest_config(args)
    corpus, labels = load_labeled_corpus(args.corpus, args.format, config)
    n = len(corpus.docs)
    if n < 4:
        raise UsageError("classify needs at least four labeled documents")

    kcore_info = None
    working = corpus
    if args.kcore_reduce:
        graph = build_graph(corpus)
        decomp = core_decomposition(graph)
        core = extract_kcore(graph, None, decomposition=decomp)
        working = reduce_corpus(corpus, core)
        kcore_info = {
            "degeneracy": decomp.degeneracy,
            "k": core.k,
            "graph_nodes": graph.node_count,
            "core_nodes": core.graph.node_count,
            "core_edges": core.graph.edge_count,
            "components": core.components,
            "retained_fraction": core.graph.node_count / graph.node_count,
        }

    order = list(range(n))
    random.Random(args.seed).shuffle(order)
    n_test = max(1, round(n * args.test_fraction))
    test_idx = order[:n_test]
    train_idx = order[n_test:]
    train_corpus = Corpus(tuple(working.docs[i] for i in train_idx), corpus.source_id)
    train_labels = [labels[i] for i in train_idx]
    if len(set(train_labels)) < 2:
        raise UsageError("training split has fewer than two classes; adjust --seed or fraction")

    clf = bow_train(train_corpus, train_labels, args.alpha)
    y_true = [labels[i] for i in test_idx]
    y_pred = [bow_predict(clf, working.docs[i]) for i in test_idx]
    report = evaluate_predictions(y_true, y_pred)
    report.update({
        "train_size": len(train_idx),
        "test_size": len(test_idx),
        "vocabulary_size": len(clf.vocabulary),
        "alpha": args.alpha,
        "kcore": kcore_info,
    })
    atomic_write_bytes(args.output, canonical_json_bytes(report))
    _write_manifest("classify", {
        "format": args.format,
        "ingest": _config_summary(config),
        "kcore_reduce": args.kcore_reduce,
        "test_fraction": args.test_fraction,
        "alpha": args.alpha,
    }, [args.corpus, *_input_files(args)], [args.output], args.seed, t0)


# -- tagdist ----------------------------------------------------------------

def _read_annotations(path) -> dict[str, str]:
    annotations = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise CorpusFormatError("expected 'token<TAB>tag'", str(path), lineno)
        annotations[parts[0]] = parts[1]
    return annotations


def _cmd_tagdist(args):
    t0 = time.perf_counter()
    coloring = load_coloring(args.coloring)
    annotations = _read_annotations(args.annotations)
    dist = tag_distribution_by_color(coloring, annotations)
    payload = {
        "num_colors": coloring.num_colors,
        "distributions": {str(color): hist for color, hist in dist.items()},
    }
    atomic_write_bytes(args.output, canonical_json_bytes(payload))
    _write_manifest("tagdist", {"annotated_tokens": len(annotations)},
                    [args.coloring, args.annotations, *_input_files(args)],
                    [args.output], None, t0)


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with ingest settings")
    common.add_argument("--output", "-o", required=True, help="primary output path")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    common.add_argument("--stopwords", help="stopword file, one token per line")
    common.add_argument("--no-lowercase", action="store_true", help="keep original case")

    ingest = argparse.ArgumentParser(add_help=False)
    ingest.add_argument("--format", choices=FORMATS, default="plain")
    ingest.add_argument("--text-field", help="JSONL/CSV field holding the text")
    ingest.add_argument("--label-field", help="JSONL/CSV field holding the label")

    parser = argparse.ArgumentParser(
        prog="chromagraph",
        description="Bi-gram graph corpus analytics: build graphs, color them, and "
                    "derive similarity, reduction, embedding, and generation artifacts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common, ingest], help="build a bi-gram graph from a corpus")
    p.add_argument("corpus")
    p.add_argument("--source-id", default=None)
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("color", parents=[common], help="color a graph")
    p.add_argument("graph")
    p.add_argument("--strategy", choices=STRATEGIES, default="degree_desc")
    p.set_defaults(handler=_cmd_color)

    p = sub.add_parser("kcore", parents=[common], help="extract a k-core and report it")
    p.add_argument("graph")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--max", action="store_true", help="use the maximal k (degeneracy)")
    p.add_argument("--largest-component", action="store_true")
    p.add_argument("--vocab-output", default=None, help="retained-vocabulary file path")
    p.set_defaults(handler=_cmd_kcore)

    p = sub.add_parser("psi", parents=[common], help="chromatic similarity matrix as CSV")
    p.add_argument("--pair", nargs=2, action="append", metavar=("GRAPH", "COLORING"),
                   help="graph/coloring file pair; repeatable")
    p.set_defaults(handler=_cmd_psi)

    p = sub.add_parser("embed", parents=[common, ingest], help="embed corpus documents as color vectors")
    p.add_argument("coloring")
    p.add_argument("corpus")
    p.set_defaults(handler=_cmd_embed)

    p = sub.add_parser("project", parents=[common, ingest],
                       help="apply a coloring to a foreign corpus, reporting coverage")
    p.add_argument("coloring")
    p.add_argument("corpus")
    p.set_defaults(handler=_cmd_project)

    p = sub.add_parser("generate", parents=[common], help="generate a sentence by color-guided walk")
    p.add_argument("graph")
    p.add_argument("coloring")
    p.add_argument("--sentence-len", type=int, default=8)
    p.add_argument("--protocol", choices=PROTOCOLS, default="min_weight")
    p.add_argument("--beta-alpha", type=float, default=2.0)
    p.add_argument("--beta-beta", type=float, default=5.0)
    p.add_argument("--max-hops", type=int, default=12)
    p.add_argument("--max-retries", type=int, default=8)
    p.add_argument("--drop-final-word", action="store_true",
                   help="do not append the final target word after the walk")
    p.set_defaults(handler=_cmd_generate)

    p = sub.add_parser("compare", parents=[common, ingest],
                       help="chromatic similarity vs cosine/Jaccard across corpora")
    p.add_argument("corpora", nargs="+")
    p.add_argument("--strategy", choices=STRATEGIES, default="degree_desc")
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("classify", parents=[common, ingest],
                       help="bag-of-words classification with optional k-core vocabulary reduction")
    p.add_argument("corpus")
    p.add_argument("--kcore-reduce", action="store_true")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--alpha", type=float, default=1.0)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("tagdist", parents=[common],
                       help="per-color distribution of externally supplied token tags")
    p.add_argument("coloring")
    p.add_argument("annotations", help="TSV file: token<TAB>tag")
    p.set_defaults(handler=_cmd_tagdist)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CorpusFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except ColoringMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 6
    except (KCoreError, WalkerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 7
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def entrypoint() -> None:
    sys.exit(main())
