"""Command line entry points.

Exit codes: 0 success, 1 domain failure (bad data, provider trouble),
2 usage error from argument parsing.
"""
from __future__ import annotations

import argparse
import json
import socket
import sys
from pathlib import Path

from .corpus import append_qa_jsonl, load_corpus
from .embedding import DEFAULT_MOCK_DIMENSION, MockEmbedder, RemoteEmbedder
from .errors import IndexLoadFailure, BindFailure, LegalRagError
from .evaluation import evaluate, load_judgments
from .llm import MODEL_LIMIT, MockChatBackend, RemoteChatBackend
from .pipeline import build_index, chunk_corpus
from .qa_synthesis import SynthesisConfig, law_articles, synthesize_qa
from .query_engine import EngineConfig, answer_question
from .tokenize import ChunkingConfig
from .vector_index import DEFAULT_TOP_K, VectorIndex

DEFAULT_REMOTE_EMBED_DIM = 1536


def embedder_spec(value: str) -> str:
    """Validate an --embedder value: mock[:DIM] or remote:MODEL[:DIM]."""
    kind, _, rest = value.partition(":")
    if kind == "mock":
        if rest and not rest.isdigit():
            raise argparse.ArgumentTypeError(f"mock dimension must be an integer: {value!r}")
        return value
    if kind == "remote":
        if not rest:
            raise argparse.ArgumentTypeError("remote embedder needs a model: remote:MODEL[:DIM]")
        model, _, dim = rest.partition(":")
        if not model or (dim and not dim.isdigit()):
            raise argparse.ArgumentTypeError(f"bad remote embedder spec: {value!r}")
        return value
    raise argparse.ArgumentTypeError(f"unknown embedder kind: {value!r}")


def llm_spec(value: str) -> str:
    """Validate an --llm value: mock[:FIXTURE.json] or remote:MODEL."""
    kind, _, rest = value.partition(":")
    if kind == "mock":
        return value
    if kind == "remote":
        if not rest:
            raise argparse.ArgumentTypeError("remote llm needs a model: remote:MODEL")
        return value
    raise argparse.ArgumentTypeError(f"unknown llm kind: {value!r}")


def make_embedder(spec: str):
    kind, _, rest = spec.partition(":")
    if kind == "mock":
        dim = int(rest) if rest else DEFAULT_MOCK_DIMENSION
        return MockEmbedder(dimension=dim)
    model, _, dim = rest.partition(":")
    return RemoteEmbedder(model=model, dimension=int(dim) if dim else DEFAULT_REMOTE_EMBED_DIM)


def make_backend(spec: str, model_limit: int = MODEL_LIMIT):
    kind, _, rest = spec.partition(":")
    if kind == "mock":
        if rest:
            return MockChatBackend.from_file(rest, model_limit=model_limit)
        return MockChatBackend(model_limit=model_limit)
    return RemoteChatBackend(model=rest, model_limit=model_limit)


def load_index(path: str | Path) -> VectorIndex:
    try:
        return VectorIndex.load(path)
    except LegalRagError:
        raise
    except OSError as exc:
        raise IndexLoadFailure(f"cannot read index {path}: {exc}") from exc


def _engine_config(args: argparse.Namespace) -> EngineConfig:
    return EngineConfig(
        top_k=args.top_k,
        max_answer_tokens=args.max_answer_tokens,
        model_limit=args.model_limit,
    )


def _print_answer(answer) -> None:
    print(answer.text)
    print()
    print("Sources:")
    if not answer.hits:
        print("  (none)")
    for i, hit in enumerate(answer.hits, start=1):
        print(f"  {i}. {hit.source_ref.label()}  score={hit.score:.4f}")


def cmd_ingest(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    for doc in corpus.documents:
        print(
            f"{doc.doc_id}: {doc.kind}, {doc.language}, "
            f"{len(doc.articles)} articles, {len(doc.qa_pairs)} qa pairs"
        )
    stats = corpus.stats()
    print(
        f"total: {stats['documents']} documents, {stats['articles']} articles, "
        f"{stats['qa_pairs']} qa pairs"
    )
    return 0


def cmd_index_build(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    embedder = make_embedder(args.embedder)
    config = ChunkingConfig(chunk_size=args.chunk_size, chunk_overlap=args.overlap)
    chunks = chunk_corpus(corpus, config)
    index = build_index(corpus, embedder, config)
    index.save(args.out)
    print(f"indexed {len(chunks)} chunks at dimension {index.dimension} -> {args.out}")
    return 0


def cmd_index_search(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    if args.embedder is not None:
        embedder = make_embedder(args.embedder)
    else:
        embedder = MockEmbedder(dimension=index.dimension)
    vector = embedder.embed_batch([args.query])[0]
    hits = index.search(vector, k=args.top_k)
    if not hits:
        print("no results (index is empty)")
        return 0
    for i, hit in enumerate(hits, start=1):
        print(f"{i}. score={hit.score:.4f}  {hit.chunk_id}  {hit.source_ref.label()}")
    return 0


def cmd_qa_gen(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    articles = law_articles(corpus)
    backend = make_backend(args.llm)
    config = SynthesisConfig(per_article=args.per_article)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("", encoding="utf-8")  # fresh file, appended per article

    def flush(article, pairs, failure):
        if pairs:
            append_qa_jsonl(out, pairs)
        if failure is not None:
            print(f"failed {failure.source_ref.label()}: {failure.reason}", file=sys.stderr)

    report = synthesize_qa(articles, backend, config, on_article=flush)
    print(report.summary())
    print(f"wrote {len(report.pairs)} pairs -> {out}")
    return 0


def cmd_ask(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    embedder = make_embedder(args.embedder)
    backend = make_backend(args.llm, model_limit=args.model_limit)
    answer = answer_question(
        args.question,
        index,
        embedder,
        backend,
        _engine_config(args),
        language_hint=args.language,
    )
    _print_answer(answer)
    return 0


def cmd_chat(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    embedder = make_embedder(args.embedder)
    backend = make_backend(args.llm, model_limit=args.model_limit)
    config = _engine_config(args)
    print("interactive mode; empty line or 'exit' to quit")
    while True:
        try:
            line = input("? ")
        except EOFError:
            print()
            return 0
        stripped = line.strip()
        if not stripped or stripped in ("exit", "quit"):
            return 0
        try:
            answer = answer_question(
                stripped, index, embedder, backend, config, language_hint=args.language
            )
        except LegalRagError as exc:
            print(f"error: {exc}", file=sys.stderr)
            continue
        _print_answer(answer)
        print()


def cmd_eval(args: argparse.Namespace) -> int:
    report = evaluate(load_judgments(args.judgments))
    if args.json:
        print(report.to_json())
        return 0
    print(f"n: {report.n} (right={report.n_right} related={report.n_related} wrong={report.n_wrong})")
    print(f"overall_accuracy: {report.overall_accuracy}")
    print(f"average_satisfaction: {report.average_satisfaction}")
    c = report.confusion
    print(
        f"confusion: tp={c.true_positives} fn={c.false_negatives} "
        f"fp={c.false_positives} tn={c.true_negatives}"
    )
    print(f"precision: {c.precision}")
    print(f"recall: {c.recall}")
    print(f"f1: {c.f1}")
    if c.degenerate:
        print("note: no correct answers, precision reported as 0.0 for a 0/0 ratio")
    return 0


def _merge_serve_config(args: argparse.Namespace) -> dict:
    defaults = {
        "host": "127.0.0.1",
        "port": 8000,
        "embedder": "mock",
        "llm": "mock",
        "index": None,
        "static": None,
        "top_k": DEFAULT_TOP_K,
        "max_answer_tokens": 512,
        "model_limit": MODEL_LIMIT,
    }
    from_file: dict = {}
    if args.config is not None:
        try:
            from_file = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise LegalRagError(f"cannot read config {args.config}: {exc}") from exc
        except ValueError as exc:
            raise LegalRagError(f"{args.config}: invalid JSON: {exc}") from exc
        if not isinstance(from_file, dict):
            raise LegalRagError(f"{args.config}: config must be a JSON object")
        unknown = set(from_file) - set(defaults) - {"corpus"}
        if unknown:
            raise LegalRagError(f"{args.config}: unknown config keys: {sorted(unknown)}")
    merged = dict(defaults)
    merged.update(from_file)
    # Flags beat the config file, which beats built-in defaults.
    for key in list(defaults) + ["corpus"]:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if not merged.get("corpus"):
        raise LegalRagError("serve needs --corpus (flag or config file)")
    return merged


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import ServiceState, create_app

    settings = _merge_serve_config(args)
    corpus = load_corpus(settings["corpus"])
    embedder = make_embedder(settings["embedder"])
    if settings["index"]:
        index = load_index(settings["index"])
        if index.dimension != embedder.dimension:
            raise IndexLoadFailure(
                f"index dimension {index.dimension} does not match "
                f"embedder dimension {embedder.dimension}"
            )
    else:
        index = build_index(corpus, embedder)
    backend = make_backend(settings["llm"], model_limit=settings["model_limit"])
    config = EngineConfig(
        top_k=settings["top_k"],
        max_answer_tokens=settings["max_answer_tokens"],
        model_limit=settings["model_limit"],
    )
    state = ServiceState(
        index=index,
        embedder=embedder,
        backend=backend,
        config=config,
        corpus_stats=corpus.stats(),
    )
    app = create_app(state, static_dir=settings["static"])
    host, port = settings["host"], int(settings["port"])
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
        probe.close()
    except OSError as exc:
        raise BindFailure(f"cannot bind {host}:{port}: {exc}") from exc
    print(f"serving on http://{host}:{port} ({len(index)} index entries)")
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def _add_engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--embedder", type=embedder_spec, default="mock",
                        help="mock[:DIM] or remote:MODEL[:DIM] (default: mock)")
    parser.add_argument("--llm", type=llm_spec, default="mock",
                        help="mock[:FIXTURE.json] or remote:MODEL (default: mock)")
    parser.add_argument("--top-k", type=int, default=DEFAULT_TOP_K,
                        help="context passages to retrieve (default: %(default)s)")
    parser.add_argument("--max-answer-tokens", type=int, default=512)
    parser.add_argument("--model-limit", type=int, default=MODEL_LIMIT)
    parser.add_argument("--language", choices=("ar", "en"), default=None,
                        help="force the reply language")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="legalrag",
        description="Retrieval-augmented question answering over a legal corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus directory and print its stats")
    p.add_argument("--corpus", required=True, help="corpus directory")
    p.set_defaults(func=cmd_ingest)

    p_index = sub.add_parser("index", help="build or query a vector index")
    index_sub = p_index.add_subparsers(dest="index_command", required=True)

    p = index_sub.add_parser("build", help="chunk, embed and index a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="output index file")
    p.add_argument("--embedder", type=embedder_spec, default="mock")
    p.add_argument("--chunk-size", type=int, default=600)
    p.add_argument("--overlap", type=int, default=50)
    p.set_defaults(func=cmd_index_build)

    p = index_sub.add_parser("search", help="run a similarity query against an index")
    p.add_argument("--index", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--top-k", type=int, default=DEFAULT_TOP_K)
    p.add_argument("--embedder", type=embedder_spec, default=None,
                   help="default: mock at the index dimension")
    p.set_defaults(func=cmd_index_search)

    p = sub.add_parser("qa-gen", help="generate question/answer pairs from law articles")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="output JSONL of generated pairs")
    p.add_argument("--llm", type=llm_spec, default="mock")
    p.add_argument("--per-article", type=int, default=5)
    p.set_defaults(func=cmd_qa_gen)

    p = sub.add_parser("ask", help="answer a single question")
    p.add_argument("--index", required=True)
    p.add_argument("--question", required=True)
    _add_engine_flags(p)
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("chat", help="interactive question loop")
    p.add_argument("--index", required=True)
    _add_engine_flags(p)
    p.set_defaults(func=cmd_chat)

    p = sub.add_parser("eval", help="score a judgment file")
    p.add_argument("--judgments", required=True)
    p.add_argument("--json", action="store_true", help="machine readable output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--corpus", default=None)
    p.add_argument("--index", default=None)
    p.add_argument("--config", default=None, help="JSON file of serve settings")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--static", default=None, help="directory of UI files to serve at /")
    p.add_argument("--embedder", type=embedder_spec, default=None)
    p.add_argument("--llm", type=llm_spec, default=None)
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--max-answer-tokens", type=int, default=None)
    p.add_argument("--model-limit", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except LegalRagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
