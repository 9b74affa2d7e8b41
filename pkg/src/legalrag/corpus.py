"""Corpus loading, validation, and flattening into indexable passages.

A corpus directory holds a `corpus.json` manifest plus one or two JSONL
files per document: `<doc_id>.articles.jsonl` for article-structured legal
text and `<doc_id>.qa.jsonl` for question/answer datasets. Text is kept as
Unicode code points with NFC normalization only, so Arabic content round
trips byte-for-byte.
"""
from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DuplicateId, MissingFile, SchemaViolation

DOCUMENT_KINDS = frozenset({"law", "bylaws", "qa_dataset"})
LANGUAGES = frozenset({"arabic", "english", "mixed"})
QA_SOURCES = frozenset({"human", "generated"})

MANIFEST_NAME = "corpus.json"


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


@dataclass(frozen=True)
class SourceRef:
    """Provenance of a passage: an article or a Q&A pair inside a document."""

    doc_id: str
    article_number: int | None = None
    qa_id: str | None = None

    def __post_init__(self) -> None:
        if (self.article_number is None) == (self.qa_id is None):
            raise SchemaViolation(
                "SourceRef needs exactly one of article_number or qa_id "
                f"(doc_id={self.doc_id!r})"
            )

    def label(self) -> str:
        if self.article_number is not None:
            return f"{self.doc_id} article {self.article_number}"
        return self.qa_id  # qa ids already carry the doc id

    def to_json(self) -> str:
        return json.dumps(
            {"doc_id": self.doc_id, "article_number": self.article_number, "qa_id": self.qa_id},
            sort_keys=True,
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, raw: str) -> "SourceRef":
        data = json.loads(raw)
        return cls(
            doc_id=data["doc_id"],
            article_number=data.get("article_number"),
            qa_id=data.get("qa_id"),
        )


@dataclass(frozen=True)
class Article:
    article_number: int
    heading: str | None
    text: str
    parent_doc: str


@dataclass(frozen=True)
class QAPair:
    question: str
    answer: str
    article_number: int | None
    source: str
    qa_id: str


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    kind: str
    language: str
    articles: tuple[Article, ...] = ()
    qa_pairs: tuple[QAPair, ...] = ()


@dataclass(frozen=True)
class Passage:
    source_ref: SourceRef
    text: str


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...] = ()

    def iter_articles(self):
        for doc in self.documents:
            yield from doc.articles

    def iter_qa_pairs(self):
        for doc in self.documents:
            yield from doc.qa_pairs

    def stats(self) -> dict[str, int]:
        return {
            "documents": len(self.documents),
            "articles": sum(len(d.articles) for d in self.documents),
            "qa_pairs": sum(len(d.qa_pairs) for d in self.documents),
        }

    def to_json(self) -> str:
        """Canonical serialization; equal corpora serialize byte-equal."""
        payload = [
            {
                "doc_id": d.doc_id,
                "title": d.title,
                "kind": d.kind,
                "language": d.language,
                "articles": [
                    {
                        "article_number": a.article_number,
                        "heading": a.heading,
                        "text": a.text,
                    }
                    for a in d.articles
                ],
                "qa_pairs": [
                    {
                        "qa_id": q.qa_id,
                        "question": q.question,
                        "answer": q.answer,
                        "article_number": q.article_number,
                        "source": q.source,
                    }
                    for q in d.qa_pairs
                ],
            }
            for d in self.documents
        ]
        return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def _read_jsonl(path: Path) -> list[tuple[int, dict]]:
    rows: list[tuple[int, dict]] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaViolation(f"{path.name}:{lineno}: invalid JSON ({exc})") from exc
            if not isinstance(obj, dict):
                raise SchemaViolation(f"{path.name}:{lineno}: expected an object")
            rows.append((lineno, obj))
    return rows


def _load_articles(path: Path, doc_id: str) -> tuple[Article, ...]:
    articles: list[Article] = []
    seen: set[int] = set()
    for lineno, obj in _read_jsonl(path):
        where = f"{path.name}:{lineno}"
        number = obj.get("article_number")
        if not isinstance(number, int) or isinstance(number, bool) or number < 1:
            raise SchemaViolation(f"{where}: field 'article_number' must be a positive integer")
        heading = obj.get("heading")
        if heading is not None and not isinstance(heading, str):
            raise SchemaViolation(f"{where}: field 'heading' must be a string or null")
        text = obj.get("text")
        if not isinstance(text, str) or not text.strip():
            raise SchemaViolation(f"{where}: field 'text' must be a non-empty string")
        if number in seen:
            raise DuplicateId(f"{where}: duplicate article_number {number} in document '{doc_id}'")
        seen.add(number)
        articles.append(
            Article(
                article_number=number,
                heading=_nfc(heading) if heading else None,
                text=_nfc(text),
                parent_doc=doc_id,
            )
        )
    articles.sort(key=lambda a: a.article_number)
    return tuple(articles)


def _load_qa_pairs(path: Path, doc_id: str) -> tuple[QAPair, ...]:
    pairs: list[QAPair] = []
    for lineno, obj in _read_jsonl(path):
        where = f"{path.name}:{lineno}"
        question = obj.get("question")
        answer = obj.get("answer")
        if not isinstance(question, str) or not question.strip():
            raise SchemaViolation(f"{where}: field 'question' must be a non-empty string")
        if not isinstance(answer, str) or not answer.strip():
            raise SchemaViolation(f"{where}: field 'answer' must be a non-empty string")
        source = obj.get("source")
        if source not in QA_SOURCES:
            raise SchemaViolation(f"{where}: field 'source' must be one of {sorted(QA_SOURCES)}")
        number = obj.get("article_number")
        if number is not None and (not isinstance(number, int) or isinstance(number, bool) or number < 1):
            raise SchemaViolation(f"{where}: field 'article_number' must be a positive integer or null")
        if source == "generated" and number is None:
            raise SchemaViolation(
                f"{where}: generated pairs must carry the article_number they were generated from"
            )
        pairs.append(
            QAPair(
                question=_nfc(question),
                answer=_nfc(answer),
                article_number=number,
                source=source,
                qa_id=f"{doc_id}:qa:{len(pairs) + 1}",
            )
        )
    return tuple(pairs)


def load_corpus(path: str | Path) -> Corpus:
    """Load and validate a corpus directory; ordering is (doc_id, article_number)."""
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not root.is_dir():
        raise MissingFile(f"corpus directory not found: {root}")
    if not manifest_path.is_file():
        raise MissingFile(f"manifest not found: {manifest_path}")

    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"{MANIFEST_NAME}: invalid JSON ({exc})") from exc
    entries = manifest.get("documents") if isinstance(manifest, dict) else None
    if not isinstance(entries, list):
        raise SchemaViolation(f"{MANIFEST_NAME}: expected an object with a 'documents' list")

    documents: list[Document] = []
    seen_ids: set[str] = set()
    for i, entry in enumerate(entries):
        where = f"{MANIFEST_NAME}: documents[{i}]"
        if not isinstance(entry, dict):
            raise SchemaViolation(f"{where}: expected an object")
        doc_id = entry.get("doc_id")
        if not isinstance(doc_id, str) or not doc_id.strip():
            raise SchemaViolation(f"{where}: field 'doc_id' must be a non-empty string")
        if doc_id in seen_ids:
            raise DuplicateId(f"{where}: duplicate doc_id '{doc_id}'")
        seen_ids.add(doc_id)
        title = entry.get("title")
        if not isinstance(title, str):
            raise SchemaViolation(f"{where}: field 'title' must be a string")
        kind = entry.get("kind")
        if kind not in DOCUMENT_KINDS:
            raise SchemaViolation(f"{where}: field 'kind' must be one of {sorted(DOCUMENT_KINDS)}")
        language = entry.get("language")
        if language not in LANGUAGES:
            raise SchemaViolation(f"{where}: field 'language' must be one of {sorted(LANGUAGES)}")

        articles_path = root / f"{doc_id}.articles.jsonl"
        qa_path = root / f"{doc_id}.qa.jsonl"
        articles: tuple[Article, ...] = ()
        qa_pairs: tuple[QAPair, ...] = ()
        if articles_path.is_file():
            articles = _load_articles(articles_path, doc_id)
        if qa_path.is_file():
            qa_pairs = _load_qa_pairs(qa_path, doc_id)

        if kind in ("law", "bylaws"):
            if not articles_path.is_file():
                raise MissingFile(f"document '{doc_id}' (kind={kind}) has no {articles_path.name}")
            if not articles:
                raise SchemaViolation(f"{articles_path.name}: document '{doc_id}' has no articles")
        if kind == "qa_dataset" and not qa_path.is_file():
            raise MissingFile(f"document '{doc_id}' (kind=qa_dataset) has no {qa_path.name}")

        documents.append(
            Document(
                doc_id=doc_id,
                title=_nfc(title),
                kind=kind,
                language=language,
                articles=articles,
                qa_pairs=qa_pairs,
            )
        )

    documents.sort(key=lambda d: d.doc_id)
    return Corpus(documents=tuple(documents))


def flatten_to_passages(corpus: Corpus) -> list[Passage]:
    """One passage per article plus one per Q&A pair, in corpus order."""
    passages: list[Passage] = []
    for doc in corpus.documents:
        for article in doc.articles:
            passages.append(
                Passage(
                    source_ref=SourceRef(doc_id=doc.doc_id, article_number=article.article_number),
                    text=article.text,
                )
            )
        for pair in doc.qa_pairs:
            passages.append(
                Passage(
                    source_ref=SourceRef(doc_id=doc.doc_id, qa_id=pair.qa_id),
                    text=f"Q: {pair.question}\nA: {pair.answer}",
                )
            )
    return passages


# -- writers (fixtures, qa-gen output) ----------------------------------------

def write_manifest(root: str | Path, documents: list[dict]) -> Path:
    path = Path(root) / MANIFEST_NAME
    path.write_text(
        json.dumps({"documents": documents}, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return path


def write_articles_jsonl(path: str | Path, articles: list[dict]) -> Path:
    out = Path(path)
    with out.open("w", encoding="utf-8") as fh:
        for article in articles:
            fh.write(json.dumps(article, ensure_ascii=False) + "\n")
    return out


def qa_pair_to_row(pair: QAPair) -> dict:
    return {
        "question": pair.question,
        "answer": pair.answer,
        "article_number": pair.article_number,
        "source": pair.source,
    }


def append_qa_jsonl(path: str | Path, pairs: list[QAPair]) -> Path:
    out = Path(path)
    with out.open("a", encoding="utf-8") as fh:
        for pair in pairs:
            fh.write(json.dumps(qa_pair_to_row(pair), ensure_ascii=False) + "\n")
    return out
