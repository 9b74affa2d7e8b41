"""Generate question/answer pairs from law articles via the chat backend.

Each article is prompted independently; parse trouble is retried a few
times, hard provider failures are recorded and skipped so one bad article
never sinks the batch.
"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .corpus import Article, Corpus, QAPair, SourceRef
from .errors import (
    BudgetExceeded,
    CountMismatch,
    EmptyField,
    MalformedProviderReply,
    NoLawArticles,
    ParseFailure,
    ProviderUnavailable,
)
from .llm import ChatMessage, CompletionRequest, complete

log = logging.getLogger(__name__)

DEFAULT_PER_ARTICLE = 5


@dataclass(frozen=True)
class SynthesisConfig:
    per_article: int = DEFAULT_PER_ARTICLE
    temperature: float = 0.7
    max_answer_tokens: int = 1024
    max_parse_retries: int = 2

    def __post_init__(self) -> None:
        if self.per_article < 1:
            raise ValueError("per_article must be positive")
        if self.max_parse_retries < 0:
            raise ValueError("max_parse_retries must be >= 0")


@dataclass(frozen=True)
class ArticleFailure:
    source_ref: SourceRef
    reason: str


@dataclass
class SynthesisReport:
    pairs: list[QAPair] = field(default_factory=list)
    failures: list[ArticleFailure] = field(default_factory=list)
    articles_attempted: int = 0

    def summary(self) -> str:
        return (
            f"{len(self.pairs)} pairs from {self.articles_attempted} articles, "
            f"{len(self.failures)} failures"
        )


def law_articles(corpus: Corpus) -> list[Article]:
    """Articles from law and bylaws documents, the synthesis source set."""
    articles = [
        art
        for doc in corpus.documents
        if doc.kind in ("law", "bylaws")
        for art in doc.articles
    ]
    if not articles:
        raise NoLawArticles("corpus has no law or bylaws articles to synthesize from")
    return articles


def build_messages(article: Article, per_article: int) -> tuple[ChatMessage, ...]:
    return (
        ChatMessage(
            role="user",
            content=(
                f"Generate {per_article} question and answer pairs "
                "about the following article of the law."
            ),
        ),
        ChatMessage(
            role="user",
            content=f"Article {article.article_number}:\n{article.text}",
        ),
        ChatMessage(
            role="user",
            content=(
                f'Return a JSON array of {per_article} objects, each with the keys '
                '"question" and "answer". Each answer must begin by citing the '
                "article number in the law."
            ),
        ),
    )


def parse_qa_payload(text: str, expected: int) -> list[tuple[str, str]]:
    """Extract [(question, answer), ...] from a model reply.

    Accepts a JSON array anywhere in the text, or a single object for
    expected == 1. Anything else is a parse-class failure.
    """
    decoder = json.JSONDecoder()

    def scan(opener: str):
        idx = text.find(opener)
        while idx != -1:
            try:
                return decoder.raw_decode(text, idx)[0]
            except ValueError:
                idx = text.find(opener, idx + 1)
        return None

    payload = scan("[")
    if payload is None:
        payload = scan("{")
    if payload is None:
        raise ParseFailure("no JSON array found in the reply")
    if isinstance(payload, dict):
        payload = [payload]
    if not isinstance(payload, list):
        raise ParseFailure(f"expected a JSON array, got {type(payload).__name__}")
    rows: list[tuple[str, str]] = []
    for i, item in enumerate(payload):
        if not isinstance(item, dict):
            raise ParseFailure(f"item {i} is not an object")
        question = item.get("question")
        answer = item.get("answer")
        if not isinstance(question, str) or not isinstance(answer, str):
            raise ParseFailure(f'item {i} is missing a string "question" or "answer"')
        if not question.strip():
            raise EmptyField(f"item {i} has a blank question")
        if not answer.strip():
            raise EmptyField(f"item {i} has a blank answer")
        rows.append((question.strip(), answer.strip()))
    if len(rows) != expected:
        raise CountMismatch(f"asked for {expected} pairs, reply contains {len(rows)}")
    return rows


def _check_citation_style(article: Article, answer: str) -> None:
    # Style rule, not a contract: answers should cite their article number.
    head = answer[:80]
    if not re.search(rf"\b{article.article_number}\b", head):
        log.warning(
            "answer for article %s does not open with its article number",
            article.article_number,
        )


def synthesize_qa(
    articles: Sequence[Article] | Iterable[Article],
    backend,
    config: SynthesisConfig | None = None,
    on_article: Callable[[Article, list[QAPair], ArticleFailure | None], None] | None = None,
) -> SynthesisReport:
    """Run the generation protocol over every article and collect the results.

    on_article fires after each article with the pairs it produced (empty on
    failure) and the failure record if there was one.
    """
    config = config or SynthesisConfig()
    report = SynthesisReport()
    for article in articles:
        report.articles_attempted += 1
        pairs, failure = _synthesize_article(article, backend, config)
        report.pairs.extend(pairs)
        if failure is not None:
            report.failures.append(failure)
        if on_article is not None:
            on_article(article, pairs, failure)
    return report


def _synthesize_article(
    article: Article, backend, config: SynthesisConfig
) -> tuple[list[QAPair], ArticleFailure | None]:
    ref = SourceRef(doc_id=article.parent_doc, article_number=article.article_number)
    request = CompletionRequest(
        messages=build_messages(article, config.per_article),
        max_answer_tokens=config.max_answer_tokens,
        temperature=config.temperature,
    )
    last_error: Exception | None = None
    for _ in range(1 + config.max_parse_retries):
        try:
            response = complete(request, backend)
            rows = parse_qa_payload(response.text, config.per_article)
        except (ParseFailure, EmptyField, CountMismatch) as exc:
            last_error = exc
            continue
        except (ProviderUnavailable, MalformedProviderReply, BudgetExceeded) as exc:
            return [], ArticleFailure(source_ref=ref, reason=str(exc))
        pairs = []
        for i, (question, answer) in enumerate(rows, start=1):
            _check_citation_style(article, answer)
            pairs.append(
                QAPair(
                    question=question,
                    answer=answer,
                    article_number=article.article_number,
                    source="generated",
                    qa_id=f"{article.parent_doc}:gen:a{article.article_number}:q{i}",
                )
            )
        return pairs, None
    return [], ArticleFailure(source_ref=ref, reason=f"parse retries exhausted: {last_error}")
