"""Shared fixtures: a small three-document corpus and scripted providers."""
from __future__ import annotations

import json
from pathlib import Path

import pytest

from legalrag.corpus import Corpus, load_corpus
from legalrag.embedding import MockEmbedder
from legalrag.llm import CompletionRequest, CompletionResponse, MockChatBackend
from legalrag.pipeline import build_index
from legalrag.tokenize import DEFAULT_TOKENIZER, count_tokens
from legalrag.vector_index import VectorIndex

FIXTURES = Path(__file__).parent / "fixtures"

LAW_ARTICLES = [
    {
        "article_number": 1,
        "heading": "Definitions",
        "text": (
            "In this law, a cooperative means an association of persons united "
            "voluntarily to meet common economic and social needs through a "
            "jointly owned enterprise."
        ),
    },
    {
        "article_number": 2,
        "heading": "Membership fees",
        "text": (
            "Members shall pay the membership fees fixed by the general assembly. "
            "Membership fees are due within thirty days of the start of the "
            "fiscal year, and late payment suspends voting rights."
        ),
    },
    {
        "article_number": 3,
        "heading": "General assembly",
        "text": (
            "The general assembly is the highest authority of the cooperative. "
            "It convenes at least once a year to approve the budget, elect the "
            "board of directors, and discharge the auditors."
        ),
    },
    {
        "article_number": 4,
        "heading": "Board of directors",
        "text": (
            "The board of directors manages the cooperative between assemblies. "
            "Board members serve three year terms and may be re-elected once."
        ),
    },
    {
        "article_number": 5,
        "heading": "Dissolution",
        "text": (
            "A cooperative may be dissolved by a two thirds majority of the "
            "general assembly or by a court order when its capital falls below "
            "the legal minimum."
        ),
    },
]

BYLAW_ARTICLES = [
    {
        "article_number": 1,
        "heading": None,
        "text": (
            "يحدد مجلس الإدارة مواعيد اجتماعاته الدورية ويجتمع مرة كل شهر على الأقل "
            "بدعوة من رئيسه أو من ثلث أعضائه."
        ),
    },
    {
        "article_number": 2,
        "heading": "Housing allocation",
        "text": (
            "Housing units are allocated to members by seniority of membership; "
            "ties are resolved by drawing lots before the general assembly."
        ),
    },
]

HUMAN_QA = [
    {
        "question": "How often must the board of directors meet?",
        "answer": "The board meets at least once a month under the bylaws.",
        "article_number": 1,
        "source": "human",
    },
    {
        "question": "When are membership fees due?",
        "answer": "Within thirty days of the start of the fiscal year, per Article 2.",
        "article_number": 2,
        "source": "human",
    },
    {
        "question": "Who elects the board of directors?",
        "answer": "The general assembly elects the board, per Article 3.",
        "article_number": None,
        "source": "human",
    },
]


def write_fixture_corpus(root: Path) -> Path:
    """Materialize the three-document corpus into a directory."""
    root.mkdir(parents=True, exist_ok=True)
    manifest = {
        "documents": [
            {
                "doc_id": "law-20-2017",
                "title": "Law No. 20 of 2017 on Cooperatives",
                "kind": "law",
                "language": "english",
            },
            {
                "doc_id": "coop-bylaws",
                "title": "Cooperatives Bylaws",
                "kind": "bylaws",
                "language": "mixed",
            },
            {
                "doc_id": "counselor-qa",
                "title": "Counselor Questions and Answers",
                "kind": "qa_dataset",
                "language": "english",
            },
        ]
    }
    (root / "corpus.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False), encoding="utf-8"
    )
    _write_jsonl(root / "law-20-2017.articles.jsonl", LAW_ARTICLES)
    _write_jsonl(root / "coop-bylaws.articles.jsonl", BYLAW_ARTICLES)
    _write_jsonl(root / "counselor-qa.qa.jsonl", HUMAN_QA)
    return root


def _write_jsonl(path: Path, rows: list[dict]) -> None:
    path.write_text(
        "".join(json.dumps(row, ensure_ascii=False) + "\n" for row in rows),
        encoding="utf-8",
    )


class RecordingBackend:
    """Wraps a chat backend and keeps every request it sees."""

    def __init__(self, inner: MockChatBackend | None = None):
        self.inner = inner or MockChatBackend()
        self.requests: list[CompletionRequest] = []

    @property
    def tokenizer(self):
        return self.inner.tokenizer

    @property
    def model_limit(self) -> int:
        return self.inner.model_limit

    def send(self, request: CompletionRequest) -> CompletionResponse:
        self.requests.append(request)
        return self.inner.send(request)


class FlakyParseBackend:
    """Returns garbage for the first `bad_sends` calls, then a valid payload."""

    def __init__(self, good_reply: str, bad_sends: int = 1, model_limit: int = 8192):
        self.good_reply = good_reply
        self.bad_sends = bad_sends
        self.calls = 0
        self.tokenizer = DEFAULT_TOKENIZER
        self.model_limit = model_limit

    def send(self, request: CompletionRequest) -> CompletionResponse:
        self.calls += 1
        text = "no json here" if self.calls <= self.bad_sends else self.good_reply
        return CompletionResponse(
            text=text,
            prompt_tokens=sum(count_tokens(m.content) for m in request.messages),
            completion_tokens=count_tokens(text),
        )


@pytest.fixture
def corpus_dir(tmp_path: Path) -> Path:
    return write_fixture_corpus(tmp_path / "corpus")


@pytest.fixture
def corpus(corpus_dir: Path) -> Corpus:
    return load_corpus(corpus_dir)


@pytest.fixture
def embedder() -> MockEmbedder:
    return MockEmbedder()


@pytest.fixture
def backend() -> MockChatBackend:
    return MockChatBackend.from_file(FIXTURES / "mock_llm.json")


@pytest.fixture
def index(corpus, embedder) -> VectorIndex:
    return build_index(corpus, embedder)
