"""Corpus loading, validation errors, flattening, and writers."""
from __future__ import annotations

import json
import unicodedata
from pathlib import Path

import pytest
from conftest import write_fixture_corpus

from legalrag.corpus import (
    Corpus,
    QAPair,
    SourceRef,
    append_qa_jsonl,
    flatten_to_passages,
    load_corpus,
    write_manifest,
)
from legalrag.errors import DuplicateId, MissingFile, SchemaViolation


class TestSourceRef:
    def test_requires_exactly_one_locator(self) -> None:
        with pytest.raises(SchemaViolation):
            SourceRef(doc_id="d")
        with pytest.raises(SchemaViolation):
            SourceRef(doc_id="d", article_number=1, qa_id="d:qa:1")

    def test_labels(self) -> None:
        assert SourceRef("law", article_number=7).label() == "law article 7"
        assert SourceRef("qa", qa_id="qa:qa:2").label() == "qa:qa:2"

    def test_json_round_trip(self) -> None:
        for ref in (SourceRef("d", article_number=3), SourceRef("d", qa_id="d:qa:1")):
            assert SourceRef.from_json(ref.to_json()) == ref


class TestLoadCorpus:
    def test_loads_fixture(self, corpus: Corpus) -> None:
        assert [d.doc_id for d in corpus.documents] == [
            "coop-bylaws",
            "counselor-qa",
            "law-20-2017",
        ]
        assert corpus.stats() == {"documents": 3, "articles": 7, "qa_pairs": 3}

    def test_articles_sorted_by_number(self, corpus: Corpus) -> None:
        law = next(d for d in corpus.documents if d.doc_id == "law-20-2017")
        assert [a.article_number for a in law.articles] == [1, 2, 3, 4, 5]

    def test_qa_ids_are_one_based(self, corpus: Corpus) -> None:
        qa_doc = next(d for d in corpus.documents if d.doc_id == "counselor-qa")
        assert [q.qa_id for q in qa_doc.qa_pairs] == [
            "counselor-qa:qa:1",
            "counselor-qa:qa:2",
            "counselor-qa:qa:3",
        ]

    def test_text_is_nfc_normalized(self, tmp_path: Path) -> None:
        root = tmp_path / "c"
        root.mkdir()
        decomposed = unicodedata.normalize("NFD", "café législatif")
        write_manifest(root, [{"doc_id": "d", "title": "T", "kind": "law", "language": "english"}])
        (root / "d.articles.jsonl").write_text(
            json.dumps({"article_number": 1, "heading": None, "text": decomposed}) + "\n",
            encoding="utf-8",
        )
        corpus = load_corpus(root)
        text = corpus.documents[0].articles[0].text
        assert text == unicodedata.normalize("NFC", text)
        assert text == "café législatif"

    def test_missing_manifest(self, tmp_path: Path) -> None:
        with pytest.raises(MissingFile):
            load_corpus(tmp_path)

    def test_manifest_bad_json(self, tmp_path: Path) -> None:
        (tmp_path / "corpus.json").write_text("{nope", encoding="utf-8")
        with pytest.raises(SchemaViolation):
            load_corpus(tmp_path)

    def test_unknown_kind(self, tmp_path: Path) -> None:
        write_manifest(tmp_path, [{"doc_id": "d", "title": "T", "kind": "novel", "language": "english"}])
        with pytest.raises(SchemaViolation, match="kind"):
            load_corpus(tmp_path)

    def test_unknown_language(self, tmp_path: Path) -> None:
        write_manifest(tmp_path, [{"doc_id": "d", "title": "T", "kind": "law", "language": "klingon"}])
        with pytest.raises(SchemaViolation, match="language"):
            load_corpus(tmp_path)

    def test_duplicate_doc_id(self, tmp_path: Path) -> None:
        row = {"doc_id": "d", "title": "T", "kind": "law", "language": "english"}
        write_manifest(tmp_path, [row, dict(row)])
        (tmp_path / "d.articles.jsonl").write_text(
            json.dumps({"article_number": 1, "heading": None, "text": "x"}) + "\n"
        )
        with pytest.raises(DuplicateId):
            load_corpus(tmp_path)

    def test_law_without_articles_file(self, tmp_path: Path) -> None:
        write_manifest(tmp_path, [{"doc_id": "d", "title": "T", "kind": "law", "language": "english"}])
        with pytest.raises(MissingFile):
            load_corpus(tmp_path)

    def test_law_with_empty_articles_file(self, tmp_path: Path) -> None:
        write_manifest(tmp_path, [{"doc_id": "d", "title": "T", "kind": "law", "language": "english"}])
        (tmp_path / "d.articles.jsonl").write_text("", encoding="utf-8")
        with pytest.raises(SchemaViolation, match="has no articles"):
            load_corpus(tmp_path)

    def test_qa_dataset_without_qa_file(self, tmp_path: Path) -> None:
        write_manifest(
            tmp_path, [{"doc_id": "d", "title": "T", "kind": "qa_dataset", "language": "english"}]
        )
        with pytest.raises(MissingFile):
            load_corpus(tmp_path)

    def test_duplicate_article_number_reports_line(self, tmp_path: Path) -> None:
        write_manifest(tmp_path, [{"doc_id": "d", "title": "T", "kind": "law", "language": "english"}])
        rows = [
            {"article_number": 1, "heading": None, "text": "a"},
            {"article_number": 1, "heading": None, "text": "b"},
        ]
        (tmp_path / "d.articles.jsonl").write_text(
            "".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8"
        )
        with pytest.raises(DuplicateId, match=r"d\.articles\.jsonl:2"):
            load_corpus(tmp_path)

    @pytest.mark.parametrize(
        "row, fragment",
        [
            ({"article_number": "1", "heading": None, "text": "a"}, "article_number"),
            ({"article_number": True, "heading": None, "text": "a"}, "article_number"),
            ({"article_number": 1, "heading": None, "text": ""}, "text"),
            ({"article_number": 1, "heading": 3, "text": "a"}, "heading"),
            ({"article_number": 1, "heading": None}, "text"),
        ],
    )
    def test_bad_article_rows(self, tmp_path: Path, row: dict, fragment: str) -> None:
        write_manifest(tmp_path, [{"doc_id": "d", "title": "T", "kind": "law", "language": "english"}])
        (tmp_path / "d.articles.jsonl").write_text(json.dumps(row) + "\n", encoding="utf-8")
        with pytest.raises(SchemaViolation, match=fragment):
            load_corpus(tmp_path)

    def test_bad_qa_source(self, tmp_path: Path) -> None:
        write_manifest(
            tmp_path, [{"doc_id": "d", "title": "T", "kind": "qa_dataset", "language": "english"}]
        )
        row = {"question": "q?", "answer": "a", "article_number": None, "source": "scraped"}
        (tmp_path / "d.qa.jsonl").write_text(json.dumps(row) + "\n", encoding="utf-8")
        with pytest.raises(SchemaViolation, match="source"):
            load_corpus(tmp_path)

    def test_error_carries_file_and_line(self, tmp_path: Path) -> None:
        write_manifest(tmp_path, [{"doc_id": "d", "title": "T", "kind": "law", "language": "english"}])
        good = json.dumps({"article_number": 1, "heading": None, "text": "a"})
        (tmp_path / "d.articles.jsonl").write_text(good + "\n{broken\n", encoding="utf-8")
        with pytest.raises(SchemaViolation, match=r"d\.articles\.jsonl:2"):
            load_corpus(tmp_path)

    def test_canonical_serialization_stable(self, corpus_dir: Path) -> None:
        assert load_corpus(corpus_dir).to_json() == load_corpus(corpus_dir).to_json()


class TestFlatten:
    def test_order_and_refs(self, corpus: Corpus) -> None:
        passages = flatten_to_passages(corpus)
        # Per document: articles first, then qa pairs; documents in corpus order.
        labels = [p.source_ref.label() for p in passages]
        assert labels[:2] == ["coop-bylaws article 1", "coop-bylaws article 2"]
        assert labels[2:5] == ["counselor-qa:qa:1", "counselor-qa:qa:2", "counselor-qa:qa:3"]
        assert labels[5:] == [f"law-20-2017 article {n}" for n in range(1, 6)]

    def test_qa_passage_text_format(self, corpus: Corpus) -> None:
        qa_passage = next(p for p in flatten_to_passages(corpus) if p.source_ref.qa_id)
        assert qa_passage.text.startswith("Q: ")
        assert "\nA: " in qa_passage.text

    def test_empty_corpus(self) -> None:
        assert flatten_to_passages(Corpus(documents=())) == []


class TestWriters:
    def test_generated_pairs_round_trip(self, tmp_path: Path) -> None:
        root = tmp_path / "gen"
        root.mkdir()
        pairs = [
            QAPair(
                question=f"Q{i}?",
                answer=f"Article {i} says so.",
                article_number=i,
                source="generated",
                qa_id=f"gen-qa:gen:a{i}:q1",
            )
            for i in range(1, 4)
        ]
        write_manifest(
            root, [{"doc_id": "gen-qa", "title": "Generated", "kind": "qa_dataset", "language": "english"}]
        )
        append_qa_jsonl(root / "gen-qa.qa.jsonl", pairs)
        corpus = load_corpus(root)
        loaded = list(corpus.iter_qa_pairs())
        assert [(q.question, q.answer, q.article_number) for q in loaded] == [
            (p.question, p.answer, p.article_number) for p in pairs
        ]
        assert all(q.source == "generated" for q in loaded)


def test_fixture_writer_is_reusable(tmp_path: Path) -> None:
    root = write_fixture_corpus(tmp_path / "c")
    assert load_corpus(root).stats()["documents"] == 3
