"""Scoring for judged answers: accuracy, satisfaction, confusion metrics.

A judgment labels one answered question Right, Related, or Wrong and
carries a satisfaction value locked to that label's band. Right and
Related both count as correct for accuracy; the confusion matrix treats
every reference answer as correct, so correct predictions are true
positives and wrong ones are false negatives.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyJudgments, SatisfactionOutOfBand, SchemaViolation

LABELS = ("Right", "Related", "Wrong")

# Allowed satisfaction range per label, inclusive.
SATISFACTION_BANDS = {
    "Right": (100.0, 100.0),
    "Related": (60.0, 85.0),
    "Wrong": (0.0, 0.0),
}


@dataclass(frozen=True)
class Judgment:
    question_id: str
    label: str
    satisfaction: float

    def __post_init__(self) -> None:
        if not self.question_id:
            raise SchemaViolation("judgment question_id must be non-empty")
        if self.label not in LABELS:
            raise SchemaViolation(
                f"unknown judgment label {self.label!r}, expected one of {LABELS}"
            )
        low, high = SATISFACTION_BANDS[self.label]
        if not (low <= self.satisfaction <= high):
            raise SatisfactionOutOfBand(
                f"label {self.label!r} requires satisfaction in [{low}, {high}], "
                f"got {self.satisfaction}"
            )


@dataclass(frozen=True)
class ConfusionReport:
    true_positives: int
    false_negatives: int
    false_positives: int
    true_negatives: int
    precision: float
    recall: float
    f1: float
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "true_positives": self.true_positives,
            "false_negatives": self.false_negatives,
            "false_positives": self.false_positives,
            "true_negatives": self.true_negatives,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True)
class EvaluationReport:
    n: int
    n_right: int
    n_related: int
    n_wrong: int
    overall_accuracy: float
    average_satisfaction: float
    confusion: ConfusionReport

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "n_right": self.n_right,
            "n_related": self.n_related,
            "n_wrong": self.n_wrong,
            "overall_accuracy": self.overall_accuracy,
            "average_satisfaction": self.average_satisfaction,
            "confusion": self.confusion.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def confusion_from_counts(n_correct: int, n_wrong: int) -> ConfusionReport:
    """Confusion metrics when every reference answer is taken as correct.

    There are no negative predictions to score, so false positives and
    true negatives are structurally zero; with zero correct answers the
    0/0 precision is reported as 0.0 and the report flagged degenerate.
    """
    if n_correct < 0 or n_wrong < 0:
        raise ValueError("counts must be non-negative")
    tp, fn = n_correct, n_wrong
    degenerate = tp == 0
    precision = 0.0 if degenerate else 1.0
    recall = 0.0 if tp + fn == 0 else tp / (tp + fn)
    return ConfusionReport(
        true_positives=tp,
        false_negatives=fn,
        false_positives=0,
        true_negatives=0,
        precision=precision,
        recall=recall,
        f1=f1_score(precision, recall),
        degenerate=degenerate,
    )


def evaluate(judgments: Sequence[Judgment] | Iterable[Judgment]) -> EvaluationReport:
    """Score a batch of judgments. Raises EmptyJudgments on an empty batch."""
    items = list(judgments)
    if not items:
        raise EmptyJudgments("cannot evaluate zero judgments")
    n = len(items)
    n_right = sum(1 for j in items if j.label == "Right")
    n_related = sum(1 for j in items if j.label == "Related")
    n_wrong = n - n_right - n_related
    # Multiply before dividing so exact percentages stay exact.
    accuracy = 100.0 * (n_right + n_related) / n
    satisfaction = sum(j.satisfaction for j in items) / n
    return EvaluationReport(
        n=n,
        n_right=n_right,
        n_related=n_related,
        n_wrong=n_wrong,
        overall_accuracy=accuracy,
        average_satisfaction=satisfaction,
        confusion=confusion_from_counts(n_right + n_related, n_wrong),
    )


def load_judgments(path: str | Path) -> list[Judgment]:
    """Read judgment rows from a JSONL file, one object per line."""
    path = Path(path)
    if not path.is_file():
        raise SchemaViolation(f"{path}: judgment file not found")
    judgments: list[Judgment] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                row = json.loads(line)
            except ValueError as exc:
                raise SchemaViolation(f"{where}: invalid JSON: {exc}") from exc
            if not isinstance(row, dict):
                raise SchemaViolation(f"{where}: expected a JSON object")
            question_id = row.get("question_id")
            label = row.get("label")
            satisfaction = row.get("satisfaction")
            if not isinstance(question_id, str):
                raise SchemaViolation(f"{where}: question_id must be a string")
            if not isinstance(label, str):
                raise SchemaViolation(f"{where}: label must be a string")
            if isinstance(satisfaction, bool) or not isinstance(satisfaction, (int, float)):
                raise SchemaViolation(f"{where}: satisfaction must be a number")
            try:
                judgments.append(
                    Judgment(question_id=question_id, label=label, satisfaction=float(satisfaction))
                )
            except (SchemaViolation, SatisfactionOutOfBand) as exc:
                raise type(exc)(f"{where}: {exc}") from exc
    if not judgments:
        raise EmptyJudgments(f"{path}: no judgment rows")
    return judgments
