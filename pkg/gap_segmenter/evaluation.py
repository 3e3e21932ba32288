"""Word-level precision/recall/F1, length buckets and the long-sentence hybrid combiner."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from .corpus import SegmentedSentence
from .exceptions import AlignmentError

LENGTH_BUCKETS: tuple[tuple[str, int, float], ...] = (
    ("0-30", 0, 30),
    ("31-60", 31, 60),
    ("61-90", 61, 90),
    ("91-120", 91, 120),
    ("121-inf", 121, np.inf),
)


@dataclass(frozen=True)
class EvalReport:
    """Micro-averaged word-match counts and the scores derived from them."""

    gold_words: int
    predicted_words: int
    correct_words: int
    sentences: int = 0

    @property
    def precision(self) -> float:
        return self.correct_words / self.predicted_words if self.predicted_words else 0.0

    @property
    def recall(self) -> float:
        return self.correct_words / self.gold_words if self.gold_words else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _check_aligned(gold: Sequence[SegmentedSentence], pred: Sequence[SegmentedSentence]) -> None:
    if len(gold) != len(pred):
        raise AlignmentError(
            f"gold has {len(gold)} sentences, prediction has {len(pred)}", min(len(gold), len(pred)) + 1
        )
    for k, (g, p) in enumerate(zip(gold, pred), start=1):
        if g.characters != p.characters:
            raise AlignmentError("characters differ between gold and prediction", k)


def sentence_counts(
    gold: Sequence[SegmentedSentence], pred: Sequence[SegmentedSentence]
) -> pd.DataFrame:
    """One row per sentence: length, gold/predicted/correct word counts."""

    _check_aligned(gold, pred)
    rows = [
        {
            "length": len(g),
            "gold": len(g.boundaries),
            "predicted": len(p.boundaries),
            "correct": len(g.spans() & p.spans()),
        }
        for g, p in zip(gold, pred)
    ]
    return pd.DataFrame(rows, columns=["length", "gold", "predicted", "correct"])


def _report(frame: pd.DataFrame) -> EvalReport:
    return EvalReport(
        gold_words=int(frame["gold"].sum()),
        predicted_words=int(frame["predicted"].sum()),
        correct_words=int(frame["correct"].sum()),
        sentences=len(frame),
    )


def f1(gold: Sequence[SegmentedSentence], pred: Sequence[SegmentedSentence]) -> EvalReport:
    return _report(sentence_counts(gold, pred))


def bucket_of(length: int, buckets=LENGTH_BUCKETS) -> str:
    for name, low, high in buckets:
        if low <= length <= high:
            return name
    raise ValueError(f"length {length} falls outside every bucket")


def bucketed_f1(
    gold: Sequence[SegmentedSentence],
    pred: Sequence[SegmentedSentence],
    buckets=LENGTH_BUCKETS,
) -> dict[str, EvalReport]:
    """Reports per character-length bucket; every bucket is present, empty ones with zero counts."""

    frame = sentence_counts(gold, pred)
    frame["bucket"] = [bucket_of(length, buckets) for length in frame["length"]]
    return {name: _report(frame[frame["bucket"] == name]) for name, _, _ in buckets}


def hybrid_combine(
    base: Sequence[SegmentedSentence],
    ours: Sequence[SegmentedSentence],
    threshold: int = 90,
) -> list[SegmentedSentence]:
    """Takes ``ours`` for sentences longer than ``threshold`` characters and ``base`` otherwise."""

    _check_aligned(base, ours)
    return [o if len(o) > threshold else b for b, o in zip(base, ours)]


# ---------------------------------------------------------------------------
# output


def report_frame(report: EvalReport, buckets: dict[str, EvalReport] | None = None) -> pd.DataFrame:
    entries = [("all", report)] + list((buckets or {}).items())
    return pd.DataFrame(
        [
            {
                "bucket": name,
                "sentences": item.sentences,
                "gold": item.gold_words,
                "predicted": item.predicted_words,
                "correct": item.correct_words,
                "precision": item.precision,
                "recall": item.recall,
                "f1": item.f1,
            }
            for name, item in entries
        ]
    )


def format_report(report: EvalReport, buckets: dict[str, EvalReport] | None = None) -> str:
    return report_frame(report, buckets).to_string(index=False, float_format=lambda v: f"{v:.4f}")


def report_lines(report: EvalReport, buckets: dict[str, EvalReport] | None = None) -> list[str]:
    """Machine-readable lines ``metric=<name> bucket=<bucket> value=<value>``."""

    lines = []
    for row in report_frame(report, buckets).to_dict("records"):
        for metric in ("sentences", "gold", "predicted", "correct"):
            lines.append(f"metric={metric} bucket={row['bucket']} value={int(row[metric])}")
        for metric in ("precision", "recall", "f1"):
            lines.append(f"metric={metric} bucket={row['bucket']} value={row[metric]:.6f}")
    return lines


def align_lines(
    gold_lines: Sequence[SegmentedSentence | None],
    pred_lines: Sequence[SegmentedSentence | None],
) -> tuple[list[SegmentedSentence], list[SegmentedSentence]]:
    """Pairs the non-empty lines of two files of the same text.

    Empty lines must coincide; errors carry the 1-based line number.
    """

    if len(gold_lines) != len(pred_lines):
        raise AlignmentError(
            f"files have {len(gold_lines)} and {len(pred_lines)} lines",
            min(len(gold_lines), len(pred_lines)) + 1,
            unit="line",
        )
    gold, pred = [], []
    for line_number, (g, p) in enumerate(zip(gold_lines, pred_lines), start=1):
        if g is None and p is None:
            continue
        if g is None or p is None or g.characters != p.characters:
            raise AlignmentError("characters differ between the two files", line_number, unit="line")
        gold.append(g)
        pred.append(p)
    return gold, pred
