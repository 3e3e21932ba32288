"""Inference timing: encode, score and decode phases over short and long sentences.

Only model work is timed; reading input and loading the checkpoint are not.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import pandas as pd

from .choices import DecoderName
from .model import SegmenterModel

PHASES = ("encode", "score", "decode", "total")


@dataclass(frozen=True)
class BenchReport:
    """Median timings per split and phase.

    ``frame`` has one row per (split, phase) with the median over repeats of
    the summed seconds, per-sentence and per-character averages, and the
    median end-to-end seconds of a single sentence.
    """

    frame: pd.DataFrame
    repeat: int
    decoder: str
    tagset: str
    throughput: float | None = None

    def value(self, split: str, phase: str, column: str = "seconds") -> float:
        row = self.frame[(self.frame["split"] == split) & (self.frame["phase"] == phase)]
        return float(row[column].iloc[0])


def split_of(text: str, long_threshold: int) -> str:
    return "long" if len(text) > long_threshold else "short"


def _time_sentence(model: SegmenterModel, text: str, decoder: str, width: int) -> dict[str, float]:
    start = time.perf_counter()
    encoded = model.encode(text)
    encoded_at = time.perf_counter()
    scores = model.score(encoded)
    scored_at = time.perf_counter()
    if len(text) > 1:
        model.decode(scores, decoder, width)
    decoded_at = time.perf_counter()
    return {
        "encode": encoded_at - start,
        "score": scored_at - encoded_at,
        "decode": decoded_at - scored_at,
        "total": decoded_at - start,
    }


def bench(
    model: SegmenterModel,
    sentences: Sequence[str],
    repeat: int = 1,
    *,
    decoder: str | None = None,
    width: int = 10,
    long_threshold: int = 30,
    parallel: bool = False,
    workers: int | None = None,
) -> BenchReport:
    """Times inference over ``sentences`` ``repeat`` times.

    Args:
        model (SegmenterModel): Model to time; it is not modified.
        sentences: Unsegmented, non-empty sentences.
        repeat (int): Number of passes; medians are taken across passes.
        decoder (str | None): Decoder for BE/BEMS; 01 always decodes greedily.
        width (int): Beam width.
        long_threshold (int): Sentences longer than this many characters count as long.
        parallel (bool): Measure end-to-end throughput across threads instead of per-phase timings.
        workers (int | None): Thread count for parallel mode.

    Returns:
        BenchReport: Per-split, per-phase medians (and throughput in parallel mode).
    """

    if repeat < 1:
        raise ValueError(f"repeat must be at least 1, got {repeat}")
    sentences = [text for text in sentences if text]
    decoder = decoder or (DecoderName.GREEDY if model.tagset.unconstrained else DecoderName.BEAM)

    if parallel:
        return _bench_parallel(model, sentences, repeat, decoder, width, workers)

    records = []
    for run in range(repeat):
        for index, text in enumerate(sentences):
            timings = _time_sentence(model, text, decoder, width)
            for phase, seconds in timings.items():
                records.append(
                    {
                        "run": run,
                        "sentence": index,
                        "split": split_of(text, long_threshold),
                        "characters": len(text),
                        "phase": phase,
                        "seconds": seconds,
                    }
                )
    samples = pd.DataFrame(
        records, columns=["run", "sentence", "split", "characters", "phase", "seconds"]
    )
    everything = samples.assign(split="all")
    samples = pd.concat([samples, everything], ignore_index=True)

    rows = []
    for (split, phase), group in samples.groupby(["split", "phase"], sort=True):
        per_run = group.groupby("run").agg(seconds=("seconds", "sum"), characters=("characters", "sum"))
        count = int(group["sentence"].nunique())
        seconds = float(per_run["seconds"].median())
        characters = int(per_run["characters"].iloc[0])
        rows.append(
            {
                "split": split,
                "phase": phase,
                "sentences": count,
                "characters": characters,
                "seconds": seconds,
                "seconds_per_sentence": seconds / count,
                "seconds_per_character": seconds / characters,
                "median_sentence_seconds": float(group["seconds"].median()),
            }
        )
    frame = pd.DataFrame(rows)
    return BenchReport(frame=frame, repeat=repeat, decoder=str(decoder), tagset=model.tagset.name)


def _bench_parallel(
    model: SegmenterModel,
    sentences: list[str],
    repeat: int,
    decoder: str,
    width: int,
    workers: int | None,
) -> BenchReport:
    durations = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for _ in range(repeat):
            start = time.perf_counter()
            list(pool.map(lambda text: model.segment(text, decoder, width), sentences))
            durations.append(time.perf_counter() - start)
    seconds = float(pd.Series(durations).median())
    characters = sum(len(text) for text in sentences)
    frame = pd.DataFrame(
        [
            {
                "split": "all",
                "phase": "total",
                "sentences": len(sentences),
                "characters": characters,
                "seconds": seconds,
                "seconds_per_sentence": seconds / max(len(sentences), 1),
                "seconds_per_character": seconds / max(characters, 1),
                "median_sentence_seconds": float("nan"),
            }
        ]
    )
    throughput = len(sentences) / seconds if seconds > 0 else float("inf")
    return BenchReport(
        frame=frame, repeat=repeat, decoder=str(decoder), tagset=model.tagset.name, throughput=throughput
    )


def format_bench(report: BenchReport) -> str:
    return report.frame.to_string(index=False, float_format=lambda v: f"{v:.6g}")


def bench_lines(report: BenchReport) -> list[str]:
    """Machine-readable lines ``metric=<phase>_<column> bucket=<split> value=<value>``."""

    lines = []
    for row in report.frame.to_dict("records"):
        for column in ("seconds", "seconds_per_sentence", "seconds_per_character", "median_sentence_seconds"):
            lines.append(f"metric={row['phase']}_{column} bucket={row['split']} value={row[column]:.9g}")
    if report.throughput is not None:
        lines.append(f"metric=sentences_per_second bucket=all value={report.throughput:.9g}")
    return lines
