"""Decoders turning gap score matrices into valid label sequences.

Ties between sequences of equal total score go to the lexicographically
smaller sequence of label indices, for every decoder.
"""

from __future__ import annotations

from typing import IO, NamedTuple

import numpy as np

from .choices import DecoderName
from .corpus import SegmentedSentence, from_gap_labels
from .exceptions import ConfigError, ContractError, DecodeError
from .numeric import Tensor
from .scorer import greedy_indices
from .tagsets import TagSetSpec


class BeamHypothesis(NamedTuple):
    score: float
    labels: tuple[int, ...]

    def better_than(self, other: "BeamHypothesis") -> bool:
        return self.score > other.score or (self.score == other.score and self.labels < other.labels)


def _matrix(scores: Tensor | np.ndarray, tagset: TagSetSpec) -> np.ndarray:
    matrix = scores.data if isinstance(scores, Tensor) else np.asarray(scores, dtype=np.float64)
    if matrix.ndim != 2 or (matrix.shape[0] and matrix.shape[1] != tagset.size):
        raise ContractError(f"score matrix {matrix.shape} does not fit tag set {tagset.name}")
    return matrix


def completable(tagset: TagSetSpec, length: int) -> np.ndarray:
    """``out[i, l]`` is True when label l at gap i can be extended to a valid ending."""

    reachable = np.zeros((length, tagset.size), dtype=bool)
    if length == 0:
        return reachable
    reachable[-1] = tagset.end_mask
    for gap in range(length - 2, -1, -1):
        reachable[gap] = (tagset.transition_mask & reachable[gap + 1][None, :]).any(axis=1)
    return reachable


def sequence_score(scores: Tensor | np.ndarray, labels: tuple[int, ...] | np.ndarray) -> float:
    matrix = scores.data if isinstance(scores, Tensor) else np.asarray(scores)
    return float(sum(matrix[gap, label] for gap, label in enumerate(labels)))


def beam_decode(
    scores: Tensor | np.ndarray, tagset: TagSetSpec, width: int = 10
) -> tuple[str, ...]:
    """Constrained beam search over gap labels.

    Only transition-legal extensions are made, and hypotheses that can no
    longer reach an allowed final label are dropped. Hypotheses ending in the
    same label are recombined (the weaker one can never win under
    first-order constraints), so a width of at least the label count is exact.

    Raises:
        ConfigError: ``width`` is smaller than 1.
        DecodeError: No legal complete sequence exists.
    """

    if width < 1:
        raise ConfigError(f"beam width must be at least 1, got {width}")
    matrix = _matrix(scores, tagset)
    length = matrix.shape[0]
    if length == 0:
        return ()

    reachable = completable(tagset, length)
    start = tuple(int(k) for k in np.flatnonzero(tagset.start_mask))
    beam = [BeamHypothesis(0.0, ())]

    for gap in range(length):
        row = matrix[gap]
        merged: dict[int, BeamHypothesis] = {}
        for hypothesis in beam:
            options = start if gap == 0 else tagset.successor_indices[hypothesis.labels[-1]]
            for label in options:
                if not reachable[gap, label]:
                    continue
                candidate = BeamHypothesis(hypothesis.score + row[label], hypothesis.labels + (label,))
                best = merged.get(label)
                if best is None or candidate.better_than(best):
                    merged[label] = candidate
        beam = sorted(merged.values(), key=lambda h: (-h.score, h.labels))[:width]
        if not beam:
            raise DecodeError(f"no legal label sequence for tag set {tagset.name} at gap {gap + 1}")

    return tagset.labels_of(beam[0].labels)


def viterbi_decode(scores: Tensor | np.ndarray, tagset: TagSetSpec) -> tuple[str, ...]:
    """Exact best valid label sequence by dynamic programming.

    The table is filled from the last gap backwards (best completion per
    label), then the path is read forwards taking the lowest index among
    equally good labels, which yields the lexicographically smallest optimum.
    """

    matrix = _matrix(scores, tagset)
    length = matrix.shape[0]
    if length == 0:
        return ()

    suffix = np.full((length, tagset.size), -np.inf)
    suffix[-1] = np.where(tagset.end_mask, matrix[-1], -np.inf)
    for gap in range(length - 2, -1, -1):
        following = np.where(tagset.transition_mask, suffix[gap + 1][None, :], -np.inf).max(axis=1)
        suffix[gap] = matrix[gap] + following

    first = np.where(tagset.start_mask, suffix[0], -np.inf)
    if not np.isfinite(first.max()):
        raise DecodeError(f"no legal label sequence for tag set {tagset.name}")

    path = [int(np.argmax(first))]
    for gap in range(1, length):
        options = np.where(tagset.transition_mask[path[-1]], suffix[gap], -np.inf)
        path.append(int(np.argmax(options)))
    return tagset.labels_of(path)


def decode(
    scores: Tensor | np.ndarray,
    tagset: TagSetSpec,
    decoder: str = DecoderName.BEAM,
    width: int = 10,
) -> tuple[str, ...]:
    """Dispatches to a decoder; the {0,1} tag set always takes the greedy path."""

    if tagset.unconstrained:
        return tagset.labels_of(greedy_indices(_matrix(scores, tagset)))
    if decoder == DecoderName.GREEDY:
        raise ConfigError(f"greedy decoding is only valid with tag set 01, not {tagset.name}")
    if decoder == DecoderName.BEAM:
        return beam_decode(scores, tagset, width)
    if decoder == DecoderName.VITERBI:
        return viterbi_decode(scores, tagset)
    raise ConfigError(f"unknown decoder '{decoder}'")


def segment(
    characters: str,
    scores: Tensor | np.ndarray,
    tagset: TagSetSpec,
    decoder: str = DecoderName.BEAM,
    width: int = 10,
) -> SegmentedSentence:
    if len(characters) == 1:
        return SegmentedSentence(characters, (1,))
    matrix = _matrix(scores, tagset)
    if matrix.shape[0] != len(characters) - 1:
        raise ContractError(
            f"{matrix.shape[0]} score rows for a sentence of {len(characters)} characters"
        )
    return from_gap_labels(characters, decode(matrix, tagset, decoder, width), tagset)


def dump_scores(scores: Tensor | np.ndarray, tagset: TagSetSpec, stream: IO[str]) -> None:
    """Writes a score matrix as tab-separated text: gap index, then one column per label."""

    matrix = _matrix(scores, tagset)
    stream.write("gap\t" + "\t".join(tagset.labels) + "\n")
    for gap, row in enumerate(matrix, start=1):
        stream.write(f"{gap}\t" + "\t".join(repr(float(value)) for value in row) + "\n")
