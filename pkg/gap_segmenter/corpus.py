"""Segmented corpora, vocabulary, gap labels and pretrained embeddings."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .exceptions import ConfigError, ContractError, CorpusError, DecodeConsistencyError
from .tagsets import TagSetSpec, validate

logger = logging.getLogger(__name__)

WORD_SEPARATORS = frozenset({" ", "\u3000"})


@dataclass(frozen=True)
class SegmentedSentence:
    """A character sequence with its word-end positions.

    Attributes:
        characters (str): The sentence, without separators.
        boundaries (tuple[int, ...]): Strictly increasing word-end positions, the last equal to n.
    """

    characters: str
    boundaries: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.characters)
        if n == 0:
            raise ContractError("a sentence needs at least one character")
        if not self.boundaries or self.boundaries[-1] != n:
            raise ContractError(f"boundaries {self.boundaries} must end at {n}")
        previous = 0
        for boundary in self.boundaries:
            if boundary <= previous:
                raise ContractError(f"boundaries {self.boundaries} are not strictly increasing")
            previous = boundary

    @classmethod
    def from_words(cls, words: Sequence[str]) -> "SegmentedSentence":
        boundaries = []
        end = 0
        for word in words:
            end += len(word)
            boundaries.append(end)
        return cls("".join(words), tuple(boundaries))

    def __len__(self) -> int:
        return len(self.characters)

    @property
    def words(self) -> list[str]:
        starts = (0,) + self.boundaries[:-1]
        return [self.characters[s:e] for s, e in zip(starts, self.boundaries)]

    def spans(self) -> set[tuple[int, int]]:
        starts = (0,) + self.boundaries[:-1]
        return set(zip(starts, self.boundaries))

    def render(self) -> str:
        return " ".join(self.words)


# ---------------------------------------------------------------------------
# reading and writing


def _decode(line: bytes | str, line_number: int) -> str:
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorpusError(f"invalid UTF-8 ({exc.reason})", line_number) from None
    if line_number == 1:
        line = line.lstrip("\ufeff")
    return line


def parse_line(line: str) -> SegmentedSentence | None:
    """Parses one corpus line into a sentence; returns None for empty lines.

    ASCII and full-width spaces separate words; any other whitespace is dropped.
    """

    words: list[str] = []
    current: list[str] = []
    for char in line:
        if char in WORD_SEPARATORS:
            if current:
                words.append("".join(current))
                current = []
        elif not char.isspace():
            current.append(char)
    if current:
        words.append("".join(current))
    return SegmentedSentence.from_words(words) if words else None


def parse_lines(stream: Iterable[bytes | str]) -> list[SegmentedSentence | None]:
    """Parses every line, keeping None for empty ones so line numbers stay aligned."""

    return [parse_line(_decode(raw, line_number)) for line_number, raw in enumerate(stream, start=1)]


def parse_corpus(stream: Iterable[bytes | str]) -> list[SegmentedSentence]:
    return [sentence for sentence in parse_lines(stream) if sentence is not None]


def render_corpus(sentences: Iterable[SegmentedSentence]) -> str:
    return "".join(sentence.render() + "\n" for sentence in sentences)


def read_raw_lines(stream: Iterable[bytes | str]) -> list[str]:
    """Reads unsegmented input, one sentence per line, whitespace removed.

    Empty lines are kept as empty strings so output can mirror the input line for line.
    """

    return [
        "".join(char for char in _decode(raw, line_number) if not char.isspace())
        for line_number, raw in enumerate(stream, start=1)
    ]


def dev_split(
    corpus: Sequence[SegmentedSentence],
) -> tuple[list[SegmentedSentence], list[SegmentedSentence]]:
    """Holds out the last 10% of the sentences (at least one) as the development set."""

    if not corpus:
        raise ContractError("cannot split an empty corpus")
    if len(corpus) == 1:
        logger.warning("corpus has a single sentence, development set is empty")
        return list(corpus), []
    held_out = max(1, len(corpus) // 10)
    return list(corpus[:-held_out]), list(corpus[-held_out:])


# ---------------------------------------------------------------------------
# gap labels


def character_tags(sentence: SegmentedSentence, tags: str) -> list[str]:
    """Tags each character with the {B,E} or {B,E,M,S} scheme."""

    result = []
    for word in sentence.words:
        if tags == "BE":
            result.extend("B" + "E" * (len(word) - 1))
        elif len(word) == 1:
            result.append("S")
        else:
            result.extend("B" + "M" * (len(word) - 2) + "E")
    return result


def to_gap_labels(sentence: SegmentedSentence, tagset: TagSetSpec) -> tuple[str, ...]:
    n = len(sentence)
    if sentence.boundaries[-1] != n:
        raise ContractError(f"boundaries {sentence.boundaries} inconsistent with length {n}")
    if tagset.unconstrained:
        inner = set(sentence.boundaries[:-1])
        return tuple("1" if gap in inner else "0" for gap in range(1, n))
    tags = character_tags(sentence, tagset.character_tags)
    return tuple(left + right for left, right in zip(tags, tags[1:]))


def from_gap_labels(
    characters: str, labels: Sequence[str], tagset: TagSetSpec
) -> SegmentedSentence:
    if len(labels) != len(characters) - 1:
        raise ContractError(
            f"{len(labels)} gap labels for a sentence of {len(characters)} characters"
        )
    violation = validate(labels, tagset)
    if violation is not None:
        raise DecodeConsistencyError(
            f"invalid label sequence at position {violation.position}: "
            f"{'-'.join(violation.pair)} ({violation.reason})"
        )
    boundaries = [gap for gap, label in enumerate(labels, start=1) if tagset.boundary_map[label]]
    boundaries.append(len(characters))
    return SegmentedSentence(characters, tuple(boundaries))


# ---------------------------------------------------------------------------
# vocabulary and embeddings


class Vocabulary:
    """Character to index map; index 0 is the shared unknown-character token."""

    UNKNOWN = "<unk>"

    def __init__(self, characters: Iterable[str] = ()) -> None:
        self.tokens: list[str] = [self.UNKNOWN]
        self._index: dict[str, int] = {}
        for char in characters:
            self.add(char)

    @classmethod
    def build(cls, corpus: Iterable[SegmentedSentence]) -> "Vocabulary":
        vocab = cls()
        for sentence in corpus:
            for char in sentence.characters:
                vocab.add(char)
        return vocab

    @classmethod
    def from_tokens(cls, tokens: Sequence[str]) -> "Vocabulary":
        if not tokens or tokens[0] != cls.UNKNOWN:
            raise ContractError("vocabulary tokens must start with the unknown token")
        return cls(tokens[1:])

    def add(self, char: str) -> int:
        if char not in self._index:
            self._index[char] = len(self.tokens)
            self.tokens.append(char)
        return self._index[char]

    def index(self, char: str) -> int:
        return self._index.get(char, 0)

    def encode(self, text: str) -> np.ndarray:
        return np.array([self._index.get(char, 0) for char in text], dtype=np.int64)

    def __contains__(self, char: str) -> bool:
        return char in self._index

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class EmbeddingTable:
    """Vocabulary-size by dimension matrix of character embeddings.

    Attributes:
        matrix (np.ndarray): One row per vocabulary index.
        trainable (bool): Whether training updates the rows.
        loaded (int): Rows copied from a pretrained file.
        ignored (int): Pretrained entries skipped because the character is not in the vocabulary.
        known (set[int]): Vocabulary rows that came from the file.
    """

    matrix: np.ndarray
    trainable: bool = True
    loaded: int = 0
    ignored: int = 0
    known: set[int] = field(default_factory=set)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


def random_embeddings(vocab_size: int, dim: int, rng: np.random.Generator, init: float) -> np.ndarray:
    return rng.uniform(-init, init, size=(vocab_size, dim))


def load_embeddings(
    stream: Iterable[bytes | str],
    vocab: Vocabulary,
    dim: int,
    seed: int,
    init: float = 0.05,
    trainable: bool = True,
) -> EmbeddingTable:
    """Loads word2vec text-format character vectors for the vocabulary.

    Rows of characters missing from the file keep a uniform(-init, init)
    initialization drawn with ``seed``.

    Args:
        stream: Lines of the embedding file; header ``count dim`` first.
        vocab (Vocabulary): Vocabulary whose rows are filled.
        dim (int): Embedding size the model is configured with.
        seed (int): Seed for the rows that are not in the file.
        init (float): Half-width of the uniform initialization.
        trainable (bool): Whether training may update the table.

    Raises:
        ConfigError: The file's dimension differs from ``dim``.
        CorpusError: A line cannot be parsed.
    """

    matrix = random_embeddings(len(vocab), dim, np.random.default_rng(seed), init)
    table = EmbeddingTable(matrix=matrix, trainable=trainable)
    lines = iter(enumerate(stream, start=1))

    try:
        line_number, header = next(lines)
    except StopIteration:
        raise CorpusError("embedding file is empty", 1) from None
    fields = _decode(header, line_number).split()
    if len(fields) != 2 or not all(value.isdigit() for value in fields):
        raise CorpusError("header must be 'count dim'", line_number)
    declared, file_dim = int(fields[0]), int(fields[1])
    if file_dim != dim:
        raise ConfigError(f"embedding file has dimension {file_dim}, model expects {dim}")

    entries = 0
    for line_number, raw in lines:
        line = _decode(raw, line_number).rstrip("\r\n")
        if not line.strip():
            continue
        fields = line.split(" ")
        fields = [value for value in fields if value]
        if len(fields) != dim + 1:
            raise CorpusError(f"expected a token and {dim} values, got {len(fields)} fields", line_number)
        try:
            values = [float(value) for value in fields[1:]]
        except ValueError:
            raise CorpusError("non-numeric embedding value", line_number) from None
        entries += 1
        token = fields[0]
        if token not in vocab:
            table.ignored += 1
            continue
        row = vocab.index(token)
        matrix[row] = values
        table.known.add(row)
        table.loaded += 1

    if entries != declared:
        logger.warning("embedding header declares %d entries, file holds %d", declared, entries)
    logger.info("embeddings: %d rows loaded, %d entries ignored", table.loaded, table.ignored)
    return table


def dump_embeddings(table: EmbeddingTable, vocab: Vocabulary, stream: IO[str]) -> None:
    """Writes the pretrained (known) rows back in word2vec text format."""

    rows = sorted(table.known)
    stream.write(f"{len(rows)} {table.dim}\n")
    for row in rows:
        values = " ".join(repr(float(value)) for value in table.matrix[row])
        stream.write(f"{vocab.tokens[row]} {values}\n")
