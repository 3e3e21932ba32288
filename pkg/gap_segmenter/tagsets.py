"""Gap tag sets and their transition constraints.

Under the paired schemes a gap label is the pair of character tags that
flank it ("ES": left character ends a word, right character is a
one-character word). Consecutive gap labels share a character, so a label
may only be followed by labels whose left tag equals its right tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .choices import TagSetName


@dataclass(frozen=True, eq=False)
class TagSetSpec:
    """Label inventory and constraints of one gap-labeling scheme.

    Attributes:
        name (str): One of 01, BE, BEMS.
        labels (tuple[str, ...]): Labels in score-column order.
        transitions (Mapping[str, frozenset[str]]): Allowed successors per label.
        start_allowed (frozenset[str]): Labels allowed on the first gap.
        end_allowed (frozenset[str]): Labels allowed on the last gap.
        boundary_map (Mapping[str, bool]): Whether the label puts a word boundary on its gap.
        character_tags (str | None): Character tag alphabet, None for 01.
    """

    name: str
    labels: tuple[str, ...]
    transitions: Mapping[str, frozenset[str]]
    start_allowed: frozenset[str]
    end_allowed: frozenset[str]
    boundary_map: Mapping[str, bool]
    character_tags: str | None = None

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def unconstrained(self) -> bool:
        return self.character_tags is None

    def index(self, label: str) -> int:
        return self._label_index[label]

    def label_indices(self, labels: Sequence[str]) -> np.ndarray:
        return np.array([self._label_index[label] for label in labels], dtype=np.int64)

    def labels_of(self, indices: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.labels[int(k)] for k in indices)

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {label: k for k, label in enumerate(self.labels)}

    @cached_property
    def transition_mask(self) -> np.ndarray:
        mask = np.zeros((self.size, self.size), dtype=bool)
        for label, successors in self.transitions.items():
            for successor in successors:
                mask[self.index(label), self.index(successor)] = True
        return mask

    @cached_property
    def successor_indices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(k) for k in np.flatnonzero(row)) for row in self.transition_mask)

    @cached_property
    def start_mask(self) -> np.ndarray:
        return np.array([label in self.start_allowed for label in self.labels])

    @cached_property
    def end_mask(self) -> np.ndarray:
        return np.array([label in self.end_allowed for label in self.labels])


@dataclass(frozen=True)
class Violation:
    """First place where a label sequence breaks its tag set's constraints.

    ``position`` is 1-based; ``pair`` holds the offending label pair, or a
    single label for start/end/unknown-label violations.
    """

    position: int
    pair: tuple[str, ...]
    reason: str


def _paired(
    name: str,
    labels: tuple[str, ...],
    table: dict[str, tuple[str, str]],
    word_initial: str,
    word_final: str,
) -> TagSetSpec:
    return TagSetSpec(
        name=name,
        labels=labels,
        transitions={label: frozenset(successors) for label, successors in table.items()},
        start_allowed=frozenset(label for label in labels if label[0] in word_initial),
        end_allowed=frozenset(label for label in labels if label[1] in word_final),
        boundary_map={label: label[1] in "BS" for label in labels},
        character_tags="".join(sorted(set("".join(labels)))),
    )


BINARY = TagSetSpec(
    name=TagSetName.BINARY.value,
    labels=("0", "1"),
    transitions={"0": frozenset({"0", "1"}), "1": frozenset({"0", "1"})},
    start_allowed=frozenset({"0", "1"}),
    end_allowed=frozenset({"0", "1"}),
    boundary_map={"0": False, "1": True},
)

BE = _paired(
    TagSetName.BE.value,
    ("BB", "BE", "EB", "EE"),
    {
        "BE": ("EB", "EE"),
        "BB": ("BB", "BE"),
        "EB": ("BB", "BE"),
        "EE": ("EB", "EE"),
    },
    word_initial="B",
    # a lone B closes the sentence as a one-character word
    word_final="BE",
)

BEMS = _paired(
    TagSetName.BEMS.value,
    ("BE", "BM", "EB", "ES", "SS", "SB", "ME", "MM"),
    {
        "BE": ("EB", "ES"),
        "BM": ("ME", "MM"),
        "EB": ("BE", "BM"),
        "ES": ("SB", "SS"),
        "SS": ("SS", "SB"),
        "SB": ("BE", "BM"),
        "ME": ("EB", "ES"),
        "MM": ("MM", "ME"),
    },
    word_initial="BS",
    word_final="ES",
)

_BUILTIN = {spec.name: spec for spec in (BINARY, BE, BEMS)}


def builtin_tagsets() -> dict[str, TagSetSpec]:
    return dict(_BUILTIN)


def get_tagset(name: str | TagSetSpec) -> TagSetSpec:
    if isinstance(name, TagSetSpec):
        return name
    return _BUILTIN[TagSetName.parse(name).value]


def validate(labels: Sequence[str], tagset: TagSetSpec) -> Violation | None:
    """Checks a gap-label sequence against start, transition and end constraints.

    Returns:
        Violation | None: The first violation, or None when the sequence is valid.
    """

    if not labels:
        return None

    for position, label in enumerate(labels, start=1):
        if label not in tagset.boundary_map:
            return Violation(position, (label,), "unknown label")

    if labels[0] not in tagset.start_allowed:
        return Violation(1, (labels[0],), "label cannot start a sentence")

    for position in range(1, len(labels)):
        previous, current = labels[position - 1], labels[position]
        if current not in tagset.transitions[previous]:
            return Violation(position + 1, (previous, current), "transition not allowed")

    if labels[-1] not in tagset.end_allowed:
        return Violation(len(labels), (labels[-1],), "label cannot end a sentence")

    return None
