"""Front/rear affine heads and the biaffine gap scorer."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .exceptions import ConfigError, ShapeError
from .numeric import (
    Tensor,
    add,
    bilinear,
    concat,
    dropout,
    matmul,
    narrow,
    reduce_sum,
    reshape,
    transpose,
)
from .tagsets import TagSetSpec

BIAFFINE_INIT = 0.01


@dataclass(frozen=True)
class AffineHeads:
    """Two distinct projections of the encoder states: ``w_*`` is d_b x input, ``b_*`` is d_b."""

    w_front: Tensor
    b_front: Tensor
    w_rear: Tensor
    b_rear: Tensor

    @classmethod
    def from_parameters(cls, params: Mapping[str, Tensor]) -> "AffineHeads":
        return cls(
            w_front=params["scorer.front.weight"],
            b_front=params["scorer.front.bias"],
            w_rear=params["scorer.rear.weight"],
            b_rear=params["scorer.rear.bias"],
        )


@dataclass(frozen=True)
class BiaffineParams:
    """``w_gap`` is L x d_b x d_b, ``u_gap`` is L x 2d_b, ``b_gap`` is L."""

    w_gap: Tensor
    u_gap: Tensor
    b_gap: Tensor

    @classmethod
    def from_parameters(cls, params: Mapping[str, Tensor]) -> "BiaffineParams":
        return cls(
            w_gap=params["scorer.gap.w"],
            u_gap=params["scorer.gap.u"],
            b_gap=params["scorer.gap.b"],
        )

    @property
    def num_labels(self) -> int:
        return self.b_gap.shape[0]

    def check(self, tagset: TagSetSpec) -> None:
        if self.num_labels != tagset.size:
            raise ConfigError(
                f"scorer has {self.num_labels} labels, tag set {tagset.name} has {tagset.size}"
            )


def parameter_shapes(input_dim: int, biaffine_dim: int, num_labels: int) -> dict[str, tuple[int, ...]]:
    return {
        "scorer.front.weight": (biaffine_dim, input_dim),
        "scorer.front.bias": (biaffine_dim,),
        "scorer.rear.weight": (biaffine_dim, input_dim),
        "scorer.rear.bias": (biaffine_dim,),
        "scorer.gap.w": (num_labels, biaffine_dim, biaffine_dim),
        "scorer.gap.u": (num_labels, 2 * biaffine_dim),
        "scorer.gap.b": (num_labels,),
    }


def init_parameters(
    input_dim: int, biaffine_dim: int, num_labels: int, rng: np.random.Generator
) -> dict[str, Tensor]:
    head_bound = 1.0 / np.sqrt(input_dim)
    params = {}
    for name, shape in parameter_shapes(input_dim, biaffine_dim, num_labels).items():
        if name == "scorer.gap.b":
            data = np.zeros(shape)
        elif name.startswith("scorer.gap."):
            data = rng.uniform(-BIAFFINE_INIT, BIAFFINE_INIT, size=shape)
        else:
            data = rng.uniform(-head_bound, head_bound, size=shape)
        params[name] = Tensor(data, requires_grad=True, name=name)
    return params


def affine_heads(
    states: Tensor,
    heads: AffineHeads,
    *,
    dropout_p: float = 0.0,
    training: bool = False,
    rng: np.random.Generator | None = None,
) -> tuple[Tensor, Tensor]:
    """Projects n x input encoder states to front and rear representations (n x d_b each).

    Each projection sees its own dropout mask in training mode.
    """

    if states.ndim != 2 or states.shape[1] != heads.w_front.shape[1]:
        raise ShapeError(
            f"affine_heads: states {states.shape} do not match head weights {heads.w_front.shape}"
        )
    front_in = dropout(states, dropout_p, rng, training)
    rear_in = dropout(states, dropout_p, rng, training)
    front = add(matmul(front_in, transpose(heads.w_front)), heads.b_front)
    rear = add(matmul(rear_in, transpose(heads.w_rear)), heads.b_rear)
    return front, rear


def bilinear_score(h_t: Tensor, h_s: Tensor, weight: Tensor) -> Tensor:
    """Scalar ``h_t^T W h_s`` for vectors h_t, h_s and a square matrix W."""

    if h_t.ndim != 1 or h_s.ndim != 1 or weight.shape != (h_t.shape[0], h_s.shape[0]):
        raise ShapeError(
            f"bilinear_score: shapes {h_t.shape}, {weight.shape}, {h_s.shape} do not agree"
        )
    return reduce_sum(
        bilinear(
            reshape(h_t, (1, h_t.shape[0])),
            reshape(weight, (1,) + weight.shape),
            reshape(h_s, (1, h_s.shape[0])),
        )
    )


def _biaffine_rows(front: Tensor, rear: Tensor, params: BiaffineParams) -> Tensor:
    bilinear_term = bilinear(front, params.w_gap, rear)
    linear_term = matmul(concat(front, rear, axis=1), transpose(params.u_gap))
    return add(add(bilinear_term, linear_term), params.b_gap)


def biaffine_score(
    h_front: Tensor,
    h_rear_next: Tensor,
    params: BiaffineParams,
    tagset: TagSetSpec | None = None,
) -> Tensor:
    """Label scores of one gap from the front state of its left character and
    the rear state of its right character."""

    if tagset is not None:
        params.check(tagset)
    dim = params.w_gap.shape[1]
    if h_front.shape != (dim,) or h_rear_next.shape != (dim,):
        raise ShapeError(
            f"biaffine_score: inputs {h_front.shape}/{h_rear_next.shape}, expected ({dim},)"
        )
    row = _biaffine_rows(reshape(h_front, (1, dim)), reshape(h_rear_next, (1, dim)), params)
    return reshape(row, (params.num_labels,))


def score_sentence(
    states: Tensor,
    heads: AffineHeads,
    params: BiaffineParams,
    *,
    dropout_p: float = 0.0,
    training: bool = False,
    rng: np.random.Generator | None = None,
) -> Tensor:
    """Scores every gap of an encoded sentence: an (n-1) x L matrix."""

    n = states.shape[0]
    if n < 2:
        return Tensor(np.zeros((0, params.num_labels)))
    front, rear = affine_heads(states, heads, dropout_p=dropout_p, training=training, rng=rng)
    return _biaffine_rows(narrow(front, 0, n - 1, axis=0), narrow(rear, 1, n, axis=0), params)


def greedy_indices(scores: Tensor | np.ndarray) -> np.ndarray:
    matrix = scores.data if isinstance(scores, Tensor) else np.asarray(scores)
    if matrix.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    # np.argmax returns the first maximum, i.e. the lowest label index on ties
    return np.argmax(matrix, axis=1)


def greedy_labels(scores: Tensor | np.ndarray, tagset: TagSetSpec) -> tuple[str, ...]:
    return tagset.labels_of(greedy_indices(scores))
