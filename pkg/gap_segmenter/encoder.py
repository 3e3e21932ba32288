"""Character embeddings and the stacked bidirectional LSTM encoder."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .exceptions import ConfigError, ShapeError
from .numeric import (
    Tensor,
    add,
    concat,
    dropout,
    gather_rows,
    matmul,
    mul,
    narrow,
    sigmoid,
    tanh,
    transpose,
)

DIRECTIONS = ("forward", "backward")


@dataclass(frozen=True)
class EncoderConfig:
    embedding_dim: int = 300
    hidden_size: int = 300
    num_layers: int = 3
    dropout_p: float = 0.0

    def __post_init__(self) -> None:
        for name in ("embedding_dim", "hidden_size", "num_layers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 <= self.dropout_p < 1.0:
            raise ConfigError(f"dropout_p must lie in [0, 1), got {self.dropout_p}")

    @property
    def output_dim(self) -> int:
        return 2 * self.hidden_size

    def layer_input_dim(self, layer: int) -> int:
        return self.embedding_dim if layer == 0 else self.output_dim


@dataclass(frozen=True)
class LSTMWeights:
    """Weights of one LSTM direction; gate blocks are ordered input, forget, output, candidate.

    Attributes:
        w_ih (Tensor): ``4h x d_in`` input weights.
        w_hh (Tensor): ``4h x h`` recurrent weights.
        bias (Tensor): ``4h`` gate biases.
    """

    w_ih: Tensor
    w_hh: Tensor
    bias: Tensor

    @property
    def hidden_size(self) -> int:
        return self.w_hh.shape[1]


@dataclass(frozen=True)
class EncoderOutput:
    """Top-layer states: ``forward`` and ``backward`` are n x h, ``combined`` is n x 2h."""

    forward: Tensor
    backward: Tensor
    combined: Tensor

    def __len__(self) -> int:
        return self.combined.shape[0]


def parameter_name(layer: int, direction: str, weight: str) -> str:
    return f"encoder.layer{layer}.{direction}.{weight}"


def parameter_shapes(config: EncoderConfig) -> dict[str, tuple[int, ...]]:
    shapes = {}
    h = config.hidden_size
    for layer in range(config.num_layers):
        for direction in DIRECTIONS:
            shapes[parameter_name(layer, direction, "w_ih")] = (4 * h, config.layer_input_dim(layer))
            shapes[parameter_name(layer, direction, "w_hh")] = (4 * h, h)
            shapes[parameter_name(layer, direction, "bias")] = (4 * h,)
    return shapes


def init_parameters(config: EncoderConfig, rng: np.random.Generator) -> dict[str, Tensor]:
    bound = 1.0 / np.sqrt(config.hidden_size)
    return {
        name: Tensor(rng.uniform(-bound, bound, size=shape), requires_grad=True, name=name)
        for name, shape in parameter_shapes(config).items()
    }


def layer_weights(params: Mapping[str, Tensor], layer: int, direction: str) -> LSTMWeights:
    return LSTMWeights(
        w_ih=params[parameter_name(layer, direction, "w_ih")],
        w_hh=params[parameter_name(layer, direction, "w_hh")],
        bias=params[parameter_name(layer, direction, "bias")],
    )


def embed(indices: Sequence[int] | np.ndarray, table: Tensor) -> Tensor:
    return gather_rows(table, indices)


def _gates(z: Tensor, c_prev: Tensor, hidden: int) -> tuple[Tensor, Tensor]:
    input_gate = sigmoid(narrow(z, 0, hidden, axis=1))
    forget_gate = sigmoid(narrow(z, hidden, 2 * hidden, axis=1))
    output_gate = sigmoid(narrow(z, 2 * hidden, 3 * hidden, axis=1))
    candidate = tanh(narrow(z, 3 * hidden, 4 * hidden, axis=1))
    c = add(mul(forget_gate, c_prev), mul(input_gate, candidate))
    h = mul(output_gate, tanh(c))
    return h, c


def lstm_cell(x: Tensor, h_prev: Tensor, c_prev: Tensor, weights: LSTMWeights) -> tuple[Tensor, Tensor]:
    """One recurrence step on ``1 x d_in`` input and ``1 x h`` states."""

    hidden = weights.hidden_size
    if x.ndim != 2 or x.shape[1] != weights.w_ih.shape[1]:
        raise ShapeError(f"lstm_cell: input {x.shape} does not match weights {weights.w_ih.shape}")
    if h_prev.shape != (1, hidden) or c_prev.shape != (1, hidden):
        raise ShapeError(f"lstm_cell: states {h_prev.shape}/{c_prev.shape}, expected (1, {hidden})")
    z = add(
        add(matmul(x, transpose(weights.w_ih)), matmul(h_prev, transpose(weights.w_hh))),
        weights.bias,
    )
    return _gates(z, c_prev, hidden)


def _run_direction(inputs: Tensor, weights: LSTMWeights, reverse: bool) -> Tensor:
    n = inputs.shape[0]
    hidden = weights.hidden_size
    # input projections for all positions at once; the recurrence adds w_hh per step
    projected = add(matmul(inputs, transpose(weights.w_ih)), weights.bias)
    w_hh_t = transpose(weights.w_hh)
    h = Tensor(np.zeros((1, hidden)))
    c = Tensor(np.zeros((1, hidden)))
    outputs: list[Tensor | None] = [None] * n
    for position in (range(n - 1, -1, -1) if reverse else range(n)):
        z = add(narrow(projected, position, position + 1, axis=0), matmul(h, w_hh_t))
        h, c = _gates(z, c, hidden)
        outputs[position] = h
    return concat(*outputs, axis=0)


def encode(
    indices: Sequence[int] | np.ndarray,
    config: EncoderConfig,
    params: Mapping[str, Tensor],
    *,
    training: bool = False,
    rng: np.random.Generator | None = None,
) -> EncoderOutput:
    """Encodes a character-index sequence into contextual states.

    Layer 0 reads the embeddings, later layers read the previous layer's
    concatenated forward/backward states. In training mode dropout is
    applied to every layer's input.

    Args:
        indices: Vocabulary indices, length n >= 1.
        config (EncoderConfig): Sizes and dropout.
        params (Mapping[str, Tensor]): ``embedding`` plus the per-layer LSTM weights.
        training (bool): Enables dropout.
        rng (np.random.Generator | None): Source of dropout masks.

    Returns:
        EncoderOutput: Top-layer states of both directions and their concatenation.
    """

    if len(indices) < 1:
        raise ShapeError("encode: empty sentence")
    layer_input = embed(indices, params["embedding"])
    forward = backward = combined = layer_input
    for layer in range(config.num_layers):
        layer_input = dropout(layer_input, config.dropout_p, rng, training)
        forward = _run_direction(layer_input, layer_weights(params, layer, "forward"), reverse=False)
        backward = _run_direction(layer_input, layer_weights(params, layer, "backward"), reverse=True)
        combined = concat(forward, backward, axis=1)
        layer_input = combined
    return EncoderOutput(forward=forward, backward=backward, combined=combined)
