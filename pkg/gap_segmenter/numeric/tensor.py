"""Dense tensors with tape-based reverse-mode differentiation.

Every operation evaluates eagerly with numpy. When a ``ComputationTape`` is
active and an input requires a gradient, the operation appends a record
holding its inputs and a closure mapping the upstream gradient to one
gradient per input. ``backward`` replays those records in reverse.

Broadcasting is limited to exact shape matches and a vector added to (or
multiplied with) every row of a matrix.
"""

from __future__ import annotations

import contextvars
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from ..exceptions import ContractError, ShapeError

DEFAULT_DTYPE = np.float64

BackwardFn = Callable[[np.ndarray], Sequence[np.ndarray | None]]


class Tensor:
    """A named, shaped array of reals that may take part in differentiation."""

    __slots__ = ("data", "requires_grad", "name")

    def __init__(
        self,
        data,
        requires_grad: bool = False,
        name: str | None = None,
        dtype=DEFAULT_DTYPE,
    ) -> None:
        self.data = np.asarray(data, dtype=dtype)
        self.requires_grad = requires_grad
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    def item(self) -> float:
        return float(self.data)

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{label}, requires_grad={self.requires_grad})"


@dataclass(frozen=True)
class TapeRecord:
    output: Tensor
    inputs: tuple[Tensor, ...]
    backward: BackwardFn


_active_tape: contextvars.ContextVar["ComputationTape | None"] = contextvars.ContextVar(
    "active_tape", default=None
)


class ComputationTape:
    """Ordered record of the differentiable operations of one forward pass.

    Use as a context manager; the tape is bound to the current context only,
    so concurrent threads never share one.
    """

    def __init__(self) -> None:
        self.records: list[TapeRecord] = []
        self._tokens: list[contextvars.Token] = []

    def __enter__(self) -> "ComputationTape":
        self._tokens.append(_active_tape.set(self))
        return self

    def __exit__(self, *exc_info) -> None:
        _active_tape.reset(self._tokens.pop())

    def __len__(self) -> int:
        return len(self.records)

    def record(self, output: Tensor, inputs: tuple[Tensor, ...], backward: BackwardFn) -> None:
        self.records.append(TapeRecord(output, inputs, backward))

    def reset(self) -> None:
        self.records.clear()


def active_tape() -> ComputationTape | None:
    return _active_tape.get()


def _emit(data: np.ndarray, inputs: tuple[Tensor, ...], backward: BackwardFn) -> Tensor:
    requires_grad = any(tensor.requires_grad for tensor in inputs)
    output = Tensor(data, requires_grad=requires_grad)
    tape = _active_tape.get()
    if requires_grad and tape is not None:
        tape.record(output, inputs, backward)
    return output


def _as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


# ---------------------------------------------------------------------------
# linear algebra


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: cannot multiply {a.shape} by {b.shape}")

    def backward(grad: np.ndarray):
        return grad @ b.data.T, a.data.T @ grad

    return _emit(a.data @ b.data, (a, b), backward)


def transpose(a: Tensor) -> Tensor:
    if a.ndim != 2:
        raise ShapeError(f"transpose: expected a matrix, got shape {a.shape}")
    return _emit(a.data.T.copy(), (a,), lambda grad: (grad.T,))


def bilinear(front: Tensor, weight: Tensor, rear: Tensor) -> Tensor:
    """Row-wise bilinear forms: ``out[i, l] = front[i] @ weight[l] @ rear[i]``."""

    if (
        front.ndim != 2
        or rear.ndim != 2
        or weight.ndim != 3
        or front.shape[0] != rear.shape[0]
        or weight.shape[1:] != (front.shape[1], rear.shape[1])
    ):
        raise ShapeError(
            f"bilinear: incompatible shapes {front.shape}, {weight.shape}, {rear.shape}"
        )

    def backward(grad: np.ndarray):
        return (
            np.einsum("ml,lde,me->md", grad, weight.data, rear.data),
            np.einsum("ml,md,me->lde", grad, front.data, rear.data),
            np.einsum("ml,lde,md->me", grad, weight.data, front.data),
        )

    data = np.einsum("md,lde,me->ml", front.data, weight.data, rear.data)
    return _emit(data, (front, weight, rear), backward)


# ---------------------------------------------------------------------------
# element-wise


def _check_broadcast(op: str, a: Tensor, b: Tensor) -> None:
    if a.shape == b.shape:
        return
    if a.ndim == 2 and b.ndim == 1 and a.shape[1] == b.shape[0]:
        return
    if a.ndim == 1 and b.ndim == 2 and b.shape[1] == a.shape[0]:
        return
    raise ShapeError(f"{op}: shapes {a.shape} and {b.shape} are not broadcast-compatible")


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    if grad.shape == shape:
        return grad
    return grad.sum(axis=0)


def add(a: Tensor, b: Tensor) -> Tensor:
    _check_broadcast("add", a, b)

    def backward(grad: np.ndarray):
        return _unbroadcast(grad, a.shape), _unbroadcast(grad, b.shape)

    return _emit(a.data + b.data, (a, b), backward)


def mul(a: Tensor, b: Tensor) -> Tensor:
    _check_broadcast("mul", a, b)

    def backward(grad: np.ndarray):
        return _unbroadcast(grad * b.data, a.shape), _unbroadcast(grad * a.data, b.shape)

    return _emit(a.data * b.data, (a, b), backward)


def tanh(a: Tensor) -> Tensor:
    out = np.tanh(a.data)
    return _emit(out, (a,), lambda grad: (grad * (1.0 - out * out),))


def sigmoid(a: Tensor) -> Tensor:
    # tanh form stays finite for large |x|
    out = 0.5 * (1.0 + np.tanh(0.5 * a.data))
    return _emit(out, (a,), lambda grad: (grad * out * (1.0 - out),))


def scale(a: Tensor, factor: float) -> Tensor:
    return _emit(a.data * factor, (a,), lambda grad: (grad * factor,))


ELEMENTWISE = {"add": add, "mul": mul, "tanh": tanh, "sigmoid": sigmoid}


def elementwise(op: str, *args: Tensor) -> Tensor:
    try:
        fn = ELEMENTWISE[op]
    except KeyError:
        raise ContractError(f"unknown element-wise operation '{op}'") from None
    return fn(*args)


# ---------------------------------------------------------------------------
# structural


def _normalize_axis(axis: int, ndim: int, op: str) -> int:
    if not -ndim <= axis < ndim:
        raise ShapeError(f"{op}: axis {axis} out of range for {ndim} dimensions")
    return axis % ndim


def concat(*tensors: Tensor, axis: int = 0) -> Tensor:
    if not tensors:
        raise ContractError("concat: nothing to concatenate")
    first = tensors[0]
    axis = _normalize_axis(axis, first.ndim, "concat")
    for tensor in tensors[1:]:
        if tensor.ndim != first.ndim or any(
            tensor.shape[k] != first.shape[k] for k in range(first.ndim) if k != axis
        ):
            raise ShapeError(
                f"concat: shapes {first.shape} and {tensor.shape} differ off axis {axis}"
            )

    offsets = np.cumsum([tensor.shape[axis] for tensor in tensors])[:-1]

    def backward(grad: np.ndarray):
        return np.split(grad, offsets, axis=axis)

    return _emit(np.concatenate([t.data for t in tensors], axis=axis), tensors, backward)


def narrow(a: Tensor, start: int, stop: int, axis: int = 0) -> Tensor:
    axis = _normalize_axis(axis, a.ndim, "narrow")
    if not 0 <= start <= stop <= a.shape[axis]:
        raise ShapeError(f"narrow: range {start}:{stop} outside axis of length {a.shape[axis]}")
    index = [slice(None)] * a.ndim
    index[axis] = slice(start, stop)
    index = tuple(index)

    def backward(grad: np.ndarray):
        full = np.zeros_like(a.data)
        full[index] = grad
        return (full,)

    return _emit(a.data[index].copy(), (a,), backward)


def reshape(a: Tensor, shape: tuple[int, ...]) -> Tensor:
    if int(np.prod(shape)) != a.data.size:
        raise ShapeError(f"reshape: cannot view {a.shape} as {shape}")
    return _emit(a.data.reshape(shape), (a,), lambda grad: (grad.reshape(a.shape),))


def gather_rows(table: Tensor, indices: Sequence[int] | np.ndarray) -> Tensor:
    indices = np.asarray(indices, dtype=np.int64)
    if table.ndim != 2:
        raise ShapeError(f"gather_rows: expected a matrix, got shape {table.shape}")
    if indices.size and (indices.min() < 0 or indices.max() >= table.shape[0]):
        raise ContractError(
            f"gather_rows: index out of range for a table of {table.shape[0]} rows"
        )

    def backward(grad: np.ndarray):
        full = np.zeros_like(table.data)
        np.add.at(full, indices, grad)
        return (full,)

    return _emit(table.data[indices], (table,), backward)


# ---------------------------------------------------------------------------
# reductions and losses


def reduce_sum(a: Tensor) -> Tensor:
    return _emit(np.asarray(a.data.sum()), (a,), lambda grad: (np.full_like(a.data, grad),))


def add_all(tensors: Iterable[Tensor]) -> Tensor:
    tensors = list(tensors)
    if not tensors:
        raise ContractError("add_all: nothing to add")
    total = tensors[0]
    for tensor in tensors[1:]:
        total = add(total, tensor)
    return total


def log_softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def cross_entropy(scores: Tensor, gold: Sequence[int] | np.ndarray) -> Tensor:
    """Mean softmax cross-entropy of each score row against its gold column."""

    gold = np.asarray(gold, dtype=np.int64)
    if scores.ndim != 2 or scores.shape[0] != gold.shape[0]:
        raise ContractError(
            f"cross_entropy: {scores.shape[0] if scores.ndim else 0} score rows "
            f"for {gold.shape[0]} gold labels"
        )
    if scores.shape[0] == 0:
        raise ContractError("cross_entropy: no rows to score")
    if gold.min() < 0 or gold.max() >= scores.shape[1]:
        raise ContractError(f"cross_entropy: gold label outside 0..{scores.shape[1] - 1}")

    rows = np.arange(gold.shape[0])
    log_probs = log_softmax(scores.data)
    count = gold.shape[0]

    def backward(grad: np.ndarray):
        delta = np.exp(log_probs)
        delta[rows, gold] -= 1.0
        return (delta * (grad / count),)

    return _emit(np.asarray(-log_probs[rows, gold].mean()), (scores,), backward)


def dropout(x: Tensor, p: float, rng: np.random.Generator | None, training: bool) -> Tensor:
    """Inverted dropout: scales kept units by 1/(1-p) in training, identity otherwise."""

    if not training or p == 0.0:
        return x
    if not 0.0 <= p < 1.0:
        raise ContractError(f"dropout: probability {p} outside [0, 1)")
    if rng is None:
        raise ContractError("dropout: training mode needs a random generator")
    mask = (rng.random(x.shape) >= p) / (1.0 - p)
    return mul(x, Tensor(mask))


# ---------------------------------------------------------------------------
# reverse pass


def backward(
    tape: ComputationTape,
    loss: Tensor,
    parameters: Iterable[Tensor] | None = None,
) -> dict[str, np.ndarray]:
    """Computes the gradient of a scalar loss for every named leaf tensor.

    Args:
        tape (ComputationTape): Tape the forward pass was recorded on.
        loss (Tensor): Scalar loss.
        parameters (Iterable[Tensor] | None): When given, the result holds
            exactly these parameters, with zeros for the ones the loss does not use.

    Returns:
        dict[str, np.ndarray]: Gradient per parameter name.
    """

    if loss.data.ndim != 0:
        raise ContractError(f"backward: loss must be a scalar, got shape {loss.shape}")

    grads: dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
    leaves: dict[int, Tensor] = {}

    for record in reversed(tape.records):
        upstream = grads.get(id(record.output))
        if upstream is None:
            continue
        if record.output.name is None:
            del grads[id(record.output)]
        for tensor, grad in zip(record.inputs, record.backward(upstream)):
            if grad is None or not tensor.requires_grad:
                continue
            key = id(tensor)
            grads[key] = grads[key] + grad if key in grads else grad
            if tensor.name is not None:
                leaves[key] = tensor

    if parameters is None:
        return {tensor.name: grads[key] for key, tensor in leaves.items()}
    return {
        tensor.name: grads.get(id(tensor), np.zeros_like(tensor.data)) for tensor in parameters
    }


def global_norm(grads: Mapping[str, np.ndarray]) -> float:
    return float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))


def clip_gradients(grads: dict[str, np.ndarray], max_norm: float) -> float:
    """Rescales ``grads`` in place so their global norm is at most ``max_norm``.

    Returns:
        float: The factor that was applied (1.0 when no clipping happened).
    """

    norm = global_norm(grads)
    if not np.isfinite(norm) or norm <= max_norm or norm == 0.0:
        return 1.0
    factor = max_norm / norm
    for name in grads:
        grads[name] = grads[name] * factor
    return factor
