from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..exceptions import ShapeError, TrainingError
from .tensor import Tensor


@dataclass
class AdamState:
    """Moment accumulators and step counter of one Adam optimizer.

    Attributes:
        learning_rate (float): Step size.
        beta1 (float): Decay of the first moment.
        beta2 (float): Decay of the second moment.
        epsilon (float): Denominator guard.
        step (int): Number of updates applied so far.
        first_moment (dict[str, np.ndarray]): Per-parameter running mean of gradients.
        second_moment (dict[str, np.ndarray]): Per-parameter running mean of squared gradients.
    """

    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step: int = 0
    first_moment: dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(
    params: Mapping[str, Tensor],
    grads: Mapping[str, np.ndarray],
    state: AdamState,
) -> AdamState:
    """Applies one bias-corrected Adam update to ``params`` in place.

    Parameters without an entry in ``grads`` are treated as having a zero gradient.

    Raises:
        TrainingError: If a gradient holds NaN or infinity.
        ShapeError: If a gradient's shape differs from its parameter's.
    """

    for name, grad in grads.items():
        if not np.all(np.isfinite(grad)):
            raise TrainingError(f"non-finite gradient for parameter '{name}'")
        if name in params and grad.shape != params[name].shape:
            raise ShapeError(
                f"gradient for '{name}' has shape {grad.shape}, parameter has {params[name].shape}"
            )

    state.step += 1
    correction1 = 1.0 - state.beta1**state.step
    correction2 = 1.0 - state.beta2**state.step

    for name, param in params.items():
        grad = grads.get(name)
        if grad is None:
            grad = np.zeros_like(param.data)
        m = state.first_moment.get(name)
        v = state.second_moment.get(name)
        if m is None:
            m = np.zeros_like(param.data)
            v = np.zeros_like(param.data)
        m = state.beta1 * m + (1.0 - state.beta1) * grad
        v = state.beta2 * v + (1.0 - state.beta2) * grad * grad
        state.first_moment[name] = m
        state.second_moment[name] = v
        m_hat = m / correction1
        v_hat = v / correction2
        param.data -= state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)

    return state
