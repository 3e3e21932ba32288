from .optim import AdamState, adam_step
from .tensor import (
    ComputationTape,
    Tensor,
    active_tape,
    add,
    add_all,
    backward,
    bilinear,
    clip_gradients,
    concat,
    cross_entropy,
    dropout,
    elementwise,
    gather_rows,
    global_norm,
    log_softmax,
    matmul,
    mul,
    narrow,
    reduce_sum,
    reshape,
    scale,
    sigmoid,
    tanh,
    transpose,
)

__all__ = [
    "AdamState",
    "ComputationTape",
    "Tensor",
    "active_tape",
    "adam_step",
    "add",
    "add_all",
    "backward",
    "bilinear",
    "clip_gradients",
    "concat",
    "cross_entropy",
    "dropout",
    "elementwise",
    "gather_rows",
    "global_norm",
    "log_softmax",
    "matmul",
    "mul",
    "narrow",
    "reduce_sum",
    "reshape",
    "scale",
    "sigmoid",
    "tanh",
    "transpose",
]
