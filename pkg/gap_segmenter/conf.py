"""Typed access to the GAP_SEGMENTER settings dict."""

from typing import Any

from django.conf import settings

from .choices import TagSetName

_DEFAULTS: dict[str, Any] = {
    "EMBEDDING_DIM": 300,
    "HIDDEN_SIZE": 300,
    "NUM_LAYERS": 3,
    "BIAFFINE_DIM": 300,
    "BEAM_WIDTH": 10,
    "BATCH_SIZE": 32,
    "PATIENCE": 10,
    "MAX_EPOCHS": 30,
    "CLIP_NORM": 5.0,
    "HYBRID_THRESHOLD": 90,
    "LONG_SENTENCE": 30,
    "EMBEDDING_INIT": 0.05,
    "SEED": 1,
    "TAGSETS": {
        "01": {"LEARNING_RATE": 0.001, "DROPOUT": 0.6},
        "BE": {"LEARNING_RATE": 0.0012, "DROPOUT": 0.39},
        "BEMS": {"LEARNING_RATE": 0.002, "DROPOUT": 0.45},
    },
}


def segmenter_setting(key: str) -> Any:
    configured = getattr(settings, "GAP_SEGMENTER", {})
    return configured.get(key, _DEFAULTS[key])


def tagset_preset(tagset: str) -> dict[str, float]:
    """Returns the learning rate and dropout preset of a tag set.

    Args:
        tagset (str): Tag set name in any accepted spelling (01, be, bems).

    Returns:
        dict[str, float]: ``{"LEARNING_RATE": ..., "DROPOUT": ...}``.
    """

    name = TagSetName.parse(tagset).value
    return dict(segmenter_setting("TAGSETS")[name])


def default_learning_rate(tagset: str) -> float:
    return float(tagset_preset(tagset)["LEARNING_RATE"])


def default_dropout(tagset: str) -> float:
    return float(tagset_preset(tagset)["DROPOUT"])
