"""Training loop: gap loss, minibatch Adam updates and dev-set model selection."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import conf
from .choices import DecoderName
from .corpus import EmbeddingTable, SegmentedSentence, Vocabulary, dev_split, to_gap_labels
from .evaluation import EvalReport, f1
from .exceptions import ContractError, TrainingError
from .model import ModelConfig, SegmenterModel
from .numeric import (
    AdamState,
    ComputationTape,
    Tensor,
    adam_step,
    add_all,
    backward,
    clip_gradients,
    cross_entropy,
    scale,
)
from .tagsets import TagSetSpec, get_tagset

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class TrainConfig:
    """Everything a training run depends on besides the corpus.

    Unset learning rate and dropout resolve from the tag set preset.
    """

    tagset: str
    learning_rate: float
    dropout_p: float
    batch_size: int = 32
    max_epochs: int = 30
    seed: int = 1
    patience: int = 10
    clip_norm: float = 5.0
    beam_width: int = 10
    embedding_dim: int = 300
    hidden_size: int = 300
    num_layers: int = 3
    biaffine_dim: int = 300
    train_embeddings: bool = True

    @classmethod
    def for_tagset(cls, tagset: str, **overrides: Any) -> "TrainConfig":
        name = get_tagset(tagset).name
        values = {
            "learning_rate": conf.default_learning_rate(name),
            "dropout_p": conf.default_dropout(name),
            "batch_size": conf.segmenter_setting("BATCH_SIZE"),
            "max_epochs": conf.segmenter_setting("MAX_EPOCHS"),
            "seed": conf.segmenter_setting("SEED"),
            "patience": conf.segmenter_setting("PATIENCE"),
            "clip_norm": conf.segmenter_setting("CLIP_NORM"),
            "beam_width": conf.segmenter_setting("BEAM_WIDTH"),
            "embedding_dim": conf.segmenter_setting("EMBEDDING_DIM"),
            "hidden_size": conf.segmenter_setting("HIDDEN_SIZE"),
            "num_layers": conf.segmenter_setting("NUM_LAYERS"),
            "biaffine_dim": conf.segmenter_setting("BIAFFINE_DIM"),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(tagset=name, **values)

    @property
    def model_config(self) -> ModelConfig:
        return ModelConfig(
            tagset=self.tagset,
            embedding_dim=self.embedding_dim,
            hidden_size=self.hidden_size,
            num_layers=self.num_layers,
            biaffine_dim=self.biaffine_dim,
            dropout_p=self.dropout_p,
            train_embeddings=self.train_embeddings,
        )

    @property
    def decoder(self) -> str:
        return DecoderName.GREEDY if get_tagset(self.tagset).unconstrained else DecoderName.BEAM

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_loss: float
    dev_f1: float


@dataclass
class Checkpoint:
    """A trained model plus what is needed to reproduce and describe it."""

    model: SegmenterModel
    epoch: int = 0
    dev_f1: float = 0.0
    seed: int = 0
    train_config: dict[str, Any] = field(default_factory=dict)
    history: list[EpochStats] = field(default_factory=list)
    version: int = FORMAT_VERSION


def gap_loss(scores: Tensor, gold: Sequence[str] | np.ndarray, tagset: TagSetSpec | None = None) -> Tensor:
    """Mean softmax cross-entropy of the gap scores against the gold labels.

    ``gold`` holds label strings (then ``tagset`` is required) or label indices.
    """

    if len(gold) and isinstance(gold[0], str):
        if tagset is None:
            raise ContractError("gap_loss: label strings need a tag set")
        gold = tagset.label_indices(gold)
    if scores.shape[0] != len(gold):
        raise ContractError(f"gap_loss: {scores.shape[0]} score rows for {len(gold)} gold labels")
    return cross_entropy(scores, gold)


def evaluate_model(
    model: SegmenterModel,
    sentences: Sequence[SegmentedSentence],
    decoder: str,
    width: int = 10,
) -> EvalReport:
    """Word F1 of the model on gold sentences, in inference mode."""

    predicted = [model.segment(sentence.characters, decoder, width) for sentence in sentences]
    return f1(list(sentences), predicted)


def _batches(order: np.ndarray, size: int):
    for start in range(0, len(order), size):
        yield order[start : start + size]


def train(
    corpus: Sequence[SegmentedSentence],
    config: TrainConfig,
    *,
    embeddings: Callable[[Vocabulary], EmbeddingTable] | None = None,
    on_epoch: Callable[[EpochStats], None] | None = None,
) -> Checkpoint:
    """Trains a segmenter and returns the checkpoint with the best dev F1.

    The last 10% of the corpus is held out for model selection. Each epoch
    shuffles the training part with the run's seed, takes one Adam step per
    minibatch and then scores the dev part; training stops after
    ``max_epochs`` or ``patience`` epochs without improvement.

    Args:
        corpus: Gold sentences; with a single sentence the training set doubles as dev set.
        config (TrainConfig): Hyperparameters and seed.
        embeddings: Builds the initial embedding table from the training vocabulary.
        on_epoch: Called with each epoch's statistics.

    Raises:
        ContractError: The corpus is empty or has no multi-character sentence.
        TrainingError: The loss or a gradient stops being finite.
    """

    if not corpus:
        raise ContractError("training needs at least one sentence")

    train_set, dev_set = dev_split(corpus)
    selection_set = dev_set or train_set
    vocabulary = Vocabulary.build(train_set)
    tagset = get_tagset(config.tagset)
    model = SegmenterModel.initialize(
        config.model_config,
        vocabulary,
        seed=config.seed,
        embeddings=embeddings(vocabulary) if embeddings else None,
    )
    rng = np.random.default_rng(config.seed)
    state = AdamState(learning_rate=config.learning_rate)

    examples = [
        (sentence.characters, tagset.label_indices(to_gap_labels(sentence, tagset)))
        for sentence in train_set
        if len(sentence) > 1
    ]
    if not examples:
        raise ContractError("training set has no sentence with more than one character")

    best_parameters = model.snapshot()
    best = EpochStats(epoch=0, train_loss=float("nan"), dev_f1=-1.0)
    history: list[EpochStats] = []
    stale = 0

    for epoch in range(1, config.max_epochs + 1):
        losses = []
        for batch_number, batch in enumerate(_batches(rng.permutation(len(examples)), config.batch_size), start=1):
            params = model.trainable_parameters()
            with ComputationTape() as tape:
                sentence_losses = [
                    gap_loss(model.gap_scores(examples[k][0], training=True, rng=rng), examples[k][1])
                    for k in batch
                ]
                loss = scale(add_all(sentence_losses), 1.0 / len(sentence_losses))
            if not np.isfinite(loss.item()):
                raise TrainingError(f"non-finite loss at epoch {epoch}, batch {batch_number}")
            grads = backward(tape, loss, params.values())
            clip_gradients(grads, config.clip_norm)
            adam_step(params, grads, state)
            losses.append(loss.item())

        report = evaluate_model(model, selection_set, config.decoder, config.beam_width)
        stats = EpochStats(epoch=epoch, train_loss=float(np.mean(losses)), dev_f1=report.f1)
        history.append(stats)
        logger.info("epoch=%d train_loss=%.6f dev_f1=%.6f", stats.epoch, stats.train_loss, stats.dev_f1)
        if on_epoch is not None:
            on_epoch(stats)

        if stats.dev_f1 > best.dev_f1:
            best = stats
            best_parameters = model.snapshot()
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                logger.info("no dev improvement for %d epochs, stopping", stale)
                break

    for name, data in best_parameters.items():
        model.parameters[name].data = data

    return Checkpoint(
        model=model,
        epoch=best.epoch,
        dev_f1=best.dev_f1,
        seed=config.seed,
        train_config=config.to_dict(),
        history=history,
    )
