"""The segmenter: embeddings, BiLSTM encoder and biaffine scorer under one parameter store."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from . import conf, encoder, scorer
from .choices import DecoderName
from .corpus import EmbeddingTable, SegmentedSentence, Vocabulary, random_embeddings
from .decoding import decode, segment
from .encoder import EncoderConfig, EncoderOutput
from .exceptions import ConfigError
from .numeric import Tensor
from .scorer import AffineHeads, BiaffineParams
from .tagsets import TagSetSpec, get_tagset


@dataclass(frozen=True)
class ModelConfig:
    """Architecture of one segmenter.

    Attributes:
        tagset (str): 01, BE or BEMS.
        embedding_dim (int): Character embedding size.
        hidden_size (int): LSTM state size per direction.
        num_layers (int): Stacked BiLSTM layers.
        biaffine_dim (int): Output size of the front/rear affine heads.
        dropout_p (float): Dropout on every LSTM layer input and before each affine head.
        train_embeddings (bool): Whether the embedding table is updated in training.
    """

    tagset: str
    embedding_dim: int = 300
    hidden_size: int = 300
    num_layers: int = 3
    biaffine_dim: int = 300
    dropout_p: float = 0.0
    train_embeddings: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "tagset", get_tagset(self.tagset).name)
        if self.biaffine_dim < 1:
            raise ConfigError(f"biaffine_dim must be positive, got {self.biaffine_dim}")
        EncoderConfig(self.embedding_dim, self.hidden_size, self.num_layers, self.dropout_p)

    @classmethod
    def for_tagset(cls, tagset: str, **overrides: Any) -> "ModelConfig":
        """Builds the configured defaults of a tag set, then applies ``overrides``."""

        values = {
            "embedding_dim": conf.segmenter_setting("EMBEDDING_DIM"),
            "hidden_size": conf.segmenter_setting("HIDDEN_SIZE"),
            "num_layers": conf.segmenter_setting("NUM_LAYERS"),
            "biaffine_dim": conf.segmenter_setting("BIAFFINE_DIM"),
            "dropout_p": conf.default_dropout(tagset),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(tagset=tagset, **values)

    @property
    def encoder(self) -> EncoderConfig:
        return EncoderConfig(
            embedding_dim=self.embedding_dim,
            hidden_size=self.hidden_size,
            num_layers=self.num_layers,
            dropout_p=self.dropout_p,
        )

    @property
    def tagset_spec(self) -> TagSetSpec:
        return get_tagset(self.tagset)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def expected_parameter_shapes(config: ModelConfig, vocab_size: int) -> dict[str, tuple[int, ...]]:
    shapes = {"embedding": (vocab_size, config.embedding_dim)}
    shapes.update(encoder.parameter_shapes(config.encoder))
    shapes.update(
        scorer.parameter_shapes(config.encoder.output_dim, config.biaffine_dim, config.tagset_spec.size)
    )
    return shapes


@dataclass
class SegmenterModel:
    config: ModelConfig
    vocabulary: Vocabulary
    parameters: dict[str, Tensor] = field(default_factory=dict)

    @classmethod
    def initialize(
        cls,
        config: ModelConfig,
        vocabulary: Vocabulary,
        seed: int,
        embeddings: EmbeddingTable | None = None,
    ) -> "SegmenterModel":
        rng = np.random.default_rng(seed)
        if embeddings is None:
            table = random_embeddings(
                len(vocabulary), config.embedding_dim, rng, conf.segmenter_setting("EMBEDDING_INIT")
            )
        else:
            if embeddings.matrix.shape != (len(vocabulary), config.embedding_dim):
                raise ConfigError(
                    f"embedding table {embeddings.matrix.shape} does not fit "
                    f"vocabulary {len(vocabulary)} x {config.embedding_dim}"
                )
            table = embeddings.matrix.copy()
        trainable = config.train_embeddings and (embeddings is None or embeddings.trainable)
        parameters = {"embedding": Tensor(table, requires_grad=trainable, name="embedding")}
        parameters.update(encoder.init_parameters(config.encoder, rng))
        parameters.update(
            scorer.init_parameters(
                config.encoder.output_dim, config.biaffine_dim, config.tagset_spec.size, rng
            )
        )
        return cls(config=config, vocabulary=vocabulary, parameters=parameters)

    @property
    def tagset(self) -> TagSetSpec:
        return self.config.tagset_spec

    def trainable_parameters(self) -> dict[str, Tensor]:
        return {name: tensor for name, tensor in self.parameters.items() if tensor.requires_grad}

    def freeze(self) -> "SegmenterModel":
        """Makes every parameter array read-only; a frozen model is safe to share between threads."""

        for tensor in self.parameters.values():
            tensor.data.setflags(write=False)
        return self

    def snapshot(self) -> dict[str, np.ndarray]:
        return {name: tensor.data.copy() for name, tensor in self.parameters.items()}

    def encode(
        self, text: str, *, training: bool = False, rng: np.random.Generator | None = None
    ) -> EncoderOutput:
        return encoder.encode(
            self.vocabulary.encode(text), self.config.encoder, self.parameters, training=training, rng=rng
        )

    def score(
        self,
        encoded: EncoderOutput,
        *,
        training: bool = False,
        rng: np.random.Generator | None = None,
    ) -> Tensor:
        return scorer.score_sentence(
            encoded.combined,
            AffineHeads.from_parameters(self.parameters),
            BiaffineParams.from_parameters(self.parameters),
            dropout_p=self.config.dropout_p,
            training=training,
            rng=rng,
        )

    def gap_scores(
        self, text: str, *, training: bool = False, rng: np.random.Generator | None = None
    ) -> Tensor:
        return self.score(self.encode(text, training=training, rng=rng), training=training, rng=rng)

    def decode(
        self, scores: Tensor, decoder: str = DecoderName.BEAM, width: int = 10
    ) -> tuple[str, ...]:
        return decode(scores, self.tagset, decoder, width)

    def segment(
        self, text: str, decoder: str = DecoderName.BEAM, width: int = 10
    ) -> SegmentedSentence:
        if len(text) == 1:
            return SegmentedSentence(text, (1,))
        return segment(text, self.gap_scores(text), self.tagset, decoder, width)
