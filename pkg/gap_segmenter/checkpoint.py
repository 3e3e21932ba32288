"""Binary checkpoint container; the layout is described in docs/formats.md."""

from __future__ import annotations

import json
import logging
import struct
from typing import IO

import numpy as np

from .corpus import Vocabulary
from .exceptions import CheckpointError, ConfigError
from .model import ModelConfig, SegmenterModel, expected_parameter_shapes
from .numeric import Tensor
from .serializers import CheckpointManifestSerializer
from .tagsets import get_tagset
from .training import FORMAT_VERSION, Checkpoint, EpochStats

logger = logging.getLogger(__name__)

MAGIC = b"GAPSEGCK"
HEADER = struct.Struct("<8sIQ")
PAYLOAD_DTYPE = np.dtype("<f8")


def _manifest(checkpoint: Checkpoint) -> dict:
    model = checkpoint.model
    tensors = []
    offset = 0
    for name, tensor in model.parameters.items():
        tensors.append(
            {
                "name": name,
                "shape": list(tensor.shape),
                "offset": offset,
                "trainable": tensor.requires_grad,
            }
        )
        offset += tensor.data.size * PAYLOAD_DTYPE.itemsize
    return {
        "config": model.config.to_dict(),
        "vocabulary": model.vocabulary.tokens,
        "tensors": tensors,
        "payload_bytes": offset,
        "epoch": checkpoint.epoch,
        "dev_f1": checkpoint.dev_f1,
        "seed": checkpoint.seed,
        "train_config": checkpoint.train_config,
        "history": [
            {"epoch": s.epoch, "train_loss": s.train_loss, "dev_f1": s.dev_f1} for s in checkpoint.history
        ],
    }


def save_checkpoint(checkpoint: Checkpoint | SegmenterModel) -> bytes:
    """Serializes a checkpoint (or a bare model) to bytes."""

    if isinstance(checkpoint, SegmenterModel):
        checkpoint = Checkpoint(model=checkpoint)
    manifest = json.dumps(
        _manifest(checkpoint), sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")
    payload = b"".join(
        np.ascontiguousarray(tensor.data, dtype=PAYLOAD_DTYPE).tobytes()
        for tensor in checkpoint.model.parameters.values()
    )
    logger.debug("checkpoint: %d tensors, %d payload bytes", len(checkpoint.model.parameters), len(payload))
    return HEADER.pack(MAGIC, FORMAT_VERSION, len(manifest)) + manifest + payload


def write_checkpoint(checkpoint: Checkpoint | SegmenterModel, stream: IO[bytes]) -> None:
    stream.write(save_checkpoint(checkpoint))


def _first_error(errors, path: str = "") -> tuple[str, str]:
    """Walks DRF's nested error structure down to the first failing field."""

    if isinstance(errors, dict):
        for key, value in errors.items():
            return _first_error(value, f"{path}.{key}" if path else str(key))
    if isinstance(errors, list):
        for index, value in enumerate(errors):
            if isinstance(value, dict):
                if value:
                    return _first_error(value, f"{path}[{index}]")
            else:
                return path or "manifest", str(value)
    return path or "manifest", str(errors)


def load_checkpoint(data: bytes | IO[bytes], expected_tagset: str | None = None) -> Checkpoint:
    """Reads a checkpoint and validates it against its own configuration.

    Args:
        data: Checkpoint bytes or a binary stream.
        expected_tagset (str | None): When given, the checkpoint must score this tag set.

    Raises:
        CheckpointError: Bad magic or version, malformed manifest, shape mismatch or truncation.
        ConfigError: The checkpoint's label count does not fit ``expected_tagset``.
    """

    if not isinstance(data, (bytes, bytearray)):
        data = data.read()
    if len(data) < HEADER.size:
        raise CheckpointError("stream ends before the header", "header")
    magic, version, manifest_length = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointError("not a segmenter checkpoint", "magic")
    if version != FORMAT_VERSION:
        raise CheckpointError(f"unsupported version {version}, expected {FORMAT_VERSION}", "version")
    manifest_end = HEADER.size + manifest_length
    if len(data) < manifest_end:
        raise CheckpointError("stream ends inside the manifest", "manifest")
    try:
        manifest = json.loads(data[HEADER.size : manifest_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"unreadable manifest ({exc})", "manifest") from None

    serializer = CheckpointManifestSerializer(data=manifest)
    if not serializer.is_valid():
        field, message = _first_error(serializer.errors)
        raise CheckpointError(message, field)

    config = ModelConfig(**dict(serializer.validated_data["config"]))
    vocabulary = Vocabulary.from_tokens(manifest["vocabulary"])
    expected = expected_parameter_shapes(config, len(vocabulary))

    if expected_tagset is not None:
        wanted = get_tagset(expected_tagset)
        if config.tagset != wanted.name:
            labels = expected["scorer.gap.b"][0]
            raise ConfigError(
                f"checkpoint scores {labels} labels for tag set {config.tagset}, "
                f"tag set {wanted.name} needs {wanted.size}"
            )

    payload = memoryview(data)[manifest_end:]
    if len(payload) < manifest["payload_bytes"]:
        raise CheckpointError(
            f"payload holds {len(payload)} bytes, manifest declares {manifest['payload_bytes']}",
            "payload_bytes",
        )

    parameters: dict[str, Tensor] = {}
    for entry in manifest["tensors"]:
        name = entry["name"]
        shape = tuple(entry["shape"])
        if name not in expected:
            raise CheckpointError("unexpected tensor", f"tensors.{name}")
        if shape != expected[name]:
            raise CheckpointError(f"shape {shape}, configuration implies {expected[name]}", f"tensors.{name}")
        count = int(np.prod(shape))
        start, stop = entry["offset"], entry["offset"] + count * PAYLOAD_DTYPE.itemsize
        if stop > len(payload):
            raise CheckpointError("payload truncated", f"tensors.{name}")
        values = np.frombuffer(payload[start:stop], dtype=PAYLOAD_DTYPE).astype(np.float64).reshape(shape)
        parameters[name] = Tensor(values, requires_grad=entry["trainable"], name=name)

    missing = sorted(set(expected) - set(parameters))
    if missing:
        raise CheckpointError("tensor missing", f"tensors.{missing[0]}")

    logger.debug("loaded checkpoint with %d tensors (%s)", len(parameters), config.tagset)
    model = SegmenterModel(config=config, vocabulary=vocabulary, parameters=parameters)
    return Checkpoint(
        model=model,
        epoch=manifest["epoch"],
        dev_f1=manifest["dev_f1"],
        seed=manifest["seed"],
        train_config=manifest["train_config"],
        history=[EpochStats(**entry) for entry in manifest["history"]],
        version=version,
    )


def read_checkpoint(path, expected_tagset: str | None = None) -> Checkpoint:
    with open(path, "rb") as stream:
        return load_checkpoint(stream, expected_tagset)
