import io
import json

import numpy as np
from django.test import SimpleTestCase

from ..checkpoint import HEADER, MAGIC, load_checkpoint, save_checkpoint, write_checkpoint
from ..corpus import parse_line
from ..exceptions import CheckpointError, ConfigError
from ..training import Checkpoint, EpochStats, TrainConfig, train
from .support import random_corpus, tiny_model


def _split(data: bytes) -> tuple[dict, bytes]:
    _, _, length = HEADER.unpack_from(data)
    return json.loads(data[HEADER.size : HEADER.size + length]), data[HEADER.size + length :]


def _join(manifest: dict, payload: bytes, version: int = 1) -> bytes:
    encoded = json.dumps(manifest, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return HEADER.pack(MAGIC, version, len(encoded)) + encoded + payload


class CheckpointRoundTripTestCase(SimpleTestCase):
    def setUp(self):
        self.model = tiny_model("BEMS", text="甲乙丙丁戊己庚辛壬癸", seed=8)
        self.checkpoint = Checkpoint(
            model=self.model,
            epoch=4,
            dev_f1=0.75,
            seed=8,
            train_config={"learning_rate": 0.002},
            history=[EpochStats(1, 1.5, 0.5), EpochStats(4, 0.7, 0.75)],
        )

    def test_save_load_save_is_byte_identical(self):
        data = save_checkpoint(self.checkpoint)
        self.assertEqual(save_checkpoint(load_checkpoint(data)), data)

    def test_everything_survives(self):
        loaded = load_checkpoint(io.BytesIO(save_checkpoint(self.checkpoint)))
        self.assertEqual(loaded.model.config, self.model.config)
        self.assertEqual(loaded.model.vocabulary.tokens, self.model.vocabulary.tokens)
        self.assertEqual((loaded.epoch, loaded.dev_f1, loaded.seed), (4, 0.75, 8))
        self.assertEqual(loaded.history, self.checkpoint.history)
        for name, tensor in self.model.parameters.items():
            np.testing.assert_array_equal(loaded.model.parameters[name].data, tensor.data)

    def test_write_to_stream(self):
        stream = io.BytesIO()
        write_checkpoint(self.model, stream)
        self.assertTrue(stream.getvalue().startswith(MAGIC))

    def test_loaded_model_segments_like_the_original(self):
        loaded = load_checkpoint(save_checkpoint(self.model)).model
        for sentence in random_corpus(seed=6, size=100, lexicon=["甲", "乙丙", "丁戊己", "庚辛", "壬", "癸"]):
            self.assertEqual(loaded.segment(sentence.characters), self.model.segment(sentence.characters))

    def test_expected_tag_set(self):
        data = save_checkpoint(self.model)
        self.assertEqual(load_checkpoint(data, expected_tagset="bems").model.tagset.name, "BEMS")
        with self.assertRaises(ConfigError):
            load_checkpoint(data, expected_tagset="01")

    def test_null_and_control_characters_survive(self):
        corpus = [parse_line("甲\x00 乙丙"), parse_line("乙丙 \x01甲")] * 3
        config = TrainConfig.for_tagset(
            "BE", embedding_dim=4, hidden_size=4, num_layers=1, biaffine_dim=3, max_epochs=1, batch_size=2
        )
        checkpoint = train(corpus, config)
        loaded = load_checkpoint(save_checkpoint(checkpoint))
        self.assertIn("\x00", loaded.model.vocabulary.tokens)
        self.assertEqual(loaded.model.vocabulary.tokens, checkpoint.model.vocabulary.tokens)
        self.assertEqual(loaded.model.segment("甲\x00乙丙"), checkpoint.model.segment("甲\x00乙丙"))


class CheckpointCorruptionTestCase(SimpleTestCase):
    def setUp(self):
        self.data = save_checkpoint(tiny_model("BE", seed=1))

    def assertFieldError(self, data, field):
        with self.assertRaises(CheckpointError) as caught:
            load_checkpoint(data)
        self.assertEqual(caught.exception.field, field)

    def test_bad_magic(self):
        self.assertFieldError(b"NOTACKPT" + self.data[8:], "magic")

    def test_version_mismatch(self):
        manifest, payload = _split(self.data)
        self.assertFieldError(_join(manifest, payload, version=2), "version")

    def test_short_header(self):
        self.assertFieldError(self.data[:10], "header")

    def test_truncated_payload(self):
        self.assertFieldError(self.data[:-8], "payload_bytes")

    def test_truncated_manifest(self):
        self.assertFieldError(self.data[: HEADER.size + 5], "manifest")

    def test_shape_mismatch_names_the_tensor(self):
        manifest, payload = _split(self.data)
        for entry in manifest["tensors"]:
            if entry["name"] == "scorer.gap.b":
                entry["shape"] = [2]
        self.assertFieldError(_join(manifest, payload), "tensors.scorer.gap.b")

    def test_missing_tensor(self):
        manifest, payload = _split(self.data)
        manifest["tensors"] = [e for e in manifest["tensors"] if e["name"] != "scorer.gap.u"]
        self.assertFieldError(_join(manifest, payload), "tensors.scorer.gap.u")

    def test_invalid_manifest_field(self):
        manifest, payload = _split(self.data)
        manifest["config"]["hidden_size"] = 0
        self.assertFieldError(_join(manifest, payload), "config.hidden_size")
