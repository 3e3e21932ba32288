import logging

from django.db import transaction

from ... import conf
from ...checkpoint import write_checkpoint
from ...corpus import load_embeddings, parse_corpus
from ...exceptions import ConfigError
from ...models import EpochRecord, TrainingRun
from ...serializers import TrainConfigSerializer
from ...training import TrainConfig, train
from ..base import SegmenterCommand

logger = logging.getLogger(__name__)


class Command(SegmenterCommand):
    help = "Trains a gap segmenter on a segmented corpus and writes its checkpoint."

    config_serializer = TrainConfigSerializer
    config_fields = (
        "tagset",
        "seed",
        "beam_width",
        "embeddings",
        "checkpoint",
        "learning_rate",
        "dropout",
        "batch_size",
        "epochs",
        "patience",
        "embedding_dim",
        "hidden_size",
        "layers",
        "biaffine_dim",
        "freeze_embeddings",
    )

    def add_arguments(self, parser):
        parser.add_argument("corpus", help="UTF-8 corpus, one sentence per line, words space-separated")
        parser.add_argument("--checkpoint", metavar="PATH", help="where to write the trained model")
        parser.add_argument("--tagset", help="01, be or bems")
        parser.add_argument("--seed", type=int)
        parser.add_argument("--beam-width", type=int, help="beam width for dev evaluation")
        parser.add_argument("--embeddings", metavar="PATH", help="word2vec text-format character vectors")
        parser.add_argument("--freeze-embeddings", action="store_true", default=None)
        parser.add_argument("--learning-rate", type=float, help="defaults to the tag set preset")
        parser.add_argument("--dropout", type=float, help="defaults to the tag set preset")
        parser.add_argument("--batch-size", type=int)
        parser.add_argument("--epochs", type=int, help="maximum number of epochs")
        parser.add_argument("--patience", type=int, help="epochs without dev improvement before stopping")
        parser.add_argument("--embedding-dim", type=int)
        parser.add_argument("--hidden-size", type=int)
        parser.add_argument("--layers", type=int)
        parser.add_argument("--biaffine-dim", type=int)
        parser.add_argument("--log", metavar="PATH", help="also write per-epoch lines to PATH")
        parser.add_argument("--no-record", action="store_true", help="do not store the run in the database")

    def handle(self, *args, **options):
        values = self.resolve_config(options)
        if "tagset" not in values:
            raise ConfigError("a tag set is required (--tagset or tagset= in the config file)")
        if "checkpoint" not in values:
            raise ConfigError("a checkpoint path is required (--checkpoint or checkpoint= in the config file)")

        config = TrainConfig.for_tagset(
            values["tagset"],
            learning_rate=values.get("learning_rate"),
            dropout_p=values.get("dropout"),
            batch_size=values.get("batch_size"),
            max_epochs=values.get("epochs"),
            seed=values.get("seed"),
            patience=values.get("patience"),
            beam_width=values.get("beam_width"),
            embedding_dim=values.get("embedding_dim"),
            hidden_size=values.get("hidden_size"),
            num_layers=values.get("layers"),
            biaffine_dim=values.get("biaffine_dim"),
            train_embeddings=not values["freeze_embeddings"] if "freeze_embeddings" in values else None,
        )

        with self.open_input(options["corpus"]) as stream:
            corpus = parse_corpus(stream)
        logger.info("read %d sentences from %s", len(corpus), options["corpus"])

        embeddings = None
        if values.get("embeddings"):
            path = values["embeddings"]

            def embeddings(vocabulary):
                with open(path, "rb") as stream:
                    return load_embeddings(
                        stream,
                        vocabulary,
                        config.embedding_dim,
                        config.seed,
                        init=conf.segmenter_setting("EMBEDDING_INIT"),
                        trainable=config.train_embeddings,
                    )

        log_file = open(options["log"], "w", encoding="utf-8", newline="\n") if options["log"] else None
        try:

            def on_epoch(stats):
                if log_file is not None:
                    log_file.write(
                        f"epoch={stats.epoch} train_loss={stats.train_loss:.6f} dev_f1={stats.dev_f1:.6f}\n"
                    )
                    log_file.flush()

            checkpoint = train(corpus, config, embeddings=embeddings, on_epoch=on_epoch)
        finally:
            if log_file is not None:
                log_file.close()

        with open(values["checkpoint"], "wb") as stream:
            write_checkpoint(checkpoint, stream)

        if not options["no_record"]:
            self._record(checkpoint, values["checkpoint"])

        self.stdout.write(
            self.style.SUCCESS(
                f"Saved {config.tagset} checkpoint to {values['checkpoint']} "
                f"(best epoch {checkpoint.epoch}, dev F1 {checkpoint.dev_f1:.4f})"
            )
        )

    @transaction.atomic
    def _record(self, checkpoint, path):
        run = TrainingRun.objects.create(
            tagset=checkpoint.model.config.tagset,
            seed=checkpoint.seed,
            checkpoint_path=str(path),
            best_epoch=checkpoint.epoch,
            best_dev_f1=checkpoint.dev_f1,
            hyperparameters=checkpoint.train_config,
        )
        EpochRecord.objects.bulk_create(
            EpochRecord(run=run, epoch=stats.epoch, train_loss=stats.train_loss, dev_f1=stats.dev_f1)
            for stats in checkpoint.history
        )
