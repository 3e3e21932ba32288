from ... import conf
from ...bench import bench, bench_lines, format_bench
from ...checkpoint import read_checkpoint
from ...corpus import read_raw_lines
from ...exceptions import ConfigError
from ..base import SegmenterCommand


class Command(SegmenterCommand):
    help = "Times encoding, scoring and decoding on short and long sentences."

    config_fields = ("tagset", "decoder", "beam_width", "checkpoint")

    def add_arguments(self, parser):
        parser.add_argument("input", help="raw UTF-8 text, one sentence per line")
        parser.add_argument("--checkpoint", metavar="PATH")
        parser.add_argument("--tagset")
        parser.add_argument("--decoder", help="greedy, beam or viterbi")
        parser.add_argument("--beam-width", type=int)
        parser.add_argument("--repeat", type=int, default=3, help="passes over the input; medians are reported")
        parser.add_argument("--long-threshold", type=int, help="sentences longer than this count as long")
        parser.add_argument("--parallel", action="store_true", help="report multi-threaded throughput only")
        parser.add_argument("--workers", type=int)
        parser.add_argument("--format", choices=("table", "kv"), default="table")

    def handle(self, *args, **options):
        values = self.resolve_config(options)
        if "checkpoint" not in values:
            raise ConfigError("a checkpoint path is required (--checkpoint or checkpoint= in the config file)")
        if options["repeat"] < 1:
            raise ConfigError(f"--repeat must be at least 1, got {options['repeat']}")
        if options["workers"] is not None and options["workers"] < 1:
            raise ConfigError(f"--workers must be at least 1, got {options['workers']}")

        model = read_checkpoint(values["checkpoint"], expected_tagset=values.get("tagset")).model.freeze()
        with self.open_input(options["input"]) as stream:
            sentences = [text for text in read_raw_lines(stream) if text]

        report = bench(
            model,
            sentences,
            options["repeat"],
            decoder=values.get("decoder"),
            width=values.get("beam_width", conf.segmenter_setting("BEAM_WIDTH")),
            long_threshold=options["long_threshold"] or conf.segmenter_setting("LONG_SENTENCE"),
            parallel=options["parallel"],
            workers=options["workers"],
        )
        if options["format"] == "kv":
            for line in bench_lines(report):
                self.stdout.write(line)
        else:
            self.stdout.write(format_bench(report))
