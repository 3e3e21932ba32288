from concurrent.futures import ThreadPoolExecutor

from ... import conf
from ...checkpoint import read_checkpoint
from ...choices import DecoderName
from ...corpus import read_raw_lines
from ...exceptions import ConfigError
from ..base import SegmenterCommand


class Command(SegmenterCommand):
    help = "Segments raw text, one sentence per line, with a trained checkpoint."

    config_fields = ("tagset", "decoder", "beam_width", "checkpoint")

    def add_arguments(self, parser):
        parser.add_argument("input", help="raw UTF-8 text, or - for stdin")
        parser.add_argument("--checkpoint", metavar="PATH")
        parser.add_argument("--tagset", help="fail unless the checkpoint was trained for this tag set")
        parser.add_argument("--decoder", help="greedy, beam or viterbi")
        parser.add_argument("--beam-width", type=int)
        parser.add_argument("--output", metavar="PATH", help="defaults to stdout")
        parser.add_argument("--workers", type=int, default=1, help="threads segmenting lines in parallel")

    def handle(self, *args, **options):
        values = self.resolve_config(options)
        if "checkpoint" not in values:
            raise ConfigError("a checkpoint path is required (--checkpoint or checkpoint= in the config file)")
        if options["workers"] < 1:
            raise ConfigError(f"--workers must be at least 1, got {options['workers']}")

        model = read_checkpoint(values["checkpoint"], expected_tagset=values.get("tagset")).model.freeze()
        decoder = values.get("decoder") or (
            DecoderName.GREEDY if model.tagset.unconstrained else DecoderName.BEAM
        )
        if decoder == DecoderName.GREEDY and not model.tagset.unconstrained:
            raise ConfigError(f"greedy decoding is only valid with tag set 01, checkpoint uses {model.tagset.name}")
        width = values.get("beam_width", conf.segmenter_setting("BEAM_WIDTH"))

        with self.open_input(options["input"]) as stream:
            lines = read_raw_lines(stream)

        def segment_line(text):
            return model.segment(text, decoder, width).render() if text else ""

        if options["workers"] > 1:
            with ThreadPoolExecutor(max_workers=options["workers"]) as pool:
                rendered = list(pool.map(segment_line, lines))
        else:
            rendered = [segment_line(text) for text in lines]

        with self.open_output(options["output"]) as out:
            for line in rendered:
                out.write(line + "\n")
