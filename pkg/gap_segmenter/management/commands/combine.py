from ... import conf
from ...corpus import parse_lines
from ...evaluation import align_lines, hybrid_combine
from ..base import SegmenterCommand


class Command(SegmenterCommand):
    help = "Merges two segmentations of the same text: ours for long sentences, base for the rest."

    config_fields = ("threshold",)

    def add_arguments(self, parser):
        parser.add_argument("base", help="segmentation used for short sentences")
        parser.add_argument("ours", help="segmentation used for sentences longer than the threshold")
        parser.add_argument("--threshold", type=int, help="length in characters; defaults to 90")
        parser.add_argument("--output", metavar="PATH", help="defaults to stdout")

    def handle(self, *args, **options):
        values = self.resolve_config(options)
        threshold = values.get("threshold", conf.segmenter_setting("HYBRID_THRESHOLD"))

        with self.open_input(options["base"]) as stream:
            base_lines = parse_lines(stream)
        with self.open_input(options["ours"]) as stream:
            ours_lines = parse_lines(stream)
        base, ours = align_lines(base_lines, ours_lines)
        combined = iter(hybrid_combine(base, ours, threshold))

        with self.open_output(options["output"]) as out:
            for line in base_lines:
                out.write((next(combined).render() if line is not None else "") + "\n")
