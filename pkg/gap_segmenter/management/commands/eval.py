from ...corpus import parse_lines
from ...evaluation import align_lines, bucketed_f1, f1, format_report, report_lines
from ..base import SegmenterCommand


class Command(SegmenterCommand):
    help = "Scores a segmented prediction against gold with word-level precision, recall and F1."

    def add_arguments(self, parser):
        parser.add_argument("gold")
        parser.add_argument("pred")
        parser.add_argument("--buckets", action="store_true", help="add one row per sentence-length bucket")
        parser.add_argument("--format", choices=("table", "kv"), default="table")

    def handle(self, *args, **options):
        with self.open_input(options["gold"]) as stream:
            gold_lines = parse_lines(stream)
        with self.open_input(options["pred"]) as stream:
            pred_lines = parse_lines(stream)
        gold, pred = align_lines(gold_lines, pred_lines)

        report = f1(gold, pred)
        buckets = bucketed_f1(gold, pred) if options["buckets"] else None
        if options["format"] == "kv":
            for line in report_lines(report, buckets):
                self.stdout.write(line)
        else:
            self.stdout.write(format_report(report, buckets))
