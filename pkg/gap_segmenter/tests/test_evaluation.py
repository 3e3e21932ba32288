import numpy as np
from django.test import SimpleTestCase

from ..corpus import SegmentedSentence, parse_line
from ..evaluation import (
    LENGTH_BUCKETS,
    align_lines,
    bucket_of,
    bucketed_f1,
    f1,
    format_report,
    hybrid_combine,
    report_lines,
)
from ..exceptions import AlignmentError
from .support import random_corpus


def _corrupt(sentence: SegmentedSentence) -> SegmentedSentence:
    """Every character its own word."""
    return SegmentedSentence(sentence.characters, tuple(range(1, len(sentence) + 1)))


class F1TestCase(SimpleTestCase):
    def test_perfect_prediction(self):
        corpus = random_corpus(seed=1, size=20)
        report = f1(corpus, corpus)
        self.assertEqual((report.precision, report.recall, report.f1), (1.0, 1.0, 1.0))

    def test_no_matching_span(self):
        self.assertEqual(f1([parse_line("AB C")], [parse_line("A BC")]).f1, 0.0)

    def test_partial_match(self):
        report = f1([parse_line("A B C")], [parse_line("A BC")])
        self.assertEqual(report.correct_words, 1)
        self.assertAlmostEqual(report.precision, 1 / 2)
        self.assertAlmostEqual(report.recall, 1 / 3)
        self.assertAlmostEqual(report.f1, 0.4)

    def test_counts_are_micro_averaged(self):
        report = f1([parse_line("A B C"), parse_line("DE")], [parse_line("A BC"), parse_line("DE")])
        self.assertEqual((report.gold_words, report.predicted_words, report.correct_words), (4, 3, 2))

    def test_character_mismatch_names_the_pair(self):
        with self.assertRaises(AlignmentError) as caught:
            f1([parse_line("AB"), parse_line("CD")], [parse_line("AB"), parse_line("CE")])
        self.assertEqual(caught.exception.index, 2)

    def test_sentence_count_mismatch(self):
        with self.assertRaises(AlignmentError):
            f1([parse_line("AB")], [])


class BucketTestCase(SimpleTestCase):
    def test_bucket_edges(self):
        self.assertEqual([bucket_of(n) for n in (1, 30, 31, 90, 91, 121, 5000)],
                         ["0-30", "0-30", "31-60", "61-90", "91-120", "121-inf", "121-inf"])

    def test_short_sentences_fill_only_the_first_bucket(self):
        corpus = random_corpus(seed=4, size=30, max_words=3)
        buckets = bucketed_f1(corpus, corpus)
        self.assertEqual(list(buckets), [name for name, _, _ in LENGTH_BUCKETS])
        self.assertEqual(buckets["0-30"].sentences, 30)
        self.assertTrue(all(buckets[name].sentences == 0 for name in list(buckets)[1:]))
        self.assertEqual(buckets["31-60"].f1, 0.0)


class HybridCombineTestCase(SimpleTestCase):
    def setUp(self):
        short = random_corpus(seed=5, size=20, max_words=4)
        long = random_corpus(seed=6, size=10, min_words=40, max_words=50)
        self.gold = short + long
        self.ours = list(self.gold)
        self.base = [s if len(s) <= 90 else _corrupt(s) for s in self.gold]

    def test_short_sentences_keep_base(self):
        base = random_corpus(seed=7, size=10, max_words=4)
        ours = [_corrupt(s) for s in base]
        self.assertEqual(hybrid_combine(base, ours), base)

    def test_long_sentence_takes_ours(self):
        sentence = SegmentedSentence.from_words(["甲乙"] * 50)
        self.assertEqual(hybrid_combine([_corrupt(sentence)], [sentence]), [sentence])

    def test_combination_beats_a_base_that_fails_on_long_sentences(self):
        self.assertTrue(any(len(s) > 90 for s in self.gold))
        combined = hybrid_combine(self.base, self.ours, threshold=90)
        self.assertGreater(f1(self.gold, combined).f1, f1(self.gold, self.base).f1)
        for original, merged in zip(self.base, combined):
            if len(original) <= 90:
                self.assertIs(merged, original)

    def test_threshold_extremes(self):
        self.assertEqual(hybrid_combine(self.base, self.ours, threshold=0), self.ours)
        self.assertEqual(hybrid_combine(self.base, self.ours, threshold=10**9), self.base)

    def test_misaligned_inputs(self):
        with self.assertRaises(AlignmentError):
            hybrid_combine([parse_line("AB")], [parse_line("AC")])


class AlignLinesTestCase(SimpleTestCase):
    def test_blank_lines_must_coincide(self):
        with self.assertRaises(AlignmentError) as caught:
            align_lines([parse_line("AB"), None], [parse_line("A B"), parse_line("C")])
        self.assertEqual(caught.exception.index, 2)
        self.assertIn("line 2", str(caught.exception))

    def test_pairs_non_empty_lines(self):
        gold, pred = align_lines([parse_line("AB"), None], [parse_line("A B"), None])
        self.assertEqual([s.render() for s in pred], ["A B"])
        self.assertEqual(len(gold), 1)


class ReportOutputTestCase(SimpleTestCase):
    def test_key_value_lines(self):
        report = f1([parse_line("A B C")], [parse_line("A BC")])
        lines = report_lines(report)
        self.assertIn("metric=f1 bucket=all value=0.400000", lines)
        self.assertIn("metric=correct bucket=all value=1", lines)

    def test_buckets_add_five_rows(self):
        corpus = random_corpus(seed=2, size=5)
        buckets = bucketed_f1(corpus, corpus)
        lines = report_lines(f1(corpus, corpus), buckets)
        self.assertEqual(len([line for line in lines if line.startswith("metric=f1 ")]), 6)
        self.assertIn("121-inf", format_report(f1(corpus, corpus), buckets))


class F1SymmetryTestCase(SimpleTestCase):
    def test_swapping_gold_and_prediction_swaps_precision_and_recall(self):
        rng = np.random.default_rng(9)
        gold = random_corpus(seed=8, size=40)
        pred = []
        for sentence in gold:
            inner = [gap for gap in range(1, len(sentence)) if rng.random() < 0.4]
            pred.append(SegmentedSentence(sentence.characters, tuple(inner) + (len(sentence),)))

        forward, swapped = f1(gold, pred), f1(pred, gold)
        self.assertEqual(swapped.correct_words, forward.correct_words)
        self.assertEqual((swapped.gold_words, swapped.predicted_words), (forward.predicted_words, forward.gold_words))
        self.assertAlmostEqual(swapped.precision, forward.recall)
        self.assertAlmostEqual(swapped.recall, forward.precision)
        self.assertAlmostEqual(swapped.f1, forward.f1)
