import numpy as np
from django.test import SimpleTestCase

from ..choices import TagSetName
from ..exceptions import ConfigError
from ..tagsets import BE, BEMS, BINARY, builtin_tagsets, get_tagset, validate


class BuiltinTagSetTestCase(SimpleTestCase):
    def test_names_and_sizes(self):
        tagsets = builtin_tagsets()
        self.assertEqual(sorted(tagsets), ["01", "BE", "BEMS"])
        self.assertEqual([tagsets[name].size for name in ("01", "BE", "BEMS")], [2, 4, 8])

    def test_lookup_is_case_insensitive(self):
        self.assertIs(get_tagset("bems"), BEMS)
        self.assertIs(get_tagset("Be"), BE)
        self.assertIs(get_tagset(TagSetName.BINARY), BINARY)
        with self.assertRaises(ConfigError):
            get_tagset("bmes")

    def test_be_transitions(self):
        self.assertEqual(
            {label: set(successors) for label, successors in BE.transitions.items()},
            {"BE": {"EB", "EE"}, "BB": {"BB", "BE"}, "EB": {"BB", "BE"}, "EE": {"EB", "EE"}},
        )

    def test_bems_transitions(self):
        self.assertEqual(
            {label: set(successors) for label, successors in BEMS.transitions.items()},
            {
                "BE": {"EB", "ES"},
                "BM": {"ME", "MM"},
                "EB": {"BE", "BM"},
                "ES": {"SB", "SS"},
                "SS": {"SS", "SB"},
                "SB": {"BE", "BM"},
                "ME": {"EB", "ES"},
                "MM": {"MM", "ME"},
            },
        )

    def test_paired_labels_have_exactly_two_successors(self):
        for tagset in (BE, BEMS):
            self.assertTrue(np.all(tagset.transition_mask.sum(axis=1) == 2), tagset.name)

    def test_successors_share_the_middle_character(self):
        for tagset in (BE, BEMS):
            for label, successors in tagset.transitions.items():
                for successor in successors:
                    self.assertEqual(label[1], successor[0])

    def test_boundaries_follow_the_right_tag(self):
        self.assertEqual([BE.boundary_map[label] for label in BE.labels], [True, False, True, False])
        self.assertTrue(BEMS.boundary_map["ES"])
        self.assertTrue(BEMS.boundary_map["SB"])
        self.assertFalse(BEMS.boundary_map["BM"])
        self.assertFalse(BEMS.boundary_map["ME"])

    def test_start_and_end_sets(self):
        self.assertEqual(BEMS.start_allowed, {"BE", "BM", "SS", "SB"})
        self.assertEqual(BEMS.end_allowed, {"BE", "ME", "ES", "SS"})
        self.assertEqual(BE.start_allowed, {"BB", "BE"})

    def test_binary_is_unconstrained(self):
        self.assertTrue(BINARY.unconstrained)
        self.assertTrue(BINARY.transition_mask.all())


class ValidateTestCase(SimpleTestCase):
    def test_valid_sequence(self):
        self.assertIsNone(validate(["BE", "EB"], BE))

    def test_forbidden_transition_is_reported_at_its_position(self):
        violation = validate(["BE", "BB"], BE)
        self.assertEqual(violation.position, 2)
        self.assertEqual(violation.pair, ("BE", "BB"))

    def test_empty_sequence_is_valid(self):
        self.assertIsNone(validate([], BEMS))

    def test_bad_start_and_end(self):
        self.assertEqual(validate(["EB"], BE).reason, "label cannot start a sentence")
        self.assertEqual(validate(["SB"], BEMS).reason, "label cannot end a sentence")

    def test_unknown_label(self):
        self.assertEqual(validate(["BE", "XX"], BEMS).position, 2)
