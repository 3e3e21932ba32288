import numpy as np
from django.test import SimpleTestCase

from ..exceptions import ShapeError, TrainingError
from ..numeric import AdamState, ComputationTape, Tensor, adam_step, add, backward, mul, reduce_sum, scale


class AdamTestCase(SimpleTestCase):
    def test_zero_gradient_leaves_parameters_unchanged(self):
        param = Tensor([1.0, -2.0], requires_grad=True, name="w")
        state = adam_step({"w": param}, {"w": np.zeros(2)}, AdamState(learning_rate=0.1))
        np.testing.assert_array_equal(param.data, [1.0, -2.0])
        self.assertEqual(state.step, 1)

    def test_first_step_matches_closed_form(self):
        param = Tensor(0.5, requires_grad=True, name="w")
        adam_step({"w": param}, {"w": np.array(1.0)}, AdamState(learning_rate=0.001))
        # m_hat = 1, v_hat = 1 after bias correction
        self.assertAlmostEqual(param.item(), 0.5 - 0.001 / (1.0 + 1e-8), places=12)

    def test_missing_gradient_counts_as_zero(self):
        a = Tensor([1.0], requires_grad=True, name="a")
        b = Tensor([1.0], requires_grad=True, name="b")
        adam_step({"a": a, "b": b}, {"a": np.array([2.0])}, AdamState(learning_rate=0.01))
        self.assertLess(a.data[0], 1.0)
        self.assertEqual(b.data[0], 1.0)

    def test_non_finite_gradient_names_the_parameter(self):
        param = Tensor([1.0, 1.0], requires_grad=True, name="scorer.gap.b")
        with self.assertRaisesMessage(TrainingError, "scorer.gap.b"):
            adam_step({"scorer.gap.b": param}, {"scorer.gap.b": np.array([np.nan, 0.0])}, AdamState(0.1))
        np.testing.assert_array_equal(param.data, [1.0, 1.0])

    def test_shape_mismatch(self):
        param = Tensor([1.0, 1.0], requires_grad=True, name="w")
        with self.assertRaises(ShapeError):
            adam_step({"w": param}, {"w": np.zeros(3)}, AdamState(0.1))

    def test_minimizes_a_quadratic(self):
        x = Tensor([0.0], requires_grad=True, name="x")
        target = Tensor([-3.0])
        state = AdamState(learning_rate=0.05)
        for _ in range(1000):
            with ComputationTape() as tape:
                diff = add(x, target)
                loss = reduce_sum(scale(mul(diff, diff), 0.5))
            adam_step({"x": x}, backward(tape, loss, [x]), state)
        np.testing.assert_allclose(x.data, [3.0], atol=0.05)
