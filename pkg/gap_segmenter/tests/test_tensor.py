import numpy as np
from django.test import SimpleTestCase

from ..exceptions import ContractError, ShapeError
from ..numeric import (
    ComputationTape,
    Tensor,
    active_tape,
    add,
    backward,
    bilinear,
    clip_gradients,
    concat,
    cross_entropy,
    dropout,
    elementwise,
    gather_rows,
    global_norm,
    matmul,
    mul,
    narrow,
    reduce_sum,
    reshape,
    scale,
    sigmoid,
    tanh,
    transpose,
)
from .support import numerical_gradient


class ForwardTestCase(SimpleTestCase):
    def test_matmul_identity(self):
        product = matmul(Tensor(np.eye(2)), Tensor([[3.0, 4.0], [5.0, 6.0]]))
        np.testing.assert_array_equal(product.data, [[3.0, 4.0], [5.0, 6.0]])

    def test_matmul_hand_product(self):
        product = matmul(Tensor([[1.0, 2.0]]), Tensor([[3.0], [4.0]]))
        np.testing.assert_array_equal(product.data, [[11.0]])

    def test_matmul_shape_error_names_both_shapes(self):
        with self.assertRaisesMessage(ShapeError, "(2, 3) by (2, 3)"):
            matmul(Tensor(np.zeros((2, 3))), Tensor(np.zeros((2, 3))))

    def test_sigmoid_and_tanh_at_zero(self):
        self.assertEqual(sigmoid(Tensor(0.0)).item(), 0.5)
        self.assertEqual(tanh(Tensor(0.0)).item(), 0.0)

    def test_sigmoid_is_finite_for_large_inputs(self):
        out = sigmoid(Tensor([-1000.0, 1000.0])).data
        self.assertTrue(np.all(np.isfinite(out)))
        np.testing.assert_allclose(out, [0.0, 1.0])

    def test_elementwise_dispatch(self):
        total = elementwise("add", Tensor([1.0, 2.0]), Tensor([3.0, 4.0]))
        np.testing.assert_array_equal(total.data, [4.0, 6.0])
        with self.assertRaises(ContractError):
            elementwise("relu", Tensor([1.0]))

    def test_incompatible_shapes(self):
        with self.assertRaises(ShapeError):
            add(Tensor(np.zeros((2, 3))), Tensor(np.zeros(2)))
        with self.assertRaises(ShapeError):
            mul(Tensor(np.zeros((2, 3))), Tensor(np.zeros((3, 2))))

    def test_vector_broadcasts_over_rows(self):
        out = add(Tensor(np.zeros((2, 3))), Tensor([1.0, 2.0, 3.0]))
        np.testing.assert_array_equal(out.data, [[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]])

    def test_concat_vectors(self):
        np.testing.assert_array_equal(concat(Tensor([1.0, 2.0]), Tensor([3.0]), axis=0).data, [1.0, 2.0, 3.0])

    def test_concat_shape_mismatch(self):
        with self.assertRaises(ShapeError):
            concat(Tensor(np.zeros((2, 3))), Tensor(np.zeros((3, 3))), axis=1)

    def test_gather_rows_out_of_range(self):
        with self.assertRaises(ContractError):
            gather_rows(Tensor(np.zeros((3, 2))), [0, 3])

    def test_dropout_is_identity_at_inference(self):
        x = Tensor(np.ones((4, 4)))
        self.assertIs(dropout(x, 0.5, None, training=False), x)

    def test_dropout_scales_kept_units(self):
        x = Tensor(np.ones((50, 50)))
        out = dropout(x, 0.5, np.random.default_rng(0), training=True).data
        self.assertEqual(set(np.unique(out)), {0.0, 2.0})

    def test_dropout_needs_generator_in_training(self):
        with self.assertRaises(ContractError):
            dropout(Tensor(np.ones(3)), 0.5, None, training=True)


class TapeTestCase(SimpleTestCase):
    def test_operations_outside_a_tape_are_not_recorded(self):
        a = Tensor([1.0], requires_grad=True, name="a")
        add(a, a)
        self.assertIsNone(active_tape())

    def test_constants_are_not_recorded(self):
        with ComputationTape() as tape:
            add(Tensor([1.0]), Tensor([2.0]))
        self.assertEqual(len(tape), 0)

    def test_nested_tapes_restore_the_outer_one(self):
        with ComputationTape() as outer:
            with ComputationTape() as inner:
                self.assertIs(active_tape(), inner)
            self.assertIs(active_tape(), outer)
        self.assertIsNone(active_tape())

    def test_backward_rejects_non_scalar_loss(self):
        a = Tensor([1.0, 2.0], requires_grad=True, name="a")
        with ComputationTape() as tape:
            out = scale(a, 2.0)
        with self.assertRaises(ContractError):
            backward(tape, out)

    def test_unused_parameter_gets_zero_gradient(self):
        used = Tensor([1.0, 2.0], requires_grad=True, name="used")
        unused = Tensor([[1.0, 2.0]], requires_grad=True, name="unused")
        with ComputationTape() as tape:
            loss = reduce_sum(mul(used, used))
        grads = backward(tape, loss, [used, unused])
        np.testing.assert_array_equal(grads["used"], [2.0, 4.0])
        np.testing.assert_array_equal(grads["unused"], np.zeros((1, 2)))

    def test_reused_tensor_accumulates(self):
        a = Tensor([3.0], requires_grad=True, name="a")
        with ComputationTape() as tape:
            loss = reduce_sum(add(mul(a, a), a))
        np.testing.assert_allclose(backward(tape, loss)["a"], [7.0])

    def test_repeated_gather_doubles_the_row_gradient(self):
        table = Tensor(np.arange(6.0).reshape(3, 2), requires_grad=True, name="table")
        with ComputationTape() as tape:
            loss = reduce_sum(gather_rows(table, [1, 1]))
        np.testing.assert_array_equal(backward(tape, loss)["table"], [[0.0, 0.0], [2.0, 2.0], [0.0, 0.0]])

    def test_reset_tape_replays_bit_identically(self):
        rng = np.random.default_rng(8)
        table = Tensor(rng.normal(size=(5, 3)), requires_grad=True, name="table")
        weight = Tensor(rng.normal(size=(3, 4)), requires_grad=True, name="weight")
        params = [table, weight]

        def forward():
            hidden = tanh(matmul(gather_rows(table, [0, 3, 3, 1]), weight))
            return cross_entropy(hidden, [1, 0, 3, 2])

        tape = ComputationTape()
        with tape:
            first = forward()
        recorded = len(tape)
        first_grads = backward(tape, first, params)

        tape.reset()
        self.assertEqual(len(tape), 0)
        with tape:
            second = forward()
        self.assertEqual(len(tape), recorded)
        second_grads = backward(tape, second, params)

        np.testing.assert_array_equal(second.data, first.data)
        for name in ("table", "weight"):
            np.testing.assert_array_equal(second_grads[name], first_grads[name])


class GradientTestCase(SimpleTestCase):
    """Every differentiable operation against central finite differences."""

    def assertGradientsMatch(self, build, *arrays):
        tensors = [Tensor(array, requires_grad=True, name=f"p{k}") for k, array in enumerate(arrays)]
        weights = Tensor(np.random.default_rng(11).normal(size=build(*tensors).shape))

        def value():
            return float(np.sum(build(*tensors).data * weights.data))

        with ComputationTape() as tape:
            loss = reduce_sum(mul(build(*tensors), weights))
        grads = backward(tape, loss, tensors)
        for tensor in tensors:
            np.testing.assert_allclose(
                grads[tensor.name], numerical_gradient(value, tensor.data), rtol=1e-5, atol=1e-8
            )

    def setUp(self):
        self.rng = np.random.default_rng(5)

    def normal(self, *shape):
        return self.rng.normal(size=shape)

    def test_matmul(self):
        self.assertGradientsMatch(matmul, self.normal(3, 4), self.normal(4, 2))

    def test_transpose(self):
        self.assertGradientsMatch(transpose, self.normal(3, 2))

    def test_bilinear(self):
        self.assertGradientsMatch(bilinear, self.normal(4, 3), self.normal(2, 3, 5), self.normal(4, 5))

    def test_add_and_mul_with_row_broadcast(self):
        self.assertGradientsMatch(lambda a, b: mul(add(a, b), b), self.normal(3, 4), self.normal(4))

    def test_tanh_and_sigmoid(self):
        self.assertGradientsMatch(lambda a: mul(tanh(a), sigmoid(a)), self.normal(3, 3))

    def test_concat_and_narrow(self):
        self.assertGradientsMatch(
            lambda a, b: narrow(concat(a, b, axis=1), 1, 5, axis=1), self.normal(2, 3), self.normal(2, 4)
        )

    def test_reshape_and_scale(self):
        self.assertGradientsMatch(lambda a: scale(reshape(a, (3, 2)), -1.5), self.normal(2, 3))

    def test_gather_rows(self):
        self.assertGradientsMatch(lambda t: gather_rows(t, [2, 0, 2]), self.normal(4, 3))

    def test_cross_entropy(self):
        self.assertGradientsMatch(lambda s: cross_entropy(s, [1, 0, 3]), self.normal(3, 4))


class ClippingTestCase(SimpleTestCase):
    def test_clips_to_max_norm(self):
        grads = {"a": np.array([6.0, 0.0]), "b": np.array([[8.0]])}
        factor = clip_gradients(grads, 5.0)
        self.assertAlmostEqual(factor, 0.5)
        self.assertAlmostEqual(global_norm(grads), 5.0)

    def test_small_gradients_are_untouched(self):
        grads = {"a": np.array([0.3, 0.4])}
        self.assertEqual(clip_gradients(grads, 5.0), 1.0)
        np.testing.assert_array_equal(grads["a"], [0.3, 0.4])
