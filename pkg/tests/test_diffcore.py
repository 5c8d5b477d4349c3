import numpy as np
import pytest

from config.errors import ExtentMismatchError, NonFiniteError, ShapeError
from diffcore import (
    Adam,
    Dense,
    Parameter,
    Tape,
    Tensor,
    adam_step,
    check_parameter_gradients,
    conv2d,
    conv_output_extent,
    custom_gradient_node,
    finite_difference_check,
    mlp,
    ops,
    tconv2d,
    tconv_output_extent,
)

TRIALS = 20
TOLERANCE = 1e-4


def _affine_input(rng):
    W, b = rng.standard_normal((3, 4)), rng.standard_normal(3)
    return (lambda t: ops.affine(t, W, b)), rng.standard_normal((5, 4))


def _affine_weights(rng):
    X, b = rng.standard_normal((5, 4)), rng.standard_normal(3)
    return (lambda t: ops.affine(X, t, b)), rng.standard_normal((3, 4))


def _affine_bias(rng):
    X, W = rng.standard_normal((5, 4)), rng.standard_normal((3, 4))
    return (lambda t: ops.affine(X, W, t)), rng.standard_normal(3)


def _conv_input(rng):
    K, bias = rng.standard_normal((3, 2, 3, 3)), rng.standard_normal(3)
    return (lambda t: conv2d(t, K, stride=2, padding=1, bias=bias)), rng.standard_normal((2, 2, 5, 5))


def _conv_kernel(rng):
    X = rng.standard_normal((2, 2, 5, 5))
    return (lambda t: conv2d(X, t, stride=2, padding=1)), rng.standard_normal((3, 2, 3, 3))


def _conv_bias(rng):
    X, K = rng.standard_normal((2, 2, 5, 5)), rng.standard_normal((3, 2, 3, 3))
    return (lambda t: conv2d(X, K, stride=1, padding=0, bias=t)), rng.standard_normal(3)


def _tconv_input(rng):
    K = rng.standard_normal((3, 2, 3, 3))
    return (lambda t: tconv2d(t, K, stride=2, padding=1, output_padding=1)), rng.standard_normal((2, 3, 3, 3))


def _tconv_kernel(rng):
    X = rng.standard_normal((2, 3, 3, 3))
    return (lambda t: tconv2d(X, t, stride=2, padding=1)), rng.standard_normal((3, 2, 3, 3))


def _tconv_bias(rng):
    X, K = rng.standard_normal((3, 3, 3)), rng.standard_normal((3, 2, 2, 2))
    return (lambda t: tconv2d(X, K, stride=2, padding=0, bias=t)), rng.standard_normal(2)


def _broadcast_add(rng):
    C = rng.standard_normal((4, 3))
    return (lambda t: ops.add(C, t)), rng.standard_normal(3)


def _sub(rng):
    C = rng.standard_normal((4, 3))
    return (lambda t: ops.sub(C, ops.sub(t, C))), rng.standard_normal((4, 3))


def _mul(rng):
    C = rng.standard_normal((4, 3))
    return (lambda t: ops.mul(t, ops.add(t, C))), rng.standard_normal((4, 3))


CASES = {
    "add": _broadcast_add,
    "sub": _sub,
    "mul": _mul,
    "neg": lambda rng: (ops.neg, rng.standard_normal((3, 2))),
    "scale": lambda rng: ((lambda t: ops.scale(t, -2.5)), rng.standard_normal(5)),
    "square": lambda rng: (ops.square, rng.standard_normal((2, 3))),
    "exp": lambda rng: (ops.exp, rng.uniform(-2.0, 2.0, (2, 3))),
    "log": lambda rng: (ops.log, rng.uniform(0.5, 3.0, (2, 3))),
    "sum-axis": lambda rng: ((lambda t: ops.sum(t, axis=1)), rng.standard_normal((3, 4))),
    "mean-axis": lambda rng: ((lambda t: ops.mean(t, axis=0)), rng.standard_normal((3, 4))),
    "reshape": lambda rng: ((lambda t: ops.reshape(t, (6, 2))), rng.standard_normal((3, 4))),
    "index": lambda rng: ((lambda t: t[1:3, ::2]), rng.standard_normal((4, 4))),
    "select-columns": lambda rng: ((lambda t: ops.select_columns(t, [2, 0, 2])), rng.standard_normal((3, 4))),
    "affine-input": _affine_input,
    "affine-weights": _affine_weights,
    "affine-bias": _affine_bias,
    "relu": lambda rng: (ops.relu, rng.standard_normal((4, 5))),
    "leaky-relu": lambda rng: ((lambda t: ops.leaky_relu(t, 0.2)), rng.standard_normal((4, 5))),
    "conv2d-input": _conv_input,
    "conv2d-kernel": _conv_kernel,
    "conv2d-bias": _conv_bias,
    "tconv2d-input": _tconv_input,
    "tconv2d-kernel": _tconv_kernel,
    "tconv2d-bias": _tconv_bias,
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_op_gradient_matches_central_differences(name, rng):
    for _ in range(TRIALS):
        op, x = CASES[name](rng)
        weights = rng.standard_normal(op(Tensor(x)).shape)
        error = finite_difference_check(lambda t: ops.sum(ops.mul(op(t), weights)), x)
        assert error < TOLERANCE, f"{name}: relative error {error:.3e}"


def test_reused_node_accumulates_gradient():
    with Tape() as tape:
        x = tape.watch(np.array([1.5, -2.0]))
        y = ops.sum(ops.add(ops.mul(x, x), x))
        (grad,) = tape.gradient(y, [x])
    np.testing.assert_allclose(grad, 2.0 * np.array([1.5, -2.0]) + 1.0)


def test_ops_outside_a_tape_return_constants():
    out = ops.add(np.ones(3), 2.0)
    assert out.node_id is None
    np.testing.assert_array_equal(out.value, np.full(3, 3.0))


def test_non_finite_values_are_rejected():
    with pytest.raises(NonFiniteError):
        Tensor(np.array([1.0, np.nan]))
    with pytest.raises(NonFiniteError):
        ops.exp(np.array([1e4]))


def test_non_scalar_backward_needs_a_seed():
    with Tape() as tape:
        x = tape.watch(np.ones(3))
        y = ops.scale(x, 2.0)
        with pytest.raises(ShapeError):
            tape.gradient(y, [x])
        (grad,) = tape.gradient(y, [x], seed=np.array([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(grad, [2.0, 4.0, 6.0])


def test_affine_rejects_nonconforming_weights():
    with pytest.raises(ShapeError):
        ops.affine(np.ones((2, 3)), np.ones((4, 2)))


# convolution


def test_conv_extents():
    assert conv_output_extent(64, 3, 3, 1) == 22
    assert conv_output_extent(22, 3, 3, 1) == 8
    assert tconv_output_extent(8, 3, 3, 1) == 22
    assert tconv_output_extent(3, 3, 2, 1, output_padding=1) == 6


def test_unit_kernel_conv_scales_input(rng):
    x = rng.standard_normal((2, 3, 4, 4))
    kernel = 2.0 * np.eye(3)[:, :, None, None]
    np.testing.assert_allclose(conv2d(x, kernel).value, 2.0 * x)


def test_unit_kernel_tconv_scales_input(rng):
    x = rng.standard_normal((3, 4, 4))
    kernel = 3.0 * np.eye(3)[:, :, None, None]
    np.testing.assert_allclose(tconv2d(x, kernel).value, 3.0 * x)


def test_tconv_is_the_adjoint_of_conv(rng):
    x = rng.standard_normal((2, 2, 5, 5))
    kernel = rng.standard_normal((3, 2, 3, 3))
    y = rng.standard_normal((2, 3, 3, 3))
    forward = np.sum(conv2d(x, kernel, stride=2, padding=1).value * y)
    adjoint = np.sum(x * tconv2d(y, kernel, stride=2, padding=1).value)
    assert forward == pytest.approx(adjoint, rel=1e-12)


def test_conv_rejects_bad_geometry():
    with pytest.raises(ShapeError):
        conv2d(np.ones((1, 2, 4, 4)), np.ones((1, 3, 3, 3)))
    with pytest.raises(ShapeError):
        conv2d(np.ones((1, 1, 2, 2)), np.ones((1, 1, 3, 3)))
    with pytest.raises(ShapeError):
        tconv2d(np.ones((1, 1, 2, 2)), np.ones((1, 1, 3, 3)), stride=2, output_padding=2)


# custom nodes


def test_custom_node_uses_supplied_jacobian():
    def forward(value):
        return value ** 3, value

    def jacobian_apply(ctx, upstream):
        return 3.0 * ctx ** 2 * upstream

    x = np.array([0.5, -1.2, 2.0])
    error = finite_difference_check(lambda t: ops.sum(custom_gradient_node(t, forward, jacobian_apply)), x)
    assert error < TOLERANCE


def test_custom_node_rejects_mismatched_extents():
    with pytest.raises(ExtentMismatchError):
        custom_gradient_node(np.ones(3), lambda v: (2.0 * v[:2], None), lambda ctx, g: g)


# parameters and Adam


def test_parameter_gradients_of_a_small_network(rng):
    net = mlp([4, 6, 2], rng, activation="leaky_relu", slope=0.1)
    X = rng.standard_normal((5, 4))
    error = check_parameter_gradients(lambda: ops.sum(ops.square(net(Tensor(X)))), net.parameters())
    assert error < TOLERANCE


def test_dense_layer_without_bias(rng):
    layer = Dense(3, 2, rng, activation="identity", bias=False)
    assert layer.parameters() == [layer.W]


def test_first_adam_step_moves_by_learning_rate():
    param = Parameter(np.array([1.0, -2.0, 3.0]))
    grad = np.array([0.5, -4.0, 1e-3])
    adam_step([param], [grad], lr=0.1)
    expected = np.array([1.0, -2.0, 3.0]) - 0.1 * grad / (np.abs(grad) + 1e-8)
    np.testing.assert_allclose(param.value, expected, rtol=1e-12)
    assert param.step == 1


def test_adam_refuses_non_finite_gradients():
    param = Parameter(np.zeros(2))
    with pytest.raises(NonFiniteError):
        adam_step([param], [np.array([np.inf, 0.0])])
    assert param.step == 0
    np.testing.assert_array_equal(param.value, np.zeros(2))


def test_adam_minimizes_a_quadratic(rng):
    target = rng.standard_normal(4)
    param = Parameter(np.zeros(4), name="p")
    optimizer = Adam([param], lr=0.05)
    for _ in range(2000):
        optimizer.zero_grad()
        with Tape() as tape:
            loss = ops.sum(ops.square(ops.sub(param, target)))
            tape.backward(loss)
        optimizer.step()
    np.testing.assert_allclose(param.value, target, atol=1e-2)
