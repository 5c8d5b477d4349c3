"""Minimal reverse-mode differentiation on numpy float64 arrays."""

from diffcore.tape import Tape, TapeEntry, Tensor, active_tape
from diffcore.parameter import Parameter
from diffcore import ops
from diffcore.ops import activation, affine, as_tensor, leaky_relu, relu
from diffcore.conv import conv2d, conv_output_extent, tconv2d, tconv_output_extent
from diffcore.custom import custom_gradient_node
from diffcore.optim import Adam, adam_step
from diffcore.gradcheck import check_parameter_gradients, finite_difference_check
from diffcore.layers import Conv2d, ConvTranspose2d, Dense, Layer, Reshape, Sequential, mlp

__all__ = [
    "Tape",
    "TapeEntry",
    "Tensor",
    "active_tape",
    "Parameter",
    "ops",
    "activation",
    "affine",
    "as_tensor",
    "leaky_relu",
    "relu",
    "conv2d",
    "conv_output_extent",
    "tconv2d",
    "tconv_output_extent",
    "custom_gradient_node",
    "Adam",
    "adam_step",
    "check_parameter_gradients",
    "finite_difference_check",
    "Conv2d",
    "ConvTranspose2d",
    "Dense",
    "Layer",
    "Reshape",
    "Sequential",
    "mlp",
]
