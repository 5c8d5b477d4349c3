"""2D cross-correlation and its adjoint (transpose convolution).

Layouts follow the usual deep-learning convention: inputs (B, C, H, W),
conv kernels (C_out, C_in, k, k), transpose-conv kernels (C_in, C_out, k, k).
A 3D input (C, H, W) is treated as a batch of one.
"""

from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from config.errors import ShapeError
from diffcore.ops import Operand, _record, as_tensor
from diffcore.tape import Tensor


def conv_output_extent(extent: int, kernel: int, stride: int, padding: int) -> int:
    return (extent + 2 * padding - kernel) // stride + 1


def tconv_output_extent(extent: int, kernel: int, stride: int, padding: int, output_padding: int = 0) -> int:
    return (extent - 1) * stride - 2 * padding + kernel + output_padding


def _windows(x: np.ndarray, k: int, stride: int, padding: int, out_h: int, out_w: int) -> np.ndarray:
    xp = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    win = sliding_window_view(xp, (k, k), axis=(2, 3))
    return win[:, :, ::stride, ::stride][:, :, :out_h, :out_w]


def _correlate(x: np.ndarray, kernel: np.ndarray, stride: int, padding: int) -> np.ndarray:
    k = kernel.shape[-1]
    out_h = conv_output_extent(x.shape[2], k, stride, padding)
    out_w = conv_output_extent(x.shape[3], k, stride, padding)
    win = _windows(x, k, stride, padding, out_h, out_w)
    return np.einsum("bchwij,ocij->bohw", win, kernel, optimize=True)


def _correlate_adjoint(g: np.ndarray, kernel: np.ndarray, stride: int, padding: int, in_h: int, in_w: int) -> np.ndarray:
    """Input-gradient of _correlate; scatters each kernel tap back onto the padded grid."""
    k = kernel.shape[-1]
    batch, _, out_h, out_w = g.shape
    contrib = np.einsum("bohw,ocij->bchwij", g, kernel, optimize=True)
    padded = np.zeros((batch, kernel.shape[1], in_h + 2 * padding, in_w + 2 * padding))
    row_span = stride * (out_h - 1) + 1
    col_span = stride * (out_w - 1) + 1
    for i in range(k):
        for j in range(k):
            padded[:, :, i:i + row_span:stride, j:j + col_span:stride] += contrib[..., i, j]
    return padded[:, :, padding:padding + in_h, padding:padding + in_w]


def _kernel_grad(x: np.ndarray, g: np.ndarray, k: int, stride: int, padding: int) -> np.ndarray:
    win = _windows(x, k, stride, padding, g.shape[2], g.shape[3])
    return np.einsum("bchwij,bohw->ocij", win, g, optimize=True)


def _as_batch(x: Tensor) -> tuple[np.ndarray, bool]:
    if x.ndim == 3:
        return x.value[None], True
    if x.ndim == 4:
        return x.value, False
    raise ShapeError(f"expected (C,H,W) or (B,C,H,W) input, got shape {x.shape}")


def conv2d(
    x: Operand,
    kernel: Operand,
    stride: int = 1,
    padding: int = 0,
    bias: Optional[Operand] = None,
) -> Tensor:
    """Cross-correlation with zero padding; kernel (C_out, C_in, k, k)."""
    x, kernel = as_tensor(x), as_tensor(kernel)
    xb, squeeze = _as_batch(x)
    if kernel.ndim != 4 or kernel.shape[2] != kernel.shape[3]:
        raise ShapeError(f"conv2d: kernel must be (C_out, C_in, k, k), got {kernel.shape}")
    if kernel.shape[1] != xb.shape[1]:
        raise ShapeError(f"conv2d: kernel expects {kernel.shape[1]} channels, input has {xb.shape[1]}")
    if stride < 1 or padding < 0:
        raise ShapeError(f"conv2d: invalid geometry stride={stride} padding={padding}")
    k = kernel.shape[-1]
    out_h = conv_output_extent(xb.shape[2], k, stride, padding)
    out_w = conv_output_extent(xb.shape[3], k, stride, padding)
    if out_h < 1 or out_w < 1:
        raise ShapeError(f"conv2d: invalid geometry, output extent {out_h}x{out_w}")

    value = _correlate(xb, kernel.value, stride, padding)
    inputs = [x, kernel]
    if bias is not None:
        bias = as_tensor(bias)
        value = value + bias.value[None, :, None, None]
        inputs.append(bias)
    in_h, in_w = xb.shape[2], xb.shape[3]

    def backward(g):
        gb = g[None] if squeeze else g
        gx = _correlate_adjoint(gb, kernel.value, stride, padding, in_h, in_w)
        grads = [gx[0] if squeeze else gx, _kernel_grad(xb, gb, k, stride, padding)]
        if bias is not None:
            grads.append(gb.sum(axis=(0, 2, 3)))
        return grads

    return _record(inputs, value[0] if squeeze else value, backward, "conv2d")


def tconv2d(
    x: Operand,
    kernel: Operand,
    stride: int = 1,
    padding: int = 0,
    bias: Optional[Operand] = None,
    output_padding: int = 0,
) -> Tensor:
    """
    Transpose convolution, the adjoint of conv2d with the same geometry.

    Args:
        x: Input (B, C_in, H, W) or (C_in, H, W)
        kernel: (C_in, C_out, k, k)
        stride: Stride of the conv2d this is the adjoint of
        padding: Padding of that conv2d
        bias: Optional (C_out,) bias
        output_padding: Extra trailing rows/cols, must be < stride

    Returns:
        Tensor with extent (H-1)*stride - 2*padding + k + output_padding
    """
    x, kernel = as_tensor(x), as_tensor(kernel)
    xb, squeeze = _as_batch(x)
    if kernel.ndim != 4 or kernel.shape[2] != kernel.shape[3]:
        raise ShapeError(f"tconv2d: kernel must be (C_in, C_out, k, k), got {kernel.shape}")
    if kernel.shape[0] != xb.shape[1]:
        raise ShapeError(f"tconv2d: kernel expects {kernel.shape[0]} channels, input has {xb.shape[1]}")
    if stride < 1 or padding < 0 or not 0 <= output_padding < stride:
        raise ShapeError(f"tconv2d: invalid geometry stride={stride} padding={padding} output_padding={output_padding}")
    k = kernel.shape[-1]
    out_h = tconv_output_extent(xb.shape[2], k, stride, padding, output_padding)
    out_w = tconv_output_extent(xb.shape[3], k, stride, padding, output_padding)
    if out_h < 1 or out_w < 1:
        raise ShapeError(f"tconv2d: invalid geometry, output extent {out_h}x{out_w}")

    value = _correlate_adjoint(xb, kernel.value, stride, padding, out_h, out_w)
    inputs = [x, kernel]
    if bias is not None:
        bias = as_tensor(bias)
        value = value + bias.value[None, :, None, None]
        inputs.append(bias)

    def backward(g):
        gb = g[None] if squeeze else g
        gx = _correlate(gb, kernel.value, stride, padding)
        grads = [gx[0] if squeeze else gx, _kernel_grad(gb, xb, k, stride, padding)]
        if bias is not None:
            grads.append(gb.sum(axis=(0, 2, 3)))
        return grads

    return _record(inputs, value[0] if squeeze else value, backward, "tconv2d")
