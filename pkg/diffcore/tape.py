"""Reverse-mode tape and the Tensor values recorded on it.

A ``Tape`` is used as a context manager. While it is active every op whose
operands include a tracked tensor appends one ``TapeEntry``; outside a tape the
same ops run eagerly and return constants, which is how inference works.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional, Sequence

import numpy as np

from config.errors import NonFiniteError, ShapeError

if TYPE_CHECKING:
    from diffcore.parameter import Parameter


BackwardRule = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

_ACTIVE: list["Tape"] = []


def active_tape() -> Optional["Tape"]:
    """The innermost active tape, if any."""
    return _ACTIVE[-1] if _ACTIVE else None


def _checked(value: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(value)):
        raise NonFiniteError(f"non-finite values produced by {what}")
    return value


class Tensor:
    """Dense float64 array plus its node id on a tape (None for constants)."""

    __slots__ = ("value", "node_id", "tape")

    def __init__(self, value, node_id: Optional[int] = None, tape: Optional["Tape"] = None):
        self.value = _checked(np.array(value, dtype=np.float64), "tensor construction")
        self.node_id = node_id
        self.tape = tape

    @classmethod
    def _wrap(cls, value: np.ndarray, node_id: Optional[int], tape: Optional["Tape"], what: str) -> "Tensor":
        tensor = cls.__new__(cls)
        tensor.value = _checked(np.asarray(value, dtype=np.float64), what)
        tensor.node_id = node_id
        tensor.tape = tape
        return tensor

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    @property
    def size(self) -> int:
        return int(self.value.size)

    @property
    def ndim(self) -> int:
        return self.value.ndim

    @property
    def tracked(self) -> bool:
        return self.tape is not None and self.tape is active_tape()

    def numpy(self) -> np.ndarray:
        return self.value.copy()

    def item(self) -> float:
        if self.value.size != 1:
            raise ShapeError(f"item() needs a single value, got shape {self.shape}")
        return float(self.value.reshape(()))

    def __repr__(self) -> str:
        kind = f"node={self.node_id}" if self.node_id is not None else "const"
        return f"Tensor(shape={self.shape}, {kind})"

    # Operators delegate to diffcore.ops so that recording stays in one place.

    def __add__(self, other):
        from diffcore import ops
        return ops.add(self, other)

    def __radd__(self, other):
        from diffcore import ops
        return ops.add(other, self)

    def __sub__(self, other):
        from diffcore import ops
        return ops.sub(self, other)

    def __rsub__(self, other):
        from diffcore import ops
        return ops.sub(other, self)

    def __mul__(self, other):
        from diffcore import ops
        return ops.mul(self, other)

    def __rmul__(self, other):
        from diffcore import ops
        return ops.mul(other, self)

    def __truediv__(self, other):
        from diffcore import ops
        if isinstance(other, Tensor):
            raise ShapeError("division by a tracked tensor is not supported")
        return ops.mul(self, 1.0 / np.asarray(other, dtype=np.float64))

    def __neg__(self):
        from diffcore import ops
        return ops.neg(self)

    def __getitem__(self, index):
        from diffcore import ops
        return ops.index(self, index)

    def reshape(self, *shape):
        from diffcore import ops
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return ops.reshape(self, shape)

    def sum(self, axis=None):
        from diffcore import ops
        return ops.sum(self, axis=axis)

    def mean(self, axis=None):
        from diffcore import ops
        return ops.mean(self, axis=axis)


@dataclass(frozen=True)
class TapeEntry:
    """One recorded op: input node ids (None for constants), output id, backward rule."""

    inputs: tuple[Optional[int], ...]
    output: int
    backward: BackwardRule
    name: str = ""


class Tape:
    """Ordered record of operations for reverse-mode differentiation."""

    def __init__(self):
        self.entries: list[TapeEntry] = []
        self._next_id = 0
        self._param_nodes: dict[int, int] = {}
        self._node_params: dict[int, "Parameter"] = {}

    def __enter__(self) -> "Tape":
        _ACTIVE.append(self)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        _ACTIVE.remove(self)

    def _new_id(self) -> int:
        node_id = self._next_id
        self._next_id += 1
        return node_id

    def watch(self, value) -> Tensor:
        """Register a leaf tensor whose gradient can be requested."""
        if isinstance(value, Tensor):
            value = value.value
        return Tensor(value, node_id=self._new_id(), tape=self)

    def lift(self, param: "Parameter") -> Tensor:
        """Leaf tensor bound to a Parameter; the same node is reused per tape."""
        key = id(param)
        node_id = self._param_nodes.get(key)
        if node_id is None:
            node_id = self._new_id()
            self._param_nodes[key] = node_id
            self._node_params[node_id] = param
        return Tensor._wrap(param.value, node_id, self, f"parameter {param.name}")

    def record(self, inputs: Sequence[Tensor], value: np.ndarray, backward: BackwardRule, name: str = "") -> Tensor:
        """Append an op if any input is tracked on this tape, else return a constant."""
        ids = tuple(t.node_id if t.tape is self else None for t in inputs)
        if all(node_id is None for node_id in ids):
            return Tensor._wrap(value, None, None, name or "op")
        out = Tensor._wrap(value, self._new_id(), self, name or "op")
        self.entries.append(TapeEntry(inputs=ids, output=out.node_id, backward=backward, name=name))
        return out

    def _backprop(self, root: Tensor, seed: Optional[np.ndarray], keep: set[int]) -> dict[int, np.ndarray]:
        if root.tape is not self or root.node_id is None:
            raise ShapeError("gradient requested for a tensor not recorded on this tape")
        if seed is None:
            if root.size != 1:
                raise ShapeError(f"backward from non-scalar of shape {root.shape} needs a seed")
            seed = np.ones_like(root.value)
        elif np.shape(seed) != root.shape:
            raise ShapeError(f"seed shape {np.shape(seed)} does not match root {root.shape}")

        grads: dict[int, np.ndarray] = {root.node_id: np.asarray(seed, dtype=np.float64)}
        for entry in reversed(self.entries):
            upstream = grads.get(entry.output)
            if upstream is None:
                continue
            if entry.output not in keep:
                del grads[entry.output]
            for node_id, grad in zip(entry.inputs, entry.backward(upstream)):
                if node_id is None or grad is None:
                    continue
                if node_id in grads:
                    grads[node_id] = grads[node_id] + grad
                else:
                    grads[node_id] = grad
        return grads

    def gradient(self, root: Tensor, sources: Sequence[Tensor], seed: Optional[np.ndarray] = None) -> list[np.ndarray]:
        """Gradients of ``root`` with respect to each source tensor."""
        keep = {s.node_id for s in sources if s.node_id is not None}
        grads = self._backprop(root, seed, keep)
        return [grads.get(s.node_id, np.zeros(s.shape)) for s in sources]

    def backward(self, root: Tensor, seed: Optional[np.ndarray] = None) -> None:
        """Accumulate gradients of ``root`` into every lifted Parameter."""
        grads = self._backprop(root, seed, set(self._node_params))
        for node_id, param in self._node_params.items():
            grad = grads.get(node_id)
            if grad is not None:
                param.accumulate(grad)
