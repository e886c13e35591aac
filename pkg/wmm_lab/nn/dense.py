"""
Fully connected layer: ``y = act(x W^T + b)``.

Functions:
    dense_forward:  Forward pass returning outputs and the cache needed by backward.
    dense_backward: Gradients of the upstream loss w.r.t. input, W and b.
"""

from dataclasses import dataclass

import numpy as np

from wmm_lab.core.errors import InvalidArgumentError
from wmm_lab.nn.activations import Activation, activate, activation_grad


@dataclass
class DenseLayer:
    """
    Attributes:
        W: (out, in) weight matrix, targetable by WMM.
        b: (out,) bias vector, never targeted by WMM.
        activation: Elementwise nonlinearity.
    """

    W: np.ndarray
    b: np.ndarray
    activation: Activation = Activation.IDENTITY

    def __post_init__(self) -> None:
        if self.W.ndim != 2 or self.b.shape != (self.W.shape[0],):
            raise InvalidArgumentError(
                f"inconsistent dense shapes: W {self.W.shape}, b {self.b.shape}"
            )

    @property
    def in_features(self) -> int:
        return self.W.shape[1]

    @property
    def out_features(self) -> int:
        return self.W.shape[0]


@dataclass(frozen=True)
class DenseCache:
    x: np.ndarray
    z: np.ndarray
    y: np.ndarray


def dense_forward(layer: DenseLayer, x: np.ndarray) -> tuple[np.ndarray, DenseCache]:
    """
    Apply the layer to a batch ``x`` of shape (batch, in) or a single vector (in,).

    Raises:
        InvalidArgumentError: If the input width does not match ``cols(W)``.
    """
    batch = np.atleast_2d(x)
    if batch.ndim != 2 or batch.shape[1] != layer.in_features:
        raise InvalidArgumentError(
            f"dense input width {batch.shape[-1]} does not match layer width {layer.in_features}"
        )
    z = batch @ layer.W.T + layer.b
    y = activate(layer.activation, z)
    cache = DenseCache(batch, z, y)
    return (y if x.ndim == 2 else y[0]), cache


def dense_backward(
    layer: DenseLayer, cache: DenseCache, dy: np.ndarray
) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Return ``(dx, {"W": dW, "b": db})`` for the upstream gradient ``dy``."""
    dy = np.atleast_2d(dy)
    if dy.shape != cache.y.shape:
        raise InvalidArgumentError(
            f"upstream gradient {dy.shape} does not match output {cache.y.shape}"
        )
    dz = dy * activation_grad(layer.activation, cache.z, cache.y)
    grads = {"W": dz.T @ cache.x, "b": dz.sum(axis=0)}
    return dz @ layer.W, grads
