"""Elementwise activations and their derivatives with respect to the pre-activation."""

from enum import StrEnum

import numpy as np


class Activation(StrEnum):
    IDENTITY = "identity"
    TANH = "tanh"
    RELU = "relu"
    SIGMOID = "sigmoid"


def sigmoid(z: np.ndarray) -> np.ndarray:
    # tanh form avoids overflow in exp for large |z|
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def activate(kind: Activation, z: np.ndarray) -> np.ndarray:
    match kind:
        case Activation.IDENTITY:
            return z
        case Activation.TANH:
            return np.tanh(z)
        case Activation.RELU:
            return np.maximum(z, 0.0)
        case Activation.SIGMOID:
            return sigmoid(z)


def activation_grad(kind: Activation, z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Return d act(z) / dz given the pre-activation ``z`` and output ``y``."""
    match kind:
        case Activation.IDENTITY:
            return np.ones_like(z)
        case Activation.TANH:
            return 1.0 - y**2
        case Activation.RELU:
            return (z > 0.0).astype(z.dtype)
        case Activation.SIGMOID:
            return y * (1.0 - y)
