"""
Loss functions returning ``(value, d value / d output)``.

Both losses average over the batch; MSE also averages over output components.
"""

from enum import StrEnum

import numpy as np

from wmm_lab.core.errors import InvalidArgumentError


class LossKind(StrEnum):
    MSE = "mse"
    CROSS_ENTROPY = "cross_entropy"


def mse_loss(outputs: np.ndarray, targets: np.ndarray) -> tuple[float, np.ndarray]:
    targets = targets.reshape(outputs.shape)
    diff = outputs - targets
    return float(np.mean(diff**2)), 2.0 * diff / diff.size


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean negative log-likelihood of integer ``labels`` under softmax(``logits``)."""
    if labels.shape != (logits.shape[0],):
        raise InvalidArgumentError(f"expected {logits.shape[0]} integer labels, got {labels.shape}")
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    rows = np.arange(labels.size)
    loss = -float(np.mean(log_probs[rows, labels]))
    grad = np.exp(log_probs)
    grad[rows, labels] -= 1.0
    return loss, grad / labels.size


def compute_loss(
    kind: LossKind,
    outputs: np.ndarray,
    targets: np.ndarray,
) -> tuple[float, np.ndarray]:
    match kind:
        case LossKind.MSE:
            return mse_loss(outputs, targets)
        case LossKind.CROSS_ENTROPY:
            return softmax_cross_entropy(outputs, targets.astype(np.int64))
