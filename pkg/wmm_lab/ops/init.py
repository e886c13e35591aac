"""
Weight initialization schemes.

Functions:
    init_bound:   Half-width 1/sqrt(cols) of the uniform initialization distribution U_w.
    uniform_init: I.i.d. draws from U[-1/sqrt(cols), +1/sqrt(cols)].
    skewed_init:  Draws inside the same support with mass piled up near the lower bound.
"""

import math

import numpy as np

from wmm_lab.core.errors import InvalidArgumentError
from wmm_lab.ops.rng import RngState


def _check_shape(rows: int, cols: int) -> None:
    if rows < 1 or cols < 1:
        raise InvalidArgumentError(f"matrix dimensions must be >= 1, got {rows}x{cols}")


def init_bound(cols: int) -> float:
    """Return 1/sqrt(cols), the half-width of U_w for a matrix with ``cols`` columns."""
    if cols < 1:
        raise InvalidArgumentError(f"cols must be >= 1, got {cols}")
    return 1.0 / math.sqrt(cols)


def uniform_init(rows: int, cols: int, rng: RngState) -> np.ndarray:
    """
    Draw a ``rows`` x ``cols`` matrix from U[-1/sqrt(cols), +1/sqrt(cols)].

    This is also the distribution fresh values are drawn from by weight reinitialization.

    Raises:
        InvalidArgumentError: If either dimension is zero or negative.
    """
    _check_shape(rows, cols)
    bound = init_bound(cols)
    return rng.uniform(-bound, bound, size=(rows, cols))


def skewed_init(rows: int, cols: int, rng: RngState) -> np.ndarray:
    """
    Draw a matrix inside the U_w support whose values crowd towards -1/sqrt(cols).

    Uses ``bound * (2 u^4 - 1)`` with ``u ~ U[0, 1)``; low-entropy starting point for
    observing how reinitialization events move the weight histogram.
    """
    _check_shape(rows, cols)
    bound = init_bound(cols)
    u = rng.random((rows, cols))
    return bound * (2.0 * u**4 - 1.0)
