"""
LSTM cell with stacked gate matrices and manual backpropagation through time.

Row blocks of ``W_x`` (4h x in), ``W_h`` (4h x h) and ``b`` (4h) follow the fixed gate
order [input, forget, cell, output]:

    i = sigmoid(z_i), f = sigmoid(z_f), g = tanh(z_g), o = sigmoid(z_o)
    c_t = f * c_{t-1} + i * g
    h_t = o * tanh(c_t)
"""

from dataclasses import dataclass

import numpy as np

from wmm_lab.core.errors import InvalidArgumentError
from wmm_lab.models.wmm import Gate
from wmm_lab.nn.activations import sigmoid
from wmm_lab.ops.targets import gate_blocks


@dataclass
class LstmCell:
    W_x: np.ndarray
    W_h: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        rows = self.W_x.shape[0]
        if rows % 4 != 0 or self.W_h.shape != (rows, rows // 4) or self.b.shape != (rows,):
            raise InvalidArgumentError(
                f"inconsistent LSTM shapes: W_x {self.W_x.shape}, W_h {self.W_h.shape}, b {self.b.shape}"
            )

    @property
    def hidden_size(self) -> int:
        return self.W_h.shape[1]

    @property
    def input_size(self) -> int:
        return self.W_x.shape[1]


@dataclass(frozen=True)
class LstmCache:
    xs: np.ndarray
    h_prev: np.ndarray
    c_prev: np.ndarray
    gates: np.ndarray
    tanh_c: np.ndarray


def gate_slices(cell: LstmCell) -> dict[str, dict[Gate, np.ndarray]]:
    """Return the four gate row-block views of ``W_x`` and ``W_h``."""
    return {"W_x": gate_blocks(cell.W_x), "W_h": gate_blocks(cell.W_h)}


def lstm_forward(
    cell: LstmCell,
    xs: np.ndarray,
    h0: np.ndarray | None = None,
    c0: np.ndarray | None = None,
) -> tuple[np.ndarray, LstmCache]:
    """
    Run the cell over a batch of sequences ``xs`` of shape (batch, steps, in).

    Returns:
        Hidden states of shape (batch, steps, hidden) and the backward cache.
    """
    if xs.ndim != 3 or xs.shape[1] < 1 or xs.shape[2] != cell.input_size:
        raise InvalidArgumentError(
            f"LSTM input must be (batch, steps>=1, {cell.input_size}), got {xs.shape}"
        )
    batch, steps, _ = xs.shape
    size = cell.hidden_size
    h = np.zeros((batch, size)) if h0 is None else h0
    c = np.zeros((batch, size)) if c0 is None else c0

    hs = np.empty((batch, steps, size))
    h_prev = np.empty_like(hs)
    c_prev = np.empty_like(hs)
    tanh_c = np.empty_like(hs)
    gates = np.empty((batch, steps, 4 * size))

    for t in range(steps):
        z = xs[:, t] @ cell.W_x.T + h @ cell.W_h.T + cell.b
        act = np.empty_like(z)
        act[:, : 2 * size] = sigmoid(z[:, : 2 * size])
        act[:, 2 * size : 3 * size] = np.tanh(z[:, 2 * size : 3 * size])
        act[:, 3 * size :] = sigmoid(z[:, 3 * size :])
        i, f, g, o = np.split(act, 4, axis=1)

        h_prev[:, t] = h
        c_prev[:, t] = c
        c = f * c + i * g
        tanh_c[:, t] = np.tanh(c)
        h = o * tanh_c[:, t]
        hs[:, t] = h
        gates[:, t] = act

    return hs, LstmCache(xs, h_prev, c_prev, gates, tanh_c)


def lstm_backward(
    cell: LstmCell, cache: LstmCache, dhs: np.ndarray
) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """
    Backpropagate ``dhs`` (batch, steps, hidden), the loss gradient w.r.t. every hidden state.

    Returns:
        ``(dxs, {"W_x": ..., "W_h": ..., "b": ...})``
    """
    if dhs.shape != cache.h_prev.shape:
        raise InvalidArgumentError(
            f"upstream gradient {dhs.shape} does not match {cache.h_prev.shape}"
        )
    batch, steps, size = dhs.shape
    dW_x = np.zeros_like(cell.W_x)
    dW_h = np.zeros_like(cell.W_h)
    db = np.zeros_like(cell.b)
    dxs = np.zeros_like(cache.xs)
    dh_next = np.zeros((batch, size))
    dc_next = np.zeros((batch, size))

    for t in reversed(range(steps)):
        i, f, g, o = np.split(cache.gates[:, t], 4, axis=1)
        tc = cache.tanh_c[:, t]
        dh = dhs[:, t] + dh_next
        dc = dc_next + dh * o * (1.0 - tc**2)

        dz = np.concatenate(
            (
                dc * g * i * (1.0 - i),
                dc * cache.c_prev[:, t] * f * (1.0 - f),
                dc * i * (1.0 - g**2),
                dh * tc * o * (1.0 - o),
            ),
            axis=1,
        )
        dW_x += dz.T @ cache.xs[:, t]
        dW_h += dz.T @ cache.h_prev[:, t]
        db += dz.sum(axis=0)
        dxs[:, t] = dz @ cell.W_x
        dh_next = dz @ cell.W_h
        dc_next = dc * f

    return dxs, {"W_x": dW_x, "W_h": dW_h, "b": db}
