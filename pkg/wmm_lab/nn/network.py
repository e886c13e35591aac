"""
Sequential network of named dense and LSTM blocks.

The network owns parameter bookkeeping (iteration, snapshots for early stopping,
L2 penalty) and implements ``TargetResolver`` so WMM can address its layers and gates.
"""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

import numpy as np

from wmm_lab.core.errors import ConfigurationError, InvalidArgumentError
from wmm_lab.models.wmm import GATE_ORDER, WmmTarget
from wmm_lab.nn.dense import DenseCache, DenseLayer, dense_backward, dense_forward
from wmm_lab.nn.losses import LossKind, compute_loss
from wmm_lab.nn.lstm import LstmCache, LstmCell, lstm_backward, lstm_forward
from wmm_lab.ops.targets import LayerMatrices, resolve

type ParamKey = tuple[str, str]


@dataclass
class DenseBlock:
    name: str
    layer: DenseLayer
    gated: bool = False
    grads: dict[str, np.ndarray] = field(default_factory=dict)
    _cache: DenseCache | None = field(default=None, init=False, repr=False)

    def forward(self, x: np.ndarray) -> np.ndarray:
        y, self._cache = dense_forward(self.layer, x)
        return y

    def backward(self, dy: np.ndarray) -> np.ndarray:
        if self._cache is None:
            raise RuntimeError(f"backward called on '{self.name}' before forward")
        dx, self.grads = dense_backward(self.layer, self._cache, dy)
        return dx

    def params(self) -> dict[str, np.ndarray]:
        return {"W": self.layer.W, "b": self.layer.b}

    def weight_names(self) -> tuple[str, ...]:
        return ("W",)


@dataclass
class LstmBlock:
    """LSTM over (batch, steps, features); emits the last hidden state unless ``return_sequences``."""

    name: str
    cell: LstmCell
    return_sequences: bool = False
    gated: bool = True
    grads: dict[str, np.ndarray] = field(default_factory=dict)
    _cache: LstmCache | None = field(default=None, init=False, repr=False)

    def forward(self, x: np.ndarray) -> np.ndarray:
        hs, self._cache = lstm_forward(self.cell, x)
        return hs if self.return_sequences else hs[:, -1]

    def backward(self, dy: np.ndarray) -> np.ndarray:
        if self._cache is None:
            raise RuntimeError(f"backward called on '{self.name}' before forward")
        if self.return_sequences:
            dhs = dy
        else:
            dhs = np.zeros_like(self._cache.h_prev)
            dhs[:, -1] = dy
        dx, self.grads = lstm_backward(self.cell, self._cache, dhs)
        return dx

    def params(self) -> dict[str, np.ndarray]:
        return {"W_x": self.cell.W_x, "W_h": self.cell.W_h, "b": self.cell.b}

    def weight_names(self) -> tuple[str, ...]:
        return ("W_x", "W_h")


@dataclass
class Network:
    """
    Attributes:
        blocks: Layers applied in order; names must be unique.
        loss: Training loss.
        sequence_features: When set, flat inputs (batch, steps*features) are reshaped to
            (batch, steps, features) before the first block.
    """

    blocks: list[DenseBlock | LstmBlock]
    loss: LossKind = LossKind.MSE
    sequence_features: int | None = None

    def __post_init__(self) -> None:
        names = [block.name for block in self.blocks]
        if len(set(names)) != len(names):
            raise InvalidArgumentError(f"block names must be unique, got {names}")

    @property
    def is_recurrent(self) -> bool:
        return any(isinstance(block, LstmBlock) for block in self.blocks)

    def _prepare(self, x: np.ndarray) -> np.ndarray:
        if self.sequence_features is None:
            return x
        return x.reshape(x.shape[0], -1, self.sequence_features)

    def forward(self, x: np.ndarray) -> np.ndarray:
        out = self._prepare(x)
        for block in self.blocks:
            out = block.forward(out)
        return out

    def backward(self, dout: np.ndarray) -> None:
        for block in reversed(self.blocks):
            dout = block.backward(dout)

    def parameters(self) -> dict[ParamKey, np.ndarray]:
        return {
            (block.name, name): array
            for block in self.blocks
            for name, array in block.params().items()
        }

    def gradients(self) -> dict[ParamKey, np.ndarray]:
        return {
            (block.name, name): grad for block in self.blocks for name, grad in block.grads.items()
        }

    def weight_matrices(self) -> Iterator[tuple[ParamKey, np.ndarray]]:
        for block in self.blocks:
            params = block.params()
            for name in block.weight_names():
                yield (block.name, name), params[name]

    def loss_and_gradients(self, x: np.ndarray, y: np.ndarray, l2: float = 0.0) -> float:
        """Forward + backward on one batch; returns the loss including the L2 penalty."""
        outputs = self.forward(x)
        loss, dout = compute_loss(self.loss, outputs, y)
        self.backward(dout)
        if l2 > 0.0:
            grads = self.gradients()
            for key, weight in self.weight_matrices():
                loss += 0.5 * l2 * float(np.sum(weight**2))
                grads[key] += l2 * weight
        return loss

    def predict(self, x: np.ndarray, chunk: int = 1024) -> np.ndarray:
        return np.concatenate([self.forward(x[i : i + chunk]) for i in range(0, len(x), chunk)])

    def snapshot(self) -> dict[ParamKey, np.ndarray]:
        return {key: array.copy() for key, array in self.parameters().items()}

    def restore(self, snapshot: dict[ParamKey, np.ndarray]) -> None:
        """Write a snapshot back in place, so views held elsewhere stay attached."""
        for key, array in self.parameters().items():
            array[...] = snapshot[key]

    def layer_matrices(self) -> dict[str, LayerMatrices]:
        return {
            block.name: LayerMatrices(
                {name: block.params()[name] for name in block.weight_names()}, block.gated
            )
            for block in self.blocks
        }

    def eligible_targets(self) -> list[WmmTarget]:
        """Every dense layer and every gate of every recurrent layer."""
        targets = []
        for block in self.blocks:
            if block.gated:
                targets.extend(WmmTarget(layer=block.name, gate=gate) for gate in GATE_ORDER)
            else:
                targets.append(WmmTarget(layer=block.name))
        return targets

    def all_layers(self) -> list[WmmTarget]:
        return [WmmTarget(layer=block.name) for block in self.blocks]

    def resolve_targets(self, targets: Iterable[WmmTarget]) -> dict[str, np.ndarray]:
        targets = list(targets)
        if not targets:
            raise ConfigurationError("no WMM targets given")
        return resolve(self.layer_matrices(), targets)
