"""
Resolution of (layer, gate) targets into independent 2-D weight-matrix views.

Expansion rules:
    - A 2-D matrix is one target matrix.
    - An N-D filter bank (N > 2) contributes one 2-D view per filter (the last two axes).
    - A gated layer stacks four row blocks [input, forget, cell, output]; a layer-level
      target expands to every gate block, a gate target to that block only.
    - 1-D arrays (bias vectors) are never resolvable.

All views share memory with the registered arrays, so in-place writes reach the layer.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from wmm_lab.core.errors import ConfigurationError, InvalidArgumentError
from wmm_lab.models.wmm import GATE_ORDER, Gate, WmmTarget


class TargetResolver(Protocol):
    """Anything that can turn WMM targets into named 2-D views."""

    def resolve_targets(self, targets: Iterable[WmmTarget]) -> dict[str, np.ndarray]: ...


@dataclass
class LayerMatrices:
    """Weight matrices of one layer and whether they carry stacked gate blocks."""

    matrices: Mapping[str, np.ndarray]
    gated: bool = False


def gate_blocks(array: np.ndarray) -> dict[Gate, np.ndarray]:
    """Split a stacked gate matrix into its four row-block views."""
    if array.ndim != 2 or array.shape[0] % len(GATE_ORDER) != 0:
        raise InvalidArgumentError(
            f"gated matrix must be 2-D with a row count divisible by 4, got {array.shape}"
        )
    size = array.shape[0] // len(GATE_ORDER)
    return {gate: array[k * size : (k + 1) * size] for k, gate in enumerate(GATE_ORDER)}


def filter_views(matrix_id: str, array: np.ndarray) -> dict[str, np.ndarray]:
    """Return ``array`` as one or more independent 2-D views keyed by matrix id."""
    if array.ndim < 2:
        raise InvalidArgumentError(
            f"'{matrix_id}' is {array.ndim}-D; only weight matrices and filter banks are targetable"
        )
    if array.ndim == 2:
        return {matrix_id: array}
    views = {}
    for index in np.ndindex(*array.shape[:-2]):
        label = ",".join(str(i) for i in index)
        views[f"{matrix_id}[{label}]"] = array[index]
    return views


def resolve(
    layers: Mapping[str, LayerMatrices],
    targets: Iterable[WmmTarget],
) -> dict[str, np.ndarray]:
    """
    Resolve every target before returning anything, so a bad target never leaves
    a partially modified model behind.

    Raises:
        ConfigurationError: If a layer is unknown or a gate is requested on an ungated layer.
    """
    resolved: dict[str, np.ndarray] = {}
    for target in targets:
        layer = layers.get(target.layer)
        if layer is None:
            known = ", ".join(sorted(layers)) or "<none>"
            raise ConfigurationError(f"Unknown WMM target layer '{target.layer}' (known: {known})")
        if target.gate is not None and not layer.gated:
            raise ConfigurationError(
                f"Layer '{target.layer}' has no gates; cannot target '{target}'"
            )

        for name, array in layer.matrices.items():
            matrix_id = f"{target.layer}.{name}"
            if not layer.gated:
                resolved.update(filter_views(matrix_id, array))
                continue
            gates = (target.gate,) if target.gate is not None else GATE_ORDER
            blocks = gate_blocks(array)
            for gate in gates:
                resolved[f"{matrix_id}[{gate.value}]"] = blocks[gate]
    return resolved


@dataclass
class MatrixRegistry:
    """
    Target resolver over plain arrays, for applying WMM outside a Network.

    Usage:
        registry = MatrixRegistry()
        registry.register("conv1", {"W": filters})        # (out, in, kh, kw) bank
        registry.register("lstm", {"W_x": wx, "W_h": wh}, gated=True)
    """

    layers: dict[str, LayerMatrices] = field(default_factory=dict)

    def register(
        self,
        layer_id: str,
        matrices: Mapping[str, np.ndarray],
        gated: bool = False,
    ) -> None:
        if layer_id in self.layers:
            raise ConfigurationError(f"Layer '{layer_id}' is already registered")
        for name, array in matrices.items():
            if gated:
                gate_blocks(array)
            else:
                filter_views(f"{layer_id}.{name}", array)
        self.layers[layer_id] = LayerMatrices(dict(matrices), gated)

    def resolve_targets(self, targets: Iterable[WmmTarget]) -> dict[str, np.ndarray]:
        return resolve(self.layers, targets)
