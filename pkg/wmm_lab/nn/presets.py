"""
Model presets used by the experiments.

``mlp``:  tanh dense layers ``dense1``, ``dense2``, ... followed by a linear ``output`` layer.
``lstm``: LSTM layers ``lstm1``, ``lstm2``, ... (the last one emits its final hidden state)
          followed by a linear ``output`` layer.

Weight matrices use the scheme named by ``ModelSpec.init``; biases start at zero.
"""

from collections.abc import Callable

import numpy as np

from wmm_lab.core.logging import logger
from wmm_lab.models.experiment import InitScheme, ModelPreset, ModelSpec
from wmm_lab.nn.activations import Activation
from wmm_lab.nn.dense import DenseLayer
from wmm_lab.nn.losses import LossKind
from wmm_lab.nn.lstm import LstmCell
from wmm_lab.nn.network import DenseBlock, LstmBlock, Network
from wmm_lab.ops.init import skewed_init, uniform_init
from wmm_lab.ops.rng import RngState

type Initializer = Callable[[int, int, RngState], np.ndarray]

INITIALIZERS: dict[InitScheme, Initializer] = {
    InitScheme.UNIFORM: uniform_init,
    InitScheme.SKEWED: skewed_init,
}


def _dense(
    name: str,
    fan_in: int,
    fan_out: int,
    activation: Activation,
    init: Initializer,
    rng: RngState,
) -> DenseBlock:
    layer = DenseLayer(init(fan_out, fan_in, rng), np.zeros(fan_out), activation)
    return DenseBlock(name, layer)


def build_model(
    spec: ModelSpec,
    input_size: int,
    output_size: int,
    loss: LossKind,
    rng: RngState,
    sequence_features: int = 1,
) -> Network:
    """
    Build a fresh network for ``spec``.

    Args:
        spec: Preset, hidden widths and init scheme.
        input_size: Flat input width (window length, or pixels per image).
        output_size: Regression targets or number of classes.
        loss: Training loss of the network.
        rng: Init stream; consumed layer by layer in construction order.
        sequence_features: Features per time step for the ``lstm`` preset
            (1 for a univariate window, 28 for row-wise MNIST).
    """
    init = INITIALIZERS[spec.init]
    blocks: list[DenseBlock | LstmBlock] = []

    if spec.preset is ModelPreset.MLP:
        fan_in = input_size
        for index, width in enumerate(spec.hidden_sizes, start=1):
            blocks.append(_dense(f"dense{index}", fan_in, width, Activation.TANH, init, rng))
            fan_in = width
        blocks.append(_dense("output", fan_in, output_size, Activation.IDENTITY, init, rng))
        network = Network(blocks, loss)
    else:
        fan_in = sequence_features
        hidden = spec.hidden_sizes
        for index, width in enumerate(hidden, start=1):
            cell = LstmCell(
                W_x=init(4 * width, fan_in, rng),
                W_h=init(4 * width, width, rng),
                b=np.zeros(4 * width),
            )
            blocks.append(LstmBlock(f"lstm{index}", cell, return_sequences=index < len(hidden)))
            fan_in = width
        blocks.append(_dense("output", fan_in, output_size, Activation.IDENTITY, init, rng))
        network = Network(blocks, loss, sequence_features=sequence_features)

    logger.debug(
        "Built %s model (%s init): %s",
        spec.preset.value,
        spec.init.value,
        ", ".join(block.name for block in network.blocks),
    )
    return network
