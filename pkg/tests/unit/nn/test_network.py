"""Unit tests for wmm_lab.nn.network, wmm_lab.nn.presets and wmm_lab.nn.optimizers."""

import numpy as np
import pytest

from wmm_lab.core.errors import ConfigurationError, InvalidArgumentError
from wmm_lab.models.experiment import InitScheme, ModelPreset, ModelSpec
from wmm_lab.models.training import OptimizerKind, TrainConfig
from wmm_lab.models.wmm import WmmConfig, WmmMethod, WmmTarget
from wmm_lab.nn.dense import DenseLayer
from wmm_lab.nn.losses import LossKind
from wmm_lab.nn.network import DenseBlock, Network
from wmm_lab.nn.optimizers import Adam, OptimizerFactory, Sgd, clip_global_norm
from wmm_lab.nn.presets import build_model
from wmm_lab.ops.rng import make_rng
from wmm_lab.ops.wmm import apply_wmm_step


def _lstm(seed: int = 0) -> Network:
    return build_model(ModelSpec(preset=ModelPreset.LSTM, hidden=[4, 3]), 5, 1, LossKind.MSE, make_rng(seed))


# ---------------------------------------------------------------------------
# build_model
# ---------------------------------------------------------------------------


class TestBuildModel:
    def test_mlp_layout(self, rng):
        network = build_model(ModelSpec(hidden=[8, 6]), 50, 1, LossKind.MSE, rng)
        assert [block.name for block in network.blocks] == ["dense1", "dense2", "output"]
        assert [block.layer.W.shape for block in network.blocks] == [(8, 50), (6, 8), (1, 6)]
        assert not network.is_recurrent

    def test_lstm_layout(self):
        network = _lstm()
        assert [block.name for block in network.blocks] == ["lstm1", "lstm2", "output"]
        assert network.blocks[0].return_sequences
        assert not network.blocks[1].return_sequences
        assert network.blocks[0].cell.W_x.shape == (16, 1)
        assert network.blocks[1].cell.W_x.shape == (12, 4)
        assert network.is_recurrent

    def test_default_hidden_sizes(self):
        assert ModelSpec().hidden_sizes == [32]
        assert ModelSpec(preset=ModelPreset.LSTM).hidden_sizes == [16, 16]

    def test_biases_start_at_zero(self, rng):
        network = build_model(ModelSpec(hidden=[4]), 3, 2, LossKind.MSE, rng)
        assert all(not block.layer.b.any() for block in network.blocks)

    def test_skewed_init_stays_in_uniform_support(self, rng):
        network = build_model(ModelSpec(hidden=[16], init=InitScheme.SKEWED), 25, 1, LossKind.MSE, rng)
        w = network.blocks[0].layer.W
        assert np.all(np.abs(w) <= 0.2)
        assert np.median(w) < -0.1

    def test_same_seed_same_weights(self):
        a, b = _lstm(3), _lstm(3)
        for (key, wa), (_, wb) in zip(a.parameters().items(), b.parameters().items(), strict=True):
            assert np.array_equal(wa, wb), key

    def test_lstm_reshapes_flat_windows(self):
        network = _lstm()
        assert network.forward(np.zeros((7, 5))).shape == (7, 1)


# ---------------------------------------------------------------------------
# Network
# ---------------------------------------------------------------------------


class TestNetwork:
    def test_duplicate_block_names_rejected(self):
        layer = DenseLayer(np.zeros((1, 1)), np.zeros(1))
        with pytest.raises(InvalidArgumentError, match="unique"):
            Network([DenseBlock("a", layer), DenseBlock("a", layer)])

    def test_eligible_targets_cover_every_gate(self):
        targets = _lstm().eligible_targets()
        assert [str(t) for t in targets] == [
            "lstm1:input",
            "lstm1:forget",
            "lstm1:cell",
            "lstm1:output",
            "lstm2:input",
            "lstm2:forget",
            "lstm2:cell",
            "lstm2:output",
            "output",
        ]

    def test_layer_target_expands_to_gate_views(self):
        views = _lstm().resolve_targets([WmmTarget(layer="lstm2")])
        assert len(views) == 8
        assert "lstm2.W_h[forget]" in views
        assert views["lstm2.W_x[cell]"].shape == (3, 4)

    def test_biases_are_never_resolved(self):
        views = _lstm().resolve_targets([WmmTarget(layer="output")])
        assert list(views) == ["output.W"]

    def test_empty_targets_rejected(self):
        with pytest.raises(ConfigurationError, match="no WMM targets"):
            _lstm().resolve_targets([])

    def test_gate_on_dense_layer_rejected(self):
        with pytest.raises(ConfigurationError, match="has no gates"):
            _lstm().resolve_targets([WmmTarget(layer="output", gate="forget")])

    def test_restore_writes_in_place(self):
        network = _lstm()
        view = network.resolve_targets([WmmTarget(layer="lstm1", gate="forget")])["lstm1.W_x[forget]"]
        snapshot = network.snapshot()
        view[...] = 7.0
        network.restore(snapshot)
        assert np.array_equal(view, snapshot[("lstm1", "W_x")][4:8])

    def test_predict_matches_forward(self, rng):
        network = build_model(ModelSpec(hidden=[4]), 3, 1, LossKind.MSE, rng)
        x = rng.normal(size=(10, 3))
        np.testing.assert_allclose(network.predict(x, chunk=3), network.forward(x))

    def test_l2_penalty_added_to_loss(self, rng):
        network = build_model(ModelSpec(hidden=[4]), 3, 1, LossKind.MSE, rng)
        x, y = rng.normal(size=(6, 3)), rng.normal(size=(6, 1))
        plain = network.loss_and_gradients(x, y)
        penalized = network.loss_and_gradients(x, y, l2=0.1)
        squares = sum(float(np.sum(w**2)) for _, w in network.weight_matrices())
        assert penalized == pytest.approx(plain + 0.05 * squares)


# ---------------------------------------------------------------------------
# WMM on gate views
# ---------------------------------------------------------------------------


class TestGateConfinement:
    def test_reinit_on_forget_gate_leaves_other_rows(self):
        network = _lstm()
        before = network.blocks[0].cell.W_x.copy(), network.blocks[0].cell.W_h.copy()
        cfg = WmmConfig(method=WmmMethod.REINIT, p=1.0, c=1.0, targets=["lstm1:forget"])
        apply_wmm_step(network, cfg, make_rng(1))
        for after, original in zip((network.blocks[0].cell.W_x, network.blocks[0].cell.W_h), before, strict=True):
            assert np.array_equal(np.delete(after, np.s_[4:8], axis=0), np.delete(original, np.s_[4:8], axis=0))
            assert not np.array_equal(after[4:8], original[4:8])

    def test_shuffle_on_cell_gate_preserves_block_multiset(self):
        network = _lstm()
        w_h = network.blocks[1].cell.W_h
        before = w_h.copy()
        cfg = WmmConfig(method=WmmMethod.SHUFFLE, p=1.0, c=1.0, targets=["lstm2:cell"], shuffle_density=1.0)
        apply_wmm_step(network, cfg, make_rng(2))
        assert np.array_equal(np.sort(w_h[6:9], axis=None), np.sort(before[6:9], axis=None))
        assert np.array_equal(np.delete(w_h, np.s_[6:9], axis=0), np.delete(before, np.s_[6:9], axis=0))


# ---------------------------------------------------------------------------
# optimizers
# ---------------------------------------------------------------------------


class TestOptimizers:
    def test_sgd_step(self):
        param = np.array([1.0, 2.0])
        Sgd(0.1).step({("a", "W"): param}, {("a", "W"): np.array([1.0, -1.0])})
        np.testing.assert_allclose(param, [0.9, 2.1])

    def test_adam_first_step_moves_by_learning_rate(self):
        param = np.array([1.0, -1.0])
        Adam(0.01).step({("a", "W"): param}, {("a", "W"): np.array([3.0, -0.5])})
        np.testing.assert_allclose(param, [0.99, -0.99], rtol=1e-6)

    def test_adam_updates_in_place(self):
        param = np.zeros(3)
        view = param[1:]
        Adam(0.1).step({("a", "W"): param}, {("a", "W"): np.ones(3)})
        assert np.all(view < 0)

    def test_adam_moments_survive_weight_modification(self, rng):
        network = build_model(ModelSpec(hidden=[4]), 3, 1, LossKind.MSE, rng)
        optimizer = Adam(0.01)
        network.loss_and_gradients(rng.normal(size=(4, 3)), rng.normal(size=(4, 1)))
        optimizer.step(network.parameters(), network.gradients())
        moments = {key: m.copy() for key, m in optimizer.m.items()}

        cfg = WmmConfig(method=WmmMethod.REINIT, p=1.0, c=1.0, targets=["dense1"])
        apply_wmm_step(network, cfg, rng)

        for key, m in optimizer.m.items():
            assert np.array_equal(m, moments[key])
        assert optimizer.t == 1

    def test_clip_global_norm(self):
        grads = {("a", "W"): np.array([3.0]), ("b", "W"): np.array([4.0])}
        norm = clip_global_norm(grads, 1.0)
        assert norm == pytest.approx(5.0)
        assert grads[("a", "W")][0] == pytest.approx(0.6)
        assert grads[("b", "W")][0] == pytest.approx(0.8)

    def test_clip_leaves_small_gradients(self):
        grads = {("a", "W"): np.array([0.3])}
        clip_global_norm(grads, 1.0)
        assert grads[("a", "W")][0] == 0.3

    def test_factory_builds_configured_optimizer(self):
        adam = OptimizerFactory.create(TrainConfig(learning_rate=0.5, beta1=0.8))
        assert isinstance(adam, Adam)
        assert (adam.learning_rate, adam.beta1) == (0.5, 0.8)
        assert isinstance(OptimizerFactory.create(TrainConfig(optimizer=OptimizerKind.SGD)), Sgd)
