"""
Seeded training loop with the WMM hook, entropy instrumentation and early stopping.

One run owns its network. The master seed of ``TrainConfig`` is split into
independent streams: ``STREAM_INIT`` (used by whoever builds the model),
``STREAM_DATA`` (mini-batch order) and ``STREAM_WMM`` (trigger and mask draws), so
enabling WMM never changes the data order.
"""

import math
import time
from datetime import UTC, datetime

import numpy as np

from wmm_lab.core.constants import STREAM_DATA, STREAM_WMM
from wmm_lab.core.logging import logger
from wmm_lab.data.windows import DatasetSplits, WindowedDataset
from wmm_lab.models.stats import EntropyTimeline
from wmm_lab.models.training import (
    EpochRecord,
    RunMetadata,
    RunStatus,
    TrainConfig,
    TrainReport,
    WmmEvent,
)
from wmm_lab.models.wmm import WmmTarget
from wmm_lab.nn.losses import LossKind, compute_loss
from wmm_lab.nn.network import Network
from wmm_lab.nn.optimizers import OptimizerFactory, clip_global_norm
from wmm_lab.ops.rng import make_rng
from wmm_lab.ops.stats import record_epoch, weight_entropy
from wmm_lab.ops.wmm import apply_wmm_step


def metric_name(loss: LossKind) -> str:
    return "mse" if loss is LossKind.MSE else "error_rate"


def evaluate_loss(network: Network, dataset: WindowedDataset) -> float:
    """Mean loss over ``dataset`` without the L2 penalty."""
    outputs = network.predict(dataset.inputs)
    loss, _ = compute_loss(network.loss, outputs, dataset.targets)
    return loss


def evaluate_metric(network: Network, dataset: WindowedDataset) -> float:
    """MSE for regression, misclassification rate for classification."""
    outputs = network.predict(dataset.inputs)
    if network.loss is LossKind.MSE:
        return float(np.mean((outputs - dataset.targets) ** 2))
    return float(np.mean(np.argmax(outputs, axis=1) != dataset.targets))


def train(
    network: Network,
    splits: DatasetSplits,
    cfg: TrainConfig,
    tracked: list[WmmTarget] | None = None,
) -> TrainReport:
    """
    Train ``network`` in place and return its report.

    After every optimizer step the WMM step runs when ``cfg.wmm`` is set; every applied
    event is logged with the entropy of the matrix before and after. The entropy
    timeline covers ``tracked`` when given, else the WMM targets, else every layer.
    Training stops early after ``cfg.patience`` epochs without a validation
    improvement; the best-validation parameters are restored before the test metric
    is computed, once.

    A non-finite loss ends the run with status ``diverged`` instead of raising.

    Raises:
        ConfigurationError: If WMM or tracked targets do not resolve on ``network``.
    """
    started = time.perf_counter()
    created_at = datetime.now(UTC)

    if tracked is None:
        tracked = list(cfg.wmm.targets) if cfg.wmm is not None else network.all_layers()
    tracked_views = network.resolve_targets(tracked)
    if cfg.wmm is not None:
        network.resolve_targets(cfg.wmm.targets)

    data_rng = make_rng(cfg.seed, STREAM_DATA)
    wmm_rng = make_rng(cfg.seed, STREAM_WMM)
    optimizer = OptimizerFactory.create(cfg)
    train_set = splits.train

    timeline = EntropyTimeline()
    events: list[WmmEvent] = []
    status: RunStatus = "ok"

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        train_loss = evaluate_loss(network, train_set)
        val_loss = evaluate_loss(network, splits.val)
    epochs = [EpochRecord(epoch=0, train_loss=train_loss, val_loss=val_loss)]
    record_epoch(timeline, 0, tracked_views, cfg.entropy_bins)
    if not (math.isfinite(train_loss) and math.isfinite(val_loss)):
        status = "diverged"

    best_epoch, best_val = 0, val_loss
    best_snapshot = network.snapshot()
    stale = 0
    step = epoch = 0

    def on_apply(matrix_id: str, before: np.ndarray, after: np.ndarray, mask: np.ndarray) -> None:
        events.append(
            WmmEvent(
                step=step,
                epoch=epoch,
                matrix_id=matrix_id,
                mask_size=int(mask.sum()),
                changed=int(np.count_nonzero(before != after)),
                entropy_before=weight_entropy(before, cfg.entropy_bins),
                entropy_after=weight_entropy(after, cfg.entropy_bins),
            )
        )

    for epoch in range(1, cfg.epochs + 1):
        if status == "diverged":
            break
        order = data_rng.permutation(len(train_set))
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            for start in range(0, len(order), cfg.batch_size):
                batch = order[start : start + cfg.batch_size]
                loss = network.loss_and_gradients(
                    train_set.inputs[batch], train_set.targets[batch], cfg.l2
                )
                if not math.isfinite(loss):
                    status = "diverged"
                    break
                grads = network.gradients()
                if cfg.clip_norm is not None:
                    clip_global_norm(grads, cfg.clip_norm)
                params = network.parameters()
                optimizer.step(params, grads)
                step += 1
                if not all(np.isfinite(param).all() for param in params.values()):
                    status = "diverged"
                    break
                if cfg.wmm is not None:
                    apply_wmm_step(network, cfg.wmm, wmm_rng, on_apply=on_apply)

            if status == "diverged":
                logger.error("Run diverged at epoch %d, step %d", epoch, step)
                break
            train_loss = evaluate_loss(network, train_set)
            val_loss = evaluate_loss(network, splits.val)

        if not (math.isfinite(train_loss) and math.isfinite(val_loss)):
            status = "diverged"
            logger.error("Run diverged at the end of epoch %d", epoch)
            break

        epochs.append(EpochRecord(epoch=epoch, train_loss=train_loss, val_loss=val_loss))
        record_epoch(timeline, epoch, tracked_views, cfg.entropy_bins)
        logger.debug("Epoch %d: train %.6g, val %.6g", epoch, train_loss, val_loss)

        if val_loss < best_val:
            best_epoch, best_val = epoch, val_loss
            best_snapshot = network.snapshot()
            stale = 0
        else:
            stale += 1
            if stale >= cfg.patience:
                logger.info("Early stopping after epoch %d (best epoch %d)", epoch, best_epoch)
                break

    val_metric = test_metric = None
    if status == "ok":
        network.restore(best_snapshot)
        val_metric = evaluate_metric(network, splits.val)
        test_metric = evaluate_metric(network, splits.test)

    name = metric_name(network.loss)
    logger.info(
        "Run finished: status=%s, best epoch %d, %d WMM events, test %s=%s",
        status,
        best_epoch,
        len(events),
        name,
        test_metric,
    )
    return TrainReport(
        status=status,
        config=cfg,
        metric_name=name,
        epochs=epochs,
        best_epoch=best_epoch,
        val_metric=val_metric,
        test_metric=test_metric,
        timeline=timeline,
        events=events,
        metadata=RunMetadata(
            created_at=created_at, wall_clock_seconds=time.perf_counter() - started
        ),
    )
