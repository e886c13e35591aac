"""
Weight-matrix modification operators.

Both regularizers act on one 2-D weight matrix at a time:

    weight_reinitialization: choose a window of extent c, keep window elements whose
        uniform draw falls below p, and replace them with fresh draws from
        U[-1/sqrt(cols), +1/sqrt(cols)].
    weight_shuffling: choose a window of extent c, keep window elements whose
        Bernoulli(density) draw succeeds, and permute them among themselves.

The operators return a modified copy plus the mask; ``apply_wmm_step`` adds the
per-matrix trigger (fire when ``p > U[0, 1)``) and writes results back in place.

Random draws happen in a fixed order (window corner, mask, then values or the
permutation), so a seeded generator reproduces every application exactly.
"""

import math
from collections.abc import Callable
from typing import NamedTuple, Protocol

import numpy as np

from wmm_lab.core.errors import InvalidArgumentError
from wmm_lab.core.logging import logger
from wmm_lab.models.wmm import WindowSpec, WmmConfig, WmmMethod
from wmm_lab.ops.init import init_bound
from wmm_lab.ops.rng import RngState
from wmm_lab.ops.targets import TargetResolver


class WmmRecord(NamedTuple):
    """Outcome of the trigger for one target matrix; ``mask`` is None when it did not fire."""

    matrix_id: str
    mask: np.ndarray | None


type ApplyHook = Callable[[str, np.ndarray, np.ndarray, np.ndarray], None]


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise InvalidArgumentError(f"{name} must lie in [0, 1], got {value}")


def _check_coverage(c: float) -> None:
    if not 0.0 < c <= 1.0:
        raise InvalidArgumentError(f"c must lie in (0, 1], got {c}")


def _as_matrix(w: np.ndarray) -> np.ndarray:
    if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
        raise InvalidArgumentError(f"expected a non-empty 2-D weight matrix, got shape {w.shape}")
    if not np.isfinite(w).all():
        raise InvalidArgumentError("weight matrix contains NaN or Inf")
    return w


def _extent(c: float, size: int) -> int:
    # half-up rounding, clamped to [1, size]
    return min(size, max(1, math.floor(c * size + 0.5)))


def select_window(rows: int, cols: int, c: float, rng: RngState) -> WindowSpec:
    """
    Pick a window of ``max(1, round(c*rows))`` x ``max(1, round(c*cols))`` elements
    whose top-left corner is uniform over all valid positions.

    Raises:
        InvalidArgumentError: If c is outside (0, 1] or the matrix is empty.
    """
    _check_coverage(c)
    if rows < 1 or cols < 1:
        raise InvalidArgumentError(f"matrix dimensions must be >= 1, got {rows}x{cols}")
    height = _extent(c, rows)
    width = _extent(c, cols)
    top = int(rng.integers(0, rows - height + 1))
    left = int(rng.integers(0, cols - width + 1))
    return WindowSpec(top=top, left=left, height=height, width=width)


def _window_mask(
    rows: int, cols: int, window: WindowSpec, threshold: float, rng: RngState
) -> np.ndarray:
    if not window.fits(rows, cols):
        raise InvalidArgumentError(f"window {window} exceeds a {rows}x{cols} matrix")
    mask = np.zeros((rows, cols), dtype=bool)
    mask[window.slices] = rng.random((window.height, window.width)) < threshold
    return mask


def build_reinit_mask(
    rows: int, cols: int, window: WindowSpec, p: float, rng: RngState
) -> np.ndarray:
    """Mark window elements whose U[0, 1) draw is strictly below ``p``."""
    _check_probability("p", p)
    return _window_mask(rows, cols, window, p, rng)


def build_shuffle_mask(
    rows: int, cols: int, window: WindowSpec, density: float, rng: RngState
) -> np.ndarray:
    """Mark window elements whose Bernoulli(``density``) draw succeeds."""
    _check_probability("density", density)
    return _window_mask(rows, cols, window, density, rng)


def weight_reinitialization(
    w: np.ndarray, p: float, c: float, rng: RngState
) -> tuple[np.ndarray, np.ndarray]:
    """
    Reset a sparse windowed subset of ``w`` to fresh draws from U_w.

    Unmasked elements are copied bit-for-bit. The outer trigger is not part of this
    function; see ``apply_wmm_step``.

    Returns:
        (updated copy of w, boolean mask of replaced positions)
    """
    _check_probability("p", p)
    matrix = _as_matrix(w)
    rows, cols = matrix.shape
    window = select_window(rows, cols, c, rng)
    mask = build_reinit_mask(rows, cols, window, p, rng)
    out = matrix.copy()
    bound = init_bound(cols)
    out[mask] = rng.uniform(-bound, bound, size=int(mask.sum()))
    return out, mask


def weight_shuffling(
    w: np.ndarray, p: float, c: float, density: float, rng: RngState
) -> tuple[np.ndarray, np.ndarray]:
    """
    Permute a Bernoulli-masked windowed subset of ``w`` among itself.

    ``p`` is the trigger probability and only validated here; the mask density is
    independent of it. Selected positions are taken in row-major order and permuted
    uniformly (``Generator.permutation`` is a Fisher-Yates shuffle), so the multiset of
    values in the matrix is preserved exactly.

    Returns:
        (updated copy of w, boolean mask of positions taking part in the permutation)
    """
    _check_probability("p", p)
    _check_probability("density", density)
    matrix = _as_matrix(w)
    rows, cols = matrix.shape
    window = select_window(rows, cols, c, rng)
    mask = build_shuffle_mask(rows, cols, window, density, rng)
    out = matrix.copy()
    selected = np.flatnonzero(mask)
    if selected.size > 1:
        out.flat[selected] = matrix.flat[selected[rng.permutation(selected.size)]]
    return out, mask


class WmmOperator(Protocol):
    def __call__(
        self, w: np.ndarray, cfg: WmmConfig, rng: RngState
    ) -> tuple[np.ndarray, np.ndarray]: ...


def _reinit_operator(w: np.ndarray, cfg: WmmConfig, rng: RngState) -> tuple[np.ndarray, np.ndarray]:
    return weight_reinitialization(w, cfg.p, cfg.c, rng)


def _shuffle_operator(
    w: np.ndarray,
    cfg: WmmConfig,
    rng: RngState,
) -> tuple[np.ndarray, np.ndarray]:
    return weight_shuffling(w, cfg.p, cfg.c, cfg.shuffle_density, rng)


class OperatorFactory:
    """
    Registry of WMM operators keyed by method.

    New regularizers can be added by writing an operator with the ``WmmOperator``
    signature and registering it here.
    """

    _operators: dict[WmmMethod, WmmOperator] = {}

    @classmethod
    def register_operator(cls, method: WmmMethod, operator: WmmOperator) -> None:
        cls._operators[method] = operator

    @classmethod
    def get_operator(cls, method: WmmMethod) -> WmmOperator:
        """
        Raises:
            ValueError: If no operator is registered for the method
        """
        operator = cls._operators.get(method)
        if operator is None:
            raise ValueError(f"No operator registered for WMM method: {method}")
        return operator

    @classmethod
    def is_registered(cls, method: WmmMethod) -> bool:
        return method in cls._operators


OperatorFactory.register_operator(WmmMethod.REINIT, _reinit_operator)
OperatorFactory.register_operator(WmmMethod.SHUFFLE, _shuffle_operator)


def apply_wmm_step(
    resolver: TargetResolver,
    cfg: WmmConfig,
    rng: RngState,
    on_apply: ApplyHook | None = None,
) -> list[WmmRecord]:
    """
    Run one regularization step over every target matrix.

    Each resolved matrix (filter, gate block or whole matrix) draws its own
    ``u ~ U[0, 1)`` and is modified in place when ``p > u``.

    Args:
        resolver: Source of the target matrix views (a Network or MatrixRegistry).
        cfg: Regularizer settings.
        rng: Stream reserved for WMM draws.
        on_apply: Optional hook ``(matrix_id, before, after, mask)`` called after each
            application; ``before`` is a copy taken just before the write.

    Returns:
        One WmmRecord per resolved matrix, in resolution order.

    Raises:
        ConfigurationError: If any target does not resolve; nothing is modified then.
    """
    matrices = resolver.resolve_targets(cfg.targets)
    operator = OperatorFactory.get_operator(cfg.method)
    records: list[WmmRecord] = []
    for matrix_id, view in matrices.items():
        if not cfg.p > rng.random():
            records.append(WmmRecord(matrix_id, None))
            continue
        before = view.copy() if on_apply is not None else None
        updated, mask = operator(view, cfg, rng)
        view[...] = updated
        logger.debug("%s applied to %s (%d elements)", cfg.method.value, matrix_id, int(mask.sum()))
        records.append(WmmRecord(matrix_id, mask))
        if on_apply is not None and before is not None:
            on_apply(matrix_id, before, view, mask)
    return records
