"""
First-order optimizers updating parameters in place.

Parameters and gradients are passed as dicts keyed by ``(layer, name)``. In-place
updates keep every outstanding view (e.g. gate slices used by WMM) valid. WMM writes
never touch optimizer state; Adam moments carry across regularization events.
"""

from abc import ABC, abstractmethod
from collections.abc import Mapping

import numpy as np

from wmm_lab.core.constants import ADAM_BETAS, ADAM_EPS
from wmm_lab.models.training import OptimizerKind, TrainConfig

type ParamKey = tuple[str, str]


class Optimizer(ABC):
    def __init__(self, learning_rate: float):
        self.learning_rate = learning_rate

    @abstractmethod
    def step(
        self,
        params: Mapping[ParamKey, np.ndarray],
        grads: Mapping[ParamKey, np.ndarray],
    ) -> None:
        """Apply one update to every parameter in ``params``."""
        ...


class Sgd(Optimizer):
    def step(
        self,
        params: Mapping[ParamKey, np.ndarray],
        grads: Mapping[ParamKey, np.ndarray],
    ) -> None:
        for key, param in params.items():
            param -= self.learning_rate * grads[key]


class Adam(Optimizer):
    def __init__(
        self,
        learning_rate: float,
        beta1: float = ADAM_BETAS[0],
        beta2: float = ADAM_BETAS[1],
        eps: float = ADAM_EPS,
    ):
        super().__init__(learning_rate)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m: dict[ParamKey, np.ndarray] = {}
        self.v: dict[ParamKey, np.ndarray] = {}

    def step(
        self,
        params: Mapping[ParamKey, np.ndarray],
        grads: Mapping[ParamKey, np.ndarray],
    ) -> None:
        self.t += 1
        correction1 = 1.0 - self.beta1**self.t
        correction2 = 1.0 - self.beta2**self.t
        for key, param in params.items():
            grad = grads[key]
            m = self.m.setdefault(key, np.zeros_like(param))
            v = self.v.setdefault(key, np.zeros_like(param))
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad**2
            param -= self.learning_rate * (m / correction1) / (np.sqrt(v / correction2) + self.eps)


def clip_global_norm(grads: Mapping[ParamKey, np.ndarray], max_norm: float) -> float:
    """Scale all gradients in place so their joint L2 norm is at most ``max_norm``; return the original norm."""
    norm = float(np.sqrt(sum(float(np.sum(g**2)) for g in grads.values())))
    if norm > max_norm:
        scale = max_norm / norm
        for grad in grads.values():
            grad *= scale
    return norm


class OptimizerFactory:
    """Registry of optimizer builders keyed by ``OptimizerKind``."""

    _builders: dict[OptimizerKind, type[Optimizer]] = {}

    @classmethod
    def register_optimizer(cls, kind: OptimizerKind, optimizer_class: type[Optimizer]) -> None:
        cls._builders[kind] = optimizer_class

    @classmethod
    def create(cls, cfg: TrainConfig) -> Optimizer:
        """
        Raises:
            ValueError: If no optimizer is registered for ``cfg.optimizer``
        """
        optimizer_class = cls._builders.get(cfg.optimizer)
        if optimizer_class is None:
            raise ValueError(f"No optimizer registered for: {cfg.optimizer}")
        if optimizer_class is Adam:
            return Adam(cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.eps)
        return optimizer_class(cfg.learning_rate)


OptimizerFactory.register_optimizer(OptimizerKind.SGD, Sgd)
OptimizerFactory.register_optimizer(OptimizerKind.ADAM, Adam)
