"""Minibatch Adam training on snapshot pairs."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from config.errors import ConfigError, NonFiniteError, TrainingDivergedError
from diffcore.optim import Adam
from diffcore.tape import Tape
from gdvae.config import TrainingConfig
from gdvae.model import GDVAEModel, elbo_loss

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ("epoch", "L_RE", "L_KL", "L_RR", "total")


@dataclass
class EpochRecord:
    """Sample-weighted averages of the loss terms over one epoch."""
    epoch: int
    L_RE: float
    L_KL: float
    L_RR: float
    total: float
    mse: float = 0.0

    def as_row(self) -> list:
        return [self.epoch, self.L_RE, self.L_KL, self.L_RR, self.total]


@dataclass
class TrainingHistory:
    records: list[EpochRecord] = field(default_factory=list)

    def totals(self) -> np.ndarray:
        return np.array([r.total for r in self.records])

    def rows(self) -> list[list]:
        return [r.as_row() for r in self.records]

    @property
    def last_epoch(self) -> int:
        return self.records[-1].epoch if self.records else -1


def epoch_rng(seed: int, epoch: int) -> np.random.Generator:
    """Generator for one epoch's shuffling and noise; depends only on (seed, epoch)."""
    return np.random.default_rng([seed, epoch])


def pair_arrays(pairs) -> tuple[np.ndarray, np.ndarray]:
    """(X, x) arrays from a tuple or a pair set."""
    if isinstance(pairs, tuple):
        X, x = pairs
    else:
        X, x = pairs.X, pairs.x
    return np.asarray(X, dtype=np.float64), np.asarray(x, dtype=np.float64)


def train(
    model: GDVAEModel,
    pairs,
    config: TrainingConfig,
    start_epoch: int = 0,
    history: Optional[TrainingHistory] = None,
    on_epoch: Optional[Callable[[GDVAEModel, EpochRecord], None]] = None,
) -> tuple[GDVAEModel, TrainingHistory]:
    """
    Train on pairs (X[i], x[i]) for epochs ``start_epoch .. config.epochs - 1``.

    Adam moments live on the parameters and each epoch draws from
    ``epoch_rng(seed, epoch)``, so resuming from a checkpoint written after
    epoch k continues exactly as an uninterrupted run would.

    Args:
        model: Model to train in place
        pairs: Snapshot pairs, either an (X, x) tuple or an object with X and x arrays;
            X[i] = u(t_i) and x[i] = u(t_i + tau)
        config: Loss weights, optimizer and schedule
        start_epoch: First epoch to run
        history: Records of earlier epochs to extend
        on_epoch: Called after every epoch (checkpointing)

    Returns:
        The trained model and its per-epoch history

    Raises:
        TrainingDivergedError: A loss term or gradient became non-finite
    """
    X, x = pair_arrays(pairs)
    n = X.shape[0]
    if n == 0:
        raise ConfigError("training needs at least one snapshot pair", "dataset")
    if x.shape[0] != n:
        raise ConfigError(f"{n} inputs but {x.shape[0]} targets", "dataset")

    model.decoder.set_variance(config.decoder_variance)
    params = model.parameters()
    optimizer = Adam(params, lr=config.lr, beta1=config.beta1, beta2=config.beta2, eps=config.eps)
    history = history or TrainingHistory()

    for epoch in range(start_epoch, config.epochs):
        rng = epoch_rng(config.seed, epoch)
        order = rng.permutation(n)
        sums = np.zeros(5)
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            optimizer.zero_grad()
            try:
                with Tape() as tape:
                    loss = elbo_loss(X[batch], x[batch], model, config, rng)
                    tape.backward(loss.total)
            except TrainingDivergedError as exc:
                exc.epoch = epoch
                logger.error("Training diverged at epoch %d in %s", epoch, exc.term)
                raise
            try:
                optimizer.step()
            except NonFiniteError as exc:
                raise TrainingDivergedError(f"non-finite gradient at epoch {epoch}: {exc}",
                                            term="gradient", epoch=epoch) from exc
            row = loss.as_row()
            sums += len(batch) * np.array([row["L_RE"], row["L_KL"], row["L_RR"], row["total"], loss.mse_re])
        means = sums / n
        record = EpochRecord(epoch, *[float(v) for v in means[:4]], mse=float(means[4]))
        if not np.isfinite(record.total):
            raise TrainingDivergedError(f"non-finite epoch loss at epoch {epoch}", term="total", epoch=epoch)
        history.records.append(record)
        logger.info("epoch %d: L_RE=%.4e L_KL=%.4e L_RR=%.4e total=%.4e mse=%.3e",
                    epoch, record.L_RE, record.L_KL, record.L_RR, record.total, record.mse)
        if on_epoch is not None:
            on_epoch(model, record)
    optimizer.zero_grad()
    return model, history
