"""Shared agent machinery: hyperparameters, action scaling, update schedule."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..world import ActionCommand

OBS_DIM = 26
ACT_DIM = 3


@dataclass(frozen=True)
class OuNoiseConfig:
    theta: float = 0.15
    sigma: float = 0.2
    mu: float = 0.0


@dataclass(frozen=True)
class Hyperparams:
    gamma: float = 0.99
    tau: float = 0.005
    lr: float = 1e-3
    batch: int = 256
    seq_len: int = 8
    start_steps: int = 1000
    buffer_capacity: int = 100_000
    target_noise_sigma: float = 0.05   # normalized action units
    target_noise_clip: float = 0.125
    ou_explore: OuNoiseConfig = OuNoiseConfig()
    sac_alpha: float = 0.2
    max_steps: int = 500
    max_eps: int = 1500

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must be in (0, 1)")
        if not 0.0 < self.tau <= 1.0:
            raise ValueError("tau must be in (0, 1]")
        if self.batch < 1 or self.seq_len < 1:
            raise ValueError("batch and seq_len must be >= 1")
        if self.target_noise_clip < 0.0:
            raise ValueError("target_noise_clip must be >= 0")


def normalize_action(cmd: ActionCommand) -> np.ndarray:
    """Map a raw command into [-1, 1]^3."""
    return cmd.to_normalized()


def denormalize_action(a) -> ActionCommand:
    """Inverse of normalize_action; clips into bounds first."""
    return ActionCommand.from_normalized(a)


def policy_update_freq(t: int, max_steps: int) -> int:
    """Actor/target update period at step t of an episode.

    floor(1 / (0.5 - t / (3 * max_steps))), evaluated in exact rational
    arithmetic: the float expression rounds the wrong way at exact
    integer values of the quotient (e.g. t = max_steps / 2).
    """
    if not 0 <= t <= max_steps:
        raise ValueError(f"t={t} outside [0, {max_steps}]")
    denom = Fraction(1, 2) - Fraction(t, 3 * max_steps)
    if denom <= 0:
        raise ValueError("update period undefined for t > 1.5 * max_steps")
    return int(Fraction(1, 1) / denom)
