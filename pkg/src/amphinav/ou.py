"""Ornstein-Uhlenbeck process, used for wind disturbance and action noise."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class OuProcess:
    """Mean-reverting Gaussian process with the exact Euler-Maruyama update

        x' = x + theta * (mu - x) * dt + sigma * sqrt(dt) * n,   n ~ N(0, 1)

    applied independently per channel.  The discrete chain is AR(1) with
    stationary variance sigma^2 * dt / (1 - (1 - theta*dt)^2).
    """

    theta: float
    sigma: float
    mu: float = 0.0
    dt: float = 1.0
    channels: int = 1
    state: np.ndarray = field(init=False)

    def __post_init__(self):
        self.state = np.full(self.channels, self.mu, dtype=np.float64)

    def reset(self):
        self.state[:] = self.mu

    def step(self, rng: np.random.Generator) -> np.ndarray:
        n = rng.standard_normal(self.channels)
        self.state = (self.state
                      + self.theta * (self.mu - self.state) * self.dt
                      + self.sigma * np.sqrt(self.dt) * n)
        return self.state

    def stationary_variance(self) -> float:
        a = 1.0 - self.theta * self.dt
        return (self.sigma ** 2 * self.dt) / (1.0 - a * a)
