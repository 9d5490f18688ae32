"""Episode-segmented replay storage for recurrent training.

Sampled sequences are contiguous runs from a single episode; runs that
hit the episode end are padded and flagged in the validity mask.  When
the buffer overflows, whole oldest episodes are evicted.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .common import ACT_DIM, OBS_DIM


@dataclass(frozen=True)
class Transition:
    s: np.ndarray      # (26,)
    a: np.ndarray      # (3,), normalized
    r: float
    s2: np.ndarray     # (26,)
    done: bool
    episode_id: int = 0
    step_in_episode: int = 0


@dataclass
class Batch:
    s: np.ndarray      # (B, T, 26)
    a: np.ndarray      # (B, T, 3)
    r: np.ndarray      # (B, T)
    s2: np.ndarray     # (B, T, 26)
    done: np.ndarray   # (B, T) float 0/1
    mask: np.ndarray   # (B, T) float 0/1, 1 where the step is real


class _Episode:
    __slots__ = ("s", "a", "r", "s2", "done", "n")

    def __init__(self, cap: int = 64):
        self.s = np.empty((cap, OBS_DIM))
        self.a = np.empty((cap, ACT_DIM))
        self.r = np.empty(cap)
        self.s2 = np.empty((cap, OBS_DIM))
        self.done = np.zeros(cap)
        self.n = 0

    def _grow(self):
        cap = 2 * self.s.shape[0]
        for name in ("s", "a", "r", "s2", "done"):
            old = getattr(self, name)
            new = np.empty((cap,) + old.shape[1:])
            new[:self.n] = old[:self.n]
            setattr(self, name, new)

    def append(self, s, a, r, s2, done):
        if self.n == self.s.shape[0]:
            self._grow()
        k = self.n
        self.s[k] = s
        self.a[k] = a
        self.r[k] = r
        self.s2[k] = s2
        self.done[k] = 1.0 if done else 0.0
        self.n = k + 1


class ReplayBuffer:
    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._episodes = [_Episode()]
        self._next_episode_id = 0
        self.total = 0

    def __len__(self):
        return self.total

    @property
    def n_episodes(self) -> int:
        return sum(1 for ep in self._episodes if ep.n > 0)

    def append(self, s, a, r, s2, done):
        """Add a transition to the episode currently being written."""
        self._episodes[-1].append(s, a, r, s2, done)
        self.total += 1
        self._evict()
        if done:
            self.end_episode()

    def store(self, tr: Transition):
        """Transition-object entry point; new episode_id opens an episode."""
        if tr.episode_id != self._next_episode_id:
            self.end_episode()
            self._next_episode_id = tr.episode_id
        self.append(tr.s, tr.a, tr.r, tr.s2, tr.done)

    def end_episode(self):
        if self._episodes[-1].n > 0:
            self._episodes.append(_Episode())
            self._next_episode_id += 1

    def _evict(self):
        while self.total > self.capacity and len(self._episodes) > 1 \
                and self._episodes[0].n > 0:
            dead = self._episodes.pop(0)
            self.total -= dead.n

    def sample_sequences(self, batch: int, seq_len: int,
                         rng: np.random.Generator) -> Batch:
        """Uniformly pick start transitions; runs never cross episodes."""
        if self.total == 0:
            raise ValueError("cannot sample from an empty buffer")
        eps = [ep for ep in self._episodes if ep.n > 0]
        lengths = np.array([ep.n for ep in eps])
        bounds = np.cumsum(lengths)
        flat = rng.integers(0, self.total, size=batch)
        ep_idx = np.searchsorted(bounds, flat, side="right")

        out = Batch(s=np.zeros((batch, seq_len, OBS_DIM)),
                    a=np.zeros((batch, seq_len, ACT_DIM)),
                    r=np.zeros((batch, seq_len)),
                    s2=np.zeros((batch, seq_len, OBS_DIM)),
                    done=np.zeros((batch, seq_len)),
                    mask=np.zeros((batch, seq_len)))
        for row, (fi, ei) in enumerate(zip(flat, ep_idx)):
            ep = eps[ei]
            start = int(fi - (bounds[ei - 1] if ei else 0))
            L = min(seq_len, ep.n - start)
            sl = slice(start, start + L)
            out.s[row, :L] = ep.s[sl]
            out.a[row, :L] = ep.a[sl]
            out.r[row, :L] = ep.r[sl]
            out.s2[row, :L] = ep.s2[sl]
            out.done[row, :L] = ep.done[sl]
            out.mask[row, :L] = 1.0
        return out
