"""Frozen-policy evaluation: repeated trials, per-medium time statistics."""

import csv
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bba import BbaConfig, bba_act
from .util import derive_rng_stream, limit_blas_threads
from .world import (ActionCommand, RewardConfig, TankEnv, TrajectoryRecorder,
                    WorldConfig)

METRICS_HEADER = ["algo", "scenario", "trials", "successes", "t_air_mean",
                  "t_air_std", "t_water_mean", "t_water_std"]
TRIALS_HEADER = ["trial", "steps", "success", "t_air", "t_water", "reward"]


@dataclass
class EvalMetrics:
    trials: int
    successes: int
    t_air_mean: Optional[float]
    t_air_std: Optional[float]
    t_water_mean: Optional[float]
    t_water_std: Optional[float]

    def csv_row(self, algo: str, scenario: str):
        def fmt(v):
            return "" if v is None else f"{v:.6f}"
        return [algo, scenario, self.trials, self.successes,
                fmt(self.t_air_mean), fmt(self.t_air_std),
                fmt(self.t_water_mean), fmt(self.t_water_std)]


class GreedyPolicy:
    """Deterministic agent driven by its noise-free tanh action."""

    def __init__(self, agent):
        self.agent = agent
        self.h = self.c = None

    def begin_episode(self):
        self.h = self.c = None

    def action(self, obs) -> ActionCommand:
        a, self.h, self.c = self.agent.act(obs.vector(), self.h, self.c,
                                           explore=False)
        return ActionCommand.from_normalized(a)


class MeanPolicy:
    """Stochastic agent evaluated at the squashed mean."""

    def __init__(self, agent):
        self.agent = agent
        self.h = self.c = None

    def begin_episode(self):
        self.h = self.c = None

    def action(self, obs) -> ActionCommand:
        a, _, self.h, self.c = self.agent.act(obs.vector(), self.h, self.c,
                                              mode="mean")
        return ActionCommand.from_normalized(a)


class BbaPolicy:
    def __init__(self, cfg: BbaConfig = BbaConfig()):
        self.cfg = cfg

    def begin_episode(self):
        pass

    def action(self, obs) -> ActionCommand:
        return bba_act(obs, self.cfg)


def run_trials(policy, world: WorldConfig, start, goal, master_seed: int,
               trials: int = 100, reward: RewardConfig = RewardConfig(),
               dump_dir: Optional[str] = None):
    """Independent evaluation episodes; returns (EvalMetrics, per-trial rows).

    Trial k runs on its own RNG stream "trial-k" so any single trial can
    be reproduced in isolation.
    """
    limit_blas_threads()
    env = TankEnv(world, reward, training=False)
    rows = []
    if dump_dir:
        os.makedirs(dump_dir, exist_ok=True)
    for k in range(trials):
        rng = derive_rng_stream(master_seed, f"trial-{k}")
        obs = env.reset(start, goal, rng=rng)
        policy.begin_episode()
        recorder = TrajectoryRecorder(world.dt) if dump_dir else None
        reward_final = 0.0
        success = False
        while True:
            outcome = env.step(policy.action(obs))
            obs = outcome.observation
            if recorder is not None:
                recorder.record(env.step_index, env.state, outcome)
            if outcome.terminated:
                reward_final = outcome.reward
                success = outcome.success
                break
        rows.append({"trial": k, "steps": env.step_index,
                     "success": success,
                     "t_air": env.steps_air * world.dt,
                     "t_water": env.steps_water * world.dt,
                     "reward": reward_final})
        if recorder is not None:
            recorder.write(os.path.join(dump_dir, f"trial-{k:03d}.csv"))

    ok = [r for r in rows if r["success"]]
    n_ok = len(ok)

    def stats(key):
        if n_ok == 0:
            return None, None
        vals = np.array([r[key] for r in ok])
        mean = float(vals.mean())
        std = float(vals.std(ddof=1)) if n_ok >= 2 else None
        return mean, std

    air_mean, air_std = stats("t_air")
    water_mean, water_std = stats("t_water")
    metrics = EvalMetrics(trials=trials, successes=n_ok,
                          t_air_mean=air_mean, t_air_std=air_std,
                          t_water_mean=water_mean, t_water_std=water_std)
    return metrics, rows


def write_eval_csv(out_dir: str, algo: str, scenario: str,
                   metrics: EvalMetrics, rows):
    os.makedirs(out_dir, exist_ok=True)
    metrics_path = os.path.join(out_dir, "metrics.csv")
    with open(metrics_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(METRICS_HEADER)
        writer.writerow(metrics.csv_row(algo, scenario))
    trials_path = os.path.join(out_dir, "trials.csv")
    with open(trials_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIALS_HEADER)
        for r in rows:
            writer.writerow([r["trial"], r["steps"], int(r["success"]),
                             f"{r['t_air']:.6f}", f"{r['t_water']:.6f}",
                             f"{r['reward']:.6f}"])
    return metrics_path, trials_path
