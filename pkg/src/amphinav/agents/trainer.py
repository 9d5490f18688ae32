"""Training loop: random warmup, per-step gradient updates, episode logs."""

import json
import os
import time
from dataclasses import dataclass

import numpy as np

from ..nn import save_checkpoint
from ..util import derive_rng_stream, limit_blas_threads
from ..world import RewardConfig, TankEnv, WorldConfig
from .common import ACT_DIM, Hyperparams
from .replay import ReplayBuffer
from .sac import AgentSAC
from .td3 import AgentTD3

LOG_NAME = "train_log.jsonl"


@dataclass
class EpisodeLog:
    episode: int
    steps: int
    cum_reward: float
    goals_reached: int
    collided: bool
    wall_sec: float

    def to_json(self) -> str:
        return json.dumps({"episode": self.episode, "steps": self.steps,
                           "cum_reward": self.cum_reward,
                           "goals_reached": self.goals_reached,
                           "collided": self.collided,
                           "wall_sec": self.wall_sec})


def _select_action(agent, obs_vec, h, c, rng):
    if isinstance(agent, AgentSAC):
        a, _, h, c = agent.act(obs_vec, h, c, mode="sample", rng=rng)
    else:
        a, h, c = agent.act(obs_vec, h, c, explore=True, rng=rng)
    return a, h, c


def train_episode(agent, env: TankEnv, buffer: ReplayBuffer, hp: Hyperparams,
                  start, episode_idx: int, total_steps: int,
                  rng_env: np.random.Generator,
                  rng_explore: np.random.Generator,
                  rng_update: np.random.Generator):
    """One episode with per-step updates; returns (EpisodeLog, total_steps)."""
    t0 = time.perf_counter()
    goal = env.sample_goal(rng_env)
    obs = env.reset(start, goal, rng=rng_env)
    obs_vec = obs.vector()
    h, c = agent.reset_episode()
    cum_reward = 0.0
    collided = False
    steps = 0

    for t in range(hp.max_steps):
        if total_steps < hp.start_steps:
            a = rng_explore.uniform(-1.0, 1.0, ACT_DIM)
        else:
            a, h, c = _select_action(agent, obs_vec, h, c, rng_explore)
        outcome = env.step_normalized(a)
        next_vec = outcome.observation.vector()
        buffer.append(obs_vec, a, outcome.reward, next_vec, outcome.terminated)
        cum_reward += outcome.reward
        total_steps += 1
        steps += 1
        if outcome.terminated and not outcome.success:
            collided = (outcome.info["min_range"] < env.reward_cfg.c_o
                        or outcome.info["floor_contact"])

        if total_steps > hp.start_steps:
            batch = buffer.sample_sequences(hp.batch, hp.seq_len, rng_update)
            agent.update(batch, t, rng_update)

        obs_vec = next_vec
        if outcome.terminated:
            break

    buffer.end_episode()
    log = EpisodeLog(episode=episode_idx, steps=steps, cum_reward=cum_reward,
                     goals_reached=env.goals_reached, collided=collided,
                     wall_sec=time.perf_counter() - t0)
    return log, total_steps


def make_agent(algo: str, hp: Hyperparams, hidden_dim: int,
               recurrent_critics: bool, seed: int):
    if algo == "docrl-d":
        return AgentTD3(hp, hidden_dim, recurrent_critics, seed)
    if algo == "docrl-s":
        return AgentSAC(hp, hidden_dim, recurrent_critics, seed)
    raise ValueError(f"unknown trainable algorithm {algo!r}")


def run_training(algo: str, world: WorldConfig, start, hp: Hyperparams,
                 seed: int, out_dir: str, episodes: int,
                 hidden_dim: int = 256, recurrent_critics: bool = True,
                 reward: RewardConfig = RewardConfig(),
                 checkpoint_every: int = 100, verbose: bool = False):
    """Full training run; writes JSONL episode logs and periodic checkpoints."""
    limit_blas_threads()
    os.makedirs(out_dir, exist_ok=True)
    env = TankEnv(world, reward, training=True)
    agent = make_agent(algo, hp, hidden_dim, recurrent_critics,
                       int(derive_rng_stream(seed, "agent-init").integers(2**31)))
    buffer = ReplayBuffer(hp.buffer_capacity)
    rng_env = derive_rng_stream(seed, "env")
    rng_explore = derive_rng_stream(seed, "explore")
    rng_update = derive_rng_stream(seed, "update")

    from . import checkpointing  # local import avoids a cycle
    total_steps = 0
    log_path = os.path.join(out_dir, LOG_NAME)
    with open(log_path, "w") as log_fh:
        for ep in range(1, episodes + 1):
            log, total_steps = train_episode(
                agent, env, buffer, hp, start, ep, total_steps,
                rng_env, rng_explore, rng_update)
            log_fh.write(log.to_json() + "\n")
            log_fh.flush()
            if verbose:
                print(f"ep {ep:4d}  steps {log.steps:3d}  "
                      f"reward {log.cum_reward:8.2f}  goals {log.goals_reached}")
            if checkpoint_every and ep % checkpoint_every == 0:
                checkpointing.save_agent(
                    os.path.join(out_dir, f"ckpt-ep{ep:05d}"), algo, agent, hp)
    checkpointing.save_agent(os.path.join(out_dir, "ckpt-final"), algo, agent, hp)
    return agent, log_path
