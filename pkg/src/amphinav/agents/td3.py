"""Deterministic double-critic recurrent agent (delayed policy updates,
clipped Gaussian smoothing on target actions, OU exploration noise)."""

from typing import Optional

import numpy as np

from ..nn import (NetworkSpec, ParamSet, adam_step, backward_seq, forward_seq,
                  forward_step, init_params, soft_update)
from ..ou import OuProcess
from .common import ACT_DIM, OBS_DIM, Hyperparams, policy_update_freq
from .replay import Batch

ALGO_NAME = "docrl-d"


def _child_seeds(seed: int, n: int):
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(n)]


class AgentTD3:
    """Actor with tanh head plus twin critics, each with a slow target copy."""

    def __init__(self, hp: Hyperparams, hidden_dim: int = 256,
                 recurrent_critics: bool = True, seed: int = 0):
        self.hp = hp
        self.actor_spec = NetworkSpec(OBS_DIM, hidden_dim, "tanh3")
        self.critic_spec = NetworkSpec(OBS_DIM + ACT_DIM, hidden_dim, "scalar",
                                       recurrent=recurrent_critics)
        s_actor, s_c1, s_c2 = _child_seeds(seed, 3)
        self.actor = init_params(self.actor_spec, s_actor)
        self.critic1 = init_params(self.critic_spec, s_c1)
        self.critic2 = init_params(self.critic_spec, s_c2)
        self.actor_target = self.actor.copy()
        self.critic1_target = self.critic1.copy()
        self.critic2_target = self.critic2.copy()
        self.ou = OuProcess(hp.ou_explore.theta, hp.ou_explore.sigma,
                            hp.ou_explore.mu, dt=1.0, channels=ACT_DIM)
        self.grad_steps = 0

    def reset_episode(self):
        """Zero recurrent state and restart the exploration noise."""
        self.ou.reset()
        return None, None

    def act(self, obs_vec: np.ndarray, h, c, explore: bool,
            rng: Optional[np.random.Generator] = None):
        """Greedy tanh action, plus clipped OU noise when exploring."""
        y, h2, c2 = forward_step(self.actor, self.actor_spec, obs_vec, h, c)
        if explore:
            y = np.clip(y + self.ou.step(rng), -1.0, 1.0)
        return y, h2, c2

    def targets(self, batch: Batch, rng: np.random.Generator,
                trace: bool = False):
        """Bootstrap values r + gamma * (1 - done) * min(Q1', Q2')(s', a')
        with a' the target policy action under clipped Gaussian noise."""
        hp = self.hp
        a2, _, _ = forward_seq(self.actor_target, self.actor_spec, batch.s2,
                               want_cache=False)
        noise_raw = rng.standard_normal(a2.shape) * hp.target_noise_sigma
        noise = np.clip(noise_raw, -hp.target_noise_clip, hp.target_noise_clip)
        a_prime = np.clip(a2 + noise, -1.0, 1.0)
        x2 = np.concatenate([batch.s2, a_prime], axis=2)
        q1p = forward_seq(self.critic1_target, self.critic_spec, x2,
                          want_cache=False)[0][..., 0]
        q2p = forward_seq(self.critic2_target, self.critic_spec, x2,
                          want_cache=False)[0][..., 0]
        qmin = np.minimum(q1p, q2p)
        q_t = batch.r + hp.gamma * (1.0 - batch.done) * qmin
        if trace:
            return q_t, {"actor_out": a2, "noise_raw": noise_raw,
                         "a_prime": a_prime, "q1p": q1p, "q2p": q2p,
                         "qmin": qmin}
        return q_t

    def critic_loss_and_grads(self, critic: ParamSet, x, q_t, mask, denom):
        """Masked MSE against fixed targets plus its exact gradient."""
        q, _, cache = forward_seq(critic, self.critic_spec, x)
        err = (q[..., 0] - q_t) * mask
        loss = float((err * err).sum() / denom)
        dq = (2.0 / denom) * err
        grads, _ = backward_seq(critic, self.critic_spec, cache,
                                dq[..., None], input_grads=False)
        return loss, grads

    def _critic_step(self, critic: ParamSet, x, q_t, mask, denom):
        loss, grads = self.critic_loss_and_grads(critic, x, q_t, mask, denom)
        adam_step(critic, grads, self.hp.lr)
        return loss

    def update(self, batch: Batch, t_in_episode: int,
               rng: np.random.Generator) -> dict:
        """One critic step; actor and targets on schedule ticks."""
        hp = self.hp
        q_t = self.targets(batch, rng)
        denom = batch.mask.sum()
        x = np.concatenate([batch.s, batch.a], axis=2)
        loss1 = self._critic_step(self.critic1, x, q_t, batch.mask, denom)
        loss2 = self._critic_step(self.critic2, x, q_t, batch.mask, denom)
        self.grad_steps += 1

        out = {"critic1_loss": loss1, "critic2_loss": loss2}
        freq = policy_update_freq(t_in_episode, hp.max_steps)
        if t_in_episode % freq == 0:
            out["actor_loss"] = self._actor_step(batch, denom)
            soft_update(self.actor_target, self.actor, hp.tau)
            soft_update(self.critic1_target, self.critic1, hp.tau)
            soft_update(self.critic2_target, self.critic2, hp.tau)
        return out

    def actor_loss_and_grads(self, batch: Batch):
        """-mean Q1(s, pi(s)) and its gradient through the frozen critic."""
        denom = batch.mask.sum()
        a_pi, _, cache_a = forward_seq(self.actor, self.actor_spec, batch.s)
        x = np.concatenate([batch.s, a_pi], axis=2)
        q1, _, cache_c = forward_seq(self.critic1, self.critic_spec, x)
        loss = float(-(q1[..., 0] * batch.mask).sum() / denom)
        dq = (-batch.mask / denom)[..., None]
        _, dx = backward_seq(self.critic1, self.critic_spec, cache_c, dq,
                             param_grads=False)
        da = dx[..., OBS_DIM:]
        grads, _ = backward_seq(self.actor, self.actor_spec, cache_a, da,
                                input_grads=False)
        return loss, grads

    def _actor_step(self, batch: Batch, denom: float) -> float:
        loss, grads = self.actor_loss_and_grads(batch)
        adam_step(self.actor, grads, self.hp.lr)
        return loss

    def networks(self):
        return {"actor": (self.actor, self.actor_spec),
                "critic1": (self.critic1, self.critic_spec),
                "critic2": (self.critic2, self.critic_spec),
                "actor_target": (self.actor_target, self.actor_spec),
                "critic1_target": (self.critic1_target, self.critic_spec),
                "critic2_target": (self.critic2_target, self.critic_spec)}
