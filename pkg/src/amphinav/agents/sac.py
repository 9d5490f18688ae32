"""Stochastic double-critic recurrent agent: squashed-Gaussian actor with
entropy-regularized targets and delayed, reparameterized policy updates."""

from typing import Optional

import numpy as np

from ..nn import (NetworkSpec, ParamSet, adam_step, backward_seq, forward_seq,
                  forward_step, init_params, soft_update)
from .common import ACT_DIM, OBS_DIM, Hyperparams, policy_update_freq
from .replay import Batch

ALGO_NAME = "docrl-s"

LOGPROB_EPS = 1e-6
_LOG_2PI = np.log(2.0 * np.pi)


def squashed_gaussian_logprob(u, mu, log_std):
    """log pi(a|s) for a = tanh(u), u ~ N(mu, exp(log_std)^2).

    Sums over the trailing action dimension; the 1e-6 floor keeps the
    change-of-variables term finite at saturation.
    """
    std = np.exp(log_std)
    z = (u - mu) / std
    log_n = -0.5 * z * z - log_std - 0.5 * _LOG_2PI
    a = np.tanh(u)
    corr = np.log(1.0 - a * a + LOGPROB_EPS)
    return (log_n - corr).sum(axis=-1)


class AgentSAC:
    """Mean/log-std actor plus twin critics with target copies (no actor
    target; only the critic targets are soft-updated)."""

    def __init__(self, hp: Hyperparams, hidden_dim: int = 256,
                 recurrent_critics: bool = True, seed: int = 0):
        self.hp = hp
        self.actor_spec = NetworkSpec(OBS_DIM, hidden_dim, "gauss3")
        self.critic_spec = NetworkSpec(OBS_DIM + ACT_DIM, hidden_dim, "scalar",
                                       recurrent=recurrent_critics)
        seeds = np.random.SeedSequence(seed).generate_state(3)
        self.actor = init_params(self.actor_spec, int(seeds[0]))
        self.critic1 = init_params(self.critic_spec, int(seeds[1]))
        self.critic2 = init_params(self.critic_spec, int(seeds[2]))
        self.critic1_target = self.critic1.copy()
        self.critic2_target = self.critic2.copy()
        self.grad_steps = 0

    def reset_episode(self):
        return None, None

    def act(self, obs_vec: np.ndarray, h, c, mode: str = "sample",
            rng: Optional[np.random.Generator] = None):
        """Returns (action, log_prob, h', c'); mode 'mean' gives tanh(mu)."""
        y, h2, c2 = forward_step(self.actor, self.actor_spec, obs_vec, h, c)
        mu, log_std = y[:ACT_DIM], y[ACT_DIM:]
        if mode == "mean":
            return np.tanh(mu), None, h2, c2
        u = mu + np.exp(log_std) * rng.standard_normal(ACT_DIM)
        a = np.tanh(u)
        logp = float(squashed_gaussian_logprob(u, mu, log_std))
        return a, logp, h2, c2

    def targets(self, batch: Batch, rng: np.random.Generator,
                trace: bool = False):
        """r + gamma * (1 - done) * (min(Q1', Q2')(s', a~) - alpha * log pi)."""
        hp = self.hp
        y, _, _ = forward_seq(self.actor, self.actor_spec, batch.s2,
                              want_cache=False)
        mu, log_std = y[..., :ACT_DIM], y[..., ACT_DIM:]
        noise = rng.standard_normal(mu.shape)
        u = mu + np.exp(log_std) * noise
        a_tilde = np.tanh(u)
        logp = squashed_gaussian_logprob(u, mu, log_std)
        x2 = np.concatenate([batch.s2, a_tilde], axis=2)
        q1p = forward_seq(self.critic1_target, self.critic_spec, x2,
                          want_cache=False)[0][..., 0]
        q2p = forward_seq(self.critic2_target, self.critic_spec, x2,
                          want_cache=False)[0][..., 0]
        qmin = np.minimum(q1p, q2p)
        q_t = batch.r + hp.gamma * (1.0 - batch.done) * (qmin - hp.sac_alpha * logp)
        if trace:
            return q_t, {"mu": mu, "log_std": log_std, "noise": noise,
                         "a_tilde": a_tilde, "logp": logp, "q1p": q1p,
                         "q2p": q2p, "qmin": qmin}
        return q_t

    def critic_loss_and_grads(self, critic: ParamSet, x, q_t, mask, denom):
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
            out["actor_loss"] = self._actor_step(batch, rng)
            soft_update(self.critic1_target, self.critic1, hp.tau)
            soft_update(self.critic2_target, self.critic2, hp.tau)
        return out

    def actor_loss_and_grads(self, batch: Batch, noise: np.ndarray):
        """Minimize alpha * log pi - min(Q1, Q2) over reparameterized actions.

        With the noise held fixed the Gaussian term of log pi reduces to
        -log_std (up to constants), so the gradient reaches mu only
        through the tanh correction and the critics.
        """
        hp = self.hp
        mask = batch.mask
        denom = mask.sum()
        w = mask / denom

        y, _, cache_a = forward_seq(self.actor, self.actor_spec, batch.s)
        mu, log_std = y[..., :ACT_DIM], y[..., ACT_DIM:]
        std = np.exp(log_std)
        u = mu + std * noise
        a = np.tanh(u)
        logp = squashed_gaussian_logprob(u, mu, log_std)

        x = np.concatenate([batch.s, a], axis=2)
        q1, _, cache1 = forward_seq(self.critic1, self.critic_spec, x)
        q2, _, cache2 = forward_seq(self.critic2, self.critic_spec, x)
        q1, q2 = q1[..., 0], q2[..., 0]
        qmin = np.minimum(q1, q2)
        loss = float((w * (hp.sac_alpha * logp - qmin)).sum())

        pick1 = (q1 <= q2).astype(np.float64)
        up1 = (-w * pick1)[..., None]
        up2 = (-w * (1.0 - pick1))[..., None]
        _, dx1 = backward_seq(self.critic1, self.critic_spec, cache1, up1,
                              param_grads=False)
        _, dx2 = backward_seq(self.critic2, self.critic_spec, cache2, up2,
                              param_grads=False)
        da = dx1[..., OBS_DIM:] + dx2[..., OBS_DIM:]

        t2 = 1.0 - a * a                       # tanh'(u)
        corr_du = 2.0 * a * t2 / (t2 + LOGPROB_EPS)
        w3 = w[..., None]
        d_mu = hp.sac_alpha * w3 * corr_du + da * t2
        d_log_std = (hp.sac_alpha * w3 * (corr_du * std * noise - 1.0)
                     + da * t2 * std * noise)
        d_out = np.concatenate([d_mu, d_log_std], axis=2)
        grads, _ = backward_seq(self.actor, self.actor_spec, cache_a, d_out,
                                input_grads=False)
        return loss, grads

    def _actor_step(self, batch: Batch, rng: np.random.Generator) -> float:
        noise = rng.standard_normal((batch.s.shape[0], batch.s.shape[1], ACT_DIM))
        loss, grads = self.actor_loss_and_grads(batch, noise)
        adam_step(self.actor, grads, self.hp.lr)
        return loss

    def networks(self):
        return {"actor": (self.actor, self.actor_spec),
                "critic1": (self.critic1, self.critic_spec),
                "critic2": (self.critic2, self.critic_spec),
                "critic1_target": (self.critic1_target, self.critic_spec),
                "critic2_target": (self.critic2_target, self.critic_spec)}
