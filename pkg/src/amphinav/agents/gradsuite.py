"""Finite-difference verification of the four training losses.

Builds small random batches and checks the analytic gradients of the
deterministic/stochastic critic and actor losses against central
differences.  Shared by the CLI subcommand and the verification tests.
"""

import numpy as np

from ..nn import forward_seq, grad_check
from .common import ACT_DIM, OBS_DIM, Hyperparams
from .replay import Batch
from .sac import AgentSAC, squashed_gaussian_logprob
from .td3 import AgentTD3


def random_batch(batch: int, seq_len: int, rng: np.random.Generator) -> Batch:
    """Synthetic observation sequences with ragged valid lengths."""
    s = rng.uniform(-1.0, 1.0, (batch, seq_len, OBS_DIM))
    a = rng.uniform(-1.0, 1.0, (batch, seq_len, ACT_DIM))
    s2 = rng.uniform(-1.0, 1.0, (batch, seq_len, OBS_DIM))
    r = rng.normal(0.0, 1.0, (batch, seq_len))
    mask = np.zeros((batch, seq_len))
    done = np.zeros((batch, seq_len))
    for row in range(batch):
        L = int(rng.integers(1, seq_len + 1))
        mask[row, :L] = 1.0
        if rng.random() < 0.5:
            done[row, L - 1] = 1.0
    r *= mask
    return Batch(s=s, a=a, r=r, s2=s2, done=done, mask=mask)


def check_losses(hidden_dim: int = 32, seq_lens=(1, 8), batch: int = 4,
                 seed: int = 0, n_coords: int = 200) -> dict:
    """Max relative FD error for each (loss, seq_len); keys like 'det-critic/T8'."""
    results = {}
    for T in seq_lens:
        rng = np.random.default_rng(seed + T)
        b = random_batch(batch, T, rng)

        det = AgentTD3(Hyperparams(), hidden_dim, seed=seed)
        q_t = det.targets(b, np.random.default_rng(seed + 1))
        x = np.concatenate([b.s, b.a], axis=2)
        denom = b.mask.sum()

        def det_critic_loss(ps):
            q = forward_seq(ps, det.critic_spec, x, want_cache=False)[0][..., 0]
            err = (q - q_t) * b.mask
            return float((err * err).sum() / denom)

        _, grads = det.critic_loss_and_grads(det.critic1, x, q_t, b.mask, denom)
        results[f"det-critic/T{T}"] = grad_check(
            det.critic1, det_critic_loss, grads, n_coords=n_coords, rng=rng)

        def det_actor_loss(ps):
            a_pi = forward_seq(ps, det.actor_spec, b.s, want_cache=False)[0]
            xa = np.concatenate([b.s, a_pi], axis=2)
            q = forward_seq(det.critic1, det.critic_spec, xa,
                            want_cache=False)[0][..., 0]
            return float(-(q * b.mask).sum() / denom)

        _, grads = det.actor_loss_and_grads(b)
        results[f"det-actor/T{T}"] = grad_check(
            det.actor, det_actor_loss, grads, n_coords=n_coords, rng=rng)

        sto = AgentSAC(Hyperparams(), hidden_dim, seed=seed)
        q_t_s = sto.targets(b, np.random.default_rng(seed + 2))

        def sto_critic_loss(ps):
            q = forward_seq(ps, sto.critic_spec, x, want_cache=False)[0][..., 0]
            err = (q - q_t_s) * b.mask
            return float((err * err).sum() / denom)

        _, grads = sto.critic_loss_and_grads(sto.critic1, x, q_t_s, b.mask, denom)
        results[f"sto-critic/T{T}"] = grad_check(
            sto.critic1, sto_critic_loss, grads, n_coords=n_coords, rng=rng)

        noise = np.random.default_rng(seed + 3).standard_normal(
            (batch, T, ACT_DIM))

        def sto_actor_loss(ps):
            y = forward_seq(ps, sto.actor_spec, b.s, want_cache=False)[0]
            mu, log_std = y[..., :ACT_DIM], y[..., ACT_DIM:]
            u = mu + np.exp(log_std) * noise
            at = np.tanh(u)
            logp = squashed_gaussian_logprob(u, mu, log_std)
            xa = np.concatenate([b.s, at], axis=2)
            q1 = forward_seq(sto.critic1, sto.critic_spec, xa,
                             want_cache=False)[0][..., 0]
            q2 = forward_seq(sto.critic2, sto.critic_spec, xa,
                             want_cache=False)[0][..., 0]
            qmin = np.minimum(q1, q2)
            w = b.mask / denom
            return float((w * (sto.hp.sac_alpha * logp - qmin)).sum())

        _, grads = sto.actor_loss_and_grads(b, noise)
        results[f"sto-actor/T{T}"] = grad_check(
            sto.actor, sto_actor_loss, grads, n_coords=n_coords, rng=rng)
    return results
