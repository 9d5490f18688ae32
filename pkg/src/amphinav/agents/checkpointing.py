"""Save/restore trained agents through the checkpoint format."""

import dataclasses

from ..nn import CheckpointError, load_checkpoint, save_checkpoint
from .common import Hyperparams, OuNoiseConfig
from .sac import AgentSAC
from .td3 import AgentTD3


def save_agent(directory: str, algo: str, agent, hp: Hyperparams):
    extra = {"hyperparams": dataclasses.asdict(hp),
             "hidden_dim": agent.actor_spec.hidden_dim,
             "recurrent_critics": agent.critic_spec.recurrent}
    save_checkpoint(directory, algo, agent.networks(), extra)


def load_agent(directory: str, expected_algo: str = None):
    """Rebuild an agent from a checkpoint; returns (algo, agent)."""
    algo, networks, extra = load_checkpoint(directory)
    if expected_algo is not None and algo != expected_algo:
        raise CheckpointError(f"checkpoint holds {algo!r}, expected "
                              f"{expected_algo!r}")
    hp_dict = dict(extra.get("hyperparams", {}))
    if "ou_explore" in hp_dict:
        hp_dict["ou_explore"] = OuNoiseConfig(**hp_dict["ou_explore"])
    hp = Hyperparams(**hp_dict) if hp_dict else Hyperparams()
    hidden = extra.get("hidden_dim", 256)
    recurrent = extra.get("recurrent_critics", True)

    if algo == "docrl-d":
        agent = AgentTD3(hp, hidden, recurrent, seed=0)
        wanted = {"actor", "critic1", "critic2", "actor_target",
                  "critic1_target", "critic2_target"}
    elif algo == "docrl-s":
        agent = AgentSAC(hp, hidden, recurrent, seed=0)
        wanted = {"actor", "critic1", "critic2",
                  "critic1_target", "critic2_target"}
    else:
        raise CheckpointError(f"unknown algorithm {algo!r} in checkpoint")
    if set(networks) != wanted:
        raise CheckpointError(f"checkpoint networks {sorted(networks)} do not "
                              f"match algorithm {algo!r}")

    for name, (ps, spec) in networks.items():
        target = getattr(agent, name)
        if spec != getattr(agent, "actor_spec" if name.startswith("actor")
                           else "critic_spec"):
            raise CheckpointError(f"spec mismatch for network {name!r}")
        for arr_name, arr in ps.arrays.items():
            target.arrays[arr_name][...] = arr
    return algo, agent
