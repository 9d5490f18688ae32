"""Run configuration: YAML file + CLI overrides, strictly validated."""

import dataclasses
from dataclasses import dataclass, field
from typing import Optional

import yaml

from .agents.common import Hyperparams, OuNoiseConfig
from .world import (MediumDynamics, RewardConfig, SensorConfig, WindConfig,
                    WorldConfig)

ALGOS = ("docrl-d", "docrl-s", "bba")


class ConfigError(ValueError):
    pass


@dataclass
class NetworkConfig:
    hidden_dim: int = 256
    recurrent_critics: bool = True


@dataclass
class RunConfig:
    algo: str = "docrl-d"
    scenario: str = "a2w"
    risers: bool = True
    seed: int = 0
    out: str = "runs/latest"
    trials: int = 100
    episodes: Optional[int] = None       # defaults to hyperparams.max_eps
    checkpoint_every: int = 100
    network: NetworkConfig = field(default_factory=NetworkConfig)
    hyperparams: Hyperparams = field(default_factory=Hyperparams)
    world: WorldConfig = field(default_factory=WorldConfig)
    reward: RewardConfig = field(default_factory=RewardConfig)

    def __post_init__(self):
        if self.algo not in ALGOS:
            raise ConfigError(f"algo must be one of {ALGOS}, got {self.algo!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")


_NESTED = {
    "network": NetworkConfig,
    "hyperparams": Hyperparams,
    "world": WorldConfig,
    "reward": RewardConfig,
    "ou_explore": OuNoiseConfig,
    "air_dynamics": MediumDynamics,
    "water_dynamics": MediumDynamics,
    "wind_air": WindConfig,
    "wind_water": WindConfig,
    "sensor_air": SensorConfig,
    "sensor_water": SensorConfig,
}


def _merge_dataclass(base, overrides: dict, path: str):
    """replace() on a dataclass with nested dict overrides."""
    names = {f.name for f in dataclasses.fields(base)}
    unknown = set(overrides) - names
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for key, value in overrides.items():
        sub = _NESTED.get(key)
        current = getattr(base, key)
        if sub is not None and isinstance(value, dict):
            kwargs[key] = _merge_dataclass(current, value, f"{path}.{key}")
        elif isinstance(value, list):
            kwargs[key] = tuple(tuple(v) if isinstance(v, list) else v
                                for v in value)
        else:
            kwargs[key] = value
    try:
        return dataclasses.replace(base, **kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def load_config(path: Optional[str] = None, overrides: Optional[dict] = None) -> RunConfig:
    """Build a RunConfig from an optional YAML file plus override dict.

    Unknown keys anywhere are an error; nested sections merge onto the
    defaults field by field.
    """
    cfg = RunConfig()
    if path is not None:
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        cfg = _apply(cfg, data, path)
    if overrides:
        cfg = _apply(cfg, overrides, "<cli>")
    return cfg


def _apply(cfg: RunConfig, data: dict, path: str) -> RunConfig:
    names = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        if key in ("network", "hyperparams", "world", "reward") and isinstance(value, dict):
            kwargs[key] = _merge_dataclass(getattr(cfg, key), value, f"{path}.{key}")
        else:
            kwargs[key] = value
    try:
        return dataclasses.replace(cfg, **kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
