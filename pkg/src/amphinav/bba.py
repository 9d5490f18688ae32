"""Reactive two-behavior baseline controller.

Subsumption of two behaviors over the same observation interface the
learned policies use: head for the goal while the frontal sector is
clear, otherwise turn away from the more blocked side at low speed.
"""

import math
from dataclasses import dataclass

from .world import MAX_SPEED, ActionCommand, Observation


@dataclass(frozen=True)
class BbaConfig:
    safe_range: float = 1.0        # meters; must exceed the collision range
    k_yaw: float = 1.0             # rad of command per rad of heading error
    k_z: float = 1.0
    slow_heading_deg: float = 45.0

    def __post_init__(self):
        if self.safe_range <= 0 or self.k_yaw <= 0 or self.k_z <= 0:
            raise ValueError("BBA gains and safe range must be positive")


def bba_act(obs: Observation, cfg: BbaConfig = BbaConfig()) -> ActionCommand:
    """Pure arbitration: same observation, same command."""
    ranges_m = obs.ranges * obs.max_range
    n = len(ranges_m)
    frontal = ranges_m[n // 2 - 4:n // 2 + 4]      # middle 8 beams

    if frontal.min() > cfg.safe_range:
        heading_err = obs.goal_heading * math.pi
        elevation = obs.goal_elevation * (math.pi / 2.0)
        d_yaw = max(-MAX_SPEED, min(MAX_SPEED, cfg.k_yaw * heading_err))
        v_lin = MAX_SPEED if abs(heading_err) < math.radians(cfg.slow_heading_deg) else 0.05
        v_z = max(-MAX_SPEED, min(MAX_SPEED, cfg.k_z * elevation * MAX_SPEED))
        return ActionCommand(v_lin, v_z, d_yaw)

    # Avoid: beams below the fan midline look right, above look left.
    right = ranges_m[:n // 2].sum()
    left = ranges_m[n // 2:].sum()
    d_yaw = MAX_SPEED if right <= left else -MAX_SPEED
    return ActionCommand(0.05, 0.0, d_yaw)
