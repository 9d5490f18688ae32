"""Two-media tank world.

A walled tank holding a one-meter water column under air, with optional
vertical riser columns as obstacles.  The vehicle is a first-order
kinematic surrogate: commanded forward/vertical speeds are tracked with a
per-medium time constant, yaw is integrated directly, and an
Ornstein-Uhlenbeck wind drifts the vehicle while airborne.  Sensing is a
horizontal ray fan whose geometry (field of view, spacing, max range)
switches with the medium, as does the dynamics response.

Conventions:
  - z < water_surface_z is water; the boundary itself belongs to air.
  - yaw is CCW-positive from +x, wrapped into (-pi, pi].
  - beam k of n points at yaw + (k - (n-1)/2) * spacing.
"""

import csv
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .ou import OuProcess
from .util import wrap_angle

MAX_SPEED = 0.25  # m/s (and rad per step for the yaw increment)

TRAJECTORY_HEADER = ["step", "t", "x", "y", "z", "yaw", "medium",
                     "reward", "min_range", "d_goal"]


class Medium(Enum):
    AIR = "air"
    WATER = "water"


@dataclass(frozen=True)
class SensorConfig:
    fov_deg: float
    spacing_deg: float
    max_range: float
    n_beams: int = 20


@dataclass(frozen=True)
class MediumDynamics:
    """First-order response time constants, seconds."""
    tau_forward: float
    tau_vertical: float


@dataclass(frozen=True)
class WindConfig:
    """OU disturbance parameters for one medium (2 horizontal channels)."""
    theta: float = 0.15      # 1/s
    sigma: float = 0.03      # m/s * s^-1/2
    mu: float = 0.0          # m/s
    enabled: bool = True


DEFAULT_RISERS = ((3.0, 3.0, 0.25), (3.0, -3.0, 0.25),
                  (-3.0, 3.0, 0.25), (-3.0, -3.0, 0.25))


@dataclass(frozen=True)
class WorldConfig:
    tank_min: tuple = (-5.0, -5.0, -1.0)
    tank_max: tuple = (5.0, 5.0, 5.0)
    water_surface_z: float = 0.0
    risers: tuple = DEFAULT_RISERS
    dt: float = 0.1
    air_dynamics: MediumDynamics = MediumDynamics(0.3, 0.3)
    water_dynamics: MediumDynamics = MediumDynamics(0.8, 0.8)
    wind_air: WindConfig = WindConfig(theta=0.15, sigma=0.03, enabled=True)
    wind_water: WindConfig = WindConfig(theta=0.15, sigma=0.02, enabled=False)
    sensor_air: SensorConfig = SensorConfig(270.0, 13.5, 10.0)
    sensor_water: SensorConfig = SensorConfig(90.0, 90.0 / 19.0, 20.0)
    wall_margin: float = 0.05

    def __post_init__(self):
        lo, hi = np.asarray(self.tank_min), np.asarray(self.tank_max)
        if not np.all(lo < hi):
            raise ValueError("tank_min must be componentwise below tank_max")
        if not (lo[2] < self.water_surface_z < hi[2]):
            raise ValueError("water surface must lie strictly inside the tank")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        for s in (self.sensor_air, self.sensor_water):
            if (s.n_beams - 1) * s.spacing_deg > s.fov_deg + 1e-9:
                raise ValueError("beam fan exceeds sensor field of view")
        for cx, cy, r in self.risers:
            if (cx - r < lo[0] or cx + r > hi[0]
                    or cy - r < lo[1] or cy + r > hi[1]):
                raise ValueError(f"riser ({cx},{cy},r={r}) leaves the tank footprint")

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(np.asarray(self.tank_max)
                                    - np.asarray(self.tank_min)))

    def sensor(self, medium: "Medium") -> SensorConfig:
        return self.sensor_air if medium is Medium.AIR else self.sensor_water

    def dynamics(self, medium: "Medium") -> MediumDynamics:
        return self.air_dynamics if medium is Medium.AIR else self.water_dynamics

    def without_risers(self) -> "WorldConfig":
        return replace(self, risers=())


@dataclass(frozen=True)
class RewardConfig:
    r_arrive: float = 100.0
    r_collide: float = -10.0
    c_d: float = 0.5         # arrival distance, m
    c_o: float = 0.5         # collision range, m
    step_limit: int = 500

    def __post_init__(self):
        if self.c_d <= 0 or self.c_o <= 0 or self.step_limit <= 0:
            raise ValueError("c_d, c_o and step_limit must be positive")


@dataclass
class VehicleState:
    position: np.ndarray     # (3,) meters
    yaw: float               # radians, (-pi, pi]
    v_forward: float = 0.0   # m/s, body-frame horizontal
    v_vertical: float = 0.0  # m/s


@dataclass(frozen=True)
class Goal:
    position: tuple

    def as_array(self) -> np.ndarray:
        return np.asarray(self.position, dtype=np.float64)


@dataclass(frozen=True)
class ActionCommand:
    """Raw vehicle command: forward speed, vertical speed, yaw increment."""
    v_lin: float   # [0, MAX_SPEED] m/s
    v_z: float     # [-MAX_SPEED, MAX_SPEED] m/s
    d_yaw: float   # [-MAX_SPEED, MAX_SPEED] rad

    def clamped(self) -> "ActionCommand":
        return ActionCommand(
            min(max(self.v_lin, 0.0), MAX_SPEED),
            min(max(self.v_z, -MAX_SPEED), MAX_SPEED),
            min(max(self.d_yaw, -MAX_SPEED), MAX_SPEED),
        )

    def to_normalized(self) -> np.ndarray:
        """Affine map into [-1, 1]^3 (v_lin midpoint maps to 0)."""
        return np.array([2.0 * self.v_lin / MAX_SPEED - 1.0,
                         self.v_z / MAX_SPEED,
                         self.d_yaw / MAX_SPEED])

    @staticmethod
    def from_normalized(a) -> "ActionCommand":
        a = np.clip(np.asarray(a, dtype=np.float64), -1.0, 1.0)
        return ActionCommand((a[0] + 1.0) * 0.5 * MAX_SPEED,
                             a[1] * MAX_SPEED,
                             a[2] * MAX_SPEED)


@dataclass
class Observation:
    """Normalized 26-value network input plus sensing metadata.

    The network vector is [20 ranges | 3 previous action | goal_dist |
    goal_heading | goal_elevation].  ``ranges_m`` and ``max_range`` keep
    the raw geometry available to non-learning consumers.
    """
    ranges: np.ndarray       # (20,), each in (0, 1]
    prev_action: np.ndarray  # (3,), normalized
    goal_dist: float         # [0, 1]
    goal_heading: float      # [-1, 1]
    goal_elevation: float    # [-1, 1]
    medium: Medium
    max_range: float
    ranges_m: np.ndarray

    def vector(self) -> np.ndarray:
        out = np.empty(26)
        out[:20] = self.ranges
        out[20:23] = self.prev_action
        out[23] = self.goal_dist
        out[24] = self.goal_heading
        out[25] = self.goal_elevation
        return out


@dataclass
class StepOutcome:
    observation: Observation
    reward: float
    terminated: bool
    success: bool
    info: dict


def medium_of(z: float, water_surface_z: float = 0.0) -> Medium:
    """Water strictly below the surface; the boundary belongs to air."""
    return Medium.WATER if z < water_surface_z else Medium.AIR


def compute_reward(d_t: float, min_range: float, step_index: int,
                   cfg: RewardConfig):
    """Binary terminal reward: arrival beats collision beats timeout.

    Returns (reward, terminated, success); reward is 0 when no branch fires.
    """
    if d_t < cfg.c_d:
        return cfg.r_arrive, True, True
    if min_range < cfg.c_o or step_index >= cfg.step_limit:
        return cfg.r_collide, True, False
    return 0.0, False, False


def goal_features(position, yaw: float, goal, diagonal: float):
    """(distance, heading error, elevation angle), each normalized."""
    dx = goal[0] - position[0]
    dy = goal[1] - position[1]
    dz = goal[2] - position[2]
    horiz = math.hypot(dx, dy)
    dist = math.sqrt(dx * dx + dy * dy + dz * dz)
    heading = wrap_angle(math.atan2(dy, dx) - yaw) / math.pi
    elevation = math.atan2(dz, horiz) / (math.pi / 2.0)
    return dist / diagonal, heading, elevation


def cast_rays(state: VehicleState, world: WorldConfig,
              medium: Optional[Medium] = None) -> np.ndarray:
    """Ranges (meters) of the beam fan for the given (or current) medium."""
    if medium is None:
        medium = medium_of(state.position[2], world.water_surface_z)
    sensor = world.sensor(medium)
    out = np.empty(sensor.n_beams)
    risers = np.asarray(world.risers, dtype=np.float64).reshape(-1, 3)
    _kernels.cast_rays(float(state.position[0]), float(state.position[1]),
                       float(state.yaw), math.radians(sensor.spacing_deg),
                       sensor.max_range,
                       world.tank_min[0], world.tank_max[0],
                       world.tank_min[1], world.tank_max[1],
                       risers, out)
    return out


class TankEnv:
    """Episodic goal-reaching environment over the tank world.

    In evaluation mode (default) arrival terminates the episode.  In
    training mode arrival regenerates the goal and the episode continues
    until collision or the step limit.
    """

    def __init__(self, world: WorldConfig = WorldConfig(),
                 reward: RewardConfig = RewardConfig(),
                 training: bool = False):
        self.world = world
        self.reward_cfg = reward
        self.training = training
        self.state: Optional[VehicleState] = None
        self.goal: Optional[np.ndarray] = None
        self._rng: Optional[np.random.Generator] = None
        self._wind_air = OuProcess(world.wind_air.theta, world.wind_air.sigma,
                                   world.wind_air.mu, world.dt, channels=2)
        self._wind_water = OuProcess(world.wind_water.theta,
                                     world.wind_water.sigma,
                                     world.wind_water.mu, world.dt, channels=2)
        self._terminated = True
        self.step_index = 0
        self.steps_air = 0
        self.steps_water = 0
        self.goals_reached = 0
        self._prev_action_norm = np.array([-1.0, 0.0, 0.0])

    # -- helpers -------------------------------------------------------

    def _margin_box(self):
        m = self.world.wall_margin
        lo = np.asarray(self.world.tank_min) + m
        hi = np.asarray(self.world.tank_max) - m
        return lo, hi

    def _in_bounds(self, p) -> bool:
        lo, hi = np.asarray(self.world.tank_min), np.asarray(self.world.tank_max)
        return bool(np.all(p >= lo) and np.all(p <= hi))

    def sample_goal(self, rng: np.random.Generator) -> np.ndarray:
        """Uniform goal respecting wall/riser clearance, medium ~ Bernoulli(1/2)."""
        lo, hi = np.asarray(self.world.tank_min), np.asarray(self.world.tank_max)
        surface = self.world.water_surface_z
        while True:
            x = rng.uniform(lo[0] + 1.0, hi[0] - 1.0)
            y = rng.uniform(lo[1] + 1.0, hi[1] - 1.0)
            if rng.random() < 0.5:
                z = rng.uniform(lo[2], surface)
            else:
                z = rng.uniform(surface, hi[2])
            ok = all(math.hypot(x - cx, y - cy) >= 1.0
                     for cx, cy, _ in self.world.risers)
            if ok:
                return np.array([x, y, z])

    def _observe(self) -> Observation:
        med = medium_of(self.state.position[2], self.world.water_surface_z)
        sensor = self.world.sensor(med)
        ranges_m = cast_rays(self.state, self.world, med)
        dist, heading, elev = goal_features(self.state.position, self.state.yaw,
                                            self.goal, self.world.diagonal)
        return Observation(ranges=ranges_m / sensor.max_range,
                           prev_action=self._prev_action_norm.copy(),
                           goal_dist=dist, goal_heading=heading,
                           goal_elevation=elev, medium=med,
                           max_range=sensor.max_range, ranges_m=ranges_m)

    # -- API -----------------------------------------------------------

    def reset(self, start, goal, seed: Optional[int] = None,
              rng: Optional[np.random.Generator] = None) -> Observation:
        """Place the vehicle at rest at ``start`` heading +x, aiming for ``goal``.

        Raises ValueError if start/goal leave the tank or the start pose
        already senses an obstacle closer than the collision range.
        """
        start = np.asarray(start, dtype=np.float64)
        goal = np.asarray(goal, dtype=np.float64)
        if not self._in_bounds(start):
            raise ValueError(f"start {start.tolist()} outside tank bounds")
        if not self._in_bounds(goal):
            raise ValueError(f"goal {goal.tolist()} outside tank bounds")
        if rng is not None:
            self._rng = rng
        else:
            self._rng = np.random.default_rng(seed)

        lo, hi = self._margin_box()
        self.state = VehicleState(position=np.clip(start, lo, hi), yaw=0.0)
        self.goal = goal
        self._wind_air.reset()
        self._wind_water.reset()
        self.step_index = 0
        self.steps_air = 0
        self.steps_water = 0
        self.goals_reached = 0
        self._terminated = False
        self._prev_action_norm = np.array([-1.0, 0.0, 0.0])

        obs = self._observe()
        if float(obs.ranges_m.min()) <= self.reward_cfg.c_o:
            raise ValueError("start pose is in collision with an obstacle")
        return obs

    def step(self, action: ActionCommand) -> StepOutcome:
        if self.state is None:
            raise RuntimeError("step() before reset()")
        if self._terminated and not self.training:
            raise RuntimeError("step() on a terminated evaluation episode")

        w = self.world
        cmd = action.clamped()
        med_start = medium_of(self.state.position[2], w.water_surface_z)
        dyn = w.dynamics(med_start)

        self.state.yaw = wrap_angle(self.state.yaw + cmd.d_yaw)
        self.state.v_forward += (w.dt / dyn.tau_forward) * (cmd.v_lin - self.state.v_forward)
        self.state.v_vertical += (w.dt / dyn.tau_vertical) * (cmd.v_z - self.state.v_vertical)

        vel = np.array([self.state.v_forward * math.cos(self.state.yaw),
                        self.state.v_forward * math.sin(self.state.yaw),
                        self.state.v_vertical])
        wind_cfg = w.wind_air if med_start is Medium.AIR else w.wind_water
        if wind_cfg.enabled:
            proc = self._wind_air if med_start is Medium.AIR else self._wind_water
            drift = proc.step(self._rng)
            vel[0] += drift[0]
            vel[1] += drift[1]

        pos = self.state.position + w.dt * vel
        lo, hi = self._margin_box()
        floor_contact = bool(pos[2] < lo[2] or pos[2] > hi[2])
        self.state.position = np.clip(pos, lo, hi)

        if med_start is Medium.AIR:
            self.steps_air += 1
        else:
            self.steps_water += 1
        self.step_index += 1

        self._prev_action_norm = cmd.to_normalized()
        obs = self._observe()
        d_t = float(np.linalg.norm(self.goal - self.state.position))
        min_range = float(obs.ranges_m.min())
        effective_range = 0.0 if floor_contact else min_range
        reward, terminated, success = compute_reward(
            d_t, effective_range, self.step_index, self.reward_cfg)

        if self.training and success:
            self.goals_reached += 1
            self.goal = self.sample_goal(self._rng)
            terminated = self.step_index >= self.reward_cfg.step_limit
            obs = self._observe()  # refresh goal features
            d_t = float(np.linalg.norm(self.goal - self.state.position))

        self._terminated = terminated
        info = {"medium": obs.medium.value, "d_goal": d_t,
                "min_range": min_range, "floor_contact": floor_contact,
                "sim_time_air": self.steps_air * w.dt,
                "sim_time_water": self.steps_water * w.dt,
                "step": self.step_index}
        return StepOutcome(observation=obs, reward=reward,
                           terminated=terminated, success=success, info=info)

    def step_normalized(self, a) -> StepOutcome:
        """step() with an action given in normalized [-1, 1]^3 units."""
        return self.step(ActionCommand.from_normalized(a))


SCENARIOS = {
    "a2w": ((0.0, 0.0, 2.5), (2.0, 3.0, -1.0)),
    "w2a": ((2.0, 3.0, -1.0), (0.0, 0.0, 2.5)),
    "a2w-2": ((0.0, 0.0, 2.5), (3.6, -2.4, -1.0)),
    "w2a-2": ((3.6, -2.4, -1.0), (0.0, 0.0, 2.5)),
}


def scenario_world(name: str, risers: bool = True,
                   base: Optional[WorldConfig] = None):
    """(WorldConfig, start, goal) for a named scenario preset."""
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario {name!r}; expected one of "
                         f"{sorted(SCENARIOS)}")
    world = base if base is not None else WorldConfig()
    if not risers:
        world = world.without_risers()
    start, goal = SCENARIOS[name]
    return world, start, goal


class TrajectoryRecorder:
    """Accumulates per-step rows and writes the trajectory CSV."""

    def __init__(self, dt: float):
        self.dt = dt
        self.rows = []

    def record(self, step: int, state: VehicleState, outcome: StepOutcome):
        self.rows.append((step, step * self.dt,
                          state.position[0], state.position[1],
                          state.position[2], state.yaw,
                          outcome.info["medium"], outcome.reward,
                          outcome.info["min_range"], outcome.info["d_goal"]))

    def write(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRAJECTORY_HEADER)
            for step, t, x, y, z, yaw, medium, reward, min_range, d_goal in self.rows:
                writer.writerow([step, f"{t:.6f}", f"{x:.6f}", f"{y:.6f}",
                                 f"{z:.6f}", f"{yaw:.6f}", medium,
                                 f"{reward:.6f}", f"{min_range:.6f}",
                                 f"{d_goal:.6f}"])
