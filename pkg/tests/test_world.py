import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amphinav.ou import OuProcess
from amphinav.world import (MAX_SPEED, ActionCommand, Medium, RewardConfig,
                            TankEnv, VehicleState, WorldConfig, cast_rays,
                            compute_reward, goal_features, medium_of,
                            scenario_world)

from oracles import beam_range_oracle

START_A2W = (0.0, 0.0, 2.5)
GOAL_A2W = (2.0, 3.0, -1.0)


def make_env(risers=False, training=False, wind=False):
    world, start, goal = scenario_world("a2w", risers=risers)
    if not wind:
        import dataclasses
        world = dataclasses.replace(
            world, wind_air=dataclasses.replace(world.wind_air, enabled=False))
    return TankEnv(world, RewardConfig(), training=training), world, start, goal


class TestMediumOf:
    def test_airborne_start(self):
        assert medium_of(2.5) is Medium.AIR

    def test_submerged_target(self):
        assert medium_of(-1.0) is Medium.WATER

    def test_boundary_belongs_to_air(self):
        assert medium_of(0.0) is Medium.AIR


class TestReset:
    def test_goal_distance_normalization(self):
        env, world, start, goal = make_env()
        obs = env.reset(start, goal, seed=0)
        expected = math.sqrt(2**2 + 3**2 + 3.5**2) / math.sqrt(10**2 + 10**2 + 6**2)
        assert obs.goal_dist == pytest.approx(expected, abs=1e-12)
        assert obs.goal_dist == pytest.approx(5.0249 / 15.362, abs=1e-4)

    def test_coincident_goal(self):
        env, world, start, _ = make_env()
        obs = env.reset(start, start, seed=0)
        assert obs.goal_dist == 0.0

    def test_empty_tank_walls_within_range(self):
        env, _, start, goal = make_env()
        obs = env.reset((0.0, 0.0, 2.5), goal, seed=0)
        assert np.all(obs.ranges < 1.0)  # every wall closer than 10 m

    def test_reset_state(self):
        env, _, start, goal = make_env()
        obs = env.reset(start, goal, seed=0)
        assert env.state.yaw == 0.0
        assert env.state.v_forward == 0.0 and env.state.v_vertical == 0.0
        assert np.array_equal(obs.prev_action, [-1.0, 0.0, 0.0])
        assert env.step_index == 0

    def test_rejects_out_of_bounds(self):
        env, _, start, goal = make_env()
        with pytest.raises(ValueError):
            env.reset((20.0, 0.0, 2.5), goal, seed=0)
        with pytest.raises(ValueError):
            env.reset(start, (0.0, 0.0, 9.0), seed=0)

    def test_rejects_start_in_collision(self):
        world, start, goal = scenario_world("a2w", risers=True)
        env = TankEnv(world)
        with pytest.raises(ValueError, match="collision"):
            env.reset((3.0, 2.6, 2.5), goal, seed=0)  # 0.15 m from a riser

    def test_observation_has_26_values_in_bounds(self):
        env, _, start, goal = make_env(risers=True)
        vec = env.reset(start, goal, seed=0).vector()
        assert vec.shape == (26,)
        assert np.all(vec[:20] > 0.0) and np.all(vec[:20] <= 1.0)
        assert np.all(np.abs(vec[20:]) <= 1.0)


class TestCastRays:
    def test_beam9_dead_ahead_wall(self):
        # beam 9 offset is -6.75 deg; yaw +6.75 deg points it along +x
        env, world, *_ = make_env()
        state = VehicleState(position=np.array([0.0, 0.0, 2.5]),
                             yaw=math.radians(6.75))
        ranges = cast_rays(state, world)
        assert ranges[9] == pytest.approx(5.0, abs=1e-9)

    def test_underwater_empty_tank_bounds(self):
        env, world, *_ = make_env()
        state = VehicleState(position=np.array([0.0, 0.0, -0.5]),
                             yaw=math.radians(6.75))
        ranges = cast_rays(state, world)
        assert np.all(ranges <= 20.0) and np.all(ranges >= 5.0)

    def test_riser_dead_ahead(self):
        world = WorldConfig(risers=((2.0, 0.0, 0.25),))
        state = VehicleState(position=np.array([0.0, 0.0, 2.5]),
                             yaw=math.radians(6.75))
        ranges = cast_rays(state, world)
        assert ranges[9] == pytest.approx(1.75, abs=1e-9)

    def test_symmetry_on_axis(self):
        world = WorldConfig()  # risers symmetric about the x axis
        state = VehicleState(position=np.array([1.3, 0.0, 2.5]), yaw=0.0)
        r = cast_rays(state, world)
        assert np.allclose(r, r[::-1], atol=1e-9)

    def test_matches_independent_solver(self):
        world = WorldConfig()
        rng = np.random.default_rng(42)
        for _ in range(50):
            pos = rng.uniform([-4.5, -4.5, -0.9], [4.5, 4.5, 4.9])
            yaw = rng.uniform(-math.pi, math.pi)
            state = VehicleState(position=pos, yaw=yaw)
            med = medium_of(pos[2])
            sensor = world.sensor(med)
            ranges = cast_rays(state, world)
            for k in range(20):
                ang = yaw + (k - 9.5) * math.radians(sensor.spacing_deg)
                expect = beam_range_oracle(pos[0], pos[1], ang,
                                           sensor.max_range, -5, 5, -5, 5,
                                           world.risers)
                assert ranges[k] == pytest.approx(expect, abs=1e-9)


class TestGoalFeatures:
    def test_paper_start_goal(self):
        dist, heading, elev = goal_features((0, 0, 2.5), 0.0, (2, 3, -1),
                                            math.sqrt(236))
        assert dist == pytest.approx(0.3271, abs=1e-4)
        assert heading == pytest.approx(math.atan2(3, 2) / math.pi, abs=1e-12)
        assert elev == pytest.approx(math.atan2(-3.5, math.sqrt(13)) / (math.pi / 2),
                                     abs=1e-12)
        assert heading == pytest.approx(0.3128, abs=1e-4)
        assert elev == pytest.approx(-0.4906, abs=1e-3)

    def test_goal_dead_ahead(self):
        dist, heading, elev = goal_features((0, 0, 1.0), 0.5,
                                            (2 * math.cos(0.5), 2 * math.sin(0.5), 1.0),
                                            math.sqrt(236))
        assert heading == pytest.approx(0.0, abs=1e-12)
        assert elev == pytest.approx(0.0, abs=1e-12)

    def test_goal_directly_below(self):
        _, _, elev = goal_features((1, 1, 2.0), 0.3, (1, 1, 0.5), math.sqrt(236))
        assert elev == -1.0

    @given(st.floats(-4, 4), st.floats(-4, 4), st.floats(-0.9, 4.9),
           st.floats(-math.pi, math.pi))
    @settings(max_examples=50, deadline=None)
    def test_bounds(self, gx, gy, gz, yaw):
        dist, heading, elev = goal_features((0, 0, 2.5), yaw, (gx, gy, gz),
                                            math.sqrt(236))
        assert 0.0 <= dist <= 1.0
        assert -1.0 <= heading <= 1.0
        assert -1.0 <= elev <= 1.0


class TestComputeReward:
    CFG = RewardConfig()

    def test_arrival(self):
        assert compute_reward(0.3, 2.0, 100, self.CFG) == (100.0, True, True)

    def test_collision(self):
        assert compute_reward(3.0, 0.4, 100, self.CFG) == (-10.0, True, False)

    def test_timeout(self):
        assert compute_reward(3.0, 2.0, 500, self.CFG) == (-10.0, True, False)

    def test_no_branch(self):
        assert compute_reward(3.0, 2.0, 100, self.CFG) == (0.0, False, False)

    def test_arrival_precedence(self):
        assert compute_reward(0.3, 0.1, 500, self.CFG) == (100.0, True, True)

    def test_exhaustive_grid_matches_rule(self):
        for d in (0.49, 0.5, 3.0):
            for mr in (0.49, 0.5, 3.0):
                for step in (1, 499, 500):
                    r, term, succ = compute_reward(d, mr, step, self.CFG)
                    if d < 0.5:
                        assert (r, term, succ) == (100.0, True, True)
                    elif mr < 0.5 or step == 500:
                        assert (r, term, succ) == (-10.0, True, False)
                    else:
                        assert (r, term, succ) == (0.0, False, False)
                    assert r in (100.0, -10.0, 0.0)


class TestOuProcess:
    def test_zero_noise_zero_state(self):
        p = OuProcess(theta=0.15, sigma=0.2, mu=0.0, dt=0.1)
        p.state[:] = 0.0

        class FakeRng:
            def standard_normal(self, n):
                return np.zeros(n)

        assert p.step(FakeRng())[0] == 0.0

    def test_unit_draw(self):
        p = OuProcess(theta=0.15, sigma=0.2, mu=0.0, dt=0.1)

        class FakeRng:
            def standard_normal(self, n):
                return np.ones(n)

        assert p.step(FakeRng())[0] == pytest.approx(0.2 * math.sqrt(0.1), abs=1e-12)
        assert p.step(FakeRng())[0] == pytest.approx(0.063246, abs=1e-6)

    def test_mean_reversion(self):
        p = OuProcess(theta=0.15, sigma=0.2, mu=0.0, dt=0.1)
        p.state[:] = 1.0

        class FakeRng:
            def standard_normal(self, n):
                return np.zeros(n)

        assert p.step(FakeRng())[0] == pytest.approx(0.985, abs=1e-12)

    def test_stationary_statistics_short(self):
        p = OuProcess(theta=0.15, sigma=0.2, mu=0.0, dt=0.1)
        rng = np.random.default_rng(1)
        xs = np.empty(100_000)
        for i in range(xs.size):
            xs[i] = p.step(rng)[0]
        var_expect = p.stationary_variance()
        assert abs(xs.mean()) < 0.03
        assert abs(xs[1000:].var() - var_expect) / var_expect < 0.1


class TestStep:
    def test_zero_command_no_motion_no_wind(self):
        env, _, start, goal = make_env()
        env.reset(start, goal, seed=0)
        out = env.step(ActionCommand(0.0, 0.0, 0.0))
        assert np.allclose(env.state.position, start)
        assert out.reward == 0.0

    def test_first_order_response(self):
        env, _, start, goal = make_env()
        env.reset(start, goal, seed=0)
        xs = [0.0]
        for _ in range(10):
            env.step(ActionCommand(0.25, 0.0, 0.0))
            xs.append(float(env.state.position[0]))
        deltas = np.diff(xs)
        assert np.all(deltas > 0.0)              # monotone per step
        assert np.all(np.diff(deltas) > 0.0)     # approaching command speed
        assert 0.0 < xs[-1] < 0.25
        # closed form: v_k = 0.25 * (1 - (1 - dt/tau)^k), tau_air = 0.3
        v = 0.0
        expect = 0.0
        for _ in range(10):
            v += (0.1 / 0.3) * (0.25 - v)
            expect += 0.1 * v
        assert xs[-1] == pytest.approx(expect, abs=1e-12)

    def test_action_clamping(self):
        env, _, start, goal = make_env()
        env.reset(start, goal, seed=0)
        env.step(ActionCommand(9.0, -9.0, 9.0))
        assert env.state.v_forward <= MAX_SPEED / 0.3 * 0.1 + 1e-12
        assert abs(env.state.yaw) == pytest.approx(MAX_SPEED, abs=1e-12)

    def test_yaw_wrap(self):
        env, _, start, goal = make_env()
        env.reset(start, goal, seed=0)
        for _ in range(30):
            env.step(ActionCommand(0.0, 0.0, 0.25))
        assert -math.pi < env.state.yaw <= math.pi

    def test_eval_episode_step_after_termination_raises(self):
        env, _, start, goal = make_env()
        env.reset(start, (0.1, 0.0, 2.5), seed=0)
        out = env.step(ActionCommand(0.0, 0.0, 0.0))
        assert out.success and out.terminated
        with pytest.raises(RuntimeError):
            env.step(ActionCommand(0.0, 0.0, 0.0))

    def test_time_accounting_exact(self):
        env, world, start, goal = make_env()
        env.reset(start, goal, seed=0)
        for _ in range(40):
            out = env.step(ActionCommand(0.1, -0.25, 0.0))
            if out.terminated:
                break
        assert env.steps_air + env.steps_water == env.step_index
        assert out.info["sim_time_air"] == env.steps_air * world.dt
        assert out.info["sim_time_water"] == env.steps_water * world.dt

    def test_medium_transition_flips_sensing_and_dynamics(self):
        env, world, start, goal = make_env()
        env.reset((0.0, 0.0, 0.2), goal, seed=0)
        mediums = []
        maxr = []
        for _ in range(60):
            out = env.step(ActionCommand(0.0, -0.25, 0.0))
            mediums.append(out.info["medium"])
            maxr.append(out.observation.max_range)
            if out.info["medium"] == "water":
                break
        assert mediums[-1] == "water" and mediums[0] == "air"
        assert maxr[-1] == 20.0 and maxr[0] == 10.0
        # dynamics constant flips on the same step boundary: the next
        # vertical response uses tau_water
        v_before = env.state.v_vertical
        env.step(ActionCommand(0.0, 0.0, 0.0))
        v_after = env.state.v_vertical
        assert v_after == pytest.approx(v_before + (0.1 / 0.8) * (0.0 - v_before),
                                        abs=1e-12)

    def test_floor_contact_terminates_as_collision(self):
        env, _, start, goal = make_env()
        env.reset((0.0, 0.0, -0.5), goal, seed=0)
        out = None
        for _ in range(100):
            out = env.step(ActionCommand(0.0, -0.25, 0.0))
            if out.terminated:
                break
        assert out.terminated and not out.success and out.reward == -10.0
        assert out.info["floor_contact"]

    def test_determinism_bit_identical(self):
        def run():
            env, _, start, goal = make_env(risers=True, wind=True)
            env.reset(start, goal, seed=123)
            rows = []
            rng = np.random.default_rng(9)
            for _ in range(50):
                a = ActionCommand(*rng.uniform(-1, 1, 3))
                out = env.step(a)
                rows.append((out.reward, out.terminated,
                             env.state.position.copy(), env.state.yaw,
                             out.observation.vector().copy()))
                if out.terminated:
                    break
            return rows

        r1, r2 = run(), run()
        assert len(r1) == len(r2)
        for a, b in zip(r1, r2):
            assert a[0] == b[0] and a[1] == b[1]
            assert np.array_equal(a[2], b[2]) and a[3] == b[3]
            assert np.array_equal(a[4], b[4])

    def test_training_mode_goal_regeneration(self):
        env, _, start, _ = make_env(training=True)
        rng = np.random.default_rng(0)
        env.reset(start, (0.6, 0.0, 2.5), rng=rng)
        cum = 0.0
        reached_two_at = None
        for i in range(500):
            goal = env.goal
            # drive straight toward the current goal (greedy teleport-free)
            to_goal = goal - env.state.position
            heading = math.atan2(to_goal[1], to_goal[0])
            d_yaw = np.clip(((heading - env.state.yaw + math.pi) % (2 * math.pi)) - math.pi,
                            -0.25, 0.25)
            horiz = math.hypot(to_goal[0], to_goal[1])
            v_z = np.clip(to_goal[2], -0.25, 0.25)
            v_lin = 0.25 if abs(d_yaw) < 0.3 else 0.0
            out = env.step(ActionCommand(v_lin, float(v_z), float(d_yaw)))
            cum += out.reward
            if out.success:
                assert not out.terminated or out.info["step"] == 500
            if env.goals_reached >= 2 and reached_two_at is None:
                reached_two_at = cum
            if out.terminated:
                break
        assert env.goals_reached >= 2
        assert reached_two_at >= 200.0


class TestScenarios:
    @pytest.mark.parametrize("name", ["a2w", "w2a", "a2w-2", "w2a-2"])
    @pytest.mark.parametrize("risers", [True, False])
    def test_presets_resettable(self, name, risers):
        world, start, goal = scenario_world(name, risers=risers)
        env = TankEnv(world)
        obs = env.reset(start, goal, seed=0)
        assert obs.vector().shape == (26,)
        # the start pose must also survive a first idle step
        out = env.step(ActionCommand(0.0, 0.0, 0.0))
        assert not out.terminated

    def test_unknown_scenario(self):
        with pytest.raises(ValueError):
            scenario_world("nope")

    def test_config_validation(self):
        with pytest.raises(ValueError):
            WorldConfig(tank_min=(5, -5, -1), tank_max=(-5, 5, 5))
        with pytest.raises(ValueError):
            WorldConfig(water_surface_z=9.0)
        with pytest.raises(ValueError):
            WorldConfig(dt=0.0)
        with pytest.raises(ValueError):
            WorldConfig(risers=((4.9, 0.0, 0.25),))
