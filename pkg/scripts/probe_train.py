"""Scratch learnability probe (not part of the package)."""
import sys, json, time
import numpy as np
from amphinav.util import limit_blas_threads
from amphinav.agents.trainer import run_training
from amphinav.agents.common import Hyperparams, OuNoiseConfig
from amphinav.world import scenario_world, RewardConfig
from amphinav.evaluate import GreedyPolicy, MeanPolicy, run_trials

algo = sys.argv[1] if len(sys.argv) > 1 else "docrl-d"
episodes = int(sys.argv[2]) if len(sys.argv) > 2 else 60
seed = int(sys.argv[3]) if len(sys.argv) > 3 else 7
batch = int(sys.argv[4]) if len(sys.argv) > 4 else 64
start_steps = int(sys.argv[5]) if len(sys.argv) > 5 else 1000
out = sys.argv[6] if len(sys.argv) > 6 else "/tmp/probe"

limit_blas_threads()
hp = Hyperparams(batch=batch, seq_len=8, start_steps=start_steps)
world, start, goal = scenario_world("a2w", risers=False)
t0 = time.time()
agent, log_path = run_training(algo, world, start, hp, seed, out, episodes,
                               hidden_dim=128, recurrent_critics=False,
                               verbose=True, checkpoint_every=0)
print(f"train wall {time.time()-t0:.0f}s")
policy = GreedyPolicy(agent) if algo == "docrl-d" else MeanPolicy(agent)
m, rows = run_trials(policy, world, start, goal, master_seed=seed + 1000, trials=100)
print(f"EVAL: {m.successes}/100 t_air={m.t_air_mean} t_water={m.t_water_mean}")
