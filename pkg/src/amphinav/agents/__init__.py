"""Learning agents: deterministic and stochastic double-critic recurrent RL."""

from .common import (ACT_DIM, OBS_DIM, Hyperparams, OuNoiseConfig,
                     denormalize_action, normalize_action, policy_update_freq)
from .replay import Batch, ReplayBuffer, Transition
from .sac import AgentSAC, squashed_gaussian_logprob
from .td3 import AgentTD3
