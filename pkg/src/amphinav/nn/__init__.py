"""Dense/LSTM network core with exact manual gradients."""

from .params import (LOG_STD_MAX, LOG_STD_MIN, NetworkSpec, ParamSet,
                     adam_step, init_params, soft_update, zero_grads)
from .recurrent import backward_seq, forward_seq, forward_step
from .gradcheck import grad_check
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
