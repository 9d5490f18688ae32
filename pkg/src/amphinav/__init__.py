"""amphinav: two-media tank simulator + recurrent double-critic RL agents."""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
