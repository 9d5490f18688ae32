"""Kernel backend selection: compiled extension if built, NumPy otherwise."""

try:
    from . import _core as backend
except ImportError:
    from . import numpy_ref as backend

from . import numpy_ref

BACKEND = backend.BACKEND
lstm_backward_step = backend.lstm_backward_step
adam_update = backend.adam_update
cast_rays = backend.cast_rays
