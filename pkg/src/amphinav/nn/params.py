"""Parameter containers, initialization, Adam and soft target updates."""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Tuple

import numpy as np

from .. import _kernels

LOG_STD_MIN = -20.0
LOG_STD_MAX = 2.0

HEAD_DIMS = {"tanh3": 3, "gauss3": 6, "scalar": 1}


@dataclass(frozen=True)
class NetworkSpec:
    """Shape of one network: LSTM (or MLP) trunk plus a dense head.

    head: 'tanh3' for a deterministic 3-action policy, 'gauss3' for a
    stochastic policy emitting 3 means and 3 clamped log-stds, 'scalar'
    for a critic.
    """
    input_dim: int
    hidden_dim: int = 256
    head: str = "scalar"
    recurrent: bool = True

    def __post_init__(self):
        if self.head not in HEAD_DIMS:
            raise ValueError(f"unknown head {self.head!r}")
        if self.input_dim <= 0 or self.hidden_dim <= 0:
            raise ValueError("dimensions must be positive")

    @property
    def out_dim(self) -> int:
        return HEAD_DIMS[self.head]

    def array_shapes(self) -> Dict[str, Tuple[int, ...]]:
        H, D = self.hidden_dim, self.input_dim
        if self.recurrent:
            return {
                "wx": (D, 4 * H), "wh": (H, 4 * H), "b": (4 * H,),
                "w1": (H, H), "b1": (H,),
                "w2": (H, self.out_dim), "b2": (self.out_dim,),
            }
        return {
            "w0": (D, H), "b0": (H,),
            "w1": (H, H), "b1": (H,),
            "w2": (H, self.out_dim), "b2": (self.out_dim,),
        }


class ParamSet:
    """Named float64 arrays with per-array Adam moment accumulators."""

    def __init__(self, arrays: Dict[str, np.ndarray]):
        self.arrays = arrays
        self.m = {k: np.zeros_like(a) for k, a in arrays.items()}
        self.v = {k: np.zeros_like(a) for k, a in arrays.items()}
        self.step = 0

    def __getitem__(self, name: str) -> np.ndarray:
        return self.arrays[name]

    def names(self):
        return list(self.arrays)

    def copy(self) -> "ParamSet":
        return ParamSet({k: a.copy() for k, a in self.arrays.items()})

    def n_params(self) -> int:
        return sum(a.size for a in self.arrays.values())

    def coords(self) -> Iterator[Tuple[str, int]]:
        for name, a in self.arrays.items():
            for idx in range(a.size):
                yield name, idx


def init_params(spec: NetworkSpec, seed: int) -> ParamSet:
    """Glorot-uniform weights, zero biases, LSTM forget-gate bias 1."""
    rng = np.random.default_rng(seed)
    arrays = {}
    for name, shape in spec.array_shapes().items():
        if len(shape) == 1:
            arrays[name] = np.zeros(shape)
        else:
            fan_in, fan_out = shape
            limit = np.sqrt(6.0 / (fan_in + fan_out))
            arrays[name] = rng.uniform(-limit, limit, size=shape)
    if spec.recurrent:
        H = spec.hidden_dim
        arrays["b"][H:2 * H] = 1.0
    return ParamSet(arrays)


def zero_grads(ps: ParamSet) -> Dict[str, np.ndarray]:
    return {k: np.zeros_like(a) for k, a in ps.arrays.items()}


def adam_step(ps: ParamSet, grads: Dict[str, np.ndarray], lr: float,
              beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
    """Bias-corrected Adam update applied in place, one step counter tick."""
    ps.step += 1
    bc1 = 1.0 - beta1 ** ps.step
    bc2 = 1.0 - beta2 ** ps.step
    for name, p in ps.arrays.items():
        _kernels.adam_update(p.ravel(), grads[name].ravel(),
                             ps.m[name].ravel(), ps.v[name].ravel(),
                             lr, beta1, beta2, eps, bc1, bc2)


def soft_update(target: ParamSet, source: ParamSet, tau: float):
    """target <- tau * source + (1 - tau) * target, elementwise."""
    for name, t in target.arrays.items():
        t[...] = tau * source.arrays[name] + (1.0 - tau) * t
