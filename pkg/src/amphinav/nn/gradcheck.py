"""Finite-difference verification of analytic gradients."""

from typing import Callable, Dict, Optional

import numpy as np

from .params import ParamSet


def grad_check(ps: ParamSet, loss_fn: Callable[[ParamSet], float],
               analytic_grads: Dict[str, np.ndarray], eps: float = 1e-5,
               n_coords: int = 200,
               rng: Optional[np.random.Generator] = None) -> float:
    """Max relative error between analytic grads and central differences.

    Samples at least ``n_coords`` coordinates (all of them for small
    parameter sets); relative error is |a - n| / max(1e-8, |a| + |n|).
    """
    if rng is None:
        rng = np.random.default_rng(0)
    names = ps.names()
    sizes = np.array([ps[n].size for n in names])
    total = int(sizes.sum())
    k = min(n_coords, total)
    flat_idx = rng.choice(total, size=k, replace=False)
    bounds = np.cumsum(sizes)

    worst = 0.0
    for fi in flat_idx:
        which = int(np.searchsorted(bounds, fi, side="right"))
        name = names[which]
        idx = int(fi - (bounds[which - 1] if which else 0))
        flat = ps[name].ravel()
        orig = flat[idx]
        flat[idx] = orig + eps
        lp = loss_fn(ps)
        flat[idx] = orig - eps
        lm = loss_fn(ps)
        flat[idx] = orig
        numeric = (lp - lm) / (2.0 * eps)
        analytic = analytic_grads[name].ravel()[idx]
        rel = abs(analytic - numeric) / max(1e-8, abs(analytic) + abs(numeric))
        worst = max(worst, rel)
    return worst
