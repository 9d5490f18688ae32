"""Sequence forward/backward passes with exact manual gradients.

The trunk is a single LSTM layer (sigmoid gates, tanh candidate/output)
followed by one ReLU dense layer and a linear head; a non-recurrent
variant replaces the LSTM with a second dense layer.  backward_seq
returns exact reverse-mode gradients through time, accumulated across
steps, plus gradients with respect to the inputs (used to push value
gradients into the policy).
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .. import _kernels
from .params import LOG_STD_MAX, LOG_STD_MIN, NetworkSpec, ParamSet


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


@dataclass
class SeqCache:
    x_flat: np.ndarray            # (T*B, in), time-major
    B: int
    T: int
    gates: Optional[np.ndarray]   # (T, B, 4H) activated [i|f|g|o]
    tanh_c: Optional[np.ndarray]  # (T, B, H)
    h_prev: Optional[np.ndarray]  # (T, B, H): h0, h_0 .. h_{T-2}
    c_prev: Optional[np.ndarray]  # (T, B, H)
    a0: Optional[np.ndarray]      # MLP variant only
    z0_mask: Optional[np.ndarray]
    hs_flat: np.ndarray           # (T*B, H) trunk output
    z1_mask: np.ndarray
    a1: np.ndarray
    head_y: Optional[np.ndarray]      # tanh3: squashed output
    head_mask: Optional[np.ndarray]   # gauss3: log-std pass-through mask


def forward_seq(ps: ParamSet, spec: NetworkSpec, x: np.ndarray,
                h0: Optional[np.ndarray] = None,
                c0: Optional[np.ndarray] = None,
                want_cache: bool = True):
    """Run a (B, T, input_dim) batch; returns (y, (hT, cT), cache).

    y is (B, T, out_dim); hidden state starts at zero unless h0/c0 given.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3 or x.shape[2] != spec.input_dim:
        raise ValueError(f"expected (B, T, {spec.input_dim}) input, got {x.shape}")
    B, T, _ = x.shape
    H = spec.hidden_dim
    x_flat = np.ascontiguousarray(x.transpose(1, 0, 2)).reshape(T * B, spec.input_dim)

    if spec.recurrent:
        pre_x = x_flat @ ps["wx"] + ps["b"]
        h = np.zeros((B, H)) if h0 is None else h0.copy()
        c = np.zeros((B, H)) if c0 is None else c0.copy()
        gates = np.empty((T, B, 4 * H)) if want_cache else None
        tanh_cs = np.empty((T, B, H)) if want_cache else None
        h_prevs = np.empty((T, B, H)) if want_cache else None
        c_prevs = np.empty((T, B, H)) if want_cache else None
        hs = np.empty((T, B, H))
        for t in range(T):
            pre = pre_x[t * B:(t + 1) * B] + h @ ps["wh"]
            pre[:, :2 * H] = _sigmoid(pre[:, :2 * H])
            pre[:, 2 * H:3 * H] = np.tanh(pre[:, 2 * H:3 * H])
            pre[:, 3 * H:] = _sigmoid(pre[:, 3 * H:])
            i = pre[:, :H]
            f = pre[:, H:2 * H]
            g = pre[:, 2 * H:3 * H]
            o = pre[:, 3 * H:]
            if want_cache:
                gates[t] = pre
                h_prevs[t] = h
                c_prevs[t] = c
            c = f * c + i * g
            tc = np.tanh(c)
            h = o * tc
            if want_cache:
                tanh_cs[t] = tc
            hs[t] = h
        hs_flat = hs.reshape(T * B, H)
        a0 = z0_mask = None
    else:
        z0 = x_flat @ ps["w0"] + ps["b0"]
        z0_mask = z0 > 0.0
        a0 = np.where(z0_mask, z0, 0.0)
        hs_flat = a0
        gates = tanh_cs = h_prevs = c_prevs = None
        h = c = None

    z1 = hs_flat @ ps["w1"] + ps["b1"]
    z1_mask = z1 > 0.0
    a1 = np.where(z1_mask, z1, 0.0)
    pre_out = a1 @ ps["w2"] + ps["b2"]

    head_y = head_mask = None
    if spec.head == "tanh3":
        y = np.tanh(pre_out)
        head_y = y
    elif spec.head == "gauss3":
        y = pre_out.copy()
        raw = pre_out[:, 3:]
        head_mask = (raw > LOG_STD_MIN) & (raw < LOG_STD_MAX)
        y[:, 3:] = np.clip(raw, LOG_STD_MIN, LOG_STD_MAX)
    else:
        y = pre_out

    out = y.reshape(T, B, spec.out_dim).transpose(1, 0, 2)
    cache = None
    if want_cache:
        cache = SeqCache(x_flat=x_flat, B=B, T=T, gates=gates,
                         tanh_c=tanh_cs, h_prev=h_prevs, c_prev=c_prevs,
                         a0=a0, z0_mask=z0_mask, hs_flat=hs_flat,
                         z1_mask=z1_mask, a1=a1, head_y=head_y,
                         head_mask=head_mask)
    return out, (h, c), cache


def backward_seq(ps: ParamSet, spec: NetworkSpec, cache: SeqCache,
                 d_out: np.ndarray, param_grads: bool = True,
                 input_grads: bool = True):
    """Exact gradients for a cached forward pass.

    d_out is (B, T, out_dim) upstream gradient (already masked by the
    caller where steps are padding).  Returns (parameter gradients,
    input gradients as (B, T, input_dim)); either side can be skipped
    to save the corresponding matrix products.
    """
    B, T, H = cache.B, cache.T, spec.hidden_dim
    dY = np.ascontiguousarray(d_out.transpose(1, 0, 2)).reshape(T * B, spec.out_dim)

    if spec.head == "tanh3":
        dpre_out = dY * (1.0 - cache.head_y * cache.head_y)
    elif spec.head == "gauss3":
        dpre_out = dY.copy()
        dpre_out[:, 3:] *= cache.head_mask
    else:
        dpre_out = dY

    grads = {}
    if param_grads:
        grads["w2"] = cache.a1.T @ dpre_out
        grads["b2"] = dpre_out.sum(axis=0)
    da1 = dpre_out @ ps["w2"].T
    dz1 = da1 * cache.z1_mask
    if param_grads:
        grads["w1"] = cache.hs_flat.T @ dz1
        grads["b1"] = dz1.sum(axis=0)
    dhs_flat = dz1 @ ps["w1"].T

    if not spec.recurrent:
        dz0 = dhs_flat * cache.z0_mask
        if param_grads:
            grads["w0"] = cache.x_flat.T @ dz0
            grads["b0"] = dz0.sum(axis=0)
        dx = None
        if input_grads:
            dx_flat = dz0 @ ps["w0"].T
            dx = dx_flat.reshape(T, B, spec.input_dim).transpose(1, 0, 2)
        return grads, dx

    dhs = dhs_flat.reshape(T, B, H)
    d_pre = np.empty((T, B, 4 * H))
    dc_next = np.zeros((B, H))
    dc_prev = np.empty((B, H))
    dh_carry = np.zeros((B, H))
    for t in range(T - 1, -1, -1):
        dh = dhs[t] + dh_carry
        _kernels.lstm_backward_step(cache.gates[t], cache.tanh_c[t],
                                    cache.c_prev[t], dh, dc_next,
                                    d_pre[t], dc_prev)
        dc_next, dc_prev = dc_prev, dc_next
        if t > 0:
            dh_carry = d_pre[t] @ ps["wh"].T

    dpre_flat = d_pre.reshape(T * B, 4 * H)
    if param_grads:
        grads["wx"] = cache.x_flat.T @ dpre_flat
        grads["b"] = dpre_flat.sum(axis=0)
        grads["wh"] = cache.h_prev.reshape(T * B, H).T @ dpre_flat
    dx = None
    if input_grads:
        dx_flat = dpre_flat @ ps["wx"].T
        dx = dx_flat.reshape(T, B, spec.input_dim).transpose(1, 0, 2)
    return grads, dx


def forward_step(ps: ParamSet, spec: NetworkSpec, x: np.ndarray,
                 h: Optional[np.ndarray], c: Optional[np.ndarray]):
    """Single-sample single-step forward for rollouts; no cache."""
    y, (h2, c2), _ = forward_seq(ps, spec, x.reshape(1, 1, -1), h, c,
                                 want_cache=False)
    return y[0, 0], h2, c2
