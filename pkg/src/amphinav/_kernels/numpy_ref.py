"""Pure-NumPy reference implementations of the hot kernels.

Selected automatically when the compiled extension is unavailable.  The
arithmetic here mirrors ``_core.pyx`` operation for operation so both
backends produce bit-identical results (the extension is compiled with
FP contraction disabled).
"""

import numpy as np

BACKEND = "numpy"


def lstm_backward_step(gates, tanh_c, c_prev, dh, dc_next, dpre, dc_prev):
    """Elementwise part of one BPTT step.

    gates holds [i | f | g | o] blocks of width H; dpre (B, 4H) and
    dc_prev (B, H) are written in place.
    """
    H = dh.shape[1]
    i = gates[:, 0 * H:1 * H]
    f = gates[:, 1 * H:2 * H]
    g = gates[:, 2 * H:3 * H]
    o = gates[:, 3 * H:4 * H]
    do = dh * tanh_c
    dc = dc_next + dh * o * (1.0 - tanh_c * tanh_c)
    np.multiply(dc, f, out=dc_prev)
    dpre[:, 0 * H:1 * H] = (dc * g) * i * (1.0 - i)
    dpre[:, 1 * H:2 * H] = (dc * c_prev) * f * (1.0 - f)
    dpre[:, 2 * H:3 * H] = (dc * i) * (1.0 - g * g)
    dpre[:, 3 * H:4 * H] = do * o * (1.0 - o)


def adam_update(p, g, m, v, lr, beta1, beta2, eps, bc1, bc2):
    """In-place Adam step on flat arrays; bc1/bc2 are 1 - beta^t."""
    m *= beta1
    m += (1.0 - beta1) * g
    v *= beta2
    v += (1.0 - beta2) * (g * g)
    p -= lr * (m / bc1) / (np.sqrt(v / bc2) + eps)


def cast_rays(x, y, yaw, spacing, max_range, xmin, xmax, ymin, ymax,
              risers, out):
    """Horizontal raycast against the four tank walls and riser circles.

    Beam k points at yaw + (k - (n-1)/2) * spacing.  Writes ranges
    (capped at max_range) into ``out``.
    """
    n = out.shape[0]
    ang = yaw + (np.arange(n) - 0.5 * (n - 1)) * spacing
    dx = np.cos(ang)
    dy = np.sin(ang)

    with np.errstate(divide="ignore"):
        tx = np.where(dx > 0.0, (xmax - x) / dx,
                      np.where(dx < 0.0, (xmin - x) / dx, np.inf))
        ty = np.where(dy > 0.0, (ymax - y) / dy,
                      np.where(dy < 0.0, (ymin - y) / dy, np.inf))
    t = np.minimum(tx, ty)

    for cx, cy, r in risers:
        fx = x - cx
        fy = y - cy
        b = fx * dx + fy * dy
        c = fx * fx + fy * fy - r * r
        disc = b * b - c
        hit = disc >= 0.0
        root = np.sqrt(np.where(hit, disc, 0.0))
        t0 = -b - root
        t1 = -b + root
        tc = np.where(t0 >= 0.0, t0, t1)
        valid = hit & (tc >= 0.0)
        t = np.where(valid, np.minimum(t, tc), t)

    np.minimum(t, max_range, out=out)
