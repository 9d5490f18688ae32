"""Independent reference implementations used only by the tests.

These deliberately use different formulations from the library code
(slab-method box intersection, quadratic circle solve over segment
parameters, brute-force ray marching) so they can serve as oracles.
"""

import math

import numpy as np


def ray_box_exit(x, y, dx, dy, xmin, xmax, ymin, ymax):
    """Slab method: distance from an interior point to the box boundary."""
    t_exit = math.inf
    if dx != 0.0:
        t1 = (xmin - x) / dx
        t2 = (xmax - x) / dx
        t_exit = min(t_exit, max(t1, t2))
    if dy != 0.0:
        t1 = (ymin - y) / dy
        t2 = (ymax - y) / dy
        t_exit = min(t_exit, max(t1, t2))
    return t_exit


def ray_circle_first_hit(x, y, dx, dy, cx, cy, r):
    """Smallest non-negative t with |(x, y) + t(dx, dy) - c| = r, else inf."""
    fx, fy = x - cx, y - cy
    a = dx * dx + dy * dy
    b = 2.0 * (fx * dx + fy * dy)
    c = fx * fx + fy * fy - r * r
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return math.inf
    root = math.sqrt(disc)
    t0 = (-b - root) / (2.0 * a)
    t1 = (-b + root) / (2.0 * a)
    if t0 >= 0.0:
        return t0
    if t1 >= 0.0:
        return t1
    return math.inf


def beam_range_oracle(x, y, angle, max_range, xmin, xmax, ymin, ymax, risers):
    dx, dy = math.cos(angle), math.sin(angle)
    t = ray_box_exit(x, y, dx, dy, xmin, xmax, ymin, ymax)
    for cx, cy, r in risers:
        t = min(t, ray_circle_first_hit(x, y, dx, dy, cx, cy, r))
    return min(t, max_range)


def beam_range_marcher(x, y, angle, max_range, xmin, xmax, ymin, ymax,
                       risers, step=1e-4):
    """Fine-stepped march along the beam; first blocked sample point."""
    dx, dy = math.cos(angle), math.sin(angle)
    ts = np.arange(0.0, max_range + step, step)
    px = x + ts * dx
    py = y + ts * dy
    blocked = (px < xmin) | (px > xmax) | (py < ymin) | (py > ymax)
    for cx, cy, r in risers:
        blocked |= (px - cx) ** 2 + (py - cy) ** 2 <= r * r
    idx = np.argmax(blocked)
    if not blocked[idx]:
        return max_range
    return min(float(ts[idx]), max_range)
