# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Fused C kernels for the hot inner loops.

Mirrors ``numpy_ref`` operation for operation; compiled with
-ffp-contract=off so results are bit-identical to the fallback
(up to libm trig differences in cast_rays).
"""

cimport numpy as cnp
from libc.math cimport INFINITY, cos, sin, sqrt

BACKEND = "compiled"


def lstm_backward_step(double[:, ::1] gates, double[:, ::1] tanh_c,
                       double[:, ::1] c_prev, double[:, ::1] dh,
                       double[:, ::1] dc_next, double[:, ::1] dpre,
                       double[:, ::1] dc_prev):
    cdef Py_ssize_t B = dh.shape[0]
    cdef Py_ssize_t H = dh.shape[1]
    cdef Py_ssize_t b, j
    cdef double i_, f_, g_, o_, tc, dhv, do, dc
    for b in range(B):
        for j in range(H):
            i_ = gates[b, j]
            f_ = gates[b, H + j]
            g_ = gates[b, 2 * H + j]
            o_ = gates[b, 3 * H + j]
            tc = tanh_c[b, j]
            dhv = dh[b, j]
            do = dhv * tc
            dc = dc_next[b, j] + dhv * o_ * (1.0 - tc * tc)
            dc_prev[b, j] = dc * f_
            dpre[b, j] = (dc * g_) * i_ * (1.0 - i_)
            dpre[b, H + j] = (dc * c_prev[b, j]) * f_ * (1.0 - f_)
            dpre[b, 2 * H + j] = (dc * i_) * (1.0 - g_ * g_)
            dpre[b, 3 * H + j] = do * o_ * (1.0 - o_)


def adam_update(double[::1] p, double[::1] g, double[::1] m, double[::1] v,
                double lr, double beta1, double beta2, double eps,
                double bc1, double bc2):
    cdef Py_ssize_t n = p.shape[0]
    cdef Py_ssize_t k
    cdef double gk
    for k in range(n):
        gk = g[k]
        m[k] = beta1 * m[k] + (1.0 - beta1) * gk
        v[k] = beta2 * v[k] + (1.0 - beta2) * (gk * gk)
        p[k] = p[k] - lr * (m[k] / bc1) / (sqrt(v[k] / bc2) + eps)


def cast_rays(double x, double y, double yaw, double spacing,
              double max_range, double xmin, double xmax, double ymin,
              double ymax, double[:, ::1] risers, double[::1] out):
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t nr = risers.shape[0]
    cdef Py_ssize_t k, j
    cdef double ang, dx, dy, t, tx, ty
    cdef double fx, fy, b, c, disc, root, t0, t1, tc
    for k in range(n):
        ang = yaw + (k - 0.5 * (n - 1)) * spacing
        dx = cos(ang)
        dy = sin(ang)

        if dx > 0.0:
            tx = (xmax - x) / dx
        elif dx < 0.0:
            tx = (xmin - x) / dx
        else:
            tx = INFINITY
        if dy > 0.0:
            ty = (ymax - y) / dy
        elif dy < 0.0:
            ty = (ymin - y) / dy
        else:
            ty = INFINITY
        t = tx if tx < ty else ty

        for j in range(nr):
            fx = x - risers[j, 0]
            fy = y - risers[j, 1]
            b = fx * dx + fy * dy
            c = fx * fx + fy * fy - risers[j, 2] * risers[j, 2]
            disc = b * b - c
            if disc >= 0.0:
                root = sqrt(disc)
                t0 = -b - root
                t1 = -b + root
                tc = t0 if t0 >= 0.0 else t1
                if tc >= 0.0 and tc < t:
                    t = tc

        out[k] = t if t < max_range else max_range
