"""Hot numeric kernels with numba-jitted and pure-numpy implementations.

The jitted path is used when numba imports cleanly; setting the environment
variable ``FOCKPROJ_NO_NUMBA=1`` before import forces the numpy path.  Both
paths use a fixed summation order, so each is deterministic on its own;
across paths results agree to rounding, not bit-for-bit.

Kernels:
  objective_batch   -- norm-ratio objective over a batch of coordinate rows
  grid_expquad_sum  -- full tensor-grid sum of exp(-(x,Ax)+2(v,x))
  kernel_colsum     -- projection-kernel contraction for the double quadrature
"""
from __future__ import annotations

import math
import os

import numpy as np

_ENV_OFF = os.environ.get("FOCKPROJ_NO_NUMBA", "") == "1"
if not _ENV_OFF:
    try:
        from numba import njit

        USE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False
else:
    USE_NUMBA = False


def _objective_batch_np(coords: np.ndarray, p: float) -> np.ndarray:
    """Objective values for coordinate rows (a, d, b, e, g, f).

    Rows outside the admissible region get the inert value -1.0 so that
    max-reductions ignore them.
    """
    a, d, b = coords[:, 0], coords[:, 1], coords[:, 2]
    e, g, f = coords[:, 3], coords[:, 4], coords[:, 5]
    at, dt = a + 1.0, d + 1.0
    det_re = at * dt - b * b - e * g + f * f
    det_im = dt * e + at * g - 2.0 * b * f
    an_re = a - d + 2.0 * f
    an_im = e - g - 2.0 * b
    smod = det_re * det_re + det_im * det_im
    tau = smod - an_re * an_re - an_im * an_im
    re_det = a * d - b * b
    out = np.full(coords.shape[0], -1.0)
    ok = (a > 0.0) & (d > 0.0) & (re_det > 0.0) & (tau > 0.0) & (smod > 0.0)
    out[ok] = re_det[ok] * np.exp(-0.5 * (p - 2.0) * np.log(smod[ok])) / tau[ok]
    return out


def _grid_expquad_sum_np(y, transform, a_mat, v_vec, chunk=1 << 19):
    """Sum of exp(-(x,Ax)+2(v,x)) over the k-fold tensor grid x = T y_multi."""
    k = transform.shape[0]
    m = y.size
    total = m**k
    acc = 0.0 + 0.0j
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        multi = np.unravel_index(idx, (m,) * k)
        ygrid = y[np.stack(multi)]  # (k, nchunk)
        x = transform @ ygrid
        expo = -np.einsum("ij,ik,kj->j", x, a_mat, x) + 2.0 * (v_vec @ x)
        acc += complex(np.sum(np.exp(expo)))
    return acc


def _kernel_colsum_np(zs, ws_conj, factors, alpha, chunk=1 << 11):
    """out[i] = sum_j factors[j] * exp(alpha * zs[i] * conj(ws[j]))."""
    out = np.empty(zs.size, dtype=complex)
    for start in range(0, zs.size, chunk):
        zblock = zs[start : start + chunk, None]
        out[start : start + chunk] = np.exp(alpha * zblock * ws_conj[None, :]) @ factors
    return out


if USE_NUMBA:

    @njit(cache=True)
    def _objective_batch_nb(coords, p):  # pragma: no cover - numba path
        n = coords.shape[0]
        out = np.empty(n)
        for i in range(n):
            a, d, b = coords[i, 0], coords[i, 1], coords[i, 2]
            e, g, f = coords[i, 3], coords[i, 4], coords[i, 5]
            at, dt = a + 1.0, d + 1.0
            det_re = at * dt - b * b - e * g + f * f
            det_im = dt * e + at * g - 2.0 * b * f
            an_re = a - d + 2.0 * f
            an_im = e - g - 2.0 * b
            smod = det_re * det_re + det_im * det_im
            tau = smod - an_re * an_re - an_im * an_im
            re_det = a * d - b * b
            if a > 0.0 and d > 0.0 and re_det > 0.0 and tau > 0.0 and smod > 0.0:
                out[i] = re_det * math.exp(-0.5 * (p - 2.0) * math.log(smod)) / tau
            else:
                out[i] = -1.0
        return out

    @njit(cache=True)
    def _grid_expquad_sum_nb(y, transform, a_re, a_im, v_re, v_im):  # pragma: no cover
        k = transform.shape[0]
        m = y.size
        counts = np.ones(4, dtype=np.int64)
        for axis in range(k):
            counts[axis] = m
        t4 = np.zeros((4, 4))
        t4[:k, :k] = transform
        are4 = np.zeros((4, 4))
        are4[:k, :k] = a_re
        aim4 = np.zeros((4, 4))
        aim4[:k, :k] = a_im
        vre4 = np.zeros(4)
        vre4[:k] = v_re
        vim4 = np.zeros(4)
        vim4[:k] = v_im
        acc_re = 0.0
        acc_im = 0.0
        x = np.zeros(4)
        for i0 in range(counts[0]):
            for i1 in range(counts[1]):
                for i2 in range(counts[2]):
                    for i3 in range(counts[3]):
                        y0 = y[i0] if k > 0 else 0.0
                        y1 = y[i1] if k > 1 else 0.0
                        y2 = y[i2] if k > 2 else 0.0
                        y3 = y[i3] if k > 3 else 0.0
                        for r in range(4):
                            x[r] = t4[r, 0] * y0 + t4[r, 1] * y1 + t4[r, 2] * y2 + t4[r, 3] * y3
                        qre = 0.0
                        qim = 0.0
                        for r in range(4):
                            for c in range(4):
                                qre += x[r] * are4[r, c] * x[c]
                                qim += x[r] * aim4[r, c] * x[c]
                        ere = -qre
                        eim = -qim
                        for r in range(4):
                            ere += 2.0 * vre4[r] * x[r]
                            eim += 2.0 * vim4[r] * x[r]
                        mag = math.exp(ere)
                        acc_re += mag * math.cos(eim)
                        acc_im += mag * math.sin(eim)
        return complex(acc_re, acc_im)

    @njit(cache=True)
    def _kernel_colsum_nb(zs, ws_conj, factors, alpha):  # pragma: no cover
        nz = zs.size
        nw = ws_conj.size
        out = np.empty(nz, dtype=np.complex128)
        for i in range(nz):
            acc = 0.0 + 0.0j
            zi = zs[i]
            for j in range(nw):
                expo = alpha * zi * ws_conj[j]
                acc += factors[j] * complex(math.exp(expo.real) * math.cos(expo.imag),
                                            math.exp(expo.real) * math.sin(expo.imag))
            out[i] = acc
        return out


def objective_batch(coords: np.ndarray, p: float) -> np.ndarray:
    coords = np.ascontiguousarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[1] != 6:
        raise ValueError(f"expected (N, 6) coordinate rows, got {coords.shape}")
    if USE_NUMBA:
        return _objective_batch_nb(coords, float(p))
    return _objective_batch_np(coords, float(p))


def grid_expquad_sum(y, transform, a_mat, v_vec) -> complex:
    y = np.ascontiguousarray(y, dtype=float)
    transform = np.ascontiguousarray(transform, dtype=float)
    a_mat = np.asarray(a_mat, dtype=complex)
    v_vec = np.asarray(v_vec, dtype=complex)
    if USE_NUMBA:
        return _grid_expquad_sum_nb(
            y,
            transform,
            np.ascontiguousarray(a_mat.real),
            np.ascontiguousarray(a_mat.imag),
            np.ascontiguousarray(v_vec.real),
            np.ascontiguousarray(v_vec.imag),
        )
    return _grid_expquad_sum_np(y, transform, a_mat, v_vec)


def kernel_colsum(zs, ws, factors, alpha: float) -> np.ndarray:
    zs = np.ascontiguousarray(zs, dtype=complex)
    ws_conj = np.conj(np.ascontiguousarray(ws, dtype=complex))
    factors = np.ascontiguousarray(factors, dtype=complex)
    if USE_NUMBA:
        return _kernel_colsum_nb(zs, ws_conj, factors, float(alpha))
    return _kernel_colsum_np(zs, ws_conj, factors, float(alpha))
