"""The scalar objective whose global maximum gives the sharp norm at n = 1.

A 2x2 admissible matrix A = [[a+ie, b+if], [b+if, d+ig]] is flattened to
real coordinates (a, d, b, e, g, f).  Two derived complex scalars organize
everything:

* det_re + i*det_im = det(A + I), the shifted determinant;
* an_re + i*an_im = A00 - A11 - 2i*A01, the anisotropy, zero exactly when A
  is a scalar matrix.

With S = det_re^2 + det_im^2 and tau = S - an_re^2 - an_im^2, the objective
is value = det(Re A) / (S^{(p-2)/2} * tau).  tau stays positive on the
admissible set; the power of S goes through exp/log so large coordinates
cannot overflow.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, DimensionError, DomainError
from .matrices import AdmissibleMatrix, omega_map


@dataclass(frozen=True)
class ObjectiveEvaluation:
    """Objective value at one coordinate point, with every intermediate.

    c_factor = p*tau + 2*(an_re^2 + an_im^2) is the shared factor of the
    gradient's numerator, kept for debugging optimizer traces.
    """

    coords: tuple
    a_shift: float
    d_shift: float
    det_re: float
    det_im: float
    an_re: float
    an_im: float
    tau: float
    value: float
    c_factor: float


def coords_from_matrix(matrix) -> tuple:
    """(a, d, b, e, g, f) reading the real and imaginary parts of a 2x2 A."""
    arr = matrix.array if isinstance(matrix, AdmissibleMatrix) else np.asarray(matrix, dtype=complex)
    if arr.shape != (2, 2):
        raise DimensionError(f"expected a 2x2 matrix, got shape {arr.shape}")
    return (
        float(arr[0, 0].real),
        float(arr[1, 1].real),
        float(arr[0, 1].real),
        float(arr[0, 0].imag),
        float(arr[1, 1].imag),
        float(arr[0, 1].imag),
    )


def matrix_from_coords(coords) -> np.ndarray:
    a, d, b, e, g, f = (float(c) for c in coords)
    return np.array([[a + 1j * e, b + 1j * f], [b + 1j * f, d + 1j * g]])


def _check_coords(a: float, d: float, b: float):
    if a <= 0 or d <= 0 or a * d - b * b <= 0:
        raise AdmissibilityError(
            f"coordinates (a={a}, d={d}, b={b}) leave the admissible cone"
        )


def objective_coords(coords, p: float) -> ObjectiveEvaluation:
    """Evaluate the objective and all its intermediates at one point."""
    a, d, b, e, g, f = (float(c) for c in coords)
    _check_coords(a, d, b)
    at, dt = a + 1.0, d + 1.0
    det_re = at * dt - b * b - e * g + f * f
    det_im = dt * e + at * g - 2.0 * b * f
    an_re = a - d + 2.0 * f
    an_im = e - g - 2.0 * b
    smod = det_re * det_re + det_im * det_im
    tau = smod - an_re * an_re - an_im * an_im
    if tau <= 0:
        raise DomainError(f"tau = {tau} <= 0: boundary degeneracy at {coords}")
    value = (a * d - b * b) * np.exp(-0.5 * (p - 2.0) * np.log(smod)) / tau
    return ObjectiveEvaluation(
        coords=(a, d, b, e, g, f),
        a_shift=at,
        d_shift=dt,
        det_re=det_re,
        det_im=det_im,
        an_re=an_re,
        an_im=an_im,
        tau=tau,
        value=float(value),
        c_factor=p * tau + 2.0 * (an_re * an_re + an_im * an_im),
    )


def objective_matrix(matrix, p: float) -> float:
    """det(Re A) / (|det(A+I)|^p * det(I + omega_map((I+A)^{-1}))) for 2x2 A.

    Agrees with objective_coords on the coordinate image; this form is the
    one that generalizes to 2n x 2n and is what the norm ratio reduces to.
    """
    mat = matrix if isinstance(matrix, AdmissibleMatrix) else AdmissibleMatrix(matrix)
    if mat.dim != 2:
        raise DimensionError(f"objective is defined on 2x2 matrices, got dim {mat.dim}")
    arr = mat.array
    big = arr + np.eye(2)
    inv = np.linalg.solve(big, np.eye(2))
    inv = (inv + inv.T) / 2.0
    denom_sign, denom_log = np.linalg.slogdet(np.eye(2) + omega_map(inv))
    if denom_sign <= 0:
        raise DomainError("omega determinant is not positive; point is degenerate")
    num = float(np.linalg.det(np.real(arr)))
    abs_det_log = float(np.linalg.slogdet(big)[1])
    return num * float(np.exp(-p * abs_det_log - denom_log))


# d/dx of (det_re, det_im, an_re, an_im, num) in coordinate order (a,d,b,e,g,f)
def _partials(ev: ObjectiveEvaluation):
    a, d, b, e, g, f = ev.coords
    at, dt = ev.a_shift, ev.d_shift
    det_re_x = np.array([dt, at, -2.0 * b, -g, -e, 2.0 * f])
    det_im_x = np.array([g, e, -2.0 * f, dt, at, -2.0 * b])
    an_re_x = np.array([1.0, -1.0, 0.0, 0.0, 0.0, 2.0])
    an_im_x = np.array([0.0, 0.0, -2.0, 1.0, -1.0, 0.0])
    num_x = np.array([d, a, -2.0 * b, 0.0, 0.0, 0.0])
    return det_re_x, det_im_x, an_re_x, an_im_x, num_x


def objective_gradient(coords, p: float) -> np.ndarray:
    """Analytic gradient of the objective in the six coordinates.

    numerator_x = S*num_x*tau - num*C*(det.det_x) + 2*num*S*(an.an_x)
    over S^{p/2} * tau^2, with C the c_factor of the evaluation.
    """
    ev = objective_coords(coords, p)
    det_re_x, det_im_x, an_re_x, an_im_x, num_x = _partials(ev)
    a, d, b = ev.coords[0], ev.coords[1], ev.coords[2]
    num = a * d - b * b
    smod = ev.det_re**2 + ev.det_im**2
    det_dot = ev.det_re * det_re_x + ev.det_im * det_im_x
    an_dot = ev.an_re * an_re_x + ev.an_im * an_im_x
    numerator = smod * ev.tau * num_x - num * ev.c_factor * det_dot + 2.0 * num * smod * an_dot
    scale = np.exp(-0.5 * p * np.log(smod)) / (ev.tau * ev.tau)
    return numerator * scale


def tau_three_forms(a: float, d: float, e: float, g: float, f: float) -> tuple:
    """tau at b = 0 three ways: definition and two all-nonnegative expansions.

    The expansions contain no cancelling terms, so each is a positivity
    certificate for tau on the b = 0 slice; the three must agree to
    roundoff.
    """
    a, d, e, g, f = (float(v) for v in (a, d, e, g, f))
    at, dt = a + 1.0, d + 1.0
    det_re = at * dt - e * g + f * f
    det_im = dt * e + at * g
    an_re = a - d + 2.0 * f
    an_im = e - g
    tau_def = det_re**2 + det_im**2 - an_re**2 - an_im**2
    tau_one = (
        (a * d - e * g + f * f - 1.0) ** 2
        + 8.0 * a * d
        + 2.0 * a * d * (a + d)
        + 2.0 * a * (f - 1.0) ** 2
        + 2.0 * d * (f + 1.0) ** 2
        + (a * g + d * e) ** 2
        + 2.0 * (d * e * e + a * g * g)
    )
    tau_two = (
        (e * g - f * f + 1.0) ** 2
        + (a * d) ** 2
        + 2.0 * a * d * (a + d)
        + 6.0 * a * d
        + 2.0 * a * (f - 1.0) ** 2
        + 2.0 * a * d * f * f
        + 2.0 * d * (f + 1.0) ** 2
        + e * e * (d * d + 2.0 * d)
        + g * g * (a * a + 2.0 * a)
    )
    return tau_def, tau_one, tau_two
