"""Gaussian functions x -> c*exp(-(x,Ax)+2(v,x)) and their closed forms.

All inner products here are bilinear, (u, w) = sum u_i w_i with no
conjugation, which is what makes the shifted integral formula hold for
complex shifts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .matrices import AdmissibleMatrix


def _coerce_admissible(matrix) -> AdmissibleMatrix:
    if isinstance(matrix, AdmissibleMatrix):
        return matrix
    return AdmissibleMatrix(matrix)


def continuous_sqrt_det(matrix) -> complex:
    """sqrt(det(A)) continuous on the admissible set.

    Every eigenvalue of a complex symmetric A with positive definite real
    part lies in the open right half-plane (its field of values does), so
    the principal log of each eigenvalue is well defined and the product
    exp(0.5 * sum log lambda_i) never crosses the branch cut.
    """
    arr = matrix.array if isinstance(matrix, AdmissibleMatrix) else np.asarray(matrix, dtype=complex)
    eigs = np.linalg.eigvals(arr)
    if np.any(eigs.real <= 0):
        raise DomainError("matrix has an eigenvalue off the right half-plane; not admissible")
    return complex(np.exp(0.5 * np.sum(np.log(eigs))))


@dataclass(frozen=True)
class GaussianFunction:
    """x -> amplitude * exp(-(x, matrix x) + 2 (shift, x)) on R^k."""

    matrix: AdmissibleMatrix
    shift: np.ndarray = None
    amplitude: complex = 1.0 + 0.0j

    def __post_init__(self):
        mat = _coerce_admissible(self.matrix)
        object.__setattr__(self, "matrix", mat)
        v = np.zeros(mat.dim, dtype=complex) if self.shift is None else np.asarray(self.shift, dtype=complex)
        if v.shape != (mat.dim,):
            raise DomainError(f"shift shape {v.shape} does not match matrix dim {mat.dim}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "shift", v)
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def centered(self) -> bool:
        return bool(np.all(self.shift == 0) and self.amplitude == 1.0)

    def __call__(self, points):
        pts = np.asarray(points, dtype=complex)
        squeeze = pts.ndim == 1
        if squeeze:
            pts = pts[None, :]
        if pts.shape[1] != self.dim:
            raise DomainError(f"points have dimension {pts.shape[1]}, expected {self.dim}")
        quad = np.einsum("ni,ij,nj->n", pts, self.matrix.array, pts)
        lin = pts @ self.shift
        out = self.amplitude * np.exp(-quad + 2.0 * lin)
        return out[0] if squeeze else out

    def integral(self) -> complex:
        return gaussian_integral(self)

    def lp_norm(self, p: float) -> float:
        """L^p norm over R^k with Lebesgue measure, from the real parts only."""
        if p <= 0:
            raise DomainError(f"p must be positive, got {p}")
        k = self.dim
        re = np.real(self.matrix.array)
        sign, logdet = np.linalg.slogdet(p * re)
        if sign <= 0:
            raise DomainError("real part must be positive definite")
        rv = np.real(self.shift)
        shift_term = float(rv @ np.linalg.solve(re, rv))
        log_norm = (0.5 * k * np.log(np.pi) - 0.5 * logdet) / p + shift_term
        return abs(self.amplitude) * float(np.exp(log_norm))


def gaussian_integral(g: GaussianFunction) -> complex:
    """Closed-form integral over R^k: amplitude * pi^{k/2}/sqrt(det A) * e^{(v, A^{-1}v)}."""
    if not isinstance(g, GaussianFunction):
        g = GaussianFunction(g)  # centered Gaussian from a bare matrix
    arr = g.matrix.array
    root = continuous_sqrt_det(g.matrix)
    shift_term = complex(g.shift @ np.linalg.solve(arr, g.shift))
    return g.amplitude * np.pi ** (g.dim / 2.0) / root * np.exp(shift_term)


def gaussian_lp_norm(matrix, p: float) -> float:
    """||exp(-(x,Ax))||_p = (pi^{k/2}/sqrt(det(p Re A)))^{1/p}; depends on Re(A) only."""
    if p <= 0:
        raise DomainError(f"p must be positive, got {p}")
    mat = _coerce_admissible(matrix)
    return GaussianFunction(mat).lp_norm(p)
