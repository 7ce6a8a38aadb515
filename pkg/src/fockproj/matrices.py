"""Complex symmetric matrix algebra behind the Gaussian test functions.

Matrices here are symmetric (A == A.T) with complex entries -- not Hermitian,
so real spectra are never assumed.  "Admissible" means the real part is
positive definite; that set parameterizes the centered Gaussians the operator
norms are computed over.  All operations are pure functions on immutable
values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, DimensionError, DomainError, SingularMatrixError

# strict-positivity floor on the smallest eigenvalue of Re(A); keeps the
# optimizer off the singular boundary where the objective degenerates
ADMISSIBILITY_EPS = 1e-10
# scale-aware pivot guard: |det| <= coeff * dim * max|entry| flags singularity
SINGULARITY_COEFF = 1e-13


def _as_array(matrix) -> np.ndarray:
    if isinstance(matrix, ComplexSymMatrix):
        return matrix.array
    return np.asarray(matrix, dtype=complex)


class ComplexSymMatrix:
    """Square complex symmetric matrix.

    Symmetry is enforced at construction: only the upper triangle is stored
    and ``array`` mirrors it, so ``array[i, j] == array[j, i]`` exactly.
    Input asymmetric beyond rounding noise is rejected.
    """

    __slots__ = ("dim", "_upper")

    def __init__(self, entries):
        arr = np.asarray(entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        scale = max(float(np.max(np.abs(arr))) if arr.size else 0.0, 1.0)
        skew = float(np.max(np.abs(arr - arr.T))) if arr.size else 0.0
        if skew > 1e-12 * scale:
            raise DomainError(f"matrix is not symmetric: max |A - A.T| = {skew:.3e}")
        self.dim = int(arr.shape[0])
        self._upper = arr[np.triu_indices(self.dim)].copy()

    @property
    def array(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        iu = np.triu_indices(self.dim)
        out[iu] = self._upper
        out[(iu[1], iu[0])] = self._upper
        return out

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.array!r})"


class AdmissibleMatrix(ComplexSymMatrix):
    """Complex symmetric matrix whose real part is positive definite."""

    __slots__ = ("real_min_eig",)

    def __init__(self, entries, eps: float = ADMISSIBILITY_EPS):
        super().__init__(entries)
        w = np.linalg.eigvalsh(np.real(self.array))
        if w[0] <= eps:
            raise AdmissibilityError(
                f"real part is not positive definite: min eigenvalue {w[0]:.6e} <= {eps:.1e}"
            )
        self.real_min_eig = float(w[0])


def check_admissible(matrix, eps: float = ADMISSIBILITY_EPS) -> bool:
    """True iff the smallest eigenvalue of Re(matrix) exceeds `eps`."""
    re = np.real(_as_array(matrix))
    w = np.linalg.eigvalsh((re + re.T) / 2.0)
    return bool(w[0] > eps)


def symplectic_matrix(dim: int) -> np.ndarray:
    """The block matrix [[0, -I], [I, 0]]: multiplication by i in stacked
    real coordinates [x1; x2]."""
    if dim <= 0 or dim % 2:
        raise DimensionError(f"symplectic dimension must be even and positive, got {dim}")
    n = dim // 2
    out = np.zeros((dim, dim))
    out[:n, n:] = -np.eye(n)
    out[n:, :n] = np.eye(n)
    return out


@dataclass(frozen=True)
class SymplecticJ:
    """Typed wrapper for the symplectic matrix of a given even dimension."""

    dim: int

    def __post_init__(self):
        symplectic_matrix(self.dim)  # validates parity and positivity

    @property
    def array(self) -> np.ndarray:
        return symplectic_matrix(self.dim)


@dataclass(frozen=True)
class PlaneRotation:
    """Rotation in SO(2) by `angle` radians."""

    angle: float

    @property
    def matrix(self) -> np.ndarray:
        c, s = np.cos(self.angle), np.sin(self.angle)
        return np.array([[c, -s], [s, c]])


def omega_map(matrix) -> np.ndarray:
    """J^T Re(M) J - Re(M) - Im(M) J - J^T Im(M); real, symmetric when M is."""
    arr = _as_array(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] % 2:
        raise DimensionError(f"omega_map needs an even dimension, got {arr.shape[0]}")
    j = symplectic_matrix(arr.shape[0])
    re, im = np.real(arr), np.imag(arr)
    return j.T @ re @ j - re - im @ j - j.T @ im


def conjugate_by_rotation(matrix, rotation):
    """U^T A U for U in SO(2); preserves symmetry and admissibility.

    Returns the same kind of value it was given (wrapper in, wrapper out).
    """
    u = rotation.matrix if isinstance(rotation, PlaneRotation) else np.asarray(rotation, dtype=float)
    arr = _as_array(matrix)
    if arr.shape != (2, 2):
        raise DimensionError(f"rotation conjugation is for 2x2 matrices, got {arr.shape}")
    out = u.T @ arr @ u
    out = (out + out.T) / 2.0  # rounding breaks exact symmetry; restore it
    if isinstance(matrix, AdmissibleMatrix):
        return AdmissibleMatrix(out)
    if isinstance(matrix, ComplexSymMatrix):
        return ComplexSymMatrix(out)
    return out


def diagonalizing_rotation(sym: np.ndarray) -> PlaneRotation:
    """A rotation U with U^T S U diagonal, for real symmetric 2x2 S.

    Deterministic tie-break: the angle is reduced to [0, pi); an already
    diagonal (or degenerate) S gets angle 0.
    """
    s = np.asarray(sym, dtype=float)
    if s.shape != (2, 2):
        raise DimensionError(f"expected a 2x2 matrix, got {s.shape}")
    off = 0.5 * (s[0, 1] + s[1, 0])
    scale = max(float(np.max(np.abs(s))), 1.0)
    if abs(off) <= 1e-14 * scale:
        return PlaneRotation(0.0)
    angle = 0.5 * np.arctan2(2.0 * off, s[0, 0] - s[1, 1])
    if angle < 0.0:
        angle += np.pi
    return PlaneRotation(float(angle))


def _singularity_threshold(arr: np.ndarray) -> float:
    return SINGULARITY_COEFF * arr.shape[0] * max(float(np.max(np.abs(arr))), 1e-300)


def complex_sym_det(matrix) -> complex:
    """Determinant of a complex symmetric matrix (LU factorization)."""
    arr = _as_array(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return complex(np.linalg.det(arr))


def complex_sym_inverse(matrix):
    """Inverse of a complex symmetric matrix; symmetric by construction.

    Raises SingularMatrixError (carrying the determinant) when |det| falls
    below the scale-aware threshold.
    """
    arr = _as_array(matrix)
    det = complex_sym_det(arr)
    if abs(det) <= _singularity_threshold(arr):
        raise SingularMatrixError(f"matrix numerically singular: |det| = {abs(det):.3e}", det)
    inv = np.linalg.inv(arr)
    inv = (inv + inv.T) / 2.0
    if isinstance(matrix, ComplexSymMatrix):
        return ComplexSymMatrix(inv)
    return inv
