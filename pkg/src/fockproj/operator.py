"""The Fock-space projection as an integral operator on R^{2n}.

Complex coordinates z = x1 + i*x2 in C^n are identified with stacked real
vectors [x1; x2] in R^{2n}.  Under that identification the projection is an
integral operator with a Gaussian kernel, it maps centered Gaussians to
Gaussians in closed form, and the L^p norm ratio over Gaussian inputs has a
determinant formula.  Everything here is closed-form; the quadrature module
supplies the independent checks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, SingularMatrixError
from .gaussians import GaussianFunction, continuous_sqrt_det
from .matrices import (
    SINGULARITY_COEFF,
    AdmissibleMatrix,
    check_admissible,
    omega_map,
    symplectic_matrix,
)


@dataclass(frozen=True)
class OperatorConfig:
    """Dimension n, Gaussian weight rate alpha, and Lebesgue exponent p."""

    n: int = 1
    alpha: float = 1.0
    p: float = 2.0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if self.alpha <= 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.p < 1:
            raise DomainError(f"p must be >= 1, got {self.p}")

    @property
    def p_conjugate(self) -> float:
        if self.p == 1:
            return np.inf
        return self.p / (self.p - 1.0)


def _pairing(z, w, n: int):
    """Sesquilinear sum z_i * conj(w_i) over the last axis."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if n == 1 and z.ndim == 0:
        z = z[None]
    if n == 1 and w.ndim == 0:
        w = w[None]
    if z.shape[-1] != n or w.shape[-1] != n:
        raise DimensionError(f"vectors must have length n={n}")
    return z, w, np.sum(z * np.conj(w), axis=-1)


def reproducing_kernel(z, w, cfg: OperatorConfig):
    """exp(alpha * <z, w>): reproduces point values of Fock-space functions."""
    _, _, pair = _pairing(z, w, cfg.n)
    return np.exp(cfg.alpha * pair)


def projection_kernel(z, w, cfg: OperatorConfig):
    """Kernel of the projection on Lebesgue L^p after the weight transfer.

    (alpha/pi)^n * exp(-alpha/2 * (|z|^2 - 2<z,w> + |w|^2)); its modulus is
    (alpha/pi)^n * exp(-alpha/2 |z-w|^2), a convolution kernel.
    """
    z, w, pair = _pairing(z, w, cfg.n)
    sq = np.sum(z * np.conj(z), axis=-1).real + np.sum(w * np.conj(w), axis=-1).real
    return (cfg.alpha / np.pi) ** cfg.n * np.exp(-0.5 * cfg.alpha * (sq - 2.0 * pair))


def weight_multiplier(values, z_points, direction: str, cfg: OperatorConfig):
    """Multiply (forward) or divide (inverse) by the unitary-weight factor.

    The factor (p*alpha/2pi)^{n/p} * exp(-alpha|z|^2/2) turns the weighted
    L^p space into plain Lebesgue L^p isometrically; forward then inverse is
    the identity.
    """
    if direction not in ("forward", "inverse"):
        raise DomainError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    z = np.asarray(z_points, dtype=complex)
    if cfg.n == 1 and (z.ndim == 0 or z.shape[-1] != 1):
        z = z.reshape(-1, 1)
    if z.shape[-1] != cfg.n:
        raise DimensionError(f"points must have length n={cfg.n}")
    scale = (cfg.p * cfg.alpha / (2.0 * np.pi)) ** (cfg.n / cfg.p)
    factor = scale * np.exp(-0.5 * cfg.alpha * np.sum(z * np.conj(z), axis=-1).real)
    vals = np.asarray(values)
    return vals * factor if direction == "forward" else vals / factor


@dataclass(frozen=True)
class KernelBlocks:
    """The three 2n x 2n blocks of the projection kernel's quadratic form."""

    d11: np.ndarray
    d22: np.ndarray
    d12: np.ndarray

    def __post_init__(self):
        for name in ("d11", "d22", "d12"):
            arr = np.asarray(getattr(self, name))
            arr = arr.astype(complex if name == "d12" else float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.d11.shape == self.d22.shape == self.d12.shape) or self.d11.ndim != 2:
            raise DimensionError("blocks must share one square 2n x 2n shape")
        m = self.d11.shape[0]
        if self.d11.shape != (m, m) or m % 2:
            raise DimensionError("blocks must be square with even dimension")
        mineig = float(np.linalg.eigvalsh(np.real(self.block_matrix())).min())
        if mineig < -1e-10:
            raise DomainError(
                f"block real part must be positive semidefinite; min eigenvalue {mineig}"
            )

    def block_matrix(self) -> np.ndarray:
        """Full (4n x 4n) complex symmetric form [[D11, D12], [D12^T, D22]]."""
        top = np.hstack([self.d11.astype(complex), self.d12])
        bot = np.hstack([self.d12.T, self.d22.astype(complex)])
        return np.vstack([top, bot])


def kernel_blocks(cfg: OperatorConfig) -> KernelBlocks:
    """Exponent blocks of the projection kernel in real coordinates.

    D11 = D22 = (alpha/2) I, D12 = -(alpha/2)(I + iJ).  The real part of the
    full form has eigenvalues 0 and alpha, each with multiplicity 2n, which
    is the boundary case of admissibility for Gaussian-kernel operators.
    """
    m = 2 * cfg.n
    eye = np.eye(m)
    j = symplectic_matrix(m)
    half = cfg.alpha / 2.0
    return KernelBlocks(d11=half * eye, d22=half * eye, d12=-half * (eye + 1j * j))


def _a_prime(matrix, cfg: OperatorConfig) -> tuple[AdmissibleMatrix, np.ndarray]:
    mat = matrix if isinstance(matrix, AdmissibleMatrix) else AdmissibleMatrix(matrix)
    if mat.dim != 2 * cfg.n:
        raise DimensionError(f"matrix dim {mat.dim} does not match 2n = {2 * cfg.n}")
    return mat, (2.0 / cfg.alpha) * mat.array


def apply_projection_to_gaussian(matrix, cfg: OperatorConfig) -> GaussianFunction:
    """Image of the centered Gaussian exp(-(x,Ax)) under the projection.

    With A' = (2/alpha) A and M = A' + I, the image is the Gaussian with
    amplitude 2^n/sqrt(det M) and matrix (alpha/2)[I - (I+iJ)M^{-1}(I-iJ)].
    The scaled identity A = (alpha/2) I is a fixed point: the operator is a
    projection and that Gaussian spans its range among centered Gaussians.
    """
    _, ap = _a_prime(matrix, cfg)
    m = 2 * cfg.n
    big = ap + np.eye(m)
    det = complex(np.linalg.det(big))
    if abs(det) < SINGULARITY_COEFF * m * max(1.0, float(np.abs(big).max())):
        raise SingularMatrixError("A' + I is numerically singular", det=det)
    amp = 2.0**cfg.n / continuous_sqrt_det(big)
    j = symplectic_matrix(m)
    inner = (np.eye(m) + 1j * j) @ np.linalg.solve(big, np.eye(m) - 1j * j)
    out = (cfg.alpha / 2.0) * (np.eye(m) - inner)
    out = (out + out.T) / 2.0  # symmetric up to roundoff by construction
    return GaussianFunction(matrix=AdmissibleMatrix(out), amplitude=amp)


def gaussian_norm_ratio(matrix, cfg: OperatorConfig) -> float:
    """||Q g||_p / ||g||_p for the centered Gaussian g = exp(-(x,Ax)).

    ratio^p = 2^{np} * sqrt( det(Re A') / (|det(A'+I)|^p * det(I + W)) )
    with W the real quadratic-form transform of (A'+I)^{-1} (omega_map).
    Depends on A only through A' = (2/alpha)A, hence alpha-invariant at
    fixed A'.  Valid for every p > 0, including p = 1.
    """
    if cfg.p <= 0:
        raise DomainError(f"p must be positive, got {cfg.p}")
    mat, ap = _a_prime(matrix, cfg)
    m = 2 * cfg.n
    big = ap + np.eye(m)
    inv = np.linalg.solve(big, np.eye(m))
    inv = (inv + inv.T) / 2.0
    omega = omega_map(inv)
    sign_o, logdet_o = np.linalg.slogdet(np.eye(m) + omega)
    if sign_o <= 0:
        raise DomainError("I + omega_map((A'+I)^{-1}) is not positive definite")
    sign_r, logdet_r = np.linalg.slogdet(np.real(ap))
    if sign_r <= 0:
        raise DomainError("Re(A') must be positive definite")
    logdet_big = float(np.linalg.slogdet(big)[1])
    p = cfg.p
    log_ratio = cfg.n * np.log(2.0) + (logdet_r - p * logdet_big - logdet_o) / (2.0 * p)
    return float(np.exp(log_ratio))


def abs_kernel_norm_ratio(eigs, cfg: OperatorConfig) -> float:
    """Norm ratio of the modulus-kernel operator on a real-diagonal Gaussian.

    For a real positive definite A' with eigenvalues lambda_i,
    ratio^p = 2^{np} * prod (1 + lambda_i)^{-(p-1)/2}.  Always <= 2^n, with
    equality at p = 1; this dominates gaussian_norm_ratio and is the
    envelope used to push the optimization onto a compact set.
    """
    lam = np.asarray(eigs, dtype=float)
    if lam.shape != (2 * cfg.n,):
        raise DimensionError(f"expected {2 * cfg.n} eigenvalues, got shape {lam.shape}")
    if np.any(lam <= 0):
        raise DomainError("eigenvalues must all be positive")
    if cfg.p < 1:
        raise DomainError(f"p must be >= 1, got {cfg.p}")
    p = cfg.p
    log_ratio = cfg.n * np.log(2.0) - (p - 1.0) / (2.0 * p) * float(np.sum(np.log1p(lam)))
    return float(np.exp(log_ratio))
