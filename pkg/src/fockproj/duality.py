"""Duality landscape of the weighted-L^p holomorphic spaces, checked numerically.

The pairing throughout is (f, h) = integral of f * conj(h) against the unit
Gaussian measure of rate alpha, while the norms live in L^p against the
Gaussian of rate alpha*p/2.  The mismatch between those weights is the
whole story: point-evaluation functionals and reproducing kernels stop
being each other's duals away from p = 2, and their norm quotient grows
like a Gaussian in |w|.  The sandwich check verifies that the dual norm of
the pairing against a fixed polynomial stays between the matched-weight
norm and 2*sharp_norm_factor(p) times it.

All quadrature here is n = 1 (real dimension 2).
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import CounterexampleError, DegreeError, DomainError
from .optimize import sharp_norm_factor
from .quadrature import QuadratureSpec, _gh_pass, quadrature_integrate

MAX_INPUT_DEGREE = 12
MAX_FAMILY_DEGREE = 8


def _normalize_index(key, n: int) -> tuple:
    idx = (key,) if np.isscalar(key) else tuple(int(v) for v in key)
    if len(idx) != n or any(v < 0 or int(v) != v for v in idx):
        raise DomainError(f"bad multi-index {key!r} for n = {n}")
    return tuple(int(v) for v in idx)


def _multi_factorial(idx: tuple) -> float:
    out = 1.0
    for v in idx:
        out *= math.factorial(v)
    return out


class HoloPolynomial:
    """Finite linear combination of holomorphic monomials z^j.

    Coefficients are a map from multi-indices to complex scalars; total
    degree is capped at 12, which is what the quadrature budget certifies.
    """

    __slots__ = ("n", "coefficients")

    def __init__(self, coefficients, n: int = 1):
        if n < 1:
            raise DomainError(f"n must be positive, got {n}")
        clean = {}
        for key, val in dict(coefficients).items():
            idx = _normalize_index(key, n)
            val = complex(val)
            if val != 0:
                clean[idx] = clean.get(idx, 0j) + val
        # merged terms can cancel exactly; a zero entry would corrupt degree
        clean = {idx: val for idx, val in clean.items() if val != 0}
        for idx in clean:
            if sum(idx) > MAX_INPUT_DEGREE:
                raise DegreeError(
                    f"total degree {sum(idx)} exceeds the supported cap {MAX_INPUT_DEGREE}"
                )
        self.n = n
        self.coefficients = clean

    @property
    def degree(self) -> int:
        return max((sum(idx) for idx in self.coefficients), default=0)

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, z):
        pts = np.asarray(z, dtype=complex)
        squeeze = pts.ndim == 0 and self.n == 1
        if self.n == 1:
            flat = np.atleast_1d(pts)
            out = np.zeros(flat.shape, dtype=complex)
            for (j,), c in sorted(self.coefficients.items()):
                out += c * flat**j
            return complex(out[0]) if squeeze else out.reshape(pts.shape)
        if pts.shape[-1] != self.n:
            raise DomainError(f"points must have last axis {self.n}")
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for idx, c in sorted(self.coefficients.items()):
            out += c * np.prod(pts ** np.array(idx), axis=-1)
        return out

    def l2_gamma_norm(self, alpha: float) -> float:
        """Exact L^2(gamma_alpha) norm from the orthogonality relations."""
        total = sum(
            abs(c) ** 2 * _multi_factorial(idx) / alpha ** sum(idx)
            for idx, c in self.coefficients.items()
        )
        return math.sqrt(total)


class MixedPolynomial:
    """Polynomial in z and conj(z), one complex variable.

    Keys are pairs (r, s) for z^r * conj(z)^s.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        clean = {}
        for key, val in dict(coefficients).items():
            r, s = (int(v) for v in key)
            if r < 0 or s < 0:
                raise DomainError(f"bad exponent pair {key!r}")
            val = complex(val)
            if val != 0:
                clean[(r, s)] = clean.get((r, s), 0j) + val
        clean = {key: val for key, val in clean.items() if val != 0}
        for r, s in clean:
            if r + s > MAX_INPUT_DEGREE:
                raise DegreeError(
                    f"total degree {r + s} exceeds the supported cap {MAX_INPUT_DEGREE}"
                )
        self.coefficients = clean

    @property
    def degree(self) -> int:
        return max((r + s for r, s in self.coefficients), default=0)

    def __call__(self, z):
        pts = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.zeros(pts.shape, dtype=complex)
        for (r, s), c in sorted(self.coefficients.items()):
            out += c * pts**r * np.conj(pts) ** s
        return out if np.asarray(z).ndim else complex(out[0])


def monomial_inner_product(j, k, alpha: float, n: int = 1) -> complex:
    """(z^j, z^k) against gamma_alpha: delta_jk * j!/alpha^{|j|}."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    idx_j = _normalize_index(j, n)
    idx_k = _normalize_index(k, n)
    if idx_j != idx_k:
        return 0j
    return complex(_multi_factorial(idx_j) / alpha ** sum(idx_j))


def reproducing_kernel_norm(w, alpha: float, p_conjugate: float) -> float:
    """L^{p'} norm of the kernel section K_w against the pairing weight gamma_alpha.

    exp(p' * alpha * |w|^2 / 4).  Note the measure: this is the norm that
    enters the duality mismatch, not the p'-matched weight.
    """
    if p_conjugate <= 1:
        raise DomainError(f"p_conjugate must exceed 1, got {p_conjugate}")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    w_sq = float(np.sum(np.abs(np.atleast_1d(np.asarray(w, dtype=complex))) ** 2))
    return float(np.exp(p_conjugate * alpha * w_sq / 4.0))


def eval_functional_norm(w, alpha: float, p: float) -> float:
    """Norm of f -> f(w) on the matched-weight space: exp(alpha*|w|^2/p).

    At p = 2 this is sqrt of the kernel diagonal, the classical value.
    """
    if p <= 1:
        raise DomainError(f"p must exceed 1, got {p}")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    w_sq = float(np.sum(np.abs(np.atleast_1d(np.asarray(w, dtype=complex))) ** 2))
    return float(np.exp(alpha * w_sq / p))


def nonduality_ratio(w_norm_sq: float, p: float, alpha: float) -> float:
    """reproducing_kernel_norm / eval_functional_norm at |w|^2 = w_norm_sq.

    exp(alpha*|w|^2*(p-2)^2/(4p(p-1))): identically 1 at p = 2 and
    unbounded in |w| otherwise, which is the quantitative failure of
    kernel-functional duality.
    """
    if p <= 1:
        raise DomainError(f"p must exceed 1, got {p}")
    if alpha <= 0 or w_norm_sq < 0:
        raise DomainError("need alpha > 0 and w_norm_sq >= 0")
    expo = alpha * w_norm_sq * (p - 2.0) ** 2 / (4.0 * p * (p - 1.0))
    return float(np.exp(expo))


def _gamma_density(beta: float, pts: np.ndarray) -> np.ndarray:
    return (beta / np.pi) * np.exp(-beta * (pts[:, 0] ** 2 + pts[:, 1] ** 2))


def gamma_lp_norm(func, p: float, beta: float, spec: QuadratureSpec | None = None) -> float:
    """L^p norm of a callable on C against gamma_beta, by quadrature.

    |f|^p has cusps at the zeros of f whenever p is not an even integer;
    the trapezoid scheme converges through those while Gauss-Hermite
    stalls, so it is the default here.
    """
    if p <= 0 or beta <= 0:
        raise DomainError("need p > 0 and beta > 0")
    spec = spec or QuadratureSpec(
        scheme="adaptive-cartesian", points_per_axis=97, target_rel_tol=3e-8
    )

    def integrand(pts):
        vals = np.abs(func(pts[:, 0] + 1j * pts[:, 1]))
        return vals**p * _gamma_density(beta, pts)

    result = quadrature_integrate(integrand, 2, spec, envelope=beta * np.eye(2))
    return float(result.value.real ** (1.0 / p))


def gamma_pairing(f, g, alpha: float, spec: QuadratureSpec | None = None) -> complex:
    """(f, g) against gamma_alpha by quadrature; the oracle for the exact pairing."""
    spec = spec or QuadratureSpec(points_per_axis=96, target_rel_tol=1e-9)

    def integrand(pts):
        z = pts[:, 0] + 1j * pts[:, 1]
        return f(z) * np.conj(g(z)) * _gamma_density(alpha, pts)

    return quadrature_integrate(integrand, 2, spec, envelope=alpha * np.eye(2)).value


def holo_pairing(f: HoloPolynomial, h: HoloPolynomial, alpha: float) -> complex:
    """Exact pairing of two holomorphic polynomials via orthogonality."""
    if f.n != h.n:
        raise DomainError("polynomials live in different dimensions")
    total = 0j
    for idx, cf in f.coefficients.items():
        ch = h.coefficients.get(idx)
        if ch is not None:
            total += cf * np.conj(ch) * _multi_factorial(idx) / alpha ** sum(idx)
    return complex(total)


def bargmann_project(f, alpha: float, degree: int = MAX_FAMILY_DEGREE, envelope_rate: float | None = None) -> HoloPolynomial:
    """Orthogonal projection onto holomorphic polynomials, one variable.

    MixedPolynomial inputs project exactly term by term:
    z^r conj(z)^s -> r!/((r-s)! alpha^s) z^{r-s} when r >= s, else 0.
    Callables are projected by quadrature of the first `degree`+1 Taylor
    coefficients against gamma_alpha (fixed 200-point tensor rule; the
    caller supplies the Gaussian decay rate of f*gamma_alpha if it differs
    from alpha).  Idempotent on its image by construction.
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if isinstance(f, HoloPolynomial):
        if f.n != 1:
            raise DomainError("projection utilities are one-variable")
        return HoloPolynomial(dict(f.coefficients), n=1)
    if isinstance(f, MixedPolynomial):
        if f.degree > MAX_FAMILY_DEGREE:
            raise DegreeError(
                f"projection input degree {f.degree} exceeds cap {MAX_FAMILY_DEGREE}"
            )
        out: dict = {}
        for (r, s), c in f.coefficients.items():
            if r < s:
                continue
            factor = math.factorial(r) / (math.factorial(r - s) * alpha**s)
            key = r - s
            out[key] = out.get(key, 0j) + c * factor
        return HoloPolynomial(out, n=1)
    if not callable(f):
        raise DomainError("input must be a polynomial type or a callable on C")
    if degree > MAX_INPUT_DEGREE:
        raise DegreeError(f"projection degree {degree} exceeds cap {MAX_INPUT_DEGREE}")
    rate = alpha if envelope_rate is None else float(envelope_rate)
    if rate <= 0:
        raise DomainError("envelope_rate must be positive")
    inv_t = np.eye(2) / math.sqrt(rate)
    coeffs = {}
    for m in range(degree + 1):
        def integrand(pts, order=m):
            z = pts[:, 0] + 1j * pts[:, 1]
            return f(z) * np.conj(z) ** order * _gamma_density(alpha, pts)

        moment, _ = _gh_pass(integrand, 2, 200, inv_t, rate)
        coeffs[m] = moment * alpha**m / math.factorial(m)
    return HoloPolynomial(coeffs, n=1)


@dataclass(frozen=True)
class DualityReport:
    """One sandwich verification: matched norm <= dual estimate <= scaled norm."""

    p: float
    alpha: float
    test_function_id: str
    lhs: float
    middle: float
    rhs: float
    witness: HoloPolynomial

    def __post_init__(self):
        if self.lhs > self.middle * (1.0 + 1e-6):
            raise DomainError(
                f"sandwich lower bound broken: lhs {self.lhs} > middle {self.middle}"
            )
        if self.middle > self.rhs * (1.0 + 1e-6):
            raise DomainError(
                f"sandwich upper bound broken: middle {self.middle} > rhs {self.rhs}"
            )


def _coefficient_id(h: HoloPolynomial) -> str:
    text = ";".join(
        f"{idx}:{c.real:.12e}:{c.imag:.12e}" for idx, c in sorted(h.coefficients.items())
    )
    return f"deg{h.degree}-" + hashlib.sha1(text.encode()).hexdigest()[:8]


def _random_family(rng: np.random.Generator, alpha: float, size: int) -> list:
    """Random degree-<=8 polynomials, coefficients on the orthonormal scale."""
    out = []
    for _ in range(size):
        coeffs = {}
        for j in range(MAX_FAMILY_DEGREE + 1):
            x, y = rng.standard_normal(2)
            coeffs[j] = (x + 1j * y) * alpha ** (j / 2.0) / math.sqrt(math.factorial(j))
        out.append(HoloPolynomial(coeffs, n=1))
    return out


def _holder_witness(h: HoloPolynomial, p: float, alpha: float) -> HoloPolynomial:
    """Projection of the unrestricted pairing extremizer onto polynomials.

    Over all measurable f the pairing/norm ratio is maximized by
    f = h |h|^{p'-2} exp((2-p')*alpha*|z|^2/2); projecting it cannot push
    the ratio below the matched norm of h, which is what makes the lower
    bound of the sandwich achievable by a concrete polynomial.
    """
    pprime = p / (p - 1.0)

    def extremizer(z):
        hz = h(z)
        mag = np.abs(hz)
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = np.where(mag > 0, hz * mag ** (pprime - 2.0), 0j)
        return scaled * np.exp((2.0 - pprime) * alpha * np.abs(z) ** 2 / 2.0)

    # f * gamma_alpha decays at the Gaussian rate alpha*p'/2
    return bargmann_project(
        extremizer, alpha, degree=MAX_INPUT_DEGREE, envelope_rate=alpha * pprime / 2.0
    )


def duality_sandwich_check(
    h: HoloPolynomial,
    p: float,
    alpha: float,
    family_size: int = 32,
    seed: int = 42,
) -> DualityReport:
    """Sandwich the dual norm of pairing-against-h between its closed bounds.

    lhs is the matched-weight norm of h; middle is the best pairing/norm
    ratio over monomials, random polynomials, h itself, and the projected
    Holder extremizer; rhs is 2*sharp_norm_factor(p) times lhs.  The
    sampled middle is a lower bound on the true dual norm, so the slack on
    the first inequality is what the witness family must close.
    """
    if h.n != 1:
        raise DomainError("sandwich check is one-variable")
    if h.is_zero():
        raise DomainError("h must be nonzero")
    if h.degree > MAX_FAMILY_DEGREE:
        raise DegreeError(f"h degree {h.degree} exceeds cap {MAX_FAMILY_DEGREE}")
    if p <= 1:
        raise DomainError(f"p must exceed 1, got {p}")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    pprime = p / (p - 1.0)
    # p = 2 norms are exact sums over coefficients; elsewhere quadrature
    lhs = h.l2_gamma_norm(alpha) if p == 2 else gamma_lp_norm(h, pprime, alpha * pprime / 2.0)

    family = [HoloPolynomial({j: 1.0}) for j in range(MAX_FAMILY_DEGREE + 1)]
    family.append(HoloPolynomial(dict(h.coefficients)))
    family.extend(_random_family(np.random.default_rng(seed), alpha, family_size))
    family.append(_holder_witness(h, p, alpha))

    middle = -np.inf
    witness = family[0]
    for f in family:
        if f.is_zero():
            continue
        pair = abs(holo_pairing(f, h, alpha))
        if pair == 0.0:
            continue
        if p == 2:
            norm = f.l2_gamma_norm(alpha)
        else:
            norm = gamma_lp_norm(f, p, alpha * p / 2.0)
        ratio = pair / norm
        if ratio > middle:
            middle, witness = ratio, f
    rhs = 2.0 * sharp_norm_factor(p) * lhs

    slack = 0.05
    if middle < lhs * (1.0 - slack) or middle > rhs * (1.0 + slack):
        raise CounterexampleError(
            f"sandwich estimate {middle} escapes [{lhs * (1 - slack)}, {rhs * (1 + slack)}]",
            witness=witness,
        )
    return DualityReport(
        p=p,
        alpha=alpha,
        test_function_id=_coefficient_id(h),
        lhs=float(lhs),
        middle=float(middle),
        rhs=float(rhs),
        witness=witness,
    )
