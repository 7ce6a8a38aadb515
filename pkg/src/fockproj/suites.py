"""Named invariant suites behind the `verify` CLI command.

Each suite runs a list of property checks and reports one CheckResult per
property: name, pass/fail, the worst residual observed, and enough detail
to replay a failure (seed and parameters).  Checks never raise; unexpected
exceptions are captured as failures.  The heavyweight acceptance versions
of these properties live in the test suite; these are the operational
re-checks, sized to finish in seconds to minutes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .duality import (
    HoloPolynomial,
    MixedPolynomial,
    bargmann_project,
    duality_sandwich_check,
    eval_functional_norm,
    gamma_pairing,
    monomial_inner_product,
    nonduality_ratio,
    reproducing_kernel_norm,
)
from .gaussians import GaussianFunction, gaussian_integral, gaussian_lp_norm
from .matrices import AdmissibleMatrix, PlaneRotation, conjugate_by_rotation
from .objective import (
    matrix_from_coords,
    objective_coords,
    objective_matrix,
    tau_three_forms,
)
from .operator import (
    OperatorConfig,
    abs_kernel_norm_ratio,
    apply_projection_to_gaussian,
    gaussian_norm_ratio,
    kernel_blocks,
)
from .optimize import (
    critical_objective_value,
    find_critical_point,
    sharp_norm,
    sharp_norm_factor,
    tensorized_norm,
    verify_global_max,
)
from .quadrature import expquad_grid, expquad_separable

SUITE_NAMES = ("quadrature", "hp", "optimizer", "duality", "all")
P_GRID = (1.1, 4.0 / 3.0, 1.5, 2.0, 3.0, 4.0, 10.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    detail: str = ""


def _run_check(results: list, name: str, tol: float, fn, detail: str = ""):
    try:
        residual = float(fn())
    except Exception as exc:  # a failing property must report, not crash the suite
        results.append(CheckResult(name, False, float("nan"), f"{detail} raised {exc!r}"))
        return
    results.append(CheckResult(name, residual <= tol, residual, detail))


def _random_admissible(rng: np.random.Generator, k: int) -> np.ndarray:
    """Entries bounded by ~3, real-part min eigenvalue >= 0.1."""
    w = rng.normal(size=(k, k))
    re = w @ w.T / k + 0.15 * np.eye(k)
    scale = max(1.0, float(np.abs(re).max()) / 2.5)
    re /= scale
    im = rng.uniform(-1.2, 1.2, (k, k))
    return re + 1j * (im + im.T) / 2.0


def suite_quadrature(seed: int = 42, budget: int = 100_000) -> list:
    results: list = []
    rng = np.random.default_rng(np.random.SeedSequence((seed, 1)))
    cases = max(20, min(100, budget // 1000))
    split = {1: cases * 45 // 100, 2: cases * 35 // 100}
    split[4] = cases - split[1] - split[2]

    def oracle_agreement():
        worst = 0.0
        for k, count in split.items():
            for _ in range(count):
                a = _random_admissible(rng, k)
                v = (rng.normal(size=k) + 1j * rng.normal(size=k)) * 0.4
                closed = gaussian_integral(GaussianFunction(AdmissibleMatrix(a), shift=v))
                path = expquad_grid if k == 2 else expquad_separable
                value, _ = path(a, v)
                worst = max(worst, abs(value - closed) / abs(closed))
        return worst

    _run_check(
        results,
        "closed Gaussian integral vs quadrature (k in {1,2,4})",
        1e-7,
        oracle_agreement,
        f"seed={seed} cases={cases}",
    )

    def scaling():
        worst = 0.0
        for _ in range(20):
            a = _random_admissible(rng, 2)
            t = float(rng.uniform(0.2, 4.0))
            lhs = gaussian_integral(GaussianFunction(AdmissibleMatrix(t * a)))
            rhs = t**-1.0 * gaussian_integral(GaussianFunction(AdmissibleMatrix(a)))
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        return worst

    _run_check(results, "integral scaling A -> tA", 1e-12, scaling, f"seed={seed}")

    def tensorization():
        worst = 0.0
        for _ in range(20):
            a1 = _random_admissible(rng, 1)
            a2 = _random_admissible(rng, 2)
            block = np.zeros((3, 3), dtype=complex)
            block[:1, :1], block[1:, 1:] = a1, a2
            lhs = gaussian_integral(GaussianFunction(AdmissibleMatrix(block)))
            rhs = gaussian_integral(GaussianFunction(AdmissibleMatrix(a1))) * gaussian_integral(
                GaussianFunction(AdmissibleMatrix(a2))
            )
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        return worst

    _run_check(results, "block-diagonal tensorization", 1e-12, tensorization, f"seed={seed}")

    def lp_vs_quadrature():
        worst = 0.0
        for _ in range(6):
            a = _random_admissible(rng, 2)
            closed = gaussian_lp_norm(a, 3.0)
            value, _ = expquad_separable(3.0 * np.real(a), np.zeros(2))
            worst = max(worst, abs(value.real ** (1 / 3.0) - closed) / closed)
        return worst

    _run_check(results, "L^p norm vs quadrature (p=3)", 1e-8, lp_vs_quadrature, f"seed={seed}")

    def im_independence():
        a = _random_admissible(rng, 2)
        base = gaussian_lp_norm(a, 2.5)
        shifted = gaussian_lp_norm(a + 0.7j * np.eye(2), 2.5)
        return abs(base - shifted)

    _run_check(results, "L^p norm ignores Im(A) exactly", 0.0, im_independence, f"seed={seed}")
    return results


def suite_hp(seed: int = 42, budget: int = 100_000) -> list:
    results: list = []
    rng = np.random.default_rng(np.random.SeedSequence((seed, 2)))

    def rand_coords(spread: float = 1.0):
        a, d = np.exp(rng.uniform(-1.5, 1.5, 2)) * spread
        b = rng.uniform(-0.95, 0.95) * math.sqrt(a * d)
        e, g, f = rng.uniform(-2.0, 2.0, 3)
        return (a, d, b, e, g, f)

    def tau_agreement():
        worst = 0.0
        for _ in range(2000):
            a, d = rng.uniform(0.1, 5.0, 2)
            e, g, f = rng.uniform(0.1, 5.0, 3)
            t0, t1, t2 = tau_three_forms(a, d, e, g, f)
            scale = max(abs(t0), abs(t1), abs(t2))
            worst = max(worst, abs(t0 - t1) / scale, abs(t0 - t2) / scale)
        return worst

    _run_check(results, "tau three-way identity (b=0)", 1e-12, tau_agreement, f"seed={seed}")

    def coords_vs_matrix():
        worst = 0.0
        for _ in range(200):
            c = rand_coords()
            ev = objective_coords(c, 3.0)
            hm = objective_matrix(matrix_from_coords(c), 3.0)
            worst = max(worst, abs(ev.value - hm) / hm)
        return worst

    _run_check(results, "objective coords vs matrix form", 1e-12, coords_vs_matrix, f"seed={seed}")

    def rotation_invariance():
        worst = 0.0
        for _ in range(100):
            c = rand_coords()
            mat = AdmissibleMatrix(matrix_from_coords(c))
            rot = PlaneRotation(float(rng.uniform(0, 2 * np.pi)))
            h0 = objective_matrix(mat, 3.0)
            h1 = objective_matrix(conjugate_by_rotation(mat, rot), 3.0)
            worst = max(worst, abs(h0 - h1) / h0)
        return worst

    _run_check(results, "rotation invariance of the objective", 1e-10, rotation_invariance, f"seed={seed}")

    def swap_symmetry():
        worst = 0.0
        for _ in range(100):
            a, d, _, e, g, f = rand_coords()
            lhs = objective_coords((a, d, 0.0, e, g, f), 2.7).value
            rhs = objective_coords((d, a, 0.0, g, e, -f), 2.7).value
            worst = max(worst, abs(lhs - rhs) / lhs)
        return worst

    _run_check(results, "swap symmetry (a,d,e,g,f) -> (d,a,g,e,-f)", 1e-12, swap_symmetry, f"seed={seed}")

    def alpha_independence():
        worst = 0.0
        for _ in range(100):
            ap = matrix_from_coords(rand_coords())
            base = None
            for alpha in (0.5, 1.0, 2.0, 8.0):
                cfg = OperatorConfig(n=1, alpha=alpha, p=2.4)
                r = gaussian_norm_ratio((alpha / 2.0) * ap, cfg)
                base = r if base is None else base
                worst = max(worst, abs(r - base) / base)
        return worst

    _run_check(results, "norm ratio alpha-independence at fixed A'", 1e-12, alpha_independence, f"seed={seed}")

    def domination():
        worst = -np.inf
        cfg = OperatorConfig(n=1, alpha=2.0, p=3.0)
        for _ in range(200):
            ap = matrix_from_coords(rand_coords())
            ratio = gaussian_norm_ratio(ap, cfg)
            envelope = abs_kernel_norm_ratio(np.linalg.eigvalsh(np.real(ap)), cfg)
            worst = max(worst, ratio - envelope * (1 + 1e-12))
        return max(worst, 0.0)

    _run_check(results, "modulus-kernel ratio dominates the true ratio", 0.0, domination, f"seed={seed}")

    def fixed_point():
        cfg = OperatorConfig(n=2, alpha=1.7, p=3.0)
        out = apply_projection_to_gaussian((cfg.alpha / 2.0) * np.eye(4), cfg)
        return max(
            abs(out.amplitude - 1.0),
            float(np.abs(out.matrix.array - (cfg.alpha / 2.0) * np.eye(4)).max()),
        )

    _run_check(results, "projection fixes its range Gaussian", 1e-13, fixed_point)

    def block_spectrum():
        worst = 0.0
        for n, alpha in ((1, 1.0), (2, 3.0)):
            blocks = kernel_blocks(OperatorConfig(n=n, alpha=alpha, p=2.0))
            eigs = np.sort(np.linalg.eigvalsh(np.real(blocks.block_matrix())))
            expected = np.sort(np.array([0.0] * (2 * n) + [alpha] * (2 * n)))
            worst = max(worst, float(np.abs(eigs - expected).max()))
        return worst

    _run_check(results, "kernel block spectrum {0, alpha}", 1e-12, block_spectrum)

    def batch_vs_scalar():
        coords = np.array([rand_coords() for _ in range(500)])
        batch = _kernels.objective_batch(np.ascontiguousarray(coords), 3.0)
        worst = 0.0
        for row, val in zip(coords, batch):
            worst = max(worst, abs(objective_coords(row, 3.0).value - val) / val)
        return worst

    _run_check(results, "batched objective vs scalar reference", 1e-13, batch_vs_scalar, f"seed={seed}")
    return results


def suite_optimizer(seed: int = 42, budget: int = 100_000) -> list:
    results: list = []

    def critical_points():
        worst = 0.0
        for p in P_GRID:
            if p == 2:
                continue
            point = find_critical_point(p, seed=seed)
            target = np.eye(2) / (p - 1.0)
            worst = max(
                worst,
                float(np.abs(point.matrix.array - target).max()),
                abs(point.value - critical_objective_value(p)) / critical_objective_value(p),
            )
        return worst

    _run_check(results, "critical point matches closed form on the p grid", 1e-6, critical_points, f"seed={seed}")

    def norm_agreement():
        worst = 0.0
        for p in P_GRID:
            closed = sharp_norm(p, 1)
            opt = tensorized_norm(p, 1, seed=seed)
            worst = max(worst, abs(opt - closed) / closed)
        return worst

    _run_check(results, "optimizer norm vs closed form on the p grid", 1e-8, norm_agreement, f"seed={seed}")

    def conjugate_symmetry():
        worst = 0.0
        for p in (1.2, 1.5, 3.0, 4.0, 10.0):
            q = p / (p - 1.0)
            worst = max(worst, abs(sharp_norm(p, 3) - sharp_norm(q, 3)))
        return worst

    _run_check(results, "sharp norm conjugate-exponent symmetry", 1e-12, conjugate_symmetry)

    def scalar_family_max():
        from scipy.optimize import minimize_scalar

        worst = 0.0
        for p in (1.5, 3.0, 4.0):
            res = minimize_scalar(
                lambda c, pp=p: -((2.0**pp * c / (1.0 + c) ** pp) ** (1.0 / pp)),
                bracket=(0.05, 1.0, 20.0),
                method="golden",
                options={"xtol": 1e-12},
            )
            worst = max(
                worst,
                abs(-res.fun - sharp_norm(p, 1)) / sharp_norm(p, 1),
                abs(res.x - 1.0 / (p - 1.0)),
            )
        return worst

    _run_check(results, "scalar-matrix family attains the norm at c = 1/(p-1)", 1e-6, scalar_family_max)

    def global_max():
        worst = 0.0
        for p in P_GRID:
            report = verify_global_max(p, sample_budget=budget, seed=seed)
            crit = report.critical_value
            worst = max(worst, (report.max_sample_value - crit) / crit, 0.0)
        return worst

    _run_check(
        results,
        "stratified sampling + multistart stay below the critical value",
        1e-12,
        global_max,
        f"seed={seed} budget={budget}",
    )

    def tensorization():
        worst = 0.0
        for p, n in ((3.0, 2), (1.5, 3), (2.0, 5)):
            worst = max(worst, abs(tensorized_norm(p, n, seed=seed) - sharp_norm(p, n)) / sharp_norm(p, n))
        return worst

    _run_check(results, "tensorized norm matches closed form", 1e-8, tensorization, f"seed={seed}")
    return results


def suite_duality(seed: int = 42, budget: int = 100_000) -> list:
    results: list = []
    rng = np.random.default_rng(np.random.SeedSequence((seed, 3)))
    alpha = 1.3

    def orthonormality():
        worst = 0.0
        for j in range(5):
            for k in range(5):
                phi_j = HoloPolynomial({j: alpha ** (j / 2.0) / math.sqrt(math.factorial(j))})
                phi_k = HoloPolynomial({k: alpha ** (k / 2.0) / math.sqrt(math.factorial(k))})
                quad = gamma_pairing(phi_j, phi_k, alpha)
                exact = 1.0 if j == k else 0.0
                worst = max(worst, abs(quad - exact))
        return worst

    _run_check(results, "normalized monomials orthonormal by quadrature", 1e-8, orthonormality)

    def closed_inner_products():
        worst = 0.0
        for j in range(5):
            for k in range(5):
                quad = gamma_pairing(HoloPolynomial({j: 1.0}), HoloPolynomial({k: 1.0}), alpha)
                worst = max(worst, abs(quad - monomial_inner_product(j, k, alpha)))
        return worst

    _run_check(results, "monomial inner products vs quadrature", 1e-8, closed_inner_products)

    def reproducing_property():
        worst = 0.0
        for _ in range(10):
            w = complex(*rng.normal(scale=0.6, size=2))
            coeffs = {j: complex(*rng.standard_normal(2)) / math.factorial(j) for j in range(7)}
            f = HoloPolynomial(coeffs)
            kernel_section = lambda z, ww=w: np.exp(alpha * z * np.conj(ww))
            pair = gamma_pairing(f, kernel_section, alpha)
            worst = max(worst, abs(pair - f(w)) / max(abs(f(w)), 1e-12))
        return worst

    _run_check(results, "kernel section reproduces point values", 1e-7, reproducing_property, f"seed={seed}")

    def kernel_norm_quadrature():
        worst = 0.0
        for _ in range(10):
            w = complex(*rng.normal(scale=0.7, size=2))
            pp = float(rng.uniform(1.2, 4.0))
            closed = reproducing_kernel_norm(w, alpha, pp)
            section = lambda z, ww=w: np.exp(alpha * z * np.conj(ww))

            def integrand(pts):
                z = pts[:, 0] + 1j * pts[:, 1]
                dens = (alpha / np.pi) * np.exp(-alpha * (pts[:, 0] ** 2 + pts[:, 1] ** 2))
                return np.abs(section(z)) ** pp * dens

            from .quadrature import quadrature_integrate

            quad = quadrature_integrate(integrand, 2, envelope=alpha * np.eye(2))
            worst = max(worst, abs(quad.value.real ** (1.0 / pp) - closed) / closed)
        return worst

    _run_check(results, "kernel-section norm closed form vs quadrature", 1e-6, kernel_norm_quadrature, f"seed={seed}")

    def consistency_and_growth():
        worst = 0.0
        for _ in range(50):
            w_sq = float(rng.uniform(0.0, 3.0))
            p = float(rng.uniform(1.2, 5.0))
            a = float(rng.uniform(0.5, 3.0))
            lhs = nonduality_ratio(w_sq, p, a)
            rhs = reproducing_kernel_norm(math.sqrt(w_sq), a, p / (p - 1.0)) / eval_functional_norm(
                math.sqrt(w_sq), a, p
            )
            worst = max(worst, abs(lhs - rhs) / rhs)
        grid = [nonduality_ratio(float(s), 4.0, 1.0) for s in range(1, 6)]
        if any(b <= a for a, b in zip(grid, grid[1:])):
            worst = max(worst, 1.0)
        return worst

    _run_check(results, "growth ratio identity and monotonicity", 1e-12, consistency_and_growth, f"seed={seed}")

    def projection_rules():
        worst = 0.0
        fixed = bargmann_project(MixedPolynomial({(3, 0): 1.0}), alpha)
        worst = max(worst, abs(fixed.coefficients.get((3,), 0j) - 1.0))
        killed = bargmann_project(MixedPolynomial({(0, 1): 1.0}), alpha)
        worst = max(worst, 0.0 if killed.is_zero() else 1.0)
        sq = bargmann_project(MixedPolynomial({(1, 1): 1.0}), alpha)
        worst = max(worst, abs(sq.coefficients.get((0,), 0j) - 1.0 / alpha))
        twice = bargmann_project(sq, alpha)
        worst = max(worst, abs(twice.coefficients.get((0,), 0j) - sq.coefficients.get((0,), 0j)))
        return worst

    _run_check(results, "projection fixes, annihilates, and is idempotent", 1e-13, projection_rules)

    def sandwiches():
        worst = 0.0
        for p in (1.5, 3.0):
            for _ in range(2):
                coeffs = {j: complex(*rng.standard_normal(2)) for j in range(6)}
                report = duality_sandwich_check(
                    HoloPolynomial(coeffs), p, alpha, family_size=12, seed=seed
                )
                worst = max(
                    worst,
                    (report.lhs - report.middle) / report.lhs,
                    (report.middle - report.rhs) / report.rhs,
                )
        return max(worst, 0.0)

    _run_check(results, "dual-norm sandwich on random polynomials", 1e-6, sandwiches, f"seed={seed}")
    return results


_SUITES = {
    "quadrature": suite_quadrature,
    "hp": suite_hp,
    "optimizer": suite_optimizer,
    "duality": suite_duality,
}


def run_suite(name: str, seed: int = 42, budget: int = 100_000) -> list:
    """Run one named suite, or all of them in declaration order."""
    if name not in SUITE_NAMES:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITE_NAMES}")
    if name == "all":
        out: list = []
        for key in ("quadrature", "hp", "optimizer", "duality"):
            out.extend(_SUITES[key](seed=seed, budget=budget))
        return out
    return _SUITES[name](seed=seed, budget=budget)
