import math

import numpy as np
import pytest

from fockproj import (
    DegreeError,
    DomainError,
    DualityReport,
    HoloPolynomial,
    MixedPolynomial,
    bargmann_project,
    duality_sandwich_check,
    eval_functional_norm,
    gamma_lp_norm,
    gamma_pairing,
    holo_pairing,
    monomial_inner_product,
    nonduality_ratio,
    reproducing_kernel_norm,
)

# j! / 1.7^j for j = 0..4, frozen independently
IP_TABLE_17 = [
    1.0,
    0.58823529411764708,
    0.69204152249134954,
    1.2212497455729698,
    2.8735288131128702,
]

# E_{gamma_beta} |z|^q, frozen from an independent closed evaluation
MOMENT_15_13 = 0.75489673088654985  # q = 1.5, beta = 1.3
MOMENT_30_20 = 0.46999280149331263  # q = 3.0, beta = 2.0

PINNED_KERNEL_NORM = 1.2443645524750326  # w = 0.7+0.2i, alpha = 1.1, exponent 1.5
PINNED_NONDUALITY = {
    (2.0, 3.0, 1.0): 1.086904049521229,
    (1.0, 1.5, 2.0): 1.1813604128656459,
}


class TestHoloPolynomial:
    def test_merges_and_drops_zero_terms(self):
        h = HoloPolynomial({0: 1.0, 1: 2.0, (1,): -2.0, 3: 0.0})
        assert h.coefficients == {(0,): 1.0 + 0j}
        assert h.degree == 0
        assert not h.is_zero()
        assert HoloPolynomial({}).is_zero()

    def test_pointwise_evaluation(self):
        h = HoloPolynomial({0: 1.0, 2: -1.5j})
        z = 0.4 + 0.7j
        assert h(z) == pytest.approx(1.0 - 1.5j * z * z, rel=1e-15)
        batch = h(np.array([0.0 + 0j, z]))
        assert batch.shape == (2,)
        assert batch[0] == 1.0

    def test_degree_cap(self):
        with pytest.raises(DegreeError):
            HoloPolynomial({13: 1.0})

    def test_l2_norm_from_orthogonality(self):
        for j, ip in enumerate(IP_TABLE_17):
            h = HoloPolynomial({j: 1.0})
            assert h.l2_gamma_norm(1.7) == pytest.approx(math.sqrt(ip), rel=1e-14)
        mixed = HoloPolynomial({0: 3.0, 2: 4.0j})
        expected = math.sqrt(9.0 * IP_TABLE_17[0] + 16.0 * IP_TABLE_17[2])
        assert mixed.l2_gamma_norm(1.7) == pytest.approx(expected, rel=1e-14)


class TestMixedPolynomial:
    def test_evaluation(self):
        f = MixedPolynomial({(2, 1): 1.0})
        z = 0.3 - 0.8j
        assert f(z) == pytest.approx(z * z * np.conj(z), rel=1e-15)
        assert f.degree == 3

    def test_bad_exponents(self):
        with pytest.raises(DomainError):
            MixedPolynomial({(-1, 0): 1.0})
        with pytest.raises(DegreeError):
            MixedPolynomial({(7, 6): 1.0})


class TestInnerProducts:
    def test_monomial_table(self):
        for j, expected in enumerate(IP_TABLE_17):
            assert monomial_inner_product(j, j, 1.7) == pytest.approx(expected, rel=1e-14)

    def test_orthogonality(self):
        assert monomial_inner_product(1, 3, 1.7) == 0.0
        assert monomial_inner_product(4, 0, 0.6) == 0.0

    def test_quadrature_agrees(self):
        alpha = 1.4
        f2 = HoloPolynomial({2: 1.0})
        f13 = HoloPolynomial({1: 1.0}), HoloPolynomial({3: 1.0})
        diag = gamma_pairing(f2, f2, alpha)
        assert diag == pytest.approx(monomial_inner_product(2, 2, alpha), rel=1e-8)
        cross = gamma_pairing(f13[0], f13[1], alpha)
        assert abs(cross) < 1e-8

    def test_holo_pairing_is_exact(self):
        alpha = 0.9
        f = HoloPolynomial({0: 2.0, 1: 1.0 - 1.0j})
        h = HoloPolynomial({1: 3.0j, 2: 1.0})
        expected = (1.0 - 1.0j) * np.conj(3.0j) * (1.0 / alpha)
        assert holo_pairing(f, h, alpha) == pytest.approx(expected, rel=1e-14)


class TestFunctionalNorms:
    def test_pinned_kernel_section_norm(self):
        assert reproducing_kernel_norm(0.7 + 0.2j, 1.1, 1.5) == pytest.approx(
            PINNED_KERNEL_NORM, rel=1e-14
        )

    def test_growth_identity(self):
        # the mismatch between the kernel-section norm and the evaluation
        # functional norm is exactly the nonduality ratio
        for w, alpha, p in ((0.7 + 0.2j, 1.1, 3.0), (1.1 - 0.4j, 0.8, 1.6)):
            pprime = p / (p - 1.0)
            lhs = reproducing_kernel_norm(w, alpha, pprime) / eval_functional_norm(w, alpha, p)
            assert nonduality_ratio(abs(w) ** 2, p, alpha) == pytest.approx(lhs, rel=1e-13)

    def test_pinned_nonduality_values(self):
        for (wsq, p, alpha), expected in PINNED_NONDUALITY.items():
            assert nonduality_ratio(wsq, p, alpha) == pytest.approx(expected, rel=1e-14)

    def test_nonduality_trivial_at_two(self):
        for wsq in (0.0, 1.0, 9.0):
            assert nonduality_ratio(wsq, 2.0, 1.3) == 1.0

    def test_nonduality_monotone_in_radius(self):
        vals = [nonduality_ratio(wsq, 3.0, 1.0) for wsq in (0.5, 1.0, 2.0, 4.0)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestGammaLpNorm:
    def test_cusp_norm_matches_closed_moment(self):
        # |z| has a cusp at the origin: this is the cartesian scheme's job
        norm = gamma_lp_norm(np.abs, 1.5, 1.3)
        assert norm == pytest.approx(MOMENT_15_13 ** (1.0 / 1.5), rel=5e-7)
        norm3 = gamma_lp_norm(np.abs, 3.0, 2.0)
        assert norm3 == pytest.approx(MOMENT_30_20 ** (1.0 / 3.0), rel=5e-7)

    def test_polynomial_p2_matches_exact_norm(self):
        h = HoloPolynomial({1: 1.0, 2: 0.5})
        alpha = 1.2
        assert gamma_lp_norm(h, 2.0, alpha) == pytest.approx(
            h.l2_gamma_norm(alpha), rel=1e-7
        )


class TestProjection:
    def test_holomorphic_inputs_are_fixed(self):
        h = HoloPolynomial({0: 1.0, 3: 2.0 - 1.0j})
        out = bargmann_project(h, alpha=1.3)
        assert out.coefficients == h.coefficients

    def test_antiholomorphic_terms_annihilated(self):
        out = bargmann_project(MixedPolynomial({(0, 3): 5.0}), alpha=1.0)
        assert out.is_zero()

    def test_mixed_term_rules(self):
        # z conj(z) -> 1/alpha, z^2 conj(z) -> (2/alpha) z
        out1 = bargmann_project(MixedPolynomial({(1, 1): 1.0}), alpha=1.0)
        assert out1.coefficients == {(0,): 1.0 + 0j}
        out2 = bargmann_project(MixedPolynomial({(2, 1): 1.0}), alpha=2.0)
        assert out2.coefficients == {(1,): 1.0 + 0j}

    def test_idempotent(self):
        f = MixedPolynomial({(2, 1): 1.0, (1, 0): 0.5, (0, 2): -3.0})
        once = bargmann_project(f, alpha=1.1)
        twice = bargmann_project(once, alpha=1.1)
        assert twice.coefficients == once.coefficients

    def test_callable_path_matches_exact_rules(self):
        out = bargmann_project(lambda z: z * np.abs(z) ** 2, alpha=1.0, degree=6)
        coeffs = dict(out.coefficients)
        lead = coeffs.pop((1,), 0j)
        assert lead == pytest.approx(2.0, rel=1e-7)
        assert all(abs(c) < 1e-7 for c in coeffs.values())

    def test_degree_caps(self):
        with pytest.raises(DegreeError):
            bargmann_project(MixedPolynomial({(5, 4): 1.0}), alpha=1.0)
        with pytest.raises(DegreeError):
            bargmann_project(lambda z: z, alpha=1.0, degree=13)

    def test_rejects_non_functions(self):
        with pytest.raises(DomainError):
            bargmann_project("not a function", alpha=1.0)


class TestSandwich:
    def test_constant_at_two_is_tight_everywhere(self):
        report = duality_sandwich_check(HoloPolynomial({0: 1.0}), p=2.0, alpha=1.0, family_size=4)
        assert report.lhs == pytest.approx(1.0, rel=1e-12)
        assert report.middle == pytest.approx(1.0, rel=1e-12)
        assert report.rhs == pytest.approx(1.0, rel=1e-12)

    def test_linear_test_function(self):
        report = duality_sandwich_check(HoloPolynomial({1: 1.0}), p=3.0, alpha=1.0, family_size=8)
        # matched-weight norm of z: (Gamma(1.75) / 0.75^0.75)^{2/3}
        closed = (math.gamma(1.75) / 0.75**0.75) ** (2.0 / 3.0)
        assert report.lhs == pytest.approx(closed, rel=1e-6)
        assert report.middle >= report.lhs * 0.95
        assert report.middle <= report.rhs * 1.05
        assert report.p == 3.0
        assert not report.witness.is_zero()

    def test_invalid_inputs(self):
        with pytest.raises(DomainError):
            duality_sandwich_check(HoloPolynomial({}), p=3.0, alpha=1.0)
        with pytest.raises(DomainError):
            duality_sandwich_check(HoloPolynomial({1: 1.0}), p=1.0, alpha=1.0)
        with pytest.raises(DegreeError):
            duality_sandwich_check(HoloPolynomial({9: 1.0}), p=3.0, alpha=1.0)

    def test_inconsistent_report_rejected(self):
        with pytest.raises(DomainError):
            DualityReport(
                p=3.0,
                alpha=1.0,
                test_function_id="unit-test",
                lhs=2.0,
                middle=1.0,
                rhs=3.0,
                witness=HoloPolynomial({0: 1.0}),
            )
