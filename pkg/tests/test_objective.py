import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fockproj import (
    AdmissibilityError,
    DimensionError,
    PlaneRotation,
    conjugate_by_rotation,
    coords_from_matrix,
    matrix_from_coords,
    objective_coords,
    objective_gradient,
    objective_matrix,
    tau_three_forms,
)
from fockproj._kernels import objective_batch

# (a, d, b, e, g, f) points with (a, d, b) inside the cone
SAMPLE_POINTS = [
    (0.5, 0.5, 0.0, 0.0, 0.0, 0.0),
    (1.0, 2.0, 0.5, 0.3, -0.4, 0.2),
    (3.0, 0.2, -0.6, 2.0, 1.5, -1.0),
    (0.05, 8.0, 0.1, -4.0, 0.7, 3.0),
    (2.0, 2.0, 1.9, 0.0, 0.0, 5.0),
]


def fd_gradient(coords, p, step=1e-6):
    coords = np.asarray(coords, dtype=float)
    out = np.zeros(6)
    for i in range(6):
        h = step * max(1.0, abs(coords[i]))
        lo, hi = coords.copy(), coords.copy()
        lo[i] -= h
        hi[i] += h
        out[i] = (objective_coords(hi, p).value - objective_coords(lo, p).value) / (2 * h)
    return out


class TestCoordinateMaps:
    def test_roundtrip(self):
        coords = (1.0, 2.0, 0.5, 0.3, -0.4, 0.2)
        assert coords_from_matrix(matrix_from_coords(coords)) == coords

    def test_matrix_layout(self):
        m = matrix_from_coords((1.0, 2.0, 3.0, 4.0, 5.0, 6.0))
        assert m[0, 0] == 1.0 + 4.0j
        assert m[1, 1] == 2.0 + 5.0j
        assert m[0, 1] == m[1, 0] == 3.0 + 6.0j

    def test_shape_check(self):
        with pytest.raises(DimensionError):
            coords_from_matrix(np.eye(3))


class TestObjectiveValue:
    @pytest.mark.parametrize("p", [1.2, 2.0, 3.0, 7.0])
    def test_coordinate_and_matrix_forms_agree(self, p):
        # two independent computation paths: coordinate arithmetic versus
        # determinants of the 2x2 complex form
        for coords in SAMPLE_POINTS:
            via_coords = objective_coords(coords, p).value
            via_matrix = objective_matrix(matrix_from_coords(coords), p)
            assert via_matrix == pytest.approx(via_coords, rel=1e-11)

    @pytest.mark.parametrize(
        "p,expected",
        [(1.5, 4.0 / 27.0), (2.0, 1.0 / 16.0), (3.0, 16.0 / 729.0), (4.0, 729.0 / 65536.0)],
    )
    def test_value_at_scaled_identity(self, p, expected):
        c = 1.0 / (p - 1.0)
        ev = objective_coords((c, c, 0.0, 0.0, 0.0, 0.0), p)
        assert ev.value == pytest.approx(expected, rel=1e-14)

    def test_rotation_invariance(self, rand_admissible):
        rng = np.random.default_rng(41)
        for _ in range(10):
            mat = rand_admissible(rng, 2, im_scale=1.5)
            base = objective_matrix(mat, 2.7)
            rotated = conjugate_by_rotation(mat, PlaneRotation(float(rng.uniform(0, np.pi))))
            assert objective_matrix(rotated, 2.7) == pytest.approx(base, rel=1e-11)

    def test_swap_symmetry_on_zero_offdiagonal(self):
        for a, d, b, e, g, f in SAMPLE_POINTS:
            if b != 0.0:
                continue
            lhs = objective_coords((a, d, 0.0, e, g, f), 3.3).value
            rhs = objective_coords((d, a, 0.0, g, e, -f), 3.3).value
            assert rhs == pytest.approx(lhs, rel=1e-13)

    def test_cone_violations_raise(self):
        with pytest.raises(AdmissibilityError):
            objective_coords((-1.0, 1.0, 0.0, 0.0, 0.0, 0.0), 2.0)
        with pytest.raises(AdmissibilityError):
            objective_coords((1.0, 1.0, 1.5, 0.0, 0.0, 0.0), 2.0)

    def test_evaluation_intermediates(self):
        ev = objective_coords((1.0, 2.0, 0.5, 0.3, -0.4, 0.2), 3.0)
        assert ev.a_shift == 2.0
        assert ev.d_shift == 3.0
        assert ev.tau == pytest.approx(ev.det_re**2 + ev.det_im**2 - ev.an_re**2 - ev.an_im**2)
        assert ev.c_factor == pytest.approx(3.0 * ev.tau + 2.0 * (ev.an_re**2 + ev.an_im**2))


class TestTauPositivity:
    @given(
        st.floats(1e-3, 30.0),
        st.floats(1e-3, 30.0),
        st.floats(-30.0, 30.0),
        st.floats(-30.0, 30.0),
        st.floats(-30.0, 30.0),
    )
    @settings(max_examples=150, deadline=None)
    def test_three_forms_agree_and_certify_positivity(self, a, d, e, g, f):
        forms = tau_three_forms(a, d, e, g, f)
        assert len(forms) == 3
        scale = max(abs(v) for v in forms) + 1.0
        assert abs(forms[0] - forms[1]) <= 1e-10 * scale
        assert abs(forms[0] - forms[2]) <= 1e-10 * scale
        assert forms[1] > 0.0

    def test_matches_evaluation_tau(self):
        a, d, e, g, f = 0.7, 1.9, -0.8, 0.3, 1.1
        ev = objective_coords((a, d, 0.0, e, g, f), 2.0)
        assert tau_three_forms(a, d, e, g, f)[0] == pytest.approx(ev.tau, rel=1e-14)

    @given(
        st.floats(1e-3, 40.0),
        st.floats(1e-3, 40.0),
        st.floats(-0.99, 0.99),
        st.floats(-40.0, 40.0),
        st.floats(-40.0, 40.0),
        st.floats(-40.0, 40.0),
    )
    @settings(max_examples=150, deadline=None)
    def test_tau_positive_on_the_cone(self, a, d, bfrac, e, g, f):
        b = bfrac * np.sqrt(a * d)
        ev = objective_coords((a, d, b, e, g, f), 2.0)
        assert ev.tau > 0.0
        assert ev.value > 0.0


class TestGradient:
    @pytest.mark.parametrize("p", [1.3, 2.0, 3.5])
    def test_matches_finite_differences(self, p):
        for coords in SAMPLE_POINTS:
            grad = objective_gradient(coords, p)
            ref = fd_gradient(coords, p)
            scale = max(float(np.abs(ref).max()), 1e-8)
            assert np.abs(grad - ref).max() <= 2e-6 * scale

    @pytest.mark.parametrize("p", [1.5, 3.0, 6.0])
    def test_vanishes_at_scaled_identity(self, p):
        c = 1.0 / (p - 1.0)
        grad = objective_gradient((c, c, 0.0, 0.0, 0.0, 0.0), p)
        assert np.abs(grad).max() < 1e-12


class TestBatchEvaluation:
    def test_matches_scalar_path(self):
        coords = np.array(SAMPLE_POINTS)
        vals = objective_batch(coords, 2.4)
        for row, val in zip(SAMPLE_POINTS, vals):
            assert val == pytest.approx(objective_coords(row, 2.4).value, rel=1e-12)

    def test_inadmissible_rows_get_sentinel(self):
        coords = np.array(
            [
                [1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
                [-1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
                [1.0, 1.0, 1.5, 0.0, 0.0, 0.0],
            ]
        )
        vals = objective_batch(coords, 3.0)
        assert vals[0] > 0.0
        assert vals[1] == -1.0
        assert vals[2] == -1.0

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            objective_batch(np.zeros((3, 5)), 2.0)
