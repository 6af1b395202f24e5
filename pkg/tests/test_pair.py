"""
Tests for Fejer-Riesz factorization and Pythagorean pairs.
"""

import numpy as np
import pytest

from hbinterp.core.errors import FactorizationError, PreconditionError
from hbinterp.numerics.pair import (
    BoundaryZeroSet,
    RationalPair,
    circle_grid,
    corona_lower_bound,
    fejer_riesz,
    mate_sup_norm,
    pair_from_b_coefficients,
    pair_from_mate,
    pythagorean_mate,
    spectral_factor,
    verify_pair,
)
from hbinterp.numerics.polynomials import root_clusters
from hbinterp.numerics.rational import RationalFn

from tests.conftest import OUTER_ROOT, SQRT2


class TestFejerRiesz:
    """Tests for the spectral factorization."""

    def test_reproduces_trigonometric_polynomial(self):
        """|s|^2 = 1.5 - 0.5 cos(theta) with s outer."""
        c = [-0.25, 1.5, -0.25]
        s = fejer_riesz(c)
        z = circle_grid(256)
        R = 1.5 - 0.5 * np.real(z)
        np.testing.assert_allclose(np.abs(s(z)) ** 2, R, atol=1e-12)
        (root, m), = root_clusters(s)
        assert m == 1
        assert abs(root - OUTER_ROOT) < 1e-10

    def test_constant(self):
        """Degree 0: the square root of the constant."""
        s = fejer_riesz([4.0])
        assert s.degree == 0
        assert complex(s.coeffs[0]) == pytest.approx(2.0)

    def test_circle_root_reported(self):
        """(1 + cos)/2 factors as (1 + z)/2 with a circle zero at -1."""
        factor = spectral_factor([0.25, 0.5, 0.25])
        np.testing.assert_allclose(np.abs(factor.poly.coeffs), [0.5, 0.5], atol=1e-8)
        assert len(factor.boundary) == 1
        zeta, m = factor.boundary[0]
        assert m == 1
        assert abs(zeta + 1) < 1e-8

    def test_negative_polynomial_rejected(self):
        """cos(theta) takes negative values."""
        with pytest.raises(FactorizationError):
            fejer_riesz([0.5, 0.0, 0.5])

    def test_vanishing_polynomial_rejected(self):
        """The zero trigonometric polynomial has no factor."""
        with pytest.raises(FactorizationError):
            fejer_riesz([0.0, 0.0, 0.0])

    def test_asymmetric_coefficients_rejected(self):
        """c_-k must be the conjugate of c_k."""
        with pytest.raises(ValueError):
            fejer_riesz([0.1, 1.0, 0.3])


class TestPythagoreanMate:
    """Tests for the mate of a rational b."""

    def test_square_example(self, square_pair):
        """Mate of (1 - z)^2/4 is c (1 + z)(z - (3 + 2 sqrt 2))."""
        c = -1.0 / (4.0 + 4.0 * SQRT2)
        z = 0.95 * np.exp(2j * np.pi * np.arange(12) / 12)
        expected = c * (1 + z) * (z - OUTER_ROOT)
        np.testing.assert_allclose(square_pair.a(z), expected, atol=1e-10)

        roots = sorted((r for r, _ in root_clusters(square_pair.a.num)), key=lambda r: r.real)
        assert abs(roots[0] + 1) < 1e-7
        assert abs(roots[1] - OUTER_ROOT) < 1e-7

    def test_square_example_zero_set(self, square_pair):
        """One simple boundary zero at -1."""
        ((zeta, m),) = square_pair.zeros.items()
        assert m == 1
        assert abs(zeta + 1) < 1e-8
        assert square_pair.N == 1
        assert square_pair.M == 1

    def test_verification_report(self, square_pair):
        """The identity holds on the grid and a(0) > 0."""
        report = verify_pair(square_pair)
        assert report.passed
        assert report.max_residual < 1e-10
        assert report.outer
        assert report.a0_value == pytest.approx((1 + SQRT2) / 4, rel=1e-10)
        assert report.min_interior_root_modulus == pytest.approx(1.0, abs=1e-7)

    def test_half_example(self, half_pair):
        """b = (1 + z)/2 has the mate (1 - z)/2."""
        z = np.array([0.0, 0.3 + 0.4j, -0.7j])
        np.testing.assert_allclose(half_pair.a(z), (1 - z) / 2, atol=1e-12)
        ((zeta, m),) = half_pair.zeros.items()
        assert (m, round(zeta.real, 8)) == (1, 1.0)

    def test_mate_sup_norm(self, half_pair):
        """|(1 - z)/2| reaches 1 at -1."""
        assert mate_sup_norm(half_pair) == pytest.approx(1.0, abs=1e-12)

    def test_b_below_one_rejected(self):
        """sup |b| = 1/2 is not a valid symbol for the construction."""
        with pytest.raises(PreconditionError):
            pythagorean_mate(RationalFn.checked([0.0, 0.5]))

    def test_b_above_one_rejected(self):
        """sup |b| > 1."""
        with pytest.raises(PreconditionError):
            pythagorean_mate(RationalFn.checked([0.6, 0.6]))

    def test_inner_b_rejected(self):
        """b = z is inner: 1 - |b|^2 vanishes identically."""
        with pytest.raises(FactorizationError):
            pythagorean_mate(RationalFn.checked([0.0, 1.0]))

    def test_from_coefficients(self):
        """Convenience constructor agrees with the fixture route."""
        pair = pair_from_b_coefficients([0.5, 0.5])
        assert complex(pair.a(0.0)) == pytest.approx(0.5)


class TestPairFromMate:
    """Tests for the converse construction."""

    def test_half_mate(self):
        """a = (1 - z)/2 gives b = (1 + z)/2."""
        pair = pair_from_mate(RationalFn.checked([0.5, -0.5]))
        np.testing.assert_allclose(pair.b.num.coeffs / pair.b.den.coeffs[0], [0.5, 0.5], atol=1e-8)

    def test_double_zero(self, double_zero_pair):
        """(z - 1)^2/4 has a double boundary zero at 1."""
        assert double_zero_pair.N == 2
        assert double_zero_pair.M == 2
        assert verify_pair(double_zero_pair).passed

    def test_antipodal_local_pair(self, antipodal_pair):
        """Two simple zeros at 1 and -1 with a(0) > 0."""
        assert antipodal_pair.N == 2
        assert antipodal_pair.M == 1
        assert complex(antipodal_pair.a(0.0)) == pytest.approx(0.25)

    def test_mate_without_circle_zero_rejected(self):
        """A constant mate has no boundary zero."""
        with pytest.raises(PreconditionError):
            pair_from_mate(RationalFn.checked([0.5]))

    def test_mate_not_outer_rejected(self):
        """A zero at 1/2 inside the disk fails the outer check."""
        with pytest.raises(FactorizationError):
            pair_from_mate(RationalFn.checked([0.125, -0.375, 0.25]))

    def test_mate_too_large_rejected(self):
        """sup |a| must not exceed 1."""
        with pytest.raises(PreconditionError):
            pair_from_mate(RationalFn.checked([1.0, -1.0]))


class TestPairValidation:
    """Tests for verify_pair and the boundary zero set."""

    def test_perturbed_mate_fails(self, half_pair):
        """Adding 1e-3 to a breaks the identity."""
        broken = RationalPair(b=half_pair.b, a=half_pair.a + 1e-3, zeros=half_pair.zeros)
        report = verify_pair(broken)
        assert not report.passed
        assert report.max_residual > 1e-3
        with pytest.raises(FactorizationError):
            broken.checked()

    def test_duplicate_zeros_rejected(self):
        """Boundary zeros must be distinct."""
        with pytest.raises(ValueError):
            BoundaryZeroSet.from_pairs([(1.0, 1), (1.0, 2)])

    def test_zero_off_circle_rejected(self):
        """Boundary zeros lie on the circle."""
        with pytest.raises(ValueError):
            BoundaryZeroSet.from_pairs([(0.5, 1)])

    def test_a0_polynomial(self):
        """a_0 = (z - 1)^2 (z + 1)."""
        zeros = BoundaryZeroSet.from_pairs([(1.0, 2), (-1.0, 1)])
        np.testing.assert_allclose(zeros.a0().coeffs, [1, -1, -1, 1])
        assert (zeros.N, zeros.M) == (3, 2)


class TestCorona:
    """Tests for the corona lower bound."""

    def test_bound_is_positive_and_stable(self, square_pair):
        """Refining the grid barely moves the minimum."""
        coarse = corona_lower_bound(square_pair, 64, 64)
        fine = corona_lower_bound(square_pair, 128, 128)
        assert coarse > 0
        assert fine == pytest.approx(coarse, rel=0.05)
        assert fine <= 1.0 + 1e-12

    def test_bad_grid_rejected(self, square_pair):
        """Degenerate grids are preconditions failures."""
        with pytest.raises(PreconditionError):
            corona_lower_bound(square_pair, 1, 64)


if __name__ == "__main__":
    pytest.main([__file__])
