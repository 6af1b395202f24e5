"""
Tests for the disk geometry: pseudohyperbolic distance, Blaschke factors,
finite Blaschke products and their boundary jets.
"""

import numpy as np
import pytest

from hbinterp.core.errors import DomainError, PoleProximityError
from hbinterp.numerics.disk import (
    BlaschkeProduct,
    DiskSequence,
    ahern_clark_sum,
    blaschke_eval,
    blaschke_factor_deriv,
    blaschke_factor_eval,
    blaschke_radial_derivatives,
    blaschke_taylor_at_boundary,
    mobius,
    partial_product_taylor_tail,
    rho,
    szego_kernel,
)


class TestPseudohyperbolicDistance:
    """Tests for rho."""

    def test_origin_gives_modulus(self):
        """rho(0, w) is |w|."""
        assert rho(0, 0.3 + 0.4j) == pytest.approx(0.5, abs=1e-15)

    def test_identity(self):
        """rho(z, z) = 0."""
        assert rho(0.2 - 0.7j, 0.2 - 0.7j) == 0.0

    def test_hand_value(self):
        """rho(0.5, -0.5) = 1/1.25."""
        assert rho(0.5, -0.5) == pytest.approx(0.8, abs=1e-15)

    def test_symmetry(self):
        """rho is symmetric in its arguments."""
        rng = np.random.default_rng(0)
        z = 0.9 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20))
        w = 0.9 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20))
        for a, b in zip(z, w):
            assert rho(a, b) == pytest.approx(rho(b, a), abs=1e-15)

    def test_outside_disk_rejected(self):
        """Points on or outside the circle are domain errors."""
        with pytest.raises(DomainError):
            rho(1.0, 0.0)
        with pytest.raises(DomainError):
            rho(float("nan"), 0.0)

    def test_mobius_swaps_point_and_origin(self):
        """The automorphism maps a to 0 and 0 to a."""
        assert abs(mobius(0.3 + 0.1j, 0.3 + 0.1j)) < 1e-15
        assert complex(mobius(0.3 + 0.1j, 0.0)) == pytest.approx(0.3 + 0.1j)

    @pytest.mark.parametrize("seed", range(8))
    def test_mobius_invariance(self, seed):
        """Disk automorphisms preserve rho."""
        rng = np.random.default_rng(seed)
        a, z, w = 0.9 * np.sqrt(rng.random(3)) * np.exp(2j * np.pi * rng.random(3))
        assert rho(mobius(a, z), mobius(a, w)) == pytest.approx(rho(z, w), abs=1e-12)
        zeta = np.exp(2j * np.pi * rng.random())
        assert rho(zeta * z, zeta * w) == pytest.approx(rho(z, w), abs=1e-12)


class TestBlaschkeFactor:
    """Tests for the elementary factor and its derivatives."""

    def test_zero_of_factor(self):
        """The factor vanishes at its zero."""
        assert blaschke_factor_eval(0.4 + 0.2j, 0.4 + 0.2j) == 0

    def test_origin_factor_is_identity(self):
        """lambda = 0 gives z."""
        assert complex(blaschke_factor_eval(0, 0.3 - 0.2j)) == pytest.approx(0.3 - 0.2j)

    def test_value_at_one(self):
        """(1 - 0.5)/(1 - 0.5) = 1."""
        assert complex(blaschke_factor_eval(0.5, 1.0)) == pytest.approx(1.0)

    def test_sign_convention(self):
        """(z - lambda)/(1 - conj(lambda) z), not its negative."""
        assert complex(blaschke_factor_eval(0.5, -0.5)) == pytest.approx(-0.8)
        assert complex(blaschke_factor_eval(0.5, 0.0)) == pytest.approx(-0.5)

    def test_unimodular_on_circle(self):
        """|phi| = 1 on the unit circle."""
        z = np.exp(2j * np.pi * np.arange(64) / 64)
        values = blaschke_factor_eval(0.7 - 0.2j, z)
        np.testing.assert_allclose(np.abs(values), 1.0, atol=1e-14)

    def test_derivative_values(self):
        """Closed-form derivatives at hand-computed points."""
        assert complex(blaschke_factor_deriv(0.5, 1.0, 1)) == pytest.approx(3.0)
        assert complex(blaschke_factor_deriv(0, 0.2, 1)) == pytest.approx(1.0)
        assert complex(blaschke_factor_deriv(0.5, 0.0, 2)) == pytest.approx(0.75)

    def test_derivative_matches_finite_difference(self):
        """The first derivative agrees with a central difference."""
        lam, z, h = 0.3 + 0.4j, 0.1 - 0.2j, 1e-6
        fd = (blaschke_factor_eval(lam, z + h) - blaschke_factor_eval(lam, z - h)) / (2 * h)
        assert complex(blaschke_factor_deriv(lam, z, 1)) == pytest.approx(complex(fd), rel=1e-8)

    def test_pole_proximity(self):
        """Evaluating at the pole 1/conj(lambda) fails."""
        with pytest.raises(PoleProximityError):
            blaschke_factor_eval(0.5, 2.0)

    def test_szego_kernel(self):
        """1/(1 - conj(lambda) z) at simple points."""
        assert complex(szego_kernel(0, 0.3)) == pytest.approx(1.0)
        assert complex(szego_kernel(0.5, 1.0)) == pytest.approx(2.0)
        lam = 0.6 + 0.2j
        assert complex(szego_kernel(lam, lam)).real == pytest.approx(1 / (1 - abs(lam) ** 2))


class TestBlaschkeProduct:
    """Tests for finite Blaschke products."""

    def test_origin_zero(self):
        """zeros = {0} gives B(z) = z."""
        B = BlaschkeProduct.from_points([0])
        assert complex(blaschke_eval(B, 0.25 + 0.5j)) == pytest.approx(0.25 + 0.5j)

    def test_vanishes_at_zero(self):
        """B(lambda) = 0."""
        B = BlaschkeProduct.from_points([0.3 + 0.3j])
        assert abs(B(0.3 + 0.3j)) == 0

    def test_normalization_sign(self):
        """Each normalized factor equals -|lambda| at 0, so two of them give +0.25."""
        assert complex(BlaschkeProduct.from_points([0.5])(0.0)) == pytest.approx(-0.5)
        assert complex(BlaschkeProduct.from_points([-0.5j])(0.0)) == pytest.approx(-0.5)
        B = BlaschkeProduct.from_points([0.5, -0.5])
        assert complex(B(0.0)) == pytest.approx(0.25)

    def test_rational_parts_agree(self):
        """num/den reproduces the product."""
        B = BlaschkeProduct.from_points([0.5, 0.3j, -0.2 - 0.6j, 0])
        num, den = B.to_rational_parts()
        z = 0.95 * np.exp(2j * np.pi * np.arange(16) / 16)
        np.testing.assert_allclose(num(z) / den(z), B(z), atol=1e-13)

    def test_sequence_points_must_be_interior(self):
        """A point on the circle is rejected."""
        with pytest.raises(ValueError):
            DiskSequence.explicit([0.5, 1.0])


class TestBoundaryJets:
    """Tests for boundary Taylor coefficients and Ahern-Clark sums."""

    def test_taylor_of_identity(self):
        """B(z) = z at 1: [1, 1, 0]."""
        B = BlaschkeProduct.from_points([0])
        np.testing.assert_allclose(blaschke_taylor_at_boundary(B, 1.0, 2), [1, 1, 0], atol=1e-15)

    def test_taylor_of_single_factor(self):
        """lambda = 0.5 at 1: value 1, derivative 3."""
        B = BlaschkeProduct.from_points([0.5])
        np.testing.assert_allclose(blaschke_taylor_at_boundary(B, 1.0, 1), [1, 3], atol=1e-13)

    def test_value_is_unimodular(self):
        """The order-0 coefficient has modulus one."""
        zeta = np.exp(0.7j)
        B = BlaschkeProduct.from_points([0.4 - 0.5j, 0])
        c0 = blaschke_taylor_at_boundary(B, zeta, 0)[0]
        assert abs(c0) == pytest.approx(1.0, abs=1e-14)
        lam = 0.4 - 0.5j
        expected = zeta * (abs(lam) / lam) * (zeta - lam) / (1 - np.conj(lam) * zeta)
        assert complex(c0) == pytest.approx(complex(expected), abs=1e-14)

    def test_off_circle_zeta_rejected(self):
        """zeta must lie on the circle."""
        with pytest.raises(DomainError):
            blaschke_taylor_at_boundary(BlaschkeProduct.from_points([0.5]), 0.5, 1)

    def test_ahern_clark_values(self):
        """Hand-evaluated Ahern-Clark sums."""
        assert ahern_clark_sum(DiskSequence.explicit([0]), 1.0, 0) == pytest.approx(1.0)
        assert ahern_clark_sum(DiskSequence.explicit([0.5]), 1.0, 1) == pytest.approx(2.0)

    def test_ahern_clark_away_from_accumulation(self):
        """Radii 1 - 2^-n seen from -1: late terms are close to 2^-n/4."""
        radii = 1 - 2.0 ** -np.arange(1, 11)
        full = ahern_clark_sum(DiskSequence.explicit(radii), -1.0, 1)
        head = ahern_clark_sum(DiskSequence.explicit(radii[:-1]), -1.0, 1)
        assert full - head == pytest.approx(2.0**-10 / 4, rel=0.05)
        assert full < float(np.sum(2.0 ** -np.arange(1, 11)))

    def test_radial_derivatives_of_identity(self):
        """B(z) = z has derivative 1 along the radius."""
        B = BlaschkeProduct.from_points([0])
        values = blaschke_radial_derivatives(B, 1.0, 1, [0.0, 0.5, 1.0])
        np.testing.assert_allclose(values, [1, 1, 1], atol=1e-15)

    def test_radial_value_at_boundary(self):
        """B(1) = 1 for a single factor at 0.5."""
        B = BlaschkeProduct.from_points([0.5])
        np.testing.assert_allclose(blaschke_radial_derivatives(B, 1.0, 0, [1.0]), [1.0], atol=1e-15)

    def test_partial_products_stabilize(self):
        """Taylor coefficients at 1 settle when zeros accumulate at -1."""
        n = np.arange(1, 26)
        B = BlaschkeProduct.from_points(-(1 - 2.0**-n))
        changes = partial_product_taylor_tail(B, 1.0, 1)
        assert len(changes) == 24
        assert np.all(np.diff(changes) <= 0)
        assert changes[-1] < 1e-6

    def test_radial_derivative_bounded_along_partial_products(self):
        """max_r |B_n'(r)| stays bounded as zeros are appended."""
        n = np.arange(1, 21)
        points = -(1 - 2.0**-n)
        grid = np.linspace(0.0, 1.0, 33)
        maxima = [
            float(np.max(np.abs(blaschke_radial_derivatives(BlaschkeProduct.from_points(points[:k]), 1.0, 1, grid))))
            for k in (10, 20)
        ]
        assert maxima[1] == pytest.approx(maxima[0], rel=1e-2)


if __name__ == "__main__":
    pytest.main([__file__])
