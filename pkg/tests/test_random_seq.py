"""
Tests for sequence families, Steinhaus sampling, the law of X_n and the
0-1 law experiment.
"""

import math

import numpy as np
import pytest

from hbinterp.core.errors import DomainError, PreconditionError
from hbinterp.numerics.disk import DiskSequence
from hbinterp.numerics.families import (
    AngleLaw,
    RadiiFamily,
    SequenceFamily,
    SeriesClass,
    classify_radii,
    steinhaus_angles,
)
from hbinterp.numerics.random_seq import (
    dyadic_counts,
    exceedance_prob,
    monte_carlo_exceedance,
    sample_steinhaus,
    three_series,
    trial_sums,
    truncated_moments,
    zero_one_experiment,
)


def dense_moments(r, M, n=2_000_001):
    """Reference E[Y], V[Y] on a fine midpoint grid."""
    theta = np.pi * (np.arange(n) + 0.5) / n
    x = (1 - r**2) / np.abs(1 - r * np.exp(1j * theta)) ** (2 * M)
    y = np.where(x <= 1.0, x, 0.0)
    mean = float(np.mean(y))
    return mean, float(np.mean(y**2)) - mean**2


class TestFamilies:
    """Tests for radii laws and their classification."""

    def test_power_radii(self):
        """r_n = 1 - c n^-beta, clipped at 0."""
        family = RadiiFamily(kind="power", beta=2.0, count=4)
        np.testing.assert_allclose(family.radii(), [0.0, 0.75, 1 - 1 / 9, 0.9375])

    def test_geometric_one_minus_radii(self):
        """1 - r_n = c q^n without cancellation."""
        family = RadiiFamily(kind="geometric", q=0.5, count=80)
        eps = family.one_minus_radii()
        assert eps[-1] == 2.0**-80

    def test_geometric_reaches_circle(self):
        """Radii 1 - 2^-60 round to 1."""
        family = RadiiFamily(kind="geometric", q=0.5, count=60)
        with pytest.raises(DomainError):
            family.radii()

    def test_missing_parameters(self):
        """Each law needs its parameter."""
        with pytest.raises(ValueError):
            RadiiFamily(kind="power")
        with pytest.raises(ValueError):
            RadiiFamily(kind="geometric", q=1.5)
        with pytest.raises(ValueError):
            RadiiFamily(kind="explicit", values=[0.5, 1.0])

    def test_explicit_count_defaults(self):
        """count defaults to the number of values."""
        assert RadiiFamily(kind="explicit", values=[0.1, 0.2, 0.3]).count == 3

    @pytest.mark.parametrize(
        "beta, exponent, expected",
        [
            (4.0, 0.5, SeriesClass.CONVERGENT),
            (1.5, 0.5, SeriesClass.DIVERGENT),
            (2.0, 0.5, SeriesClass.BOUNDARY),
        ],
    )
    def test_classify_power(self, beta, exponent, expected):
        """sum (c n^-beta)^e converges iff beta e > 1."""
        assert classify_radii(RadiiFamily(kind="power", beta=beta), exponent) == expected

    def test_fixed_angles(self):
        """Cycled fixed angles must cover the points."""
        family = SequenceFamily(kind="geometric", q=0.5, count=3, angles=AngleLaw(values=[0.0, 1.0]))
        with pytest.raises(DomainError):
            family.points()


class TestSampling:
    """Tests for Steinhaus angles."""

    def test_prefix_consistency(self):
        """A longer draw extends a shorter one."""
        np.testing.assert_array_equal(steinhaus_angles(11, 50), steinhaus_angles(11, 200)[:50])

    def test_seeds_differ(self):
        """Different seeds give different angles."""
        assert not np.array_equal(steinhaus_angles(1, 10), steinhaus_angles(2, 10))

    def test_uniformity(self):
        """Kolmogorov-Smirnov statistic below the 0.1% critical value."""
        n = 20_000
        u = np.sort(steinhaus_angles(3, n) / (2 * np.pi))
        grid = np.arange(1, n + 1) / n
        statistic = max(np.max(grid - u), np.max(u - (grid - 1 / n)))
        assert statistic < 1.95 / math.sqrt(n)

    def test_sample_sequence(self):
        """Samples keep their family descriptor."""
        sample = sample_steinhaus(RadiiFamily(kind="power", beta=2.0, count=16), seed=5)
        assert isinstance(sample.points, DiskSequence)
        assert len(sample.points) == 16
        np.testing.assert_allclose(np.abs(sample.points.points), RadiiFamily(kind="power", beta=2.0).radii(16))
        assert sample.points.family.angles.seed == 5


class TestLaw:
    """Tests for the exact law of X_n."""

    def test_origin(self):
        """r = 0: X = 1 surely, never above 1."""
        assert exceedance_prob(0.0, 1) == 0.0
        assert truncated_moments(0.0, 2) == (1.0, 0.0)

    def test_half_radius(self):
        """r = 1/2, M = 1: arccos(1/2)/pi = 1/3."""
        assert exceedance_prob(0.5, 1) == pytest.approx(1 / 3, rel=1e-12)

    @pytest.mark.parametrize("r", [0.3, 0.9, 0.999])
    def test_first_order_closed_form(self, r):
        """M = 1: u = r, so P = arccos(r)/pi."""
        assert exceedance_prob(r, 1) == pytest.approx(math.acos(r) / math.pi, rel=1e-10)

    def test_near_circle_asymptotics(self):
        """eps = 1e-12: P ~ sqrt(2 eps)/pi."""
        eps = 1e-12
        p = exceedance_prob(1 - eps, 1, one_minus_r=eps)
        assert p == pytest.approx(math.sqrt(2 * eps) / math.pi, rel=1e-3)

    def test_invalid_radius(self):
        """r must lie in [0, 1) and M >= 1."""
        with pytest.raises(DomainError):
            exceedance_prob(1.0, 1)
        with pytest.raises(DomainError):
            exceedance_prob(0.5, 0)

    @pytest.mark.parametrize("r, M", [(0.5, 1), (0.9, 2), (0.7, 3)])
    def test_moments_match_grid(self, r, M):
        """Quadrature moments agree with a dense grid."""
        mean, variance = truncated_moments(r, M)
        ref_mean, ref_variance = dense_moments(r, M)
        assert mean == pytest.approx(ref_mean, abs=1e-4)
        assert variance == pytest.approx(ref_variance, abs=1e-4)

    @pytest.mark.parametrize("r, M", [(0.5, 1), (0.9, 2), (0.999, 3)])
    def test_monte_carlo(self, r, M):
        """Empirical exceedance within 4.5 sigma of the exact value."""
        check = monte_carlo_exceedance(r, M, draws=100_000, seed=1)
        assert check.z_score < 4.5


class TestSeries:
    """Tests for the three series and dyadic counts."""

    @pytest.mark.parametrize(
        "beta, expected",
        [(4.0, SeriesClass.CONVERGENT), (1.5, SeriesClass.DIVERGENT), (2.0, SeriesClass.BOUNDARY)],
    )
    def test_three_series_classification(self, beta, expected):
        """M = 1 uses the exponent 1/2."""
        report = three_series(RadiiFamily(kind="power", beta=beta, count=32), 1)
        assert report.exceedance.classification == expected
        assert report.count == 32
        assert len(report.mean.partial_sums) == 32
        assert all(0.0 <= p <= 1.0 for p in report.exceedance.terms)

    def test_three_series_converging_sum_settles(self):
        """beta = 4: the exceedance sum barely moves over the last doubling."""
        report = three_series(RadiiFamily(kind="power", beta=4.0, count=256), 1)
        assert report.exceedance.last_doubling_change < 0.05

    def test_dyadic_geometric(self):
        """q = 1/2: one radius per dyadic annulus."""
        report = dyadic_counts(RadiiFamily(kind="geometric", q=0.5, count=10))
        assert report.counts == [0] + [1] * 10
        assert report.carleson_sum == pytest.approx(1 - 2.0**-10)
        assert report.carleson_class == SeriesClass.CONVERGENT


class TestZeroOne:
    """Tests for the 0-1 law experiment."""

    def test_thread_count_does_not_matter(self):
        """Trials are seeded by index and collected in order."""
        family = RadiiFamily(kind="power", beta=1.0)
        one = zero_one_experiment(family, 1, trials=12, truncation=256, threads=1, keep_sums=True)
        four = zero_one_experiment(family, 1, trials=12, truncation=256, threads=4, keep_sums=True)
        assert one.sums == four.sums
        assert one.exceedance_fractions == four.exceedance_fractions

    def test_divergent_regime(self):
        """beta = M: fractions do not decrease and the regime diverges."""
        report = zero_one_experiment(RadiiFamily(kind="power", beta=1.0), 1, trials=40, truncation=1024)
        assert report.regime == SeriesClass.DIVERGENT
        assert report.truncations == [256, 512, 1024]
        assert report.nondecreasing

    def test_convergent_regime_stabilizes(self):
        """beta = 4M: the median sum settles."""
        report = zero_one_experiment(RadiiFamily(kind="power", beta=4.0), 1, trials=40, truncation=4096)
        assert report.regime == SeriesClass.CONVERGENT
        assert report.median_change < 0.01

    def test_very_close_radii(self):
        """Geometric radii beyond double precision still give finite sums."""
        sums = trial_sums(RadiiFamily(kind="geometric", q=0.5), 1, seed=3, truncations=[16, 64])
        assert np.all(np.isfinite(sums))
        assert sums[1] >= sums[0]

    def test_explicit_truncation_overflow(self):
        """Explicit radii bound the truncation."""
        family = RadiiFamily(kind="explicit", values=[0.1, 0.2])
        with pytest.raises(PreconditionError):
            zero_one_experiment(family, 1, trials=2, truncation=8)

    def test_bad_trials(self):
        """At least one trial."""
        with pytest.raises(PreconditionError):
            zero_one_experiment(RadiiFamily(kind="power", beta=2.0), 1, trials=0, truncation=8)


class TestRotationInvariance:
    """Rotating the sample and the boundary point together leaves X_n unchanged."""

    @pytest.mark.parametrize("angle", [0.3, 1.0, 2.5, -1.7, 3.1])
    @pytest.mark.parametrize("M", [1, 2])
    def test_joint_rotation(self, angle, M):
        """Sums at e^{i angle} of the rotated sample match the sums at 1."""
        family = RadiiFamily(kind="power", beta=2.0 * M)
        base = trial_sums(family, M, seed=11, truncations=[64, 256])
        turned = trial_sums(family, M, seed=11, truncations=[64, 256], zeta_angle=angle, rotation=angle)
        np.testing.assert_allclose(turned, base, rtol=1e-9)

    @pytest.mark.parametrize("seed", range(4))
    def test_full_turn(self, seed):
        """The boundary point is only defined modulo 2 pi."""
        family = RadiiFamily(kind="power", beta=1.0)
        base = trial_sums(family, 1, seed=seed, truncations=[128])
        turned = trial_sums(family, 1, seed=seed, truncations=[128], zeta_angle=2 * np.pi)
        np.testing.assert_allclose(turned, base, rtol=1e-9)


if __name__ == "__main__":
    pytest.main([__file__])
