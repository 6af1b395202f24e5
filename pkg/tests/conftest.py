"""
Shared fixtures: the reference pairs and sequences used across the tests.
"""

import json
import math

import pytest

from hbinterp.numerics.pair import BoundaryZeroSet, local_pair, pair_from_mate, pythagorean_mate
from hbinterp.numerics.rational import RationalFn


SQRT2 = math.sqrt(2.0)
OUTER_ROOT = 3.0 + 2.0 * SQRT2


@pytest.fixture
def square_b():
    """b(z) = (1 - z)^2 / 4."""
    return RationalFn.checked([0.25, -0.5, 0.25])


@pytest.fixture
def square_pair(square_b):
    """Mate of (1 - z)^2 / 4: a = c (1 + z)(z - (3 + 2 sqrt 2)), zero at -1."""
    return pythagorean_mate(square_b)


@pytest.fixture
def half_pair():
    """b = (1 + z)/2, a = (1 - z)/2, simple boundary zero at 1."""
    return pythagorean_mate(RationalFn.checked([0.5, 0.5]))


@pytest.fixture
def double_zero_pair():
    """Pair with mate a = (z - 1)^2 / 4 (boundary zero of multiplicity 2 at 1)."""
    return pair_from_mate(RationalFn.checked([0.25, -0.5, 0.25]))


@pytest.fixture
def antipodal_pair():
    """Pair with mate (z - 1)(z + 1)/4."""
    return local_pair(BoundaryZeroSet.from_pairs([(1.0, 1), (-1.0, 1)]))


@pytest.fixture
def write_json(tmp_path):
    """Writes a JSON document into tmp_path and returns its path."""

    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write
