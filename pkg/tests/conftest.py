"""Shared fixtures: hand-checked golden coefficients and a reusable table."""

from fractions import Fraction

import pytest

from gregory import bernoulli2_series

# b_0..b_8, verified by hand against the series division of x by ln(1+x)
GOLDEN_VALUES = (
    Fraction(1),
    Fraction(1, 2),
    Fraction(-1, 12),
    Fraction(1, 24),
    Fraction(-19, 720),
    Fraction(3, 160),
    Fraction(-863, 60480),
    Fraction(275, 24192),
    Fraction(-33953, 3628800),
)


@pytest.fixture(scope="session")
def golden_values():
    return GOLDEN_VALUES


@pytest.fixture(scope="session")
def table31():
    # large enough for every property horizon used in the tests
    return bernoulli2_series(31)
