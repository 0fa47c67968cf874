"""Shared fixtures"""
import random

import pytest

from app.experiments.instances import geometric_series, independent_context, lacunary_series
from app.mahler.equation import MahlerEquation


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def lacunary():
    """sum x^(2^n), trusted below 2^16"""
    return lacunary_series(2 ** 16)


@pytest.fixture
def geometric():
    """1/(1-x) below 64"""
    return geometric_series(64)


@pytest.fixture
def lacunary_equation():
    """F(x) - F(x^2) = x"""
    return MahlerEquation.build(2, [[1], [-1]], rhs=[0, 1])


@pytest.fixture
def doubling_equation():
    """F(x) = (1 + x) F(x^2), solved by 1/(1-x)"""
    return MahlerEquation.build(2, [[1], [-1, -1]])


@pytest.fixture
def tripling_equation():
    """F(x) = (1 + x + x^2) F(x^3), solved by 1/(1-x)"""
    return MahlerEquation.build(3, [[1], [-1, -1, -1]])


@pytest.fixture
def symbolic_context():
    return independent_context()
