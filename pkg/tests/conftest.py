"""Fixtures y estrategias compartidas por la suite"""
import numpy as np
import pytest
from hypothesis import strategies as st

from src.models.series import Series1, Series2


def random_series2(rng: np.random.Generator, order: int, scale: float = 1.0) -> Series2:
    size = Series2.size_for(order)
    return Series2(scale * (rng.normal(size=size) + 1j * rng.normal(size=size)), order)


def random_curve(rng: np.random.Generator, order: int, scale: float = 0.5) -> Series1:
    """h(0) = 0, h'(0) ≠ 0"""
    c = scale * (rng.normal(size=order + 1) + 1j * rng.normal(size=order + 1))
    c[0] = 0.0
    c[1] = 1.0 + 0.5 * rng.uniform()
    return Series1(c)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def series_pair(rng):
    return random_series2(rng, 12), random_curve(rng, 12)


complex_numbers = st.builds(
    complex,
    st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False),
    st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False),
)

nonzero_complex = complex_numbers.filter(lambda z: 0.25 <= abs(z) <= 2.0)


@st.composite
def series1_strategy(draw, min_order: int = 1, max_order: int = 10, origin: bool = False):
    order = draw(st.integers(min_order, max_order))
    coeffs = draw(st.lists(complex_numbers, min_size=order + 1, max_size=order + 1))
    if origin:
        coeffs[0] = 0j
    return Series1(coeffs)


@st.composite
def series2_strategy(draw, min_order: int = 1, max_order: int = 8):
    order = draw(st.integers(min_order, max_order))
    size = Series2.size_for(order)
    coeffs = draw(st.lists(complex_numbers, min_size=size, max_size=size))
    return Series2(coeffs, order)
