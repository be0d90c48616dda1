import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import lpmv

from pdmwell.legendre import assoc_legendre, double_factorial, order_factor, reduced_legendre, reduced_roots


def test_double_factorial():
    assert [double_factorial(k) for k in (-1, 0, 1, 5, 6)] == [1, 1, 1, 15, 48]


@pytest.mark.parametrize("l", range(0, 9))
def test_matches_scipy(l):
    z = np.linspace(-0.999, 0.999, 301)
    for m in range(-l, l + 1):
        assert np.max(np.abs(assoc_legendre(l, m, z) - lpmv(m, l, z))) < 1e-11 * max(1, l**m if m > 0 else 1)


@given(l=st.integers(0, 12), m=st.integers(0, 12), z=st.floats(-0.99, 0.99))
def test_derivatives_finite_difference(l, m, z):
    if m > l:
        return
    h = 1e-6
    q, dq, d2q = reduced_legendre(l, m, np.array([z - h, z, z + h]))
    assert dq[1] == pytest.approx((q[2] - q[0]) / (2 * h), rel=1e-6, abs=1e-6 * max(1, abs(q[1])))
    assert d2q[1] == pytest.approx((dq[2] - dq[0]) / (2 * h), rel=1e-6, abs=1e-6 * max(1, abs(dq[1])))


def test_order_factor():
    assert order_factor(3, 2) == 1.0
    assert order_factor(3, -2) == pytest.approx(1 / 120)
    assert order_factor(2, -1) == pytest.approx(-1 / 6)


@pytest.mark.parametrize("l,m", [(1, 0), (2, 0), (3, 1), (5, 2), (8, 3), (7, -2)])
def test_roots(l, m):
    r = reduced_roots(l, m)
    assert len(r) == l - abs(m)
    assert np.all(np.diff(r) > 0) and np.all(np.abs(r) < 1)
    q, _, _ = reduced_legendre(l, abs(m), r)
    assert np.max(np.abs(q)) < 1e-10


def test_invalid_order():
    with pytest.raises(ValueError):
        reduced_legendre(2, 3, 0.0)
    assert reduced_roots(3, 3).size == 0
