"""Exact cyclotomic scalars and the e^x = exp(2*pi*i*x) convention."""
from fractions import Fraction as Q

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dahakz.scalars import (Cyclotomic, cyclotomic_field, root_of_unity,
                            scalar_eq, to_mpc)


def test_root_of_unity_orders():
    assert root_of_unity(Q(1, 2)) == -1
    assert root_of_unity(Q(0)) == 1
    z = root_of_unity(Q(1, 3))
    assert z ** 3 == 1
    assert z != 1 and z ** 2 != 1


def test_root_of_unity_matches_exponential():
    for num, den in [(1, 4), (1, 3), (2, 5), (3, 7), (5, 12)]:
        z = root_of_unity(Q(num, den))
        expected = mpmath.exp(2j * mpmath.pi * mpmath.mpf(num) / den)
        assert abs(to_mpc(z) - expected) < mpmath.mpf("1e-15")


def test_field_promotion_across_orders():
    a = root_of_unity(Q(1, 3))
    b = root_of_unity(Q(1, 4))
    c = a * b
    assert c == root_of_unity(Q(7, 12))
    assert (c ** 12) == 1


def test_inverse_and_division():
    z = root_of_unity(Q(2, 7))
    assert z * z.inverse() == 1
    assert z ** -1 == z.inverse()
    assert (1 / z) * z == 1


def test_minimal_polynomial_reduction():
    # zeta_3 satisfies 1 + x + x^2 = 0
    z = root_of_unity(Q(1, 3))
    assert z * z == -1 - z


def test_to_mpc_on_rationals():
    assert to_mpc(Q(3, 4)) == mpmath.mpc(0.75)
    assert scalar_eq(Q(1, 2), Q(2, 4))


@given(st.integers(-8, 8), st.integers(-8, 8), st.integers(-8, 8))
@settings(max_examples=60, deadline=None)
def test_field_ring_axioms(i, j, k):
    f = cyclotomic_field(12)
    a = f.element([Q(i), Q(j), 0, 1])
    b = f.element([Q(k), 1])
    c = f.element([1, Q(i - k)])
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(st.integers(1, 11))
@settings(max_examples=30, deadline=None)
def test_nonzero_invertible(k):
    z = root_of_unity(Q(k, 12))
    one = z * z.inverse()
    assert one == 1


def test_zero_has_no_inverse():
    f = cyclotomic_field(4)
    zero = f.element([0])
    with pytest.raises(ZeroDivisionError):
        zero.inverse()
