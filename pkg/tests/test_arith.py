import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ktotal.arith import (
    frac_mod,
    fmt_fraction,
    inv_mod,
    is_dyadic,
    l_sequence,
    lcm_all,
    odd_factorial,
    odd_part,
    position_weight,
    qmod_dyadic,
    v2,
)


def slow_odd_part(k):
    while k % 2 == 0:
        k //= 2
    return k


@given(st.integers(1, 10**12))
def test_odd_part_matches_repeated_halving(k):
    assert odd_part(k) == slow_odd_part(k)
    assert odd_part(k) << v2(k) == k


def test_l_sequence_prefix():
    assert l_sequence(8) == (1, 1, 3, 1, 5, 3, 7, 1)


@pytest.mark.parametrize("j", range(0, 25))
def test_odd_factorial_via_math_factorial(j):
    assert odd_factorial(j) == slow_odd_part(math.factorial(j))


def test_position_weight_pairs_up():
    assert [position_weight(m) for m in range(1, 9)] == [1, 1, 1, 1, 3, 3, 3, 3]
    with pytest.raises(ValueError):
        position_weight(0)


@pytest.mark.parametrize("bad", [0, -3])
def test_odd_part_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        odd_part(bad)


@given(st.integers(-50, 50), st.integers(1, 60).filter(lambda d: d % 2))
def test_frac_mod_inverts_denominator(num, m):
    den = 2 ** (abs(num) % 5)
    r = frac_mod(Fraction(num, den), m)
    assert 0 <= r < m
    assert (r * den - num) % m == 0


def test_frac_mod_rejects_shared_factor():
    with pytest.raises(ValueError):
        frac_mod(Fraction(1, 3), 9)


@given(st.integers(1, 200), st.integers(2, 200))
def test_inv_mod(a, m):
    if math.gcd(a, m) == 1:
        assert a * inv_mod(a, m) % m == 1


def test_dyadic_detection():
    assert is_dyadic(Fraction(5, 8)) and is_dyadic(Fraction(3))
    assert not is_dyadic(Fraction(1, 6))


@given(st.integers(-400, 400), st.integers(1, 400))
def test_qmod_dyadic_differs_by_dyadic(num, den):
    q = Fraction(num, den)
    r = qmod_dyadic(q)
    assert 0 <= r < 1
    assert odd_part(r.denominator) == r.denominator
    assert is_dyadic(q - r)


def test_small_helpers():
    assert lcm_all([4, 6, 10]) == 60
    assert lcm_all([]) == 1
    assert fmt_fraction(Fraction(-3, 4)) == "-3/4"
    assert fmt_fraction(Fraction(6, 3)) == "2"
