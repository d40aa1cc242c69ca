"""Small exact-arithmetic helpers: odd parts, the l-sequence, modular inverses."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


def v2(k: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if k == 0:
        raise ValueError("v2(0) is undefined")
    k = abs(k)
    return (k & -k).bit_length() - 1


def odd_part(k: int) -> int:
    """The odd part l_k of a positive integer k."""
    if k <= 0:
        raise ValueError("odd_part needs a positive integer")
    return k >> v2(k)


def l_sequence(count: int) -> tuple[int, ...]:
    return tuple(odd_part(k) for k in range(1, count + 1))


@lru_cache(maxsize=None)
def odd_factorial(j: int) -> int:
    """Odd part of j!, computed as j! / 2^(j - s_2(j))."""
    if j < 0:
        raise ValueError("negative factorial")
    f = 1
    for i in range(2, j + 1):
        f *= i
    return f >> (j - bin(j).count("1"))


def position_weight(m: int) -> int:
    """Weight of tail coordinate m: odd part of ceil(m/2)!."""
    if m < 1:
        raise ValueError("tail positions start at 1")
    return odd_factorial((m + 1) // 2)


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, v)
    return out


def inv_mod(a: int, m: int) -> int:
    if m == 1:
        return 0
    return pow(a, -1, m)


def frac_mod(q: Fraction, m: int) -> int:
    """Image of a rational with denominator prime to m in Z/m."""
    q = Fraction(q)
    if m == 1:
        return 0
    if gcd(q.denominator, m) != 1:
        raise ValueError(f"{q} has no image in Z/{m}")
    return (q.numerator * inv_mod(q.denominator, m)) % m


def is_dyadic(q: Fraction) -> bool:
    d = Fraction(q).denominator
    return d & (d - 1) == 0


def qmod_dyadic(q: Fraction) -> Fraction:
    """Canonical representative of q in Q/Z[1/2]: c/o with o odd and 0 <= c < o."""
    q = Fraction(q)
    den = q.denominator
    o = odd_part(den)
    if o == 1:
        return Fraction(0)
    c = (q.numerator * inv_mod(den // o, o)) % o
    return Fraction(c, o)


def fmt_fraction(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
