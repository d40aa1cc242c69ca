"""Atoms of structured groups and canonical scalar homomorphisms between them.

A group is a direct sum of atoms.  Simple atoms are Z/a (a = 0 meaning Z), the
dyadic rationals Z[1/2], the rationals Q and the torsion group Q/Z[1/2].  A
tail atom is a subgroup of base + prod_m component cut out by an eventually
periodic coordinate rule; it is defined in ``hom`` because its rule is a family
of homomorphisms.

A homomorphism between two simple atoms is multiplication by a scalar q.  For
domains generated by 1 up to 2-division (Z, Z/a, Z[1/2]) the map is determined
by the image of 1, so q is stored in canonical form in the codomain; for the
divisible domains Q and Q/Z[1/2] distinct scalars give distinct maps and q is
stored exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from ..arith import fmt_fraction, frac_mod, is_dyadic, odd_part, qmod_dyadic
from ..errors import NotAMember, NotWellDefined, ShapeMismatch, UnsupportedKind


@dataclass(frozen=True, order=True)
class Cyclic:
    order: int  # 0 means Z

    def __post_init__(self):
        if self.order < 0 or self.order == 1:
            raise ValueError("cyclic atoms have order 0 (for Z) or at least 2")

    def __str__(self) -> str:
        return "Z" if self.order == 0 else f"Z{self.order}"


@dataclass(frozen=True)
class Dyadic:
    def __str__(self) -> str:
        return "Z[1/2]"


@dataclass(frozen=True)
class Rational:
    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class QmodDyadic:
    def __str__(self) -> str:
        return "Q/Z[1/2]"


SIMPLE_TYPES = (Cyclic, Dyadic, Rational, QmodDyadic)


def is_simple(atom) -> bool:
    return isinstance(atom, SIMPLE_TYPES)


def kind(atom) -> str:
    if isinstance(atom, Cyclic):
        return "Z" if atom.order == 0 else "C"
    if isinstance(atom, Dyadic):
        return "D"
    if isinstance(atom, Rational):
        return "Q"
    if isinstance(atom, QmodDyadic):
        return "QD"
    return "T"


def is_fg_simple(atom) -> bool:
    return isinstance(atom, Cyclic)


def zero_part(atom):
    if isinstance(atom, Cyclic):
        return 0
    if is_simple(atom):
        return Fraction(0)
    raise TypeError("tail atoms build their own zero")


def canon_part(atom, x):
    """Canonical form of x as an element of the simple atom; raises ShapeMismatch."""
    k = kind(atom)
    try:
        q = Fraction(x)
    except (TypeError, ValueError) as exc:
        raise ShapeMismatch(f"{x!r} is not a number") from exc
    if k == "Z":
        if q.denominator != 1:
            raise NotAMember(f"{x} is not an integer")
        return q.numerator
    if k == "C":
        if gcd(q.denominator, atom.order) != 1:
            raise NotAMember(f"{x} has no image in Z/{atom.order}")
        return frac_mod(q, atom.order)
    if k == "D":
        if not is_dyadic(q):
            raise NotAMember(f"{x} is not a dyadic rational")
        return q
    if k == "Q":
        return q
    if k == "QD":
        return qmod_dyadic(q)
    raise TypeError("not a simple atom")


def is_member_part(atom, x) -> bool:
    try:
        canon_part(atom, x)
    except NotAMember:
        return False
    return True


def add_part(atom, a, b):
    return canon_part(atom, Fraction(a) + Fraction(b))


def neg_part(atom, a):
    return canon_part(atom, -Fraction(a))


def part_is_zero(atom, a) -> bool:
    return Fraction(a) == 0


def part_order(atom, a) -> int:
    """Order of an element (0 for infinite order)."""
    k = kind(atom)
    if k == "C":
        return atom.order // gcd(atom.order, int(a))
    if k == "QD":
        return Fraction(a).denominator
    return 1 if Fraction(a) == 0 else 0


def fmt_part(atom, a) -> str:
    k = kind(atom)
    if k == "C":
        return f"[{int(a)}]_{atom.order}"
    if k == "QD":
        return f"[{fmt_fraction(a)}]"
    return fmt_fraction(a)


def scalar_canon(dom, cod, q) -> Fraction:
    """Canonical scalar for x -> q x from simple atom dom to simple atom cod."""
    return _scalar_canon(dom, cod, Fraction(q))


@lru_cache(maxsize=65536)
def _scalar_canon(dom, cod, q: Fraction) -> Fraction:
    dk, ck = kind(dom), kind(cod)
    if q == 0:
        return Fraction(0)
    if dk in ("Z", "C", "D"):
        if dk == "D" and ck == "C" and cod.order % 2 == 0:
            raise UnsupportedKind("maps Z[1/2] -> Z/b are handled only for odd b")
        try:
            v = Fraction(canon_part(cod, q))
        except ShapeMismatch as exc:
            raise NotWellDefined(f"scalar {q} does not map {dom} into {cod}") from exc
        if v == 0:
            return v
        if dk == "C":
            a = dom.order
            if ck in ("Z", "D", "Q"):
                raise NotWellDefined(f"torsion {dom} cannot map nontrivially to {cod}")
            if ck == "C" and (a * v) % cod.order:
                raise NotWellDefined(f"x{v} is not well defined from {dom} to {cod}")
            if ck == "QD" and qmod_dyadic(a * v) != 0:
                raise NotWellDefined(f"x{v} is not well defined from {dom} to {cod}")
        if dk == "D" and ck == "Z":
            raise NotWellDefined("Z[1/2] has no nonzero maps to Z")
        return v
    if dk == "Q":
        if ck in ("Q", "QD"):
            return q
        raise NotWellDefined(f"Q has no nonzero maps to {cod}")
    if dk == "QD":
        if ck == "QD":
            if not is_dyadic(q):
                raise NotWellDefined("only dyadic scalars act on Q/Z[1/2]")
            return q
        raise NotWellDefined(f"Q/Z[1/2] has no nonzero maps to {cod}")
    raise TypeError("scalar maps connect simple atoms only")


def apply_scalar(dom, cod, q: Fraction, x):
    if q == 0:
        return zero_part(cod)
    return canon_part(cod, Fraction(q) * Fraction(x))


def scalar_kills_eventually(dom, cod, q: Fraction) -> int | None:
    """For a weighted entry W(m) q: the modulus whose divisibility kills it, or None."""
    if q == 0:
        return 1
    ck = kind(cod)
    if kind(dom) in ("Z", "C", "D"):
        if ck == "C":
            return cod.order // gcd(cod.order, int(q))
        if ck == "QD":
            return Fraction(q).denominator
    return None


def generator_candidates(atom) -> list:
    """Finitely many elements detecting any nonzero scalar map out of the atom."""
    k = kind(atom)
    if k in ("Z", "C", "D"):
        return [1]
    primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    if k == "Q":
        return [Fraction(1)] + [Fraction(1, p) for p in primes]
    return [Fraction(1, p) for p in primes]


def slice_order(atom, m: int) -> int:
    """Order of the coordinate realizing the atom inside the slice with parameter m."""
    k = kind(atom)
    if k in ("Z", "C"):
        return atom.order
    if k in ("D", "Q"):
        return 0
    return odd_part(m)


def slice_generator(atom, m: int):
    k = kind(atom)
    if k in ("Z", "C"):
        return 1
    if k == "D":
        return Fraction(1, m & -m)
    if k == "Q":
        return Fraction(1, m)
    return Fraction(1, odd_part(m))


def slice_coordinate(atom, m: int, x) -> int:
    """Integer coordinate of x in the slice, or raise ShapeMismatch."""
    k = kind(atom)
    if k in ("Z", "C"):
        return int(x)
    g = slice_generator(atom, m)
    c = Fraction(x) / g
    if k == "QD":
        c = Fraction(x) * odd_part(m)
    if c.denominator != 1:
        raise ShapeMismatch(f"{x} lies outside the slice with parameter {m}")
    return c.numerator
