"""Coefficient reduction: the functors - (x) Z_n and Tor(-, Z_n) on structured groups.

Both functors are additive, so they act atom by atom and, on tail atoms, on
base, component and rule separately.  Each simple atom X has at most one
cyclic output atom with a chosen generator:

    X          X (x) Z_n (generator 1 (x) 1)    Tor(X, Z_n) (generator, inside X)
    Z          Z/n                               0
    Z/a        Z/gcd(a, n)                       Z/gcd(a, n), a/gcd(a, n)
    Z[1/2]     Z/l_n                             0
    Q          0                                 0
    Q/Z[1/2]   0                                 Z/l_n, 1/l_n

Natural transformations (reduction, Tor inclusion and the coefficient
changes) are then scalars between these generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from ..arith import odd_part, qmod_dyadic
from ..errors import UnsupportedKind
from . import atoms as A
from .core import (
    Family,
    Group,
    Hom,
    IntoTail,
    OutOfTail,
    TailMap,
    TailProduct,
    collapse_group,
    collapse_hom,
    tail_map,
    zero_block,
)


@dataclass(frozen=True)
class Tensor:
    n: int

    def atom(self, x):
        k = A.kind(x)
        if k == "Z":
            return A.Cyclic(self.n)
        if k == "C":
            g = gcd(x.order, self.n)
            return A.Cyclic(g) if g > 1 else None
        if k == "D":
            l = odd_part(self.n)
            return A.Cyclic(l) if l > 1 else None
        return None

    def generator(self, x):
        return 1

    def coordinate(self, x, y, v) -> int:
        """Coefficient of the image v (an element of y) on the chosen generator."""
        return int(A.canon_part(self.atom(y), v))


@dataclass(frozen=True)
class Tor:
    n: int

    def atom(self, x):
        k = A.kind(x)
        if k == "C":
            g = gcd(x.order, self.n)
            return A.Cyclic(g) if g > 1 else None
        if k == "QD":
            l = odd_part(self.n)
            return A.Cyclic(l) if l > 1 else None
        return None

    def generator(self, x):
        if A.kind(x) == "C":
            return x.order // gcd(x.order, self.n)
        return Fraction(1, odd_part(self.n))

    def coordinate(self, x, y, v) -> int:
        """Coefficient of v (an n-torsion element of y) on the Tor generator of y."""
        out = self.atom(y)
        if A.kind(y) == "C":
            step = y.order // out.order
            v = int(v) % y.order
            if v % step:
                raise ValueError("element is not n-torsion")
            return v // step
        r = qmod_dyadic(v)
        if out.order % r.denominator:
            raise ValueError("element is not n-torsion")
        return r.numerator * (out.order // r.denominator) % out.order


@lru_cache(maxsize=None)
def _functor_scalar(F, dom, cod, q):
    """Scalar of F(x q): F(dom) -> F(cod), relative to the chosen generators."""
    fd, fc = F.atom(dom), F.atom(cod)
    if fd is None or fc is None or q == 0:
        return None
    if isinstance(F, Tensor):
        return Fraction(A.canon_part(fc, q))
    image = A.apply_scalar(dom, cod, q, F.generator(dom))
    return Fraction(F.coordinate(None, cod, image))


# ---------------------------------------------------------------- groups

def functor_atoms(F, g: Group) -> list[list]:
    """Per input atom, the list (0 or 1 entries) of output atoms, before collapsing."""
    if isinstance(F, Identity):
        return [[a] for a in g.atoms]
    out = []
    for a in g.atoms:
        if isinstance(a, TailProduct):
            out.append([functor_tail(F, a)])
        else:
            b = _atom_image(F, a)
            out.append([] if b is None else [b])
    return out


@lru_cache(maxsize=None)
def _atom_image(F, a):
    return F.atom(a)


def functor_tail(F, t: TailProduct) -> TailProduct:
    base, comp = functor_group_raw(F, t.base), functor_group_raw(F, t.comp)
    rule = t.rule.map_entries(lambda h: functor_hom_raw(F, h), base, comp)
    return TailProduct(base, comp, rule, t.index)


def functor_group_raw(F, g: Group) -> Group:
    return Group(tuple(b for bs in functor_atoms(F, g) for b in bs))


@lru_cache(maxsize=4096)
def functor_group(F, g: Group) -> Group:
    return collapse_group(functor_group_raw(F, g))


# ---------------------------------------------------------------- maps

def functor_hom_raw(F, h: Hom) -> Hom:
    if isinstance(F, Identity):
        return h
    da, ca = functor_atoms(F, h.domain), functor_atoms(F, h.codomain)
    dom, cod = functor_group_raw(F, h.domain), functor_group_raw(F, h.codomain)
    rows = []
    for i, cs in enumerate(ca):
        for c in cs:
            row = []
            for j, ds in enumerate(da):
                for d in ds:
                    row.append(_functor_block(F, h.blocks[i][j], h.domain.atoms[j], h.codomain.atoms[i], d, c))
            rows.append(tuple(row))
    return Hom(dom, cod, tuple(rows))


@lru_cache(maxsize=4096)
def functor_hom(F, h: Hom) -> Hom:
    return collapse_hom(functor_hom_raw(F, h))


def _functor_block(F, b, x, y, fx, fy):
    if isinstance(b, (Fraction, int)):
        s = _functor_scalar(F, x, y, b)
        return Fraction(0) if s is None else s
    if isinstance(b, IntoTail):
        return IntoTail(functor_hom_raw(F, b.base), tuple((m, functor_hom_raw(F, d)) for m, d in b.deltas))
    if isinstance(b, OutOfTail):
        return OutOfTail(functor_hom_raw(F, b.base),
                         b.row.map_entries(lambda h: functor_hom_raw(F, h), fx.comp, Group((fy,))))
    return TailMap(functor_hom_raw(F, b.base), tuple((m, functor_hom_raw(F, d)) for m, d in b.deltas),
                   b.diag.map_entries(lambda h: functor_hom_raw(F, h), fx.comp, fy.comp))


# ---------------------------------------------------------------- natural maps

@dataclass(frozen=True)
class Identity:
    def atom(self, x):
        return x

    def generator(self, x):
        return 1


IDENTITY = Identity()


@lru_cache(maxsize=None)
def _nat_scalar(kind: str, x, n: int, m: int | None) -> Fraction:
    """Component at the simple atom x of a natural transformation.

    kind: 'reduce' (X -> X (x) Z_n), 'tor_incl' (Tor(X,Z_n) -> X),
    'tensor_up' / 'tor_up' (Z_m -> Z_mn, [1] -> n[1]),
    'tensor_down' / 'tor_down' (Z_mn -> Z_n, [1] -> [1]).
    """
    k = A.kind(x)
    if kind == "reduce":
        return Fraction(1)
    if kind == "tor_incl":
        return Fraction(Tor(n).generator(x))
    if kind == "tensor_up":
        return Fraction(n)
    if kind == "tensor_down":
        return Fraction(1)
    # Tor of the coefficient maps, on generators: up is the inclusion of
    # m-torsion into mn-torsion, down is multiplication by m.
    src, tgt = (Tor(m), Tor(m * n)) if kind == "tor_up" else (Tor(m * n), Tor(n))
    gen = Fraction(src.generator(x))
    if kind == "tor_down":
        gen *= m
    return Fraction(tgt.coordinate(None, x, gen))


@lru_cache(maxsize=None)
def natural_map(g: Group, src, tgt, kind: str, n: int, m: int | None = None) -> Hom:
    """The natural map src(g) -> tgt(g), collapsed."""
    if len(g.atoms) > 1 and g.is_simple:
        # additive functors: assemble atom by atom so the cache is shared across sums
        return _block_diagonal([natural_map(Group((a,)), src, tgt, kind, n, m) for a in g.atoms])
    return collapse_hom(natural_map_raw(g, src, tgt, kind, n, m))


def _block_diagonal(parts: list[Hom]) -> Hom:
    dom = Group(tuple(a for h in parts for a in h.domain.atoms))
    cod = Group(tuple(a for h in parts for a in h.codomain.atoms))
    rows = []
    for i, h in enumerate(parts):
        for r in h.blocks:
            row = []
            for j, other in enumerate(parts):
                row.extend(r if i == j else [Fraction(0)] * len(other.domain.atoms))
            rows.append(tuple(row))
    return Hom.trusted(dom, cod, tuple(rows))


def natural_map_raw(g: Group, src, tgt, kind: str, n: int, m: int | None = None) -> Hom:
    sa, ta = functor_atoms(src, g), functor_atoms(tgt, g)
    dom, cod = Group(tuple(b for bs in sa for b in bs)), Group(tuple(b for bs in ta for b in bs))
    rows = []
    for i, cs in enumerate(ta):
        for c in cs:
            row = []
            for j, ds in enumerate(sa):
                for d in ds:
                    if i != j:
                        row.append(zero_block(d, c))
                    elif isinstance(c, TailProduct):
                        t = g.atoms[i]
                        base = natural_map_raw(t.base, src, tgt, kind, n, m)
                        comp = natural_map_raw(t.comp, src, tgt, kind, n, m)
                        row.append(tail_map(d, c, base, Family.const(comp)))
                    else:
                        row.append(_nat_scalar(kind, g.atoms[i], n, m))
            rows.append(tuple(row))
    return Hom(dom, cod, tuple(rows))


def coeff_reduce(g: Group, n: int):
    """(G (x) Z_n, Tor(G, Z_n), reduction G -> G (x) Z_n)."""
    if n < 2:
        raise ValueError("coefficient modulus must be at least 2")
    return (functor_group(Tensor(n), g), functor_group(Tor(n), g),
            natural_map(g, IDENTITY, Tensor(n), "reduce", n))


def tor_inclusion(g: Group, n: int) -> Hom:
    return natural_map(g, Tor(n), IDENTITY, "tor_incl", n)


def tensor_change(g: Group, a: int, b: int) -> Hom:
    """Coefficient change on G (x) -: up (Z_a -> Z_b, a | b) or down (Z_b -> Z_a)."""
    return _change(g, a, b, Tensor, "tensor")


def tor_change(g: Group, a: int, b: int) -> Hom:
    return _change(g, a, b, Tor, "tor")


def _change(g, a, b, F, prefix):
    if b % a == 0:
        return natural_map(g, F(a), F(b), f"{prefix}_up", b // a, a)
    if a % b == 0:
        return natural_map(g, F(a), F(b), f"{prefix}_down", b, a // b)
    raise UnsupportedKind("coefficient changes need one modulus to divide the other")
