"""Group elements, membership, map application and decided map equality."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainMismatch, NotAMember, OwnerMismatch, ShapeMismatch
from . import atoms as A
from .core import (
    Group,
    Hom,
    IntoTail,
    OutOfTail,
    TailMap,
    TailProduct,
    TailVal,
    add_parts,
    canon_parts,
    neg_parts,
    parts_zero,
    tail_coordinate,
    zero_parts,
)


@dataclass(frozen=True)
class GroupElement:
    owner: Group
    parts: tuple

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return element_arith(self, other, "add")

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return element_arith(self, other, "sub")

    def __neg__(self) -> "GroupElement":
        return element_arith(self, None, "neg")

    def is_zero(self) -> bool:
        return parts_zero(self.owner, self.parts)

    def __str__(self) -> str:
        return format_element(self)


def element(owner: Group, raw) -> GroupElement:
    """Build an element from a raw payload (one entry per atom)."""
    return GroupElement(owner, canon_parts(owner, raw))


def zero_element(owner: Group) -> GroupElement:
    return GroupElement(owner, zero_parts(owner))


def element_arith(a: GroupElement, b: GroupElement | None, op: str):
    if op == "neg":
        return GroupElement(a.owner, neg_parts(a.owner, a.parts))
    if a.owner != b.owner:
        raise OwnerMismatch(f"elements of {a.owner} and {b.owner} cannot be combined")
    if op == "add":
        return GroupElement(a.owner, add_parts(a.owner, a.parts, b.parts))
    if op == "sub":
        return GroupElement(a.owner, add_parts(a.owner, a.parts, neg_parts(a.owner, b.parts)))
    if op == "eq":
        return a.parts == b.parts
    raise ValueError(f"unknown operation {op!r}")


def membership(raw, g: Group) -> bool:
    """True iff the payload satisfies the constraints of g; malformed payloads raise ShapeMismatch."""
    try:
        canon_parts(g, raw)
    except NotAMember:
        return False
    return True


def apply_hom(h: Hom, x: GroupElement) -> GroupElement:
    if x.owner != h.domain:
        raise DomainMismatch(f"{x.owner} is not the domain {h.domain}")
    return GroupElement(h.codomain, h(x.parts))


def coordinate(x: GroupElement, atom_index: int, label: int):
    """Raw coordinate of a tail component at a display label."""
    atom = x.owner.atoms[atom_index]
    if not isinstance(atom, TailProduct):
        raise ShapeMismatch("coordinates exist only on tail atoms")
    return tail_coordinate(atom, x.parts[atom_index], atom.position(label))


# ---------------------------------------------------------------- formatting

def format_parts(g: Group, parts: tuple) -> str:
    body = ",".join(_fmt_atom(a, p) for a, p in zip(g.atoms, parts))
    return body if len(parts) == 1 else f"({body})"


def _fmt_atom(a, p) -> str:
    if isinstance(a, TailProduct):
        base = format_parts(a.base, p.base)
        if not p.deltas:
            return f"<{base}>"
        d = " ".join(f"{a.label(m)}:{format_parts(a.comp, tail_coordinate(a, p, m))}" for m, _ in p.deltas)
        return f"<{base} | {d}>"
    return A.fmt_part(a, p)


def format_element(x: GroupElement) -> str:
    """Text form such as ([1]_9,[1]_3); tails list the base and the coordinates that leave the rule."""
    if not x.parts:
        return "0"
    return format_parts(x.owner, x.parts)


# ---------------------------------------------------------------- equality

@dataclass(frozen=True)
class Equality:
    equal: bool
    witness: GroupElement | None = None
    lhs: GroupElement | None = None
    rhs: GroupElement | None = None

    def __bool__(self) -> bool:
        return self.equal


def homexpr_equal(f: Hom, g: Hom) -> Equality:
    """Decide f = g; on inequality return a domain element separating them."""
    if (f.domain, f.codomain) != (g.domain, g.codomain):
        raise DomainMismatch("maps with different endpoints are never compared")
    if f == g:
        return Equality(True)
    parts = separating_parts(f - g)
    x = GroupElement(f.domain, parts)
    lhs, rhs = apply_hom(f, x), apply_hom(g, x)
    if lhs == rhs:  # pragma: no cover - guarded by the normal form
        raise AssertionError("normal forms differ but no separating element was found")
    return Equality(False, x, lhs, rhs)


def separating_parts(d: Hom) -> tuple:
    """An element of the domain with d(x) != 0, for a nonzero d."""
    for i, row in enumerate(d.blocks):
        for j, b in enumerate(row):
            if isinstance(b, Fraction) and b == 0:
                continue
            local = _block_witness(b, d.domain.atoms[j], d.codomain.atoms[i])
            if local is None:
                continue
            parts = list(zero_parts(d.domain))
            parts[j] = local
            return tuple(parts)
    raise ValueError("the map is zero")


def _scalar_witness(dom, q: Fraction):
    k = A.kind(dom)
    if k in ("Z", "C", "D"):
        return A.canon_part(dom, 1)
    if k == "QD":
        return Fraction(1, 3)
    num = abs(Fraction(q).numerator)
    p = 3
    while num % p == 0:
        p += 2
    return Fraction(1, p)


def _inner_witness(h: Hom):
    """Witness for a nonzero map between simple groups, as parts."""
    if h.is_zero():
        return None
    return separating_parts(h)


def _block_witness(b, dom, cod):
    if isinstance(b, (Fraction, int)):
        return _scalar_witness(dom, b) if b != 0 else None
    if isinstance(b, IntoTail):
        h = b.base if not b.base.is_zero() else (b.deltas[0][1] if b.deltas else None)
        return None if h is None else _inner_witness(h)[0]
    if isinstance(b, OutOfTail):
        if not b.base.is_zero():
            return TailVal(_inner_witness(b.base), ())
        m = b.row.first_difference(type(b.row).zero(b.row.domain, b.row.codomain))
        if m is None:
            return None
        return TailVal(zero_parts(dom.base), ((m, _inner_witness(b.row.value(m))),))
    if not b.base.is_zero():
        return TailVal(_inner_witness(b.base), ())
    if b.deltas:
        return TailVal(_inner_witness(b.deltas[0][1]), ())
    m = b.diag.first_difference(type(b.diag).zero(b.diag.domain, b.diag.codomain))
    if m is None:
        return None
    return TailVal(zero_parts(dom.base), ((m, _inner_witness(b.diag.value(m))),))
