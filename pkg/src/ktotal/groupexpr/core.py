"""Groups, tail products, coordinate families and homomorphism normal forms.

Every tail atom T = {(x0, (x_m)) : x_m = t_m(x0) for almost all m} splits as
base + (direct sum over m of component) through the section x0 -> (x0, t(x0)).
Elements and homomorphisms are stored in these split coordinates:

* a tail element is (x0, deltas) with deltas the finitely many nonzero
  deviations x_m - t_m(x0);
* a homomorphism is a block matrix over atoms.  Blocks between simple atoms
  are scalars; blocks touching a tail atom carry a base part, finitely many
  correction terms and an eventually periodic family acting coordinatewise.

Because every block has a unique normal form, equality of homomorphisms is
structural equality, which makes all commutativity checks decidable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from ..arith import lcm, odd_factorial, position_weight
from ..errors import DomainMismatch, NotAMember, NotWellDefined, ShapeMismatch, UnsupportedKind
from . import atoms as A


# ---------------------------------------------------------------- groups

@dataclass(frozen=True)
class Group:
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for a in self.atoms:
            if not (A.is_simple(a) or isinstance(a, TailProduct)):
                raise TypeError(f"{a!r} is not a group atom")

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    @property
    def is_trivial(self) -> bool:
        return not self.atoms

    @property
    def is_simple(self) -> bool:
        return all(A.is_simple(a) for a in self.atoms)

    @property
    def is_fg(self) -> bool:
        """True when every atom is cyclic or a tail over cyclic atoms."""
        for a in self.atoms:
            if isinstance(a, TailProduct):
                if not (a.base.is_fg and a.comp.is_fg):
                    return False
            elif not A.is_fg_simple(a):
                return False
        return True

    def __str__(self) -> str:
        return " + ".join(str(a) for a in self.atoms) if self.atoms else "0"


def direct_sum(*groups: Group) -> Group:
    # the summands are already validated groups
    g = object.__new__(Group)
    object.__setattr__(g, "atoms", tuple(a for h in groups for a in h.atoms))
    return g


def simple_group(*atoms) -> Group:
    return Group(tuple(atoms))


@dataclass(frozen=True)
class TailProduct:
    base: Group
    comp: Group
    rule: "Family"
    index: str = field(default="N+", compare=False)

    def __post_init__(self):
        if not (self.base.is_simple and self.comp.is_simple):
            raise UnsupportedKind("tail products are built over simple atoms only")
        if self.rule.domain != self.base or self.rule.codomain != self.comp:
            raise DomainMismatch("tail rule must map the base to the component")
        if self.index not in ("N+", "Z*"):
            raise ValueError("index tag must be 'N+' or 'Z*'")

    def label(self, m: int) -> int:
        """Display label of position m (Z* interleaves j, -j)."""
        if self.index == "N+":
            return m
        return (m + 1) // 2 if m % 2 else -(m // 2)

    def position(self, label: int) -> int:
        if self.index == "N+":
            if label < 1:
                raise ShapeMismatch("N+ coordinates start at 1")
            return label
        if label == 0:
            raise ShapeMismatch("Z* has no coordinate 0")
        return 2 * label - 1 if label > 0 else -2 * label

    def __str__(self) -> str:
        return f"Tail[{self.base} | {self.comp} | {self.rule.describe()}]"


@dataclass(frozen=True)
class TailVal:
    base: tuple
    deltas: tuple = ()


# ---------------------------------------------------------------- element parts

def zero_parts(g: Group) -> tuple:
    return tuple(_zero_atom(a) for a in g.atoms)


def _zero_atom(a):
    if isinstance(a, TailProduct):
        return TailVal(zero_parts(a.base), ())
    return A.zero_part(a)


def atom_add(a, x, y):
    if isinstance(a, TailProduct):
        base = add_parts(a.base, x.base, y.base)
        d = dict(x.deltas)
        for m, v in y.deltas:
            d[m] = add_parts(a.comp, d[m], v) if m in d else v
        return make_tailval(a, base, d)
    return A.add_part(a, x, y)


def atom_neg(a, x):
    if isinstance(a, TailProduct):
        return TailVal(neg_parts(a.base, x.base), tuple((m, neg_parts(a.comp, v)) for m, v in x.deltas))
    return A.neg_part(a, x)


def atom_is_zero(a, x) -> bool:
    if isinstance(a, TailProduct):
        return parts_zero(a.base, x.base) and not x.deltas
    return A.part_is_zero(a, x)


def add_parts(g: Group, x: tuple, y: tuple) -> tuple:
    return tuple(atom_add(a, u, v) for a, u, v in zip(g.atoms, x, y))


def neg_parts(g: Group, x: tuple) -> tuple:
    return tuple(atom_neg(a, u) for a, u in zip(g.atoms, x))


def parts_zero(g: Group, x: tuple) -> bool:
    return all(atom_is_zero(a, u) for a, u in zip(g.atoms, x))


def make_tailval(atom: TailProduct, base: tuple, deltas) -> TailVal:
    items = deltas.items() if isinstance(deltas, dict) else deltas
    clean = tuple(sorted((m, v) for m, v in items if not parts_zero(atom.comp, v)))
    return TailVal(tuple(base), clean)


def canon_parts(g: Group, raw) -> tuple:
    """Validate and canonicalize a raw payload; raises ShapeMismatch."""
    if not isinstance(raw, (tuple, list)) or len(raw) != len(g.atoms):
        raise ShapeMismatch(f"expected {len(g.atoms)} components for {g}")
    return tuple(_canon_atom(a, r) for a, r in zip(g.atoms, raw))


def _canon_atom(a, r):
    if not isinstance(a, TailProduct):
        if isinstance(r, (TailVal, dict, list, tuple)) or callable(r):
            raise ShapeMismatch(f"{r!r} is not a number")
        return A.canon_part(a, r)
    if isinstance(r, TailVal):
        base = canon_parts(a.base, r.base)
        for m, v in r.deltas:
            if not isinstance(m, int) or m < 1:
                raise ShapeMismatch("delta positions are positive integers")
            canon_parts(a.comp, v)
        return make_tailval(a, base, [(m, canon_parts(a.comp, v)) for m, v in r.deltas])
    return tail_from_coordinates(a, r)


def tail_from_coordinates(a: TailProduct, payload) -> TailVal:
    """Build a tail element from (base, {label: coordinate}, tail_start).

    Coordinates not listed follow the rule.  Listed coordinates at or beyond
    tail_start must agree with the rule; a payload that cannot be described by
    finitely many exceptions raises ShapeMismatch.
    """
    if isinstance(payload, dict):
        base_raw = payload.get("base")
        coords = payload.get("coords", {})
        start = payload.get("tail_start")
    elif isinstance(payload, (tuple, list)) and len(payload) in (2, 3):
        base_raw, coords = payload[0], payload[1]
        start = payload[2] if len(payload) == 3 else None
    else:
        raise ShapeMismatch("tail payload must be (base, coordinates[, tail_start])")
    if not isinstance(coords, dict):
        raise ShapeMismatch("tail coordinates must be a finite mapping; infinite sequences are not representable")
    base = canon_parts(a.base, base_raw if isinstance(base_raw, (list, tuple)) else [base_raw])
    deltas = {}
    for label, val in coords.items():
        try:
            m = a.position(int(label))
        except (TypeError, ValueError) as exc:
            raise ShapeMismatch(f"bad coordinate label {label!r}") from exc
        v = canon_parts(a.comp, val if isinstance(val, (list, tuple)) else [val])
        d = add_parts(a.comp, v, neg_parts(a.comp, a.rule.value(m)(base)))
        if start is not None and m >= a.position(int(start)) and not parts_zero(a.comp, d):
            raise NotAMember(f"coordinate {label} violates the tail rule beyond the declared start")
        deltas[m] = d
    return make_tailval(a, base, deltas)


def tail_coordinate(a: TailProduct, x: TailVal, m: int) -> tuple:
    """The m-th coordinate t_m(x0) + delta_m."""
    v = a.rule.value(m)(x.base)
    d = dict(x.deltas).get(m)
    return add_parts(a.comp, v, d) if d is not None else v


# ---------------------------------------------------------------- blocks

@dataclass(frozen=True)
class IntoTail:
    """Simple atom -> tail: a -> section(base(a)) + finite corrections."""

    base: "Hom"
    deltas: tuple = ()


@dataclass(frozen=True)
class OutOfTail:
    """Tail -> simple atom: s(x0) + delta -> base(x0) + sum_m row_m(delta_m)."""

    base: "Hom"
    row: "Family"


@dataclass(frozen=True)
class TailMap:
    """Tail -> tail: s(x0) + delta -> s'(base(x0)) + (deltas_m(x0) + diag_m(delta_m))."""

    base: "Hom"
    deltas: tuple
    diag: "Family"


def _clean_deltas(items, is_zero) -> tuple:
    d = {}
    for m, h in items:
        d[m] = d[m] + h if m in d else h
    return tuple(sorted((m, h) for m, h in d.items() if not h.is_zero()))


def _canon_block(dom, cod, b):
    if type(b) is Fraction and b.denominator == 1 and type(dom) is A.Cyclic and type(cod) is A.Cyclic \
            and cod.order and dom.order and (b.numerator * dom.order) % cod.order == 0:
        # fast path: a well-defined map between finite cyclic groups
        return b if 0 <= b.numerator < cod.order else Fraction(b.numerator % cod.order)
    dt, ct = isinstance(dom, TailProduct), isinstance(cod, TailProduct)
    if not dt and not ct:
        if not isinstance(b, (Fraction, int)):
            raise TypeError("scalar block expected")
        return A.scalar_canon(dom, cod, b)
    if not dt and ct:
        if not isinstance(b, IntoTail):
            raise TypeError("IntoTail block expected")
        _check(b.base, Group((dom,)), cod.base)
        for m, h in b.deltas:
            _check(h, Group((dom,)), cod.comp)
        return IntoTail(b.base, _clean_deltas(b.deltas, None))
    if dt and not ct:
        if not isinstance(b, OutOfTail):
            raise TypeError("OutOfTail block expected")
        _check(b.base, dom.base, Group((cod,)))
        if b.row.domain != dom.comp or b.row.codomain != Group((cod,)):
            raise DomainMismatch("row family has wrong endpoints")
        return b
    if not isinstance(b, TailMap):
        raise TypeError("TailMap block expected")
    _check(b.base, dom.base, cod.base)
    for m, h in b.deltas:
        _check(h, dom.base, cod.comp)
    if b.diag.domain != dom.comp or b.diag.codomain != cod.comp:
        raise DomainMismatch("diagonal family has wrong endpoints")
    return TailMap(b.base, _clean_deltas(b.deltas, None), b.diag)


def _check(h, dom, cod):
    if h.domain != dom or h.codomain != cod:
        raise DomainMismatch(f"block map {h.domain} -> {h.codomain} where {dom} -> {cod} was expected")


def zero_block(dom, cod):
    dt, ct = isinstance(dom, TailProduct), isinstance(cod, TailProduct)
    if not dt and not ct:
        return Fraction(0)
    if not dt:
        return IntoTail(Hom.zero(Group((dom,)), cod.base), ())
    if not ct:
        return OutOfTail(Hom.zero(dom.base, Group((cod,))), Family.zero(dom.comp, Group((cod,))))
    return TailMap(Hom.zero(dom.base, cod.base), (), Family.zero(dom.comp, cod.comp))


def block_is_zero(b) -> bool:
    if isinstance(b, (Fraction, int)):
        return b == 0
    if isinstance(b, IntoTail):
        return b.base.is_zero() and not b.deltas
    if isinstance(b, OutOfTail):
        return b.base.is_zero() and b.row.is_zero()
    return b.base.is_zero() and not b.deltas and b.diag.is_zero()


def _badd(x, y, dom, cod):
    if isinstance(x, (Fraction, int)):
        return A.scalar_canon(dom, cod, Fraction(x) + Fraction(y))
    if isinstance(x, IntoTail):
        return IntoTail(x.base + y.base, _clean_deltas(x.deltas + y.deltas, None))
    if isinstance(x, OutOfTail):
        return OutOfTail(x.base + y.base, x.row + y.row)
    return TailMap(x.base + y.base, _clean_deltas(x.deltas + y.deltas, None), x.diag + y.diag)


def _bneg(x, dom, cod):
    if isinstance(x, (Fraction, int)):
        return A.scalar_canon(dom, cod, -Fraction(x))
    if isinstance(x, IntoTail):
        return IntoTail(-x.base, tuple((m, -h) for m, h in x.deltas))
    if isinstance(x, OutOfTail):
        return OutOfTail(-x.base, -x.row)
    return TailMap(-x.base, tuple((m, -h) for m, h in x.deltas), -x.diag)


def _bcomp(g, f, dom, mid, cod):
    """Block of g o f where f: dom -> mid and g: mid -> cod."""
    if block_is_zero(g) or block_is_zero(f):
        return zero_block(dom, cod)
    if not isinstance(mid, TailProduct):
        if isinstance(f, (Fraction, int)):
            hf = Hom.single(dom, mid, f)
            if isinstance(g, (Fraction, int)):
                return A.scalar_canon(dom, cod, Fraction(g) * Fraction(f))
            return IntoTail(g.base @ hf, tuple((m, d @ hf) for m, d in g.deltas))
        # f is OutOfTail
        if isinstance(g, (Fraction, int)):
            hg = Hom.single(mid, cod, g)
            return OutOfTail(hg @ f.base, f.row.post(hg))
        if not f.row.is_zero():
            raise UnsupportedKind("a map factoring through a simple atom cannot reproduce an infinite row")
        return TailMap(g.base @ f.base, tuple((m, d @ f.base) for m, d in g.deltas), Family.zero(dom.comp, cod.comp))
    if isinstance(f, IntoTail):
        fd = dict(f.deltas)
        if isinstance(g, OutOfTail):
            total = g.base @ f.base
            for m, d in fd.items():
                total = total + g.row.value(m) @ d
            return total.blocks[0][0]
        gd = dict(g.deltas)
        items = [(m, gd[m] @ f.base) for m in gd] + [(m, g.diag.value(m) @ fd[m]) for m in fd]
        return IntoTail(g.base @ f.base, _clean_deltas(items, None))
    fd = dict(f.deltas)
    if isinstance(g, OutOfTail):
        total = g.base @ f.base
        for m, d in fd.items():
            total = total + g.row.value(m) @ d
        return OutOfTail(total, g.row.compose(f.diag))
    gd = dict(g.deltas)
    items = [(m, gd[m] @ f.base) for m in gd] + [(m, g.diag.value(m) @ fd[m]) for m in fd]
    return TailMap(g.base @ f.base, _clean_deltas(items, None), g.diag.compose(f.diag))


def _bapply(b, dom, cod, x):
    if isinstance(b, (Fraction, int)):
        return A.apply_scalar(dom, cod, b, x)
    if isinstance(b, IntoTail):
        return make_tailval(cod, b.base((x,)), [(m, d((x,))) for m, d in b.deltas])
    if isinstance(b, OutOfTail):
        out = b.base(x.base)
        for m, v in x.deltas:
            out = add_parts(Group((cod,)), out, b.row.value(m)(v))
        return out[0]
    items = {m: d(x.base) for m, d in b.deltas}
    for m, v in x.deltas:
        img = b.diag.value(m)(v)
        items[m] = add_parts(cod.comp, items[m], img) if m in items else img
    return make_tailval(cod, b.base(x.base), items)


# ---------------------------------------------------------------- homomorphisms

@dataclass(frozen=True)
class Hom:
    domain: Group
    codomain: Group
    blocks: tuple = None

    def __post_init__(self):
        dom, cod = self.domain.atoms, self.codomain.atoms
        blocks = self.blocks
        if blocks is None:
            blocks = tuple(tuple(zero_block(d, c) for d in dom) for c in cod)
        if len(blocks) != len(cod) or any(len(r) != len(dom) for r in blocks):
            raise ShapeMismatch("block matrix shape does not match the groups")
        canon = tuple(tuple(_canon_block(d, c, b) for d, b in zip(dom, row)) for c, row in zip(cod, blocks))
        object.__setattr__(self, "blocks", canon)

    # constructors
    @classmethod
    def trusted(cls, dom: Group, cod: Group, blocks: tuple) -> "Hom":
        """Assemble blocks taken from canonical maps without re-canonicalizing them."""
        h = object.__new__(cls)
        object.__setattr__(h, "domain", dom)
        object.__setattr__(h, "codomain", cod)
        object.__setattr__(h, "blocks", blocks)
        return h

    @classmethod
    def zero(cls, dom: Group, cod: Group) -> "Hom":
        return cls(dom, cod, None)

    @classmethod
    def single(cls, dom_atom, cod_atom, q) -> "Hom":
        return cls(Group((dom_atom,)), Group((cod_atom,)), ((Fraction(q),),))

    @classmethod
    def scalar(cls, g: Group, c) -> "Hom":
        """Multiplication by an integer (or admissible rational) c."""
        rows = []
        for i, ci in enumerate(g.atoms):
            row = []
            for j, dj in enumerate(g.atoms):
                if i != j:
                    row.append(zero_block(dj, ci))
                elif isinstance(ci, TailProduct):
                    row.append(TailMap(Hom.scalar(ci.base, c), (), Family.const(Hom.scalar(ci.comp, c))))
                else:
                    row.append(Fraction(c))
            rows.append(tuple(row))
        return cls(g, g, tuple(rows))

    @classmethod
    def identity(cls, g: Group) -> "Hom":
        return cls.scalar(g, 1)

    @classmethod
    def from_matrix(cls, dom: Group, cod: Group, rows) -> "Hom":
        if not (dom.is_simple and cod.is_simple):
            raise UnsupportedKind("matrix literals connect groups of simple atoms")
        return cls(dom, cod, tuple(tuple(Fraction(x) for x in r) for r in rows))

    # structure
    @property
    def shape(self):
        return (len(self.codomain), len(self.domain))

    def is_zero(self) -> bool:
        return all(block_is_zero(b) for r in self.blocks for b in r)

    def matrix(self) -> list[list[Fraction]]:
        if not (self.domain.is_simple and self.codomain.is_simple):
            raise UnsupportedKind("only maps between simple groups have a scalar matrix")
        return [list(r) for r in self.blocks]

    def restrict(self, dom_idx, cod_idx) -> "Hom":
        dom = Group(tuple(self.domain.atoms[j] for j in dom_idx))
        cod = Group(tuple(self.codomain.atoms[i] for i in cod_idx))
        return Hom(dom, cod, tuple(tuple(self.blocks[i][j] for j in dom_idx) for i in cod_idx))

    # algebra
    def __add__(self, other: "Hom") -> "Hom":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise DomainMismatch("cannot add maps with different endpoints")
        dom, cod = self.domain.atoms, self.codomain.atoms
        return Hom(self.domain, self.codomain, tuple(
            tuple(_badd(x, y, dom[j], cod[i]) for j, (x, y) in enumerate(zip(r1, r2)))
            for i, (r1, r2) in enumerate(zip(self.blocks, other.blocks))))

    def __neg__(self) -> "Hom":
        dom, cod = self.domain.atoms, self.codomain.atoms
        return Hom(self.domain, self.codomain, tuple(
            tuple(_bneg(x, dom[j], cod[i]) for j, x in enumerate(r)) for i, r in enumerate(self.blocks)))

    def __sub__(self, other: "Hom") -> "Hom":
        return self + (-other)

    def __matmul__(self, other: "Hom") -> "Hom":
        """Composite self o other."""
        if other.codomain != self.domain:
            raise DomainMismatch(f"cannot compose: {other.codomain} != {self.domain}")
        dom, mid, cod = other.domain.atoms, self.domain.atoms, self.codomain.atoms
        if self.domain.is_simple and other.domain.is_simple and self.codomain.is_simple:
            # scalar blocks compose by multiplication; the constructor canonicalizes the sums
            cols = list(zip(*other.blocks)) if mid else [()] * len(dom)
            zero = Fraction(0)
            return Hom(other.domain, self.codomain, tuple(
                tuple(sum((g * f for g, f in zip(r, col) if g and f), zero) for col in cols) for r in self.blocks))
        rows = []
        for i, c in enumerate(cod):
            row = []
            for j, d in enumerate(dom):
                acc = zero_block(d, c)
                for k, mm in enumerate(mid):
                    g, f = self.blocks[i][k], other.blocks[k][j]
                    if block_is_zero(g) or block_is_zero(f):
                        continue
                    acc = _badd(acc, _bcomp(g, f, d, mm, c), d, c)
                row.append(acc)
            rows.append(tuple(row))
        return Hom(other.domain, self.codomain, tuple(rows))

    def scaled(self, w: int) -> "Hom":
        if not (self.domain.is_simple and self.codomain.is_simple):
            raise UnsupportedKind("weights apply to maps between simple groups")
        return Hom(self.domain, self.codomain, tuple(tuple(Fraction(w) * x for x in r) for r in self.blocks))

    def __call__(self, parts: tuple) -> tuple:
        dom, cod = self.domain.atoms, self.codomain.atoms
        if len(parts) != len(dom):
            raise ShapeMismatch("element does not belong to the domain")
        out = []
        for i, c in enumerate(cod):
            acc = _zero_atom(c)
            for j, d in enumerate(dom):
                b = self.blocks[i][j]
                if block_is_zero(b) or atom_is_zero(d, parts[j]):
                    continue
                acc = atom_add(c, acc, _bapply(b, d, c, parts[j]))
            out.append(acc)
        return tuple(out)

    def window(self) -> tuple[int, int]:
        """(head, period): coordinates beyond head are governed by period-periodic data."""
        head, period = 0, 1
        for r in self.blocks:
            for b in r:
                if isinstance(b, (IntoTail, TailMap)) and b.deltas:
                    head = max(head, b.deltas[-1][0])
                if isinstance(b, OutOfTail):
                    head, period = max(head, len(b.row.head)), lcm(period, b.row.period)
                if isinstance(b, TailMap):
                    head, period = max(head, len(b.diag.head)), lcm(period, b.diag.period)
        return head, period

    def finite_rows(self) -> bool:
        return all(b.row.is_finite() for r in self.blocks for b in r if isinstance(b, OutOfTail))

    def scalars(self) -> list[Fraction]:
        """Every scalar occurring anywhere in the normal form (for slice sizing)."""
        out: list[Fraction] = []
        for r in self.blocks:
            for b in r:
                if isinstance(b, (Fraction, int)):
                    out.append(Fraction(b))
                    continue
                out.extend(b.base.scalars())
                for _, h in getattr(b, "deltas", ()):
                    out.extend(h.scalars())
                fam = b.row if isinstance(b, OutOfTail) else getattr(b, "diag", None)
                if fam is not None:
                    for h in fam.head + fam.cycle + fam.wcycle:
                        out.extend(h.scalars())
        return out


# ---------------------------------------------------------------- families

def _rot(seq, k):
    k %= len(seq)
    return list(seq[k:]) + list(seq[:k])


@dataclass(frozen=True)
class Family:
    """Eventually periodic family of maps between simple groups.

    value(m) = head[m-1] for m <= len(head); beyond the head it is
    cycle[r] + W(m) * wcycle[r] with r = (m - len(head) - 1) mod period and
    W(m) the odd part of ceil(m/2)!.  Instances are always normalized
    (weighted entries that eventually vanish are expanded into the head, the
    period is minimal and the head is as short as possible), so structural
    equality is equality of families.
    """

    domain: Group
    codomain: Group
    head: tuple
    cycle: tuple
    wcycle: tuple

    @classmethod
    def make(cls, dom: Group, cod: Group, head=(), cycle=(), wcycle=()) -> "Family":
        zero = Hom.zero(dom, cod)
        head, cycle, wcycle = list(head), list(cycle) or [zero], list(wcycle) or [zero]
        for h in head + cycle + wcycle:
            _check(h, dom, cod)
        p = lcm(len(cycle), len(wcycle))
        cycle, wcycle = cycle * (p // len(cycle)), wcycle * (p // len(wcycle))
        head, cycle, wcycle = _eliminate_weights(dom, cod, head, cycle, wcycle)
        p = len(cycle)
        for q in range(1, p + 1):
            if p % q == 0 and all(cycle[i] == cycle[i % q] and wcycle[i] == wcycle[i % q] for i in range(p)):
                cycle, wcycle = cycle[:q], wcycle[:q]
                break
        while head:
            h = len(head)
            cand = cycle[-1] + wcycle[-1].scaled(position_weight(h)) if not wcycle[-1].is_zero() else cycle[-1]
            if head[-1] != cand:
                break
            head.pop()
            cycle, wcycle = _rot(cycle, -1), _rot(wcycle, -1)
        return cls(dom, cod, tuple(head), tuple(cycle), tuple(wcycle))

    @classmethod
    def zero(cls, dom: Group, cod: Group) -> "Family":
        return cls.make(dom, cod)

    @classmethod
    def const(cls, h: Hom) -> "Family":
        return cls.make(h.domain, h.codomain, cycle=[h])

    @classmethod
    def weighted(cls, h: Hom) -> "Family":
        """m -> W(m) h."""
        return cls.make(h.domain, h.codomain, wcycle=[h])

    @classmethod
    def periodic(cls, maps, head=()) -> "Family":
        maps = list(maps)
        return cls.make(maps[0].domain, maps[0].codomain, head=head, cycle=maps)

    @property
    def period(self) -> int:
        return len(self.cycle)

    def value(self, m: int) -> Hom:
        if m < 1:
            raise ValueError("positions start at 1")
        h = len(self.head)
        if m <= h:
            return self.head[m - 1]
        r = (m - h - 1) % len(self.cycle)
        w = self.wcycle[r]
        return self.cycle[r] if w.is_zero() else self.cycle[r] + w.scaled(position_weight(m))

    def is_weighted(self) -> bool:
        return any(not w.is_zero() for w in self.wcycle)

    def is_zero(self) -> bool:
        return not self.head and self.is_finite()

    def is_finite(self) -> bool:
        return all(c.is_zero() for c in self.cycle) and not self.is_weighted()

    def support(self) -> list[int]:
        if not self.is_finite():
            raise UnsupportedKind("infinite support")
        return [m for m, h in enumerate(self.head, 1) if not h.is_zero()]

    def _expanded(self, hlen: int, period: int):
        head = [self.value(m) for m in range(1, hlen + 1)]
        shift = hlen - len(self.head)
        cyc = _rot(self.cycle, shift)
        wcy = _rot(self.wcycle, shift)
        reps = period // len(self.cycle)
        return head, cyc * reps, wcy * reps

    def _align(self, other: "Family"):
        hlen = max(len(self.head), len(other.head))
        period = lcm(self.period, other.period)
        return self._expanded(hlen, period), other._expanded(hlen, period)

    def __add__(self, other: "Family") -> "Family":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise DomainMismatch("cannot add families with different endpoints")
        (h1, c1, w1), (h2, c2, w2) = self._align(other)
        return Family.make(self.domain, self.codomain, [a + b for a, b in zip(h1, h2)],
                           [a + b for a, b in zip(c1, c2)], [a + b for a, b in zip(w1, w2)])

    def __neg__(self) -> "Family":
        return Family.make(self.domain, self.codomain, [-h for h in self.head], [-h for h in self.cycle],
                           [-h for h in self.wcycle])

    def __sub__(self, other: "Family") -> "Family":
        return self + (-other)

    def compose(self, inner: "Family") -> "Family":
        """Pointwise composite m -> self(m) o inner(m)."""
        if inner.codomain != self.domain:
            raise DomainMismatch("families are not composable")
        (hg, cg, wg), (hf, cf, wf) = self._align(inner)
        for a, b in zip(wg, wf):
            if not (a @ b).is_zero():
                raise UnsupportedKind("composite of two weighted families leaves the closed class")
        head = [a @ b for a, b in zip(hg, hf)]
        cyc = [a @ b for a, b in zip(cg, cf)]
        wcy = [a @ wb + wa @ b for a, b, wa, wb in zip(cg, cf, wg, wf)]
        return Family.make(inner.domain, self.codomain, head, cyc, wcy)

    def post(self, h: Hom) -> "Family":
        return Family.const(h).compose(self)

    def pre(self, h: Hom) -> "Family":
        return self.compose(Family.const(h))

    def map_entries(self, fn, dom: Group, cod: Group) -> "Family":
        return Family.make(dom, cod, [fn(h) for h in self.head], [fn(h) for h in self.cycle],
                           [fn(h) for h in self.wcycle])

    def first_difference(self, other: "Family") -> int | None:
        (h1, c1, w1), (h2, c2, w2) = self._align(other)
        for m in range(1, len(h1) + len(c1) + 1):
            if self.value(m) != other.value(m):
                return m
        return None

    def describe(self) -> str:
        def s(h):
            if h.domain.is_simple and h.codomain.is_simple:
                return "[" + ";".join(",".join(_fmt_q(x) for x in r) for r in h.blocks) + "]"
            return "map"
        parts = []
        if self.head:
            parts.append("head " + " ".join(s(h) for h in self.head))
        parts.append("cycle " + " ".join(s(h) for h in self.cycle))
        if self.is_weighted():
            parts.append("weighted " + " ".join(s(h) for h in self.wcycle))
        return "; ".join(parts)


def _fmt_q(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _eliminate_weights(dom: Group, cod: Group, head, cycle, wcycle):
    """Move weighted entries that eventually vanish into an explicit head."""
    need = 0
    kill = set()
    for r, w in enumerate(wcycle):
        for i, row in enumerate(w.blocks):
            for j, q in enumerate(row):
                if q == 0:
                    continue
                mod = A.scalar_kills_eventually(dom.atoms[j], cod.atoms[i], q)
                if mod is None:
                    if A.kind(cod.atoms[i]) == "C":
                        raise UnsupportedKind("weighted entries into even cyclic groups are not eventually periodic")
                    continue
                if mod % 2 == 0:
                    raise UnsupportedKind("weighted entries into even cyclic groups are not eventually periodic")
                jj = 1
                while odd_factorial(jj) % mod:
                    jj += 1
                need = max(need, 2 * jj - 1)
                kill.add((r, i, j))
    if not kill:
        return head, cycle, wcycle
    h = len(head)
    p = len(cycle)
    target = max(h, need - 1)
    new_head = list(head)
    for m in range(h + 1, target + 1):
        r = (m - h - 1) % p
        v = cycle[r]
        if not wcycle[r].is_zero():
            v = v + wcycle[r].scaled(position_weight(m))
        new_head.append(v)
    shift = target - h
    cycle, wcycle = _rot(cycle, shift), _rot(wcycle, shift)
    killed = {((r - shift) % p, i, j) for r, i, j in kill}
    new_w = []
    for r, w in enumerate(wcycle):
        rows = [[Fraction(0) if (r, i, j) in killed else q for j, q in enumerate(row)] for i, row in enumerate(w.blocks)]
        new_w.append(Hom(w.domain, w.codomain, tuple(tuple(r_) for r_ in rows)))
    return new_head, cycle, new_w


# ---------------------------------------------------------------- tail builders

def tail_product(base: Group, comp: Group, rule: Family, index: str = "N+") -> Group:
    """The tail product as a group; collapses to the base when the component is trivial."""
    if comp.is_trivial:
        return Group(base.atoms)
    return Group((TailProduct(base, comp, rule, index),))


def section_defect(dom: TailProduct | None, cod: TailProduct, base: Hom, coords: Family,
                   extra: Family | None = None) -> tuple:
    """Finite correction terms of a coordinatewise map; NotWellDefined if infinite.

    The map is x -> (base(x0), coords_m(x_m) + extra_m(x0)); its split form needs
    coords_m o t_m + extra_m - t'_m o base to vanish for almost all m.
    """
    defect = -cod.rule.pre(base)
    if dom is not None:
        defect = defect + coords.compose(dom.rule)
    if extra is not None:
        defect = defect + extra
    if not defect.is_finite():
        raise NotWellDefined("the coordinate formula does not preserve the tail rule")
    return tuple((m, defect.value(m)) for m in defect.support())


def tail_map(dom: TailProduct, cod: TailProduct, base: Hom, coords: Family, extra: Family | None = None) -> TailMap:
    return TailMap(base, section_defect(dom, cod, base, coords, extra), coords)


def into_tail(cod: TailProduct, base: Hom, coords: Family) -> IntoTail:
    """Block a -> (base(a), (coords_m(a)))."""
    return IntoTail(base, section_defect(None, cod, base, Family.zero(cod.comp, cod.comp), coords))


def out_of_tail(dom: TailProduct, base: Hom, row: Family) -> OutOfTail:
    """Block x -> base(x0) + sum_m row_m(x_m) for a finitely supported row."""
    if not row.is_finite():
        raise NotWellDefined("a row acting on raw coordinates must be finitely supported")
    total = base
    for m in row.support():
        total = total + row.value(m) @ dom.rule.value(m)
    return OutOfTail(total, row)


# ---------------------------------------------------------------- collapsing

def _collapsible(atom) -> bool:
    return isinstance(atom, TailProduct) and atom.comp.is_trivial


def _expand_atom(atom) -> tuple:
    return atom.base.atoms if _collapsible(atom) else (atom,)


def collapse_group(g: Group) -> Group:
    return Group(tuple(a for atom in g.atoms for a in _expand_atom(atom)))


def collapse_hom(h: Hom) -> Hom:
    dom, cod = h.domain.atoms, h.codomain.atoms
    if not any(_collapsible(a) for a in dom + cod):
        return h
    rows = []
    for i, c in enumerate(cod):
        sub_rows = None
        for j, d in enumerate(dom):
            piece = _collapse_block(h.blocks[i][j], d, c)
            if sub_rows is None:
                sub_rows = [list(r) for r in piece]
            else:
                for r, extra in zip(sub_rows, piece):
                    r.extend(extra)
        if sub_rows is None:
            sub_rows = [[] for _ in _expand_atom(c)]
        rows.extend(tuple(r) for r in sub_rows)
    return Hom(collapse_group(h.domain), collapse_group(h.codomain), tuple(rows))


def _collapse_block(b, d, c):
    dc, cc = _collapsible(d), _collapsible(c)
    if not dc and not cc:
        return [[b]]
    if dc and not cc:
        if not isinstance(c, TailProduct):
            return [list(b.base.blocks[0])]
        return [[IntoTail(b.base.restrict([k], range(len(c.base))),
                          tuple((m, h.restrict([k], range(len(c.comp)))) for m, h in b.deltas))
                 for k in range(len(d.base))]]
    if cc and not dc:
        if not isinstance(d, TailProduct):
            return [[q] for q in (r[0] for r in b.base.blocks)]
        return [[OutOfTail(b.base.restrict(range(len(d.base)), [i]), Family.zero(d.comp, Group((c.base.atoms[i],))))]
                for i in range(len(c.base))]
    return [list(r) for r in b.base.blocks]


def collapse_parts(g: Group, parts: tuple) -> tuple:
    out = []
    for a, p in zip(g.atoms, parts):
        if _collapsible(a):
            out.extend(p.base)
        else:
            out.append(p)
    return tuple(out)
