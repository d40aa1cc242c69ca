"""Exact integer linear algebra over finitely generated abelian groups.

Groups are stored in invariant-factor form: generators e_1..e_t of orders
d_1 | d_2 | ... | d_t, followed by free generators.  Homomorphisms are integer
matrices acting on those canonical generators (columns are images).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd, prod
from typing import NamedTuple, Sequence

from .errors import BoundExceeded, DomainMismatch, InfiniteGroup, NotWellDefined

DEFAULT_AUT_BOUND = 10_000


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        a, b = self.to_rows(), other.to_rows()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)] for i in range(self.rows)]
        return IntMatrix.from_rows(out, other.cols)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length does not match matrix")
        return tuple(sum(self.entries[i * self.cols + k] * v[k] for k in range(self.cols)) for i in range(self.rows))

    def det(self) -> int:
        """Fraction-free (Bareiss) determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for r in range(k + 1, n):
                    if a[r][k] != 0:
                        a[k], a[r] = a[r], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


# ---------------------------------------------------------------- Smith form

def _snf_full(m: IntMatrix):
    """Return (U, S, V, U^-1, V^-1) with S = U M V in Smith normal form."""
    nr, nc = m.rows, m.cols
    a = m.to_rows()
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    ui = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]
    vi = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_add(i, j, c):  # row_i += c * row_j
        if c == 0:
            return
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
        for r in ui:
            r[j] -= c * r[i]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in ui:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for r in ui:
            r[i] = -r[i]

    def col_add(j, i, c):  # col_j += c * col_i
        if c == 0:
            return
        for r in a:
            r[j] += c * r[i]
        for r in v:
            r[j] += c * r[i]
        vi[i] = [x - c * y for x, y in zip(vi[i], vi[j])]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vi[i], vi[j] = vi[j], vi[i]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            clean = True
            for i in range(t + 1, nr):
                row_add(i, t, -(a[i][t] // a[t][t]))
                if a[i][t]:
                    clean = False
            for j in range(t + 1, nc):
                col_add(j, t, -(a[t][j] // a[t][t]))
                if a[t][j]:
                    clean = False
            if not clean:
                best = (t, t)
                for i in range(t + 1, nr):
                    if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t + 1, nc):
                    if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                        best = (t, j)
                row_swap(t, best[0])
                col_swap(t, best[1])
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if a[t][t] < 0:
            row_neg(t)
        t += 1
    mk = IntMatrix.from_rows
    return mk(u, nr), mk(a, nc), mk(v, nc), mk(ui, nr), mk(vi, nc)


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with S = U M V diagonal, d1 | d2 | ..., U and V unimodular."""
    u, s, v, _, _ = _snf_full(m)
    return u, s, v


def _diagonal(s: IntMatrix) -> list[int]:
    return [s[i, i] for i in range(min(s.rows, s.cols))]


# ---------------------------------------------------------------- groups

@dataclass(frozen=True)
class FgAbGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError("invariant factors must be at least 2")
            if i and d % self.torsion[i - 1]:
                raise ValueError("invariant factors must form a divisibility chain")

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        if n == 0:
            return cls(1, ())
        return from_orders([n])

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def orders(self) -> tuple[int, ...]:
        return self.torsion + (0,) * self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        return prod(self.torsion) if self.is_finite else None

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ngens:
            raise ValueError("coordinate vector has wrong length")
        return tuple(x % d if d else int(x) for x, d in zip(v, self.orders))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def elements(self):
        if not self.is_finite:
            raise InfiniteGroup("cannot enumerate an infinite group")
        return product(*(range(d) for d in self.torsion))

    def __str__(self) -> str:
        parts = [f"Z{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Presentation:
    """A group given by generators and relations, with maps to canonical form.

    canonical coordinates = to_canon @ x; presented coordinates = from_canon @ y.
    """

    relations: IntMatrix
    group: FgAbGroup
    to_canon: IntMatrix
    from_canon: IntMatrix

    def canon(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.group.reduce(self.to_canon.apply(x))

    def lift(self, y: Sequence[int]) -> tuple[int, ...]:
        return self.from_canon.apply(y)


def present(relations: IntMatrix) -> Presentation:
    """Canonical form of Z^rows / (column span of relations)."""
    u, s, _, ui, _ = _snf_full(relations)
    n = relations.rows
    diag = _diagonal(s) + [0] * max(0, n - min(s.rows, s.cols))
    keep = [i for i in range(n) if diag[i] != 1]
    torsion = tuple(diag[i] for i in keep if diag[i] != 0)
    free = sum(1 for i in keep if diag[i] == 0)
    to_c = IntMatrix.from_rows([u.row(i) for i in keep], n)
    from_c = IntMatrix.from_rows([[ui[r, i] for i in keep] for r in range(n)], len(keep))
    return Presentation(relations, FgAbGroup(free, torsion), to_c, from_c)


def present_orders(orders: Sequence[int]) -> Presentation:
    """Presentation of the direct sum of cyclic groups Z/o (o = 0 means Z)."""
    return present(IntMatrix.diag([int(o) for o in orders]))


def from_orders(orders: Sequence[int]) -> FgAbGroup:
    return present_orders(orders).group


def cokernel_presentation(m: IntMatrix) -> FgAbGroup:
    """Group generated by cols-many generators subject to the rows of m as relations."""
    return present(m.transpose()).group


def relation_matrix(g: FgAbGroup) -> IntMatrix:
    """Columns d_i e_i for each torsion generator."""
    n = g.ngens
    return IntMatrix.from_rows([[d if i == j else 0 for j, d in enumerate(g.torsion)] for i in range(n)], len(g.torsion))


# ---------------------------------------------------------------- homs

@dataclass(frozen=True)
class FgHom:
    domain: FgAbGroup
    codomain: FgAbGroup
    matrix: IntMatrix = field(default=None)

    def __post_init__(self):
        m = self.matrix
        if m is None:
            m = IntMatrix.zeros(self.codomain.ngens, self.domain.ngens)
        if (m.rows, m.cols) != (self.codomain.ngens, self.domain.ngens):
            raise ValueError("matrix shape does not match domain/codomain")
        cod = self.codomain.orders
        rows = m.to_rows()
        rows = [[x % cod[i] if cod[i] else x for x in r] for i, r in enumerate(rows)]
        for j, d in enumerate(self.domain.orders):
            if d == 0:
                continue
            for i, c in enumerate(cod):
                val = d * rows[i][j]
                if (c == 0 and val != 0) or (c and val % c):
                    raise NotWellDefined(f"generator {j} of order {d} is not killed by its image")
        object.__setattr__(self, "matrix", IntMatrix.from_rows(rows, m.cols))

    @classmethod
    def identity(cls, g: FgAbGroup) -> "FgHom":
        return cls(g, g, IntMatrix.identity(g.ngens))

    @classmethod
    def zero(cls, g: FgAbGroup, h: FgAbGroup) -> "FgHom":
        return cls(g, h, IntMatrix.zeros(h.ngens, g.ngens))

    @classmethod
    def scalar(cls, g: FgAbGroup, c: int) -> "FgHom":
        return cls(g, g, IntMatrix.diag([c] * g.ngens))

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.codomain.reduce(self.matrix.apply(tuple(x)))

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.matrix.entries)

    def __neg__(self) -> "FgHom":
        return FgHom(self.domain, self.codomain, IntMatrix(self.matrix.rows, self.matrix.cols, tuple(-e for e in self.matrix.entries)))

    def __add__(self, other: "FgHom") -> "FgHom":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise DomainMismatch("cannot add maps with different endpoints")
        return FgHom(self.domain, self.codomain, IntMatrix(self.matrix.rows, self.matrix.cols, tuple(a + b for a, b in zip(self.matrix.entries, other.matrix.entries))))


def homs_equal(f: FgHom, g: FgHom) -> bool:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise DomainMismatch("maps have different domains or codomains")
    return f.matrix == g.matrix


def compose_homs(f: FgHom, g: FgHom) -> FgHom:
    """The composite g after f."""
    if f.codomain != g.domain:
        raise DomainMismatch(f"cannot compose: {f.codomain} != {g.domain}")
    return FgHom(f.domain, g.codomain, g.matrix @ f.matrix)


# ---------------------------------------------------------------- lattices

def _columns(m: IntMatrix) -> list[tuple[int, ...]]:
    return [m.col(j) for j in range(m.cols)]


def _matrix_from_columns(cols: Sequence[Sequence[int]], dim: int) -> IntMatrix:
    return IntMatrix.from_rows([[c[i] for c in cols] for i in range(dim)], len(cols))


def lattice_basis(gens: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """A Z-basis of the lattice spanned by gens inside Z^dim."""
    if not gens:
        return []
    u, s, _, ui, _ = _snf_full(_matrix_from_columns(gens, dim))
    out = []
    for i, d in enumerate(_diagonal(s)):
        if d:
            out.append(tuple(d * ui[r, i] for r in range(dim)))
    return out


def solve_integer(b: Sequence[Sequence[int]], v: Sequence[int], dim: int) -> tuple[int, ...] | None:
    """Integer coefficients c with sum c_i b_i = v, or None."""
    if not b:
        return () if all(x == 0 for x in v) else None
    bm = _matrix_from_columns(b, dim)
    u, s, vv, _, _ = _snf_full(bm)
    w = u.apply(tuple(v))
    diag = _diagonal(s)
    z = [0] * bm.cols
    for i in range(dim):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if w[i] != 0:
                return None
        else:
            if w[i] % d:
                return None
            z[i] = w[i] // d
    return vv.apply(tuple(z))


def integer_nullspace(m: IntMatrix) -> list[tuple[int, ...]]:
    _, s, v, _, _ = _snf_full(m)
    rank = sum(1 for d in _diagonal(s) if d)
    return [v.col(j) for j in range(rank, m.cols)]


def _in_lattice(basis, v, dim) -> bool:
    return solve_integer(basis, v, dim) is not None


def subgroup(g: FgAbGroup, gens: Sequence[Sequence[int]]) -> tuple[FgAbGroup, FgHom]:
    """The subgroup generated by gens, in canonical form, with its inclusion."""
    n = g.ngens
    rels = _columns(relation_matrix(g))
    basis = lattice_basis(list(gens) + rels, n)
    r = len(basis)
    rel_coords = [solve_integer(basis, rel, n) for rel in rels]
    pres = present(_matrix_from_columns(rel_coords, r) if rel_coords else IntMatrix.zeros(r, 0))
    cols = []
    for k in range(pres.group.ngens):
        c = pres.from_canon.col(k)
        cols.append(tuple(sum(c[i] * basis[i][row] for i in range(r)) for row in range(n)))
    incl = FgHom(pres.group, g, _matrix_from_columns(cols, n) if cols else IntMatrix.zeros(n, 0))
    return pres.group, incl


def _kernel_lattice(h: FgHom) -> list[tuple[int, ...]]:
    """Generators of {x in Z^n : h(x) = 0} (includes the relations of the domain)."""
    g, k = h.domain, h.codomain
    krel = _columns(relation_matrix(k))
    big = IntMatrix.from_rows(
        [list(h.matrix.row(i)) + [-c[i] for c in krel] for i in range(k.ngens)], g.ngens + len(krel)
    ) if k.ngens else IntMatrix.zeros(0, g.ngens)
    null = integer_nullspace(big)
    vecs = [tuple(x[:g.ngens]) for x in null] + _columns(relation_matrix(g))
    return lattice_basis(vecs, g.ngens)


def _image_lattice(h: FgHom) -> list[tuple[int, ...]]:
    return lattice_basis(_columns(h.matrix) + _columns(relation_matrix(h.codomain)), h.codomain.ngens)


class KernelImage(NamedTuple):
    kernel: FgAbGroup
    kernel_inclusion: FgHom
    image: FgAbGroup
    image_inclusion: FgHom


def kernel_image(h: FgHom) -> KernelImage:
    kg, ki = subgroup(h.domain, _kernel_lattice(h))
    ig, ii = subgroup(h.codomain, _columns(h.matrix))
    return KernelImage(kg, ki, ig, ii)


class Exactness(NamedTuple):
    exact: bool
    witness: tuple[int, ...] | None
    reason: str


def is_exact_at(f: FgHom, g: FgHom) -> Exactness:
    """Decide image(f) == kernel(g); on failure return an element in exactly one."""
    if f.codomain != g.domain:
        raise DomainMismatch(f"codomain {f.codomain} differs from domain {g.domain}")
    h = f.codomain
    n = h.ngens
    im = _image_lattice(f)
    ker = _kernel_lattice(g)
    for v in im:
        if not _in_lattice(ker, v, n):
            return Exactness(False, h.reduce(v), "in image, not in kernel")
    for v in ker:
        if not _in_lattice(im, v, n):
            return Exactness(False, h.reduce(v), "in kernel, not in image")
    return Exactness(True, None, "exact")


def is_injective(h: FgHom) -> tuple[bool, tuple[int, ...] | None]:
    n = h.domain.ngens
    rels = _columns(relation_matrix(h.domain))
    for v in _kernel_lattice(h):
        if not _in_lattice(rels, v, n):
            return False, h.domain.reduce(v)
    return True, None


# ---------------------------------------------------------------- Tor and tensor

class TensorTor(NamedTuple):
    tensor: FgAbGroup
    tor: FgAbGroup
    reduction: FgHom


def tensor_tor_cyclic(g: FgAbGroup, n: int) -> TensorTor:
    if n < 2:
        raise ValueError("modulus must be at least 2")
    tp = present_orders([gcd(d, n) for d in g.orders])
    red = FgHom(g, tp.group, tp.to_canon)
    tor = from_orders([gcd(d, n) for d in g.torsion])
    return TensorTor(tp.group, tor, red)


def tor_inclusion(g: FgAbGroup, n: int) -> FgHom:
    """Tor(G, Z_n) realized as the n-torsion of G."""
    gs = [gcd(d, n) for d in g.torsion]
    pres = present_orders(gs)
    cols = []
    for k in range(pres.group.ngens):
        c = pres.from_canon.col(k)
        cols.append(tuple((g.torsion[i] // gs[i]) * c[i] if i < len(gs) else 0 for i in range(g.ngens)))
    m = _matrix_from_columns(cols, g.ngens) if cols else IntMatrix.zeros(g.ngens, 0)
    return FgHom(pres.group, g, m)


# ---------------------------------------------------------------- automorphisms

def _element_order(x: Sequence[int], orders: Sequence[int]) -> int:
    out = 1
    for xi, d in zip(x, orders):
        k = d // gcd(d, xi)
        out = out * k // gcd(out, k)
    return out


def enumerate_automorphisms(g: FgAbGroup, bound: int = DEFAULT_AUT_BOUND) -> list[FgHom]:
    """All automorphisms of a finite group, by extending injective partial maps."""
    if not g.is_finite:
        raise InfiniteGroup("automorphisms of an infinite group are not enumerated")
    if g.order > bound:
        raise BoundExceeded(f"|G| = {g.order} exceeds the bound {bound}")
    orders = g.torsion
    elems = list(g.elements())

    def add(a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, orders))

    by_gen = [[x for x in elems if _element_order(x, orders) == d] for d in orders]
    out: list[FgHom] = []

    def extend(k, images, sub):
        if k == len(orders):
            m = IntMatrix.from_rows([[img[i] for img in images] for i in range(len(orders))], len(orders))
            out.append(FgHom(g, g, m))
            return
        for x in by_gen[k]:
            if x in sub:
                continue
            mult, hit = x, False
            for _ in range(orders[k] - 2):
                mult = add(mult, x)
                if mult in sub:
                    hit = True
                    break
            if hit:
                continue
            newsub = set()
            mult = g.zero()
            for _ in range(orders[k]):
                newsub.update(add(s, mult) for s in sub)
                mult = add(mult, x)
            extend(k + 1, images + [x], newsub)

    extend(0, [], {g.zero()})
    return out


def preimage(h: FgHom, v: Sequence[int]) -> tuple[int, ...] | None:
    """Some x with h(x) = v, or None when v is not in the image."""
    k = h.codomain
    cols = _columns(h.matrix)
    rels = _columns(relation_matrix(k))
    sol = solve_integer(cols + rels, tuple(v), k.ngens)
    if sol is None:
        return None
    return h.domain.reduce(sol[:len(cols)])
