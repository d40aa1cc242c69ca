"""Total K-theory containers and the Bockstein calculus.

A TotalK stores, for j in {0, 1} and n in {0} + [2..N], the group K_j(;Z_n)
(n = 0 is integral K_j) together with the maps

    rho[j, n]:        K_j -> K_j(;Z_n)
    beta[j, n]:       K_j(;Z_n) -> K_{1-j}
    kappa_up[j, a, b]:   K_j(;Z_a) -> K_j(;Z_b)   (a | b, [1]_a -> (b/a)[1]_b)
    kappa_down[j, a, b]: K_j(;Z_b) -> K_j(;Z_a)   ([1]_b -> [1]_a)

Groups may be marked absent (None) when the data only specifies part of the
invariant; squares touching an absent group are skipped, never assumed.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import BoundMismatch, DomainMismatch, ShapeMismatch
from .groupexpr.core import (
    Family,
    Group,
    Hom,
    TailProduct,
    collapse_group,
    collapse_hom,
    direct_sum,
    tail_map,
    zero_block,
)
from .groupexpr.element import Equality, homexpr_equal
from .groupexpr.fgslice import SliceVerdict, exactness
from .groupexpr.reduce import (
    IDENTITY,
    Tensor,
    Tor,
    functor_group,
    functor_hom,
    natural_map,
    tensor_change,
    tor_change,
    tor_inclusion,
)

DEFAULT_BOUND = 24


def levels(bound: int) -> list[int]:
    return [0] + list(range(2, bound + 1))


def kappa_pairs(bound: int) -> list[tuple[int, int]]:
    """Pairs (a, b) with a >= 2, a | b, b / a >= 2 and b <= bound."""
    return [(a, a * k) for a in range(2, bound + 1) for k in range(2, bound // a + 1)]


@dataclass(frozen=True)
class TotalK:
    bound: int
    groups: dict
    rho: dict
    beta: dict
    kappa_up: dict
    kappa_down: dict

    def group(self, j: int, n: int) -> Group | None:
        return self.groups[(j, n)]

    def levels(self) -> list[int]:
        return levels(self.bound)

    def __eq__(self, other) -> bool:
        return isinstance(other, TotalK) and self.bound == other.bound and self.groups == other.groups and \
            self.rho == other.rho and self.beta == other.beta and self.kappa_up == other.kappa_up and \
            self.kappa_down == other.kappa_down

    __hash__ = None


@dataclass(frozen=True)
class GradedHom:
    source: TotalK
    target: TotalK
    comps: dict = field(default_factory=dict)

    def __post_init__(self):
        for (j, n), h in self.comps.items():
            if h is None:
                continue
            if h.domain != self.source.group(j, n) or h.codomain != self.target.group(j, n):
                raise DomainMismatch(f"component ({j},{n}) has the wrong endpoints")

    def at(self, j: int, n: int) -> Hom | None:
        return self.comps.get((j, n))

    def compose(self, inner: "GradedHom") -> "GradedHom":
        """self o inner."""
        comps = {}
        for key, h in self.comps.items():
            g = inner.comps.get(key)
            comps[key] = None if h is None or g is None else h @ g
        return GradedHom(inner.source, self.target, comps)


# ---------------------------------------------------------------- block assembly

def block_hom(doms: list[Group], cods: list[Group], entries: dict) -> Hom:
    """Hom between direct sums from a sparse matrix {(i, j): Hom cods[i] <- doms[j]}."""
    dom, cod = direct_sum(*doms), direct_sum(*cods)
    for (i, j), h in entries.items():
        if h is not None and (h.domain != doms[j] or h.codomain != cods[i]):
            raise DomainMismatch(f"block ({i},{j}) has the wrong endpoints")
    rows = []
    for i, c in enumerate(cods):
        for ci, ca in enumerate(c.atoms):
            row = []
            for j, d in enumerate(doms):
                h = entries.get((i, j))
                for dj, da in enumerate(d.atoms):
                    row.append(zero_block(da, ca) if h is None else h.blocks[ci][dj])
            rows.append(tuple(row))
    return Hom.trusted(dom, cod, tuple(rows))


# ---------------------------------------------------------------- builders

def build_total_k(k0: Group | None, k1: Group, bound: int = DEFAULT_BOUND, absent=()) -> TotalK:
    """Split realization K_j(;Z_n) = (K_j (x) Z_n) + Tor(K_{1-j}, Z_n).

    k0 may be None: it is then treated as a group with vanishing reductions
    and the integral K_0 together with the maps touching it are marked absent.
    """
    return _build_total_k(k0, k1, bound, frozenset(absent))


@lru_cache(maxsize=256)
def _build_total_k(k0: Group | None, k1: Group, bound: int, absent: frozenset) -> TotalK:
    if bound < 2:
        raise ValueError("the coefficient bound must be at least 2")
    absent = set(absent)
    if k0 is None:
        k0 = Group(())
        absent.add((0, 0))
    ks = (k0, k1)
    groups, rho, beta = {}, {}, {}
    for j in (0, 1):
        k, o = ks[j], ks[1 - j]
        groups[(j, 0)] = k
        for n in range(2, bound + 1):
            t, r = functor_group(Tensor(n), k), functor_group(Tor(n), o)
            groups[(j, n)] = direct_sum(t, r)
            rho[(j, n)] = block_hom([k], [t, r], {(0, 0): functor_hom_reduction(k, n)})
            beta[(j, n)] = block_hom([t, r], [o], {(0, 1): tor_inclusion(o, n)})
    up = LazyMaps({(j, a, b): (_kappa, ks[j], ks[1 - j], a, b) for j in (0, 1) for a, b in kappa_pairs(bound)})
    down = LazyMaps({(j, a, b): (_kappa, ks[j], ks[1 - j], b, a) for j in (0, 1) for a, b in kappa_pairs(bound)})
    tk = TotalK(bound, groups, rho, beta, up, down)
    return mark_absent(tk, absent) if absent else tk


def _kappa(k: Group, o: Group, a: int, b: int) -> Hom:
    """Coefficient change Z_a -> Z_b on (K_j (x) -) + Tor(K_{1-j}, -)."""
    ta, ra = functor_group(Tensor(a), k), functor_group(Tor(a), o)
    tb, rb = functor_group(Tensor(b), k), functor_group(Tor(b), o)
    return block_hom([ta, ra], [tb, rb], {(0, 0): tensor_change(k, a, b), (1, 1): tor_change(o, a, b)})


class LazyMaps(Mapping):
    """A fixed key set whose maps are built on first access."""

    def __init__(self, recipes: dict):
        self._recipes = recipes
        self._done = {}

    def __getitem__(self, key):
        if key not in self._done:
            fn, *args = self._recipes[key]
            self._done[key] = fn(*args)
        return self._done[key]

    def __iter__(self):
        return iter(self._recipes)

    def __len__(self) -> int:
        return len(self._recipes)

    def __contains__(self, key) -> bool:
        return key in self._recipes


def _restrict(maps, keep):
    if isinstance(maps, LazyMaps):
        return LazyMaps({k: r for k, r in maps._recipes.items() if keep(k)})
    return {k: h for k, h in maps.items() if keep(k)}


def functor_hom_reduction(g: Group, n: int) -> Hom:
    return natural_map(g, IDENTITY, Tensor(n), "reduce", n)


def mark_absent(tk: TotalK, absent) -> TotalK:
    groups = {k: (None if k in absent else g) for k, g in tk.groups.items()}
    rho = {(j, n): h for (j, n), h in tk.rho.items() if (j, 0) not in absent and (j, n) not in absent}
    beta = {(j, n): h for (j, n), h in tk.beta.items() if (1 - j, 0) not in absent and (j, n) not in absent}
    def keep(key):
        j, a, b = key
        return (j, a) not in absent and (j, b) not in absent

    up, down = _restrict(tk.kappa_up, keep), _restrict(tk.kappa_down, keep)
    return TotalK(tk.bound, groups, rho, beta, up, down)


@dataclass(frozen=True)
class FData:
    """Data of an F[(phi_m)] construction: K-theory of A and B and the maps K(phi_m).

    maps[(j, n)] is the eventually periodic family m -> K_j(phi_m; Z_n).
    """

    source: TotalK
    target: TotalK
    maps: dict

    def graded_at(self, m: int) -> GradedHom:
        return GradedHom(self.source, self.target, {key: fam.value(m) for key, fam in self.maps.items()})


def f_construction_k(data: FData) -> TotalK:
    """K-theory of F[(phi_m)]: at each level the tail product of K(A) and K(B) along K(phi_m)."""
    a, b = data.source, data.target
    if a.bound != b.bound:
        raise BoundMismatch("source and target carry different coefficient bounds")
    tails = {}
    for key in a.groups:
        ga, gb = a.groups[key], b.groups[key]
        tails[key] = TailProduct(ga, gb, data.maps[key], "N+")

    def lift(dom_key, cod_key, fa, fb):
        d, c = tails[dom_key], tails[cod_key]
        block = tail_map(d, c, fa, Family.const(fb))
        return collapse_hom(Hom(Group((d,)), Group((c,)), ((block,),)))

    groups = {key: collapse_group(Group((t,))) for key, t in tails.items()}
    rho = {(j, n): lift((j, 0), (j, n), a.rho[(j, n)], b.rho[(j, n)]) for (j, n) in a.rho}
    beta = {(j, n): lift((j, n), (1 - j, 0), a.beta[(j, n)], b.beta[(j, n)]) for (j, n) in a.beta}
    up = LazyMaps({(j, p, q): (lambda j=j, p=p, q=q: lift((j, p), (j, q), a.kappa_up[(j, p, q)],
                                                         b.kappa_up[(j, p, q)]),)
                   for (j, p, q) in a.kappa_up})
    down = LazyMaps({(j, p, q): (lambda j=j, p=p, q=q: lift((j, q), (j, p), a.kappa_down[(j, p, q)],
                                                           b.kappa_down[(j, p, q)]),)
                     for (j, p, q) in a.kappa_down})
    return TotalK(a.bound, groups, rho, beta, up, down)


def induced_graded_hom(source: TotalK, target: TotalK, h0: Hom, h1: Hom) -> GradedHom:
    """The graded map induced by (h0, h1) on split realizations from build_total_k."""
    hs = (h0, h1)
    comps = {(0, 0): h0, (1, 0): h1}
    for j in (0, 1):
        h, o = hs[j], hs[1 - j]
        for n in range(2, source.bound + 1):
            t = functor_hom(Tensor(n), h)
            r = functor_hom(Tor(n), o)
            comps[(j, n)] = block_hom([t.domain, r.domain], [t.codomain, r.codomain], {(0, 0): t, (1, 1): r})
    return GradedHom(source, target, comps)


def identity_graded(tk: TotalK) -> GradedHom:
    return GradedHom(tk, tk, {key: Hom.identity(g) for key, g in tk.groups.items() if g is not None})


def scalar_graded(tk: TotalK, c: int) -> GradedHom:
    return GradedHom(tk, tk, {key: Hom.scalar(g, c) for key, g in tk.groups.items() if g is not None})


# ---------------------------------------------------------------- checks

@dataclass(frozen=True)
class NodeVerdict:
    j: int
    n: int
    node: str  # "K_j", "K_j(;Z_n)" or "K_{1-j}"
    holds: bool
    mode: str
    witness: object = None
    reason: str = ""


@dataclass(frozen=True)
class SixTermReport:
    nodes: tuple

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.nodes)

    @property
    def modes(self) -> set:
        return {v.mode for v in self.nodes}


def check_six_term(tk: TotalK, ns=None, param: int | None = None) -> SixTermReport:
    out = []
    for n in ns if ns is not None else range(2, tk.bound + 1):
        for j in (0, 1):
            k, mid, other = tk.group(j, 0), tk.group(j, n), tk.group(1 - j, 0)
            rho, beta = tk.rho.get((j, n)), tk.beta.get((j, n))
            if k is not None and rho is not None:
                out.append(_node(j, n, "K_j", exactness(Hom.scalar(k, n), rho, param)))
            if rho is not None and beta is not None:
                out.append(_node(j, n, "K_j(;Z_n)", exactness(rho, beta, param)))
            if other is not None and beta is not None:
                out.append(_node(j, n, "K_{1-j}", exactness(beta, Hom.scalar(other, n), param)))
    return SixTermReport(tuple(out))


def _node(j, n, node, v: SliceVerdict) -> NodeVerdict:
    return NodeVerdict(j, n, node, v.holds, v.mode, v.witness, v.reason)


def check_square(top: Hom, bottom: Hom, left: Hom, right: Hom) -> Equality:
    """Decide right o top = bottom o left."""
    if top.codomain != right.domain or left.codomain != bottom.domain or top.domain != left.domain \
            or right.codomain != bottom.codomain:
        raise ShapeMismatch("the four maps do not form a square")
    return homexpr_equal(right @ top, bottom @ left)


@dataclass(frozen=True)
class SquareVerdict:
    op: str
    key: tuple
    holds: bool
    witness: object = None
    lhs: object = None
    rhs: object = None


@dataclass(frozen=True)
class LambdaReport:
    squares: tuple
    ops: tuple

    def family(self, op: str) -> list[SquareVerdict]:
        return [s for s in self.squares if s.op == op]

    def passes(self, op: str) -> bool:
        return all(s.holds for s in self.family(op))

    @property
    def holds(self) -> bool:
        return all(s.holds for s in self.squares)

    def failures(self, op: str | None = None) -> list[SquareVerdict]:
        return [s for s in self.squares if not s.holds and (op is None or s.op == op)]


OPS = ("rho", "beta", "kappa")


def check_lambda_linear(h: GradedHom, ops=OPS, ns=None) -> LambdaReport:
    s, t = h.source, h.target
    if s.bound != t.bound:
        raise BoundMismatch("source and target carry different coefficient bounds")
    unknown = set(ops) - set(OPS)
    if unknown:
        raise ValueError(f"unknown operations {sorted(unknown)}")
    ops = tuple(o for o in OPS if o in set(ops))
    wanted = set(ns) if ns is not None else None
    out = []

    def record(op, key, lhs_map, rhs_map):
        eq = homexpr_equal(lhs_map, rhs_map)
        out.append(SquareVerdict(op, key, eq.equal, eq.witness, eq.lhs, eq.rhs))

    for j in (0, 1):
        for n in range(2, s.bound + 1):
            if wanted is not None and n not in wanted:
                continue
            hn, h0, ho = h.at(j, n), h.at(j, 0), h.at(1 - j, 0)
            if "rho" in ops and None not in (hn, h0, s.rho.get((j, n)), t.rho.get((j, n))):
                record("rho", (j, n), hn @ s.rho[(j, n)], t.rho[(j, n)] @ h0)
            if "beta" in ops and None not in (hn, ho, s.beta.get((j, n)), t.beta.get((j, n))):
                record("beta", (j, n), ho @ s.beta[(j, n)], t.beta[(j, n)] @ hn)
        if "kappa" in ops:
            for a, b in kappa_pairs(s.bound):
                if wanted is not None and not ({a, b} <= wanted):
                    continue
                ha, hb = h.at(j, a), h.at(j, b)
                if ha is None or hb is None:
                    continue
                if (j, a, b) in s.kappa_up and (j, a, b) in t.kappa_up:
                    record("kappa", ("up", j, a, b), hb @ s.kappa_up[(j, a, b)], t.kappa_up[(j, a, b)] @ ha)
                if (j, a, b) in s.kappa_down and (j, a, b) in t.kappa_down:
                    record("kappa", ("down", j, a, b), ha @ s.kappa_down[(j, a, b)], t.kappa_down[(j, a, b)] @ hb)
    return LambdaReport(tuple(out), ops)


def restrict_to_kstar(h: GradedHom) -> tuple[Hom | None, Hom | None]:
    return h.at(0, 0), h.at(1, 0)
