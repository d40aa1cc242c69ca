"""Named invariants: A, B, the F-constructions D, D', F1, F2, A_chi, E1, E2 and
the two partially specified extensions RemarkE1, RemarkE2.

Coordinates.  K_0(A;Z_k) = Z/l_k + Z/3 (the second summand only when 3 | k)
and K_0(B;Z_k) = Z/l_k, where l_k is the odd part of k.  A map A -> B that is
multiplication by an odd integer u on K_0 acts at level k as the row
[u mod l_k, +-c_k], with c_k = k/3 mod l_k sending the Tor generator [1]_3 to
c_k [1]_{l_k}.  This is the unique choice of c_k that commutes with every
coefficient change; for odd k it equals l_k/3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction

from .arith import is_dyadic, odd_factorial, odd_part
from .bockstein import (
    DEFAULT_BOUND,
    FData,
    GradedHom,
    TotalK,
    block_hom,
    build_total_k,
    f_construction_k,
    identity_graded,
    induced_graded_hom,
    levels,
)
from .errors import GroupMismatch, OutOfRange, UnknownFixture
from .groupexpr import atoms as A
from .groupexpr.core import (
    Family,
    Group,
    Hom,
    TailProduct,
    TailVal,
    collapse_hom,
    tail_coordinate,
    out_of_tail,
    tail_map,
    zero_block,
)
from .groupexpr.element import GroupElement, element
from .groupexpr.named import bold_inclusion, bold_q, bold_q_mod_z, bold_z, quotient

DYADIC = Group((A.Dyadic(),))
Z3 = Group((A.Cyclic(3),))
ZERO = Group(())

FIXTURE_NAMES = ("A", "B", "D", "Dprime", "F1", "F2", "Achi", "E1", "E2", "RemarkE1", "RemarkE2")


# ---------------------------------------------------------------- cones

@dataclass(frozen=True)
class ConeSpec:
    kind: str  # ProductPositive, StrictFirstCoordinate, ExtensionCone, TotalExtensionCone, Trivial
    group: Group | None = None

    def __post_init__(self):
        if self.kind not in ("ProductPositive", "StrictFirstCoordinate", "ExtensionCone", "TotalExtensionCone",
                             "Trivial"):
            raise ValueError(f"unknown cone kind {self.kind!r}")


@dataclass(frozen=True)
class TotalTuple:
    """An element of total K-theory of E_i: x in K_0, u in K_1 and finitely many s_n = (s0, s1)."""

    x: GroupElement
    u: GroupElement
    s: dict = field(default_factory=dict)


def _nonneg_rule(fam: Family) -> bool:
    return all(q >= 0 for h in fam.head + fam.cycle + fam.wcycle for r in h.blocks for q in r)


def product_positive(g: Group, parts: tuple) -> bool:
    """Every coordinate (base and all tail coordinates) is >= 0."""
    for a, p in zip(g.atoms, parts):
        if isinstance(a, TailProduct):
            if not _nonneg_rule(a.rule):
                raise GroupMismatch("product order needs a sign preserving tail rule")
            if any(Fraction(v) < 0 for v in p.base):
                return False
            for m, _ in p.deltas:
                if any(Fraction(v) < 0 for v in tail_coordinate(a, p, m)):
                    return False
        else:
            if A.kind(a) not in ("Z", "D", "Q"):
                raise GroupMismatch(f"{a} is not ordered")
            if Fraction(p) < 0:
                return False
    return True


def _in_bold_z_positive(atom: TailProduct, y) -> bool:
    """y in bold Q lies in the image of K_0^+(B) = positive part of bold Z."""
    if not is_dyadic(Fraction(y.base[0])):
        return False
    for m, _ in y.deltas:
        if not is_dyadic(Fraction(tail_coordinate(atom, y, m)[0])):
            return False
    return product_positive(Group((atom,)), (y,))


def cone_membership(x, cone: ConeSpec) -> bool:
    if cone.kind == "Trivial":
        return True
    if cone.kind == "TotalExtensionCone":
        return total_cone_condition(x, cone) is not None
    if not isinstance(x, GroupElement) or x.owner != cone.group:
        raise GroupMismatch("element does not belong to the cone's group")
    if cone.kind == "ProductPositive":
        return product_positive(x.owner, x.parts)
    if cone.kind == "StrictFirstCoordinate":
        q = Fraction(x.parts[0])
        return q > 0 or x.is_zero()
    q, y = Fraction(x.parts[0]), x.parts[1]
    if q > 0:
        return True
    return q == 0 and _in_bold_z_positive(x.owner.atoms[1], y)


def total_cone_condition(t: TotalTuple, cone: ConeSpec) -> int | None:
    """Which of the three positivity conditions holds (1, 2 or 3), or None."""
    if not isinstance(t, TotalTuple) or t.x.owner != cone.group:
        raise GroupMismatch("a total tuple over K_0 of E_i is required")
    q, y = Fraction(t.x.parts[0]), t.x.parts[1]
    if q > 0:
        return 1
    if q < 0 or not _in_bold_z_positive(t.x.owner.atoms[1], y):
        return None
    a = Fraction(y.base[0])
    if a > 0:
        return 2
    if t.u.is_zero() and all(s0.is_zero() and s1.is_zero() for s0, s1 in t.s.values()):
        return 3
    return None


# ---------------------------------------------------------------- the maps A -> B

def tor_coefficient(k: int) -> int:
    """c_k: image of the Tor generator [1]_3 in Z/l_k (defined when 3 | k)."""
    return (k // 3) % odd_part(k)


def _check_level(k: int, bound: int) -> None:
    if k not in levels(bound):
        raise OutOfRange(f"coefficient level {k} is outside {{0}} + [2..{bound}]")


def ab_map(total_a: TotalK, total_b: TotalK, mult: int, sign: int, k: int) -> Hom:
    """K_0 component at level k of the map A -> B acting as x mult on K_0."""
    dom, cod = total_a.group(0, k), total_b.group(0, k)
    if k == 0:
        return Hom.single(A.Dyadic(), A.Dyadic(), mult)
    if cod.is_trivial:
        return Hom.zero(dom, cod)
    row = [Fraction(mult)]
    if k % 3 == 0:
        row.append(Fraction(sign * tor_coefficient(k)))
    return Hom(dom, cod, (tuple(row),))


def _ab_family(total_a, total_b, k, signs, weighted: bool, mult: int = 1) -> Family:
    """m -> [w(m) mod l_k, signs[m] c_k] with w(m) = W(m) (weighted) or mult."""
    dom, cod = total_a.group(0, k), total_b.group(0, k)
    if cod.is_trivial:
        return Family.zero(dom, cod)
    if k == 0:
        if weighted:
            return Family.weighted(Hom.single(A.Dyadic(), A.Dyadic(), 1))
        return Family.const(Hom.single(A.Dyadic(), A.Dyadic(), mult))
    tor = [ab_map(total_a, total_b, 0, s, k) for s in signs]
    lead = ab_map(total_a, total_b, 1 if weighted else mult, 0, k)
    if weighted:
        return Family.make(dom, cod, cycle=tor, wcycle=[lead])
    return Family.make(dom, cod, cycle=[t + lead for t in tor])


@lru_cache(maxsize=None)
def _a_b(bound: int):
    return build_total_k(DYADIC, Z3, bound), build_total_k(DYADIC, ZERO, bound)


def _graded_ab(total_a, total_b, mult, sign) -> GradedHom:
    comps = {}
    for n in levels(total_a.bound):
        comps[(0, n)] = ab_map(total_a, total_b, mult, sign, n)
        comps[(1, n)] = Hom.zero(total_a.group(1, n), total_b.group(1, n))
    return GradedHom(total_a, total_b, comps)


@lru_cache(maxsize=None)
def omega_map(j: int, primed: bool, k: int, bound: int = DEFAULT_BOUND) -> Hom:
    """K_0(omega_j; Z_k) (or of omega_j'), with x l_{j!} on integral K_0."""
    if j < 1:
        raise OutOfRange("omega is indexed by j >= 1")
    _check_level(k, bound)
    ta, tb = _a_b(bound)
    return ab_map(ta, tb, odd_factorial(j), -1 if primed else 1, k)


@lru_cache(maxsize=None)
def omega_graded(j: int, primed: bool, bound: int = DEFAULT_BOUND) -> GradedHom:
    if j < 1:
        raise OutOfRange("omega is indexed by j >= 1")
    ta, tb = _a_b(bound)
    return _graded_ab(ta, tb, odd_factorial(j), -1 if primed else 1)


@lru_cache(maxsize=None)
def phi_map(primed: bool, k: int, bound: int = DEFAULT_BOUND) -> Hom:
    """K_0(phi; Z_k) or K_0(phi'; Z_k): x 3 on K_0 with Tor part +-c_k."""
    _check_level(k, bound)
    ta, tb = _a_b(bound)
    return ab_map(ta, tb, 3, -1 if primed else 1, k)


@lru_cache(maxsize=None)
def phi_graded(primed: bool, bound: int = DEFAULT_BOUND) -> GradedHom:
    ta, tb = _a_b(bound)
    return _graded_ab(ta, tb, 3, -1 if primed else 1)


@lru_cache(maxsize=None)
def construction_data(kind: str, bound: int = DEFAULT_BOUND) -> FData:
    """FData for D, Dprime (phi or alternating phi, phi') and F1, F2 (omega_ceil(m/2), alternating primes)."""
    ta, tb = _a_b(bound)
    weighted = kind in ("F1", "F2")
    signs = [1] if kind in ("D", "F1") else [1, -1]
    maps = {}
    for n in levels(bound):
        maps[(0, n)] = _ab_family(ta, tb, n, signs, weighted, mult=3)
        maps[(1, n)] = Family.zero(ta.group(1, n), tb.group(1, n))
    return FData(ta, tb, maps)


# ---------------------------------------------------------------- bundles

@dataclass(frozen=True)
class FixtureBundle:
    name: str
    totalk: TotalK
    scale: GroupElement | None
    named_maps: dict
    cone: ConeSpec
    total_cone: ConeSpec | None = None
    notes: tuple = ()


_CACHE: dict = {}


def load_fixture(name: str, bound: int = DEFAULT_BOUND) -> FixtureBundle:
    if name not in FIXTURE_NAMES:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    key = (name, bound)
    if key not in _CACHE:
        _CACHE[key] = _BUILDERS[name](bound)
    return _CACHE[key]


def _scale(tk: TotalK, raw) -> GroupElement:
    return element(tk.group(0, 0), raw)


def _load_a(bound):
    ta, _ = _a_b(bound)
    return FixtureBundle("A", ta, _scale(ta, [1]), {}, ConeSpec("ProductPositive", ta.group(0, 0)))


def _load_b(bound):
    _, tb = _a_b(bound)
    return FixtureBundle("B", tb, _scale(tb, [3]), {}, ConeSpec("ProductPositive", tb.group(0, 0)))


def _load_construction(name):
    def build(bound):
        data = construction_data(name, bound)
        tk = f_construction_k(data)
        maps = {}
        if name in ("D", "Dprime"):
            maps = {"phi": phi_graded(False, bound), "phi_prime": phi_graded(True, bound)}
        if name == "F1":
            maps = {"gamma": gamma_map(bound)}
        return FixtureBundle(name, tk, _scale(tk, [TailVal((1,), ())]), maps,
                             ConeSpec("ProductPositive", tk.group(0, 0)))
    return build


@lru_cache(maxsize=None)
def achi_totalk(bound: int) -> TotalK:
    return build_total_k(Group((A.Rational(),) + bold_q_mod_z().atoms), ZERO, bound)


def _load_achi(bound):
    tk = achi_totalk(bound)
    return FixtureBundle("Achi", tk, _scale(tk, [1, TailVal((0,), ())]), {},
                         ConeSpec("StrictFirstCoordinate", tk.group(0, 0)))


@lru_cache(maxsize=None)
def extension_totalk(bound: int) -> TotalK:
    return build_total_k(Group((A.Rational(),) + bold_q().atoms), Z3, bound)


def _load_e(i):
    def build(bound):
        tk = extension_totalk(bound)
        maps = {"iota": iota_map(i, bound), "pi": pi_map(bound)}
        if i == 1:
            maps["eta"] = eta_map(bound)
        g0 = tk.group(0, 0)
        return FixtureBundle(f"E{i}", tk, _scale(tk, [1, TailVal((0,), ())]), maps,
                             ConeSpec("ExtensionCone", g0), ConeSpec("TotalExtensionCone", g0))
    return build


def remark_k1(i: int) -> Group:
    sign = 1 if i == 1 else -1
    z = Group((A.Cyclic(0),))
    return Group((TailProduct(z, Z3, Family.const(Hom.single(A.Cyclic(0), A.Cyclic(3), sign))),))


@lru_cache(maxsize=None)
def remark_totalk(i: int, bound: int) -> TotalK:
    return build_total_k(None, remark_k1(i), bound)


def _load_remark(i):
    def build(bound):
        tk = remark_totalk(i, bound)
        maps = {"zeta": zeta_map(bound)} if i == 1 else {}
        return FixtureBundle(f"RemarkE{i}", tk, None, maps, ConeSpec("Trivial"),
                             notes=("integral K_0 is not specified and is marked absent",))
    return build


_BUILDERS = {
    "A": _load_a,
    "B": _load_b,
    "D": _load_construction("D"),
    "Dprime": _load_construction("Dprime"),
    "F1": _load_construction("F1"),
    "F2": _load_construction("F2"),
    "Achi": _load_achi,
    "E1": _load_e(1),
    "E2": _load_e(2),
    "RemarkE1": _load_remark(1),
    "RemarkE2": _load_remark(2),
}


# ---------------------------------------------------------------- maps between bundles

@lru_cache(maxsize=None)
def f_totalk(name: str, bound: int = DEFAULT_BOUND) -> TotalK:
    return f_construction_k(construction_data(name, bound))


def _tail_atom(g: Group) -> TailProduct | None:
    return g.atoms[0] if len(g.atoms) == 1 and isinstance(g.atoms[0], TailProduct) else None


def _sign_flip(src: TotalK, tgt: TotalK, n: int) -> Hom:
    """Identity on the base, (-1)^(m+1) on coordinate m."""
    d, c = src.group(0, n), tgt.group(0, n)
    td, tc = _tail_atom(d), _tail_atom(c)
    if td is None:
        return Hom.identity(d) if d == c else Hom.zero(d, c)
    comp = Hom.identity(td.comp)
    block = tail_map(td, tc, Hom.identity(td.base), Family.periodic([comp, -comp]))
    return collapse_hom(Hom(d, c, ((block,),)))


@lru_cache(maxsize=None)
def gamma_map(bound: int = DEFAULT_BOUND, inverse: bool = False) -> GradedHom:
    """F1 -> F2 (or F2 -> F1): identity on K_*, sign flip on even coordinates at every level n >= 2."""
    f1, f2 = f_totalk("F1", bound), f_totalk("F2", bound)
    src, tgt = (f2, f1) if inverse else (f1, f2)
    comps = {(0, 0): Hom.identity(src.group(0, 0)), (1, 0): Hom.identity(src.group(1, 0))}
    for n in range(2, bound + 1):
        comps[(0, n)] = _sign_flip(src, tgt, n)
        g1s, g1t = src.group(1, n), tgt.group(1, n)
        comps[(1, n)] = Hom.identity(g1s) if g1s == g1t else Hom.zero(g1s, g1t)
    return GradedHom(src, tgt, comps)


@lru_cache(maxsize=None)
def iota_map(i: int, bound: int = DEFAULT_BOUND) -> GradedHom:
    """K(iota_i): total K-theory of B_i = F_i into that of E_i."""
    src, tgt = f_totalk(f"F{i}", bound), extension_totalk(bound)
    comps = {(0, 0): iota_k0(), (1, 0): Hom.identity(Z3)}
    for n in range(2, bound + 1):
        d, c = src.group(0, n), tgt.group(0, n)
        if c.is_trivial:
            comps[(0, n)] = Hom.zero(d, c)
        else:
            t = _tail_atom(d)
            pick = Hom(t.base, c, ((Fraction(0), Fraction(1)),))
            comps[(0, n)] = Hom(d, c, ((out_of_tail(t, pick, Family.zero(t.comp, c)),),))
        d1, c1 = src.group(1, n), tgt.group(1, n)
        comps[(1, n)] = Hom.identity(d1) if d1 == c1 else Hom.zero(d1, c1)
    return GradedHom(src, tgt, comps)


def iota_k0() -> Hom:
    """bold Z -> Q + bold Q, y -> (0, y)."""
    inc = bold_inclusion()
    dom = bold_z()
    cod = Group((A.Rational(),) + bold_q().atoms)
    return Hom(dom, cod, ((zero_block(dom.atoms[0], A.Rational()),), (inc.blocks[0][0],)))


def pi_k0() -> Hom:
    """Q + bold Q -> Q + bold Q/bold Z, (x, y) -> (x, class of y)."""
    q = Group((A.Rational(),))
    _, proj = quotient(bold_q(), bold_z())
    return block_hom([q, bold_q()], [q, bold_q_mod_z()], {(0, 0): Hom.identity(q), (1, 1): proj})


@lru_cache(maxsize=None)
def pi_map(bound: int = DEFAULT_BOUND) -> GradedHom:
    e, ach = extension_totalk(bound), achi_totalk(bound)
    return induced_graded_hom(e, ach, pi_k0(), Hom.zero(Z3, ZERO))


@lru_cache(maxsize=None)
def eta_map(bound: int = DEFAULT_BOUND) -> GradedHom:
    """E1 -> E2: the identity in the identified coordinates."""
    return identity_graded(extension_totalk(bound))


@lru_cache(maxsize=None)
def zeta_map(bound: int = DEFAULT_BOUND) -> GradedHom:
    """RemarkE1 -> RemarkE2: zeta_0^1 (a,(a_m)) = (a,(-a_m)), zeta_n^0 = -id, zeta_n^1 (b,(b_m)) = (b,(-b_m))."""
    src, tgt = remark_totalk(1, bound), remark_totalk(2, bound)
    comps = {(0, 0): None}
    comps[(1, 0)] = _negate_coordinates(src.group(1, 0), tgt.group(1, 0))
    for n in range(2, bound + 1):
        comps[(0, n)] = -Hom.identity(src.group(0, n))
        comps[(1, n)] = _negate_coordinates(src.group(1, n), tgt.group(1, n))
    return GradedHom(src, tgt, comps)


def _negate_coordinates(d: Group, c: Group) -> Hom:
    td, tc = _tail_atom(d), _tail_atom(c)
    if td is None:
        return Hom.identity(d)
    block = tail_map(td, tc, Hom.identity(td.base), Family.const(-Hom.identity(td.comp)))
    return Hom(d, c, ((block,),))
