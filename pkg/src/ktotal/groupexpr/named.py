"""Named structured groups: the weighted tail groups over Z[1/2], Q and Q/Z[1/2].

Each is indexed by the nonzero integers j (stored interleaved as 1, -1, 2,
-2, ...) and eventually satisfies a_j = l_{|j|!} a, where l_k is the odd part
of k.  Only the two quotients used by the fixtures are supported.
"""

from __future__ import annotations

from ..errors import UnsupportedKind
from .atoms import Dyadic, QmodDyadic, Rational
from .core import Family, Group, Hom, TailProduct, tail_map


def _weighted_tail(atom) -> Group:
    g = Group((atom,))
    return Group((TailProduct(g, g, Family.weighted(Hom.identity(g)), "Z*"),))


def bold_z() -> Group:
    return _weighted_tail(Dyadic())


def bold_q() -> Group:
    return _weighted_tail(Rational())


def bold_q_mod_z() -> Group:
    return _weighted_tail(QmodDyadic())


def _coordinatewise(dom: Group, cod: Group, q=1) -> Hom:
    """The map applying x -> q x to the base and to every coordinate."""
    d, c = dom.atoms[0], cod.atoms[0]
    base = Hom.single(d.base.atoms[0], c.base.atoms[0], q)
    comp = Hom.single(d.comp.atoms[0], c.comp.atoms[0], q)
    return Hom(dom, cod, ((tail_map(d, c, base, Family.const(comp)),),))


def bold_inclusion() -> Hom:
    """bold Z -> bold Q."""
    return _coordinatewise(bold_z(), bold_q())


def quotient(ambient: Group, sub: Group) -> tuple[Group, Hom]:
    """The quotient group with its projection, for the supported pairs."""
    if ambient == Group((Rational(),)) and sub == Group((Dyadic(),)):
        qd = Group((QmodDyadic(),))
        return qd, Hom.single(Rational(), QmodDyadic(), 1)
    if ambient == bold_q() and sub == bold_z():
        target = bold_q_mod_z()
        return target, _coordinatewise(ambient, target)
    raise UnsupportedKind("only Q/Z[1/2] and bold Q/bold Z quotients are implemented")
