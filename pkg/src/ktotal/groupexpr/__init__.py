"""Structured groups: dyadic rationals, rationals, tail products and quotients."""

from .atoms import Cyclic, Dyadic, QmodDyadic, Rational
from .core import (
    Family,
    Group,
    Hom,
    IntoTail,
    OutOfTail,
    TailMap,
    TailProduct,
    TailVal,
    collapse_group,
    collapse_hom,
    direct_sum,
    into_tail,
    out_of_tail,
    simple_group,
    tail_map,
    tail_product,
)
from .element import (
    Equality,
    GroupElement,
    apply_hom,
    coordinate,
    element,
    element_arith,
    format_element,
    homexpr_equal,
    membership,
    zero_element,
)
from .fgslice import SliceVerdict, exactness, injectivity
from .named import bold_q, bold_q_mod_z, bold_z, quotient
from .reduce import Tensor, Tor, coeff_reduce, functor_group, functor_hom, natural_map, tor_inclusion

__all__ = [
    "Cyclic", "Dyadic", "QmodDyadic", "Rational", "Family", "Group", "Hom", "IntoTail", "OutOfTail",
    "TailMap", "TailProduct", "TailVal", "collapse_group", "collapse_hom", "direct_sum", "into_tail",
    "out_of_tail", "simple_group", "tail_map", "tail_product", "Equality", "GroupElement", "apply_hom",
    "coordinate", "element", "element_arith", "format_element", "homexpr_equal", "membership",
    "zero_element", "SliceVerdict", "exactness", "injectivity", "bold_q", "bold_q_mod_z", "bold_z",
    "quotient", "Tensor", "Tor", "coeff_reduce", "functor_group", "functor_hom", "natural_map",
    "tor_inclusion",
]
