from collections import Counter
from itertools import product

import pytest
from hypothesis import assume, given, strategies as st

from ktotal import abgroup as ab
from ktotal.errors import BoundExceeded, DomainMismatch, InfiniteGroup, NotWellDefined

from oracles import (
    apply_matrix,
    brute_exact,
    determinantal_invariant_factors,
    elements,
    hillar_rhea_aut_order,
    naive_invariant_factors,
    order_profile,
    tensor_profile,
    tor_profile,
)


def matrices(max_rows=4, max_cols=4, bound=12):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def small_orders():
    return st.lists(st.integers(1, 12), min_size=1, max_size=3).filter(lambda os: group_size(os) <= 400)


def group_size(orders):
    n = 1
    for o in orders:
        n *= o
    return n


def diagonal(s):
    return [s[i, i] for i in range(min(s.rows, s.cols))]


@given(matrices())
def test_snf_is_a_unimodular_diagonalization(rows):
    m = ab.IntMatrix.from_rows(rows)
    u, s, v = ab.smith_normal_form(m)
    assert u @ m @ v == s
    assert abs(u.det()) == 1 and abs(v.det()) == 1
    off = [s[i, j] for i in range(s.rows) for j in range(s.cols) if i != j]
    assert not any(off)
    d = diagonal(s)
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b == 0) if a == 0 else b % a == 0


@given(matrices(3, 3, 9))
def test_snf_against_determinantal_divisors(rows):
    _, s, _ = ab.smith_normal_form(ab.IntMatrix.from_rows(rows))
    nonzero = [x for x in diagonal(s) if x]
    assert nonzero == determinantal_invariant_factors(rows)
    assert nonzero == naive_invariant_factors(rows)[0]


def test_snf_hand_example():
    m = ab.IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    _, s, _ = ab.smith_normal_form(m)
    assert diagonal(s) == [2, 6, 12]


def test_group_canonical_form():
    g = ab.from_orders([4, 6])
    assert g.torsion == (2, 12)
    assert ab.from_orders([3, 0, 1]) == ab.FgAbGroup(1, (3,))
    assert str(ab.from_orders([])) == "0"
    with pytest.raises(ValueError):
        ab.FgAbGroup(0, (4, 6))
    with pytest.raises(InfiniteGroup):
        list(ab.FgAbGroup(1).elements())


@given(small_orders())
def test_canonical_form_preserves_element_orders(orders):
    g = ab.from_orders(orders)
    assert order_profile(list(g.torsion)) == order_profile(orders)


def test_cokernel_reads_rows_as_relations():
    # <a, b | 2a + 4b, 6b> has order 12
    g = ab.cokernel_presentation(ab.IntMatrix.from_rows([[2, 4], [0, 6]]))
    assert g.order == 12 and g.torsion == (2, 6)


def test_hom_must_respect_orders():
    z4, z2 = ab.from_orders([4]), ab.from_orders([2])
    ab.FgHom(z4, z2, ab.IntMatrix.from_rows([[1]]))
    with pytest.raises(NotWellDefined):
        ab.FgHom(z2, z4, ab.IntMatrix.from_rows([[1]]))
    with pytest.raises(DomainMismatch):
        ab.compose_homs(ab.FgHom.identity(z2), ab.FgHom.identity(z4))


@given(small_orders(), st.integers(-20, 20), st.integers(-20, 20))
def test_composition_is_elementwise(orders, a, b):
    g = ab.from_orders(orders)
    f = ab.FgHom.scalar(g, a)
    h = ab.FgHom.scalar(g, b)
    comp = ab.compose_homs(f, h)
    for x in g.elements():
        assert comp(x) == h(f(x))
    assert ab.homs_equal(comp, ab.FgHom.scalar(g, a * b))


@pytest.mark.parametrize("orders", [[2], [4], [2, 2], [4, 2], [2, 2, 2], [3, 9], [6, 6], [8, 4], [2, 4, 4], [5, 25]])
def test_automorphism_count_against_closed_formula(orders):
    g = ab.from_orders(orders)
    auts = ab.enumerate_automorphisms(g)
    assert len(auts) == hillar_rhea_aut_order(orders)
    assert len({a.matrix for a in auts}) == len(auts)
    for a in auts:
        assert ab.is_injective(a)[0]


def test_automorphism_bound():
    with pytest.raises(BoundExceeded):
        ab.enumerate_automorphisms(ab.from_orders([101]), bound=100)


def random_hom(data, a, b):
    a_g, b_g = ab.from_orders(a), ab.from_orders(b)
    cols = []
    for d in a_g.torsion:
        # an image of order dividing d: pick from the d-torsion of b
        choices = [y for y in b_g.elements() if not any((d * yi) % o for yi, o in zip(y, b_g.torsion))]
        cols.append(data.draw(st.sampled_from(choices)))
    m = ab.IntMatrix.from_rows([[c[i] for c in cols] for i in range(b_g.ngens)], a_g.ngens)
    return ab.FgHom(a_g, b_g, m)


@given(st.data())
def test_exactness_against_enumeration(data):
    a = data.draw(small_orders())
    b = data.draw(small_orders())
    c = data.draw(small_orders())
    f = random_hom(data, a, b)
    g = random_hom(data, list(f.codomain.torsion) or [1], c)
    assume(f.codomain == g.domain)
    A, B, C = (list(x.torsion) for x in (f.domain, f.codomain, g.codomain))
    expected = brute_exact(f.matrix.to_rows(), g.matrix.to_rows(), A, B, C)
    got = ab.is_exact_at(f, g)
    assert got.exact == expected
    if not got.exact:
        w = got.witness
        in_image = any(apply_matrix(f.matrix.to_rows(), x, B) == w for x in elements(A))
        in_kernel = not any(apply_matrix(g.matrix.to_rows(), w, C))
        assert in_image != in_kernel


@given(st.data())
def test_kernel_and_image_orders(data):
    h = random_hom(data, data.draw(small_orders()), data.draw(small_orders()))
    ki = ab.kernel_image(h)
    dom = list(h.domain.elements())
    image = {h(x) for x in dom}
    kernel = [x for x in dom if not any(h(x))]
    assert ki.image.order == len(image)
    assert ki.kernel.order == len(kernel)
    assert {ki.image_inclusion(y) for y in ki.image.elements()} == image
    assert ab.is_injective(ki.kernel_inclusion)[0]


@given(st.data())
def test_preimage(data):
    h = random_hom(data, data.draw(small_orders()), data.draw(small_orders()))
    for y in h.codomain.elements():
        x = ab.preimage(h, y)
        hits = any(h(z) == y for z in h.domain.elements())
        assert (x is not None) == hits
        if x is not None:
            assert h(x) == y


def test_solve_integer():
    b = [(2, 0), (0, 3)]
    assert ab.solve_integer(b, (4, 9), 2) == (2, 3)
    assert ab.solve_integer(b, (1, 0), 2) is None
    assert ab.solve_integer([], (0, 0), 2) == ()


@given(small_orders(), st.integers(2, 12))
def test_tensor_and_tor_against_enumeration(orders, n):
    g = ab.from_orders(orders)
    tt = ab.tensor_tor_cyclic(g, n)
    assert order_profile(list(tt.tensor.torsion) or [1]) == tensor_profile(orders, n)
    assert order_profile(list(tt.tor.torsion) or [1]) == tor_profile(orders, n)
    inc = ab.tor_inclusion(g, n)
    assert ab.is_injective(inc)[0]
    for x in inc.domain.elements():
        assert not any((n * v) % o for v, o in zip(inc(x), g.torsion))
    for x in g.elements():
        assert tt.reduction(x) == tt.tensor.reduce(tt.reduction(x))


def test_integer_nullspace():
    m = ab.IntMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    null = ab.integer_nullspace(m)
    assert len(null) == 2
    for v in null:
        assert m.apply(v) == (0, 0)


def test_element_counts_match_group_order():
    g = ab.from_orders([6, 4])
    assert Counter(1 for _ in g.elements())[1] == g.order == 24
