"""Independent reference computations used by the tests.

Nothing here imports the elimination code under test: invariant factors come
from naive pivoting or determinantal divisors, automorphism counts from a
closed formula, and finite groups are handled by plain enumeration.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations, product
from math import gcd

# ---------------------------------------------------------------- invariant factors


def naive_invariant_factors(rows: list[list[int]]) -> tuple[list[int], int]:
    """(nonzero invariant factors, rank) by repeated smallest-pivot reduction."""
    a = [list(r) for r in rows]
    out = []
    while a and a[0]:
        entries = [(abs(v), i, j) for i, r in enumerate(a) for j, v in enumerate(r) if v]
        if not entries:
            break
        _, i, j = min(entries)
        p = a[i][j]
        clean = True
        for r in range(len(a)):
            if r != i and a[r][j]:
                q = a[r][j] // p
                a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                clean = clean and a[r][j] == 0
        for c in range(len(a[0])):
            if c != j and a[i][c]:
                q = a[i][c] // p
                for r in range(len(a)):
                    a[r][c] -= q * a[r][j]
                clean = clean and a[i][c] == 0
        if not clean:
            continue
        bad = [r for r in range(len(a)) for c in range(len(a[0])) if r != i and c != j and a[r][c] % p]
        if bad:
            a[i] = [x + y for x, y in zip(a[i], a[bad[0]])]
            continue
        out.append(abs(p))
        a = [[v for c, v in enumerate(r) if c != j] for k, r in enumerate(a) if k != i]
    out.sort()
    return out, len(out)


def _det(m: list[list[int]]) -> int:
    n = len(m)
    a = [[Fraction(x) for x in r] for r in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(det)


def determinantal_invariant_factors(rows: list[list[int]]) -> list[int]:
    """Invariant factors d_k / d_{k-1}, with d_k the gcd of all k x k minors."""
    if not rows or not rows[0]:
        return []
    r, c = len(rows), len(rows[0])
    ds = [1]
    for k in range(1, min(r, c) + 1):
        g = 0
        for ri in combinations(range(r), k):
            for ci in combinations(range(c), k):
                g = gcd(g, _det([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        ds.append(g)
    return [ds[k] // ds[k - 1] for k in range(1, len(ds))]


# ---------------------------------------------------------------- automorphism counts


def _factor(n: int) -> dict[int, int]:
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def hillar_rhea_aut_order(orders: list[int]) -> int:
    """|Aut(Z/o_1 + ... + Z/o_r)| from the closed formula for abelian p-groups."""
    by_prime: dict[int, list[int]] = {}
    for o in orders:
        for p, e in _factor(o).items():
            by_prime.setdefault(p, []).append(e)
    total = 1
    for p, es in by_prime.items():
        es = sorted(es)
        n = len(es)
        d = [max(l for l in range(1, n + 1) if es[l - 1] == es[k - 1]) for k in range(1, n + 1)]
        c = [min(l for l in range(1, n + 1) if es[l - 1] == es[k - 1]) for k in range(1, n + 1)]
        t = 1
        for k in range(1, n + 1):
            t *= p ** d[k - 1] - p ** (k - 1)
        for j in range(1, n + 1):
            t *= p ** (es[j - 1] * (n - d[j - 1]))
        for i in range(1, n + 1):
            t *= p ** ((es[i - 1] - 1) * (n - c[i - 1] + 1))
        total *= t
    return total


# ---------------------------------------------------------------- finite groups by enumeration


def elements(orders: list[int]):
    return product(*(range(o) for o in orders))


def element_order(x, orders) -> int:
    o = 1
    for v, m in zip(x, orders):
        k = m // gcd(v, m)
        o = o * k // gcd(o, k)
    return o


def order_profile(orders: list[int]) -> Counter:
    """Multiset of element orders; it determines a finite abelian group up to isomorphism."""
    return Counter(element_order(x, orders) for x in elements(orders))


def tensor_profile(orders: list[int], n: int) -> Counter:
    """G (x) Z_n = G / nG, by enumerating cosets."""
    sub = {tuple((n * v) % o for v, o in zip(x, orders)) for x in elements(orders)}
    seen, out = set(), Counter()
    for x in elements(orders):
        if x in seen:
            continue
        coset = {tuple((a + b) % o for a, b, o in zip(x, s, orders)) for s in sub}
        seen |= coset
        k = 1
        while tuple((k * v) % o for v, o in zip(x, orders)) not in sub:
            k += 1
        out[k] += 1
    return out


def tor_profile(orders: list[int], n: int) -> Counter:
    """Tor(G, Z_n) = n-torsion of G."""
    return Counter(element_order(x, orders) for x in elements(orders)
                   if all((n * v) % o == 0 for v, o in zip(x, orders)))


def apply_matrix(rows, x, cod_orders):
    return tuple(sum(int(q) * v for q, v in zip(r, x)) % o for r, o in zip(rows, cod_orders))


def brute_exact(f_rows, g_rows, a, b, c) -> bool:
    """image(f) = kernel(g) for maps given by integer matrices between finite groups."""
    image = {apply_matrix(f_rows, x, b) for x in elements(a)}
    kernel = {y for y in elements(b) if not any(apply_matrix(g_rows, y, c))}
    return image == kernel


# ---------------------------------------------------------------- truncated colimits


def stage_coordinates(tail_atom, x, m: int):
    """(base, b_1, ..., b_m) of a tail element: its image in the m-th stage A + B^m."""
    from ktotal.groupexpr.core import tail_coordinate

    return (tuple(x.base),) + tuple(tuple(tail_coordinate(tail_atom, x, i)) for i in range(1, m + 1))


def stage_map(sa, sb, stage):
    """The structure map on A + B^m acting coordinatewise: (s_A(a), s_B(b_1), ..., s_B(b_m))."""
    a = stage[0]
    return (tuple(sa(a)),) + tuple(tuple(sb(b)) for b in stage[1:])


def bonding(phi_next, stage):
    """chi_m: A + B^m -> A + B^(m+1), (a, b) -> (a, b, phi_{m+1}(a))."""
    return stage + (tuple(phi_next(stage[0])),)
