"""Compare a tail group at level n with the truncated colimit built from closed-form stage maps.

The m-th stage map sends (a, t) in Z/l_n + Z/3 to w(m) a + s(m) c_n t in Z/l_n,
with w(m) = 3 for D, D' and the odd part of ceil(m/2)! for F1, F2, and s(m)
alternating for D' and F2.  The script checks that every tail coordinate the
library reports for a base element agrees with this formula.

    python scripts/colimit_oracle.py [--name F1] [--level 9] [--window 10]
"""

import argparse
import sys
from itertools import product

from ktotal.arith import odd_factorial, odd_part
from ktotal.fixtures import load_fixture
from ktotal.groupexpr.core import TailProduct, TailVal, tail_coordinate
from ktotal.groupexpr.element import element


def stage_value(name: str, n: int, m: int, a: int, t: int) -> int:
    l = odd_part(n)
    w = 3 if name in ("D", "Dprime") else odd_factorial((m + 1) // 2)
    s = -1 if name in ("Dprime", "F2") and m % 2 == 0 else 1
    c = (n // 3) % l if n % 3 == 0 else 0
    return (w * a + s * c * t) % l


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--name", default="F1", choices=("D", "Dprime", "F1", "F2"))
    p.add_argument("--level", type=int, default=9)
    p.add_argument("--window", type=int, default=10)
    args = p.parse_args()
    n = args.level
    grp = load_fixture(args.name).totalk.group(0, n)
    if not grp.atoms or not isinstance(grp.atoms[0], TailProduct):
        print(f"{args.name} at level {n} has no tail; nothing to compare")
        return 0
    tail = grp.atoms[0]
    orders = [a.order for a in tail.base.atoms]
    bad = 0
    for base in product(*(range(o) for o in orders)):
        x = element(grp, [TailVal(base, ())])
        a, t = base[0], (base[1] if len(base) > 1 else 0)
        for m in range(1, args.window + 1):
            got = tail_coordinate(tail, x.parts[0], m)[0]
            want = stage_value(args.name, n, m, a, t)
            if got != want:
                bad += 1
                print(f"mismatch at base {base}, m={m}: {got} vs {want}")
    print(f"{args.name} level {n}: {'agrees' if not bad else f'{bad} mismatches'} up to m={args.window}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
