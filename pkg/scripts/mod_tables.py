"""Print the mod-k K_0 groups of the named fixtures, one row per level.

    python scripts/mod_tables.py [--max-coeff N] [NAME ...]
"""

import argparse

from ktotal.bockstein import levels
from ktotal.fixtures import FIXTURE_NAMES, load_fixture


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("names", nargs="*", default=["A", "B", "F1", "F2", "E1"])
    p.add_argument("--max-coeff", type=int, default=12)
    args = p.parse_args()
    for name in args.names:
        if name not in FIXTURE_NAMES:
            p.error(f"unknown fixture {name}")
        tk = load_fixture(name, args.max_coeff).totalk
        print(f"== {name}")
        for n in levels(args.max_coeff):
            k0, k1 = tk.group(0, n), tk.group(1, n)
            print(f"  n={n:>2}  K_0: {k0 if k0 is not None else 'unspecified'}   K_1: {k1}")


if __name__ == "__main__":
    main()
