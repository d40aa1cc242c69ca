"""Run the built-in verification suite and write the JSON report next to a text summary.

    python scripts/run_verification.py [--out DIR] [--max-coeff N] [--window J]
"""

import argparse
import pathlib
import sys

from ktotal.cli import emit_report
from ktotal.verify import VerifyConfig, run_all


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="verification")
    p.add_argument("--max-coeff", type=int, default=24)
    p.add_argument("--window", type=int, default=12)
    p.add_argument("--random-instances", type=int, default=100)
    args = p.parse_args()
    cfg = VerifyConfig(("all",), args.max_coeff, args.window, args.random_instances)
    reports = run_all(cfg)
    config = {"case": "all", "max_coeff": args.max_coeff, "window": args.window,
              "random_instances": args.random_instances}
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_bytes(emit_report(reports, "json", config))
    text = emit_report(reports, "text", config)
    (out / "report.txt").write_bytes(text)
    sys.stdout.write(text.decode().splitlines()[-1] + "\n")
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
