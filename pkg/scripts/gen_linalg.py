"""Regenerate the shipped linear algebra problem file.

    python3 scripts/gen_linalg.py            # rewrite src/acmatch/data/linalg.problem
    python3 scripts/gen_linalg.py --check    # fail if the shipped file is stale
"""
import argparse
import os
import sys

from acmatch.linalg import linalg_problem
from acmatch.parsing import dump_problem

TARGET = os.path.join(os.path.dirname(__file__), os.pardir, "src", "acmatch", "data", "linalg.problem")
COUNT, SEED = 100, 1


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--check", action="store_true", help="compare instead of writing")
    parser.add_argument("--out", default=TARGET)
    args = parser.parse_args(argv)
    text = dump_problem(linalg_problem(COUNT, SEED))
    if args.check:
        with open(args.out, encoding="utf-8") as fh:
            if fh.read() != text:
                print(f"{args.out} is out of date", file=sys.stderr)
                return 1
        return 0
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
