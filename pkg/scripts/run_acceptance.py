"""Run the acceptance suite and print one line per criterion.

    python scripts/run_acceptance.py            # default checks
    python scripts/run_acceptance.py --stretch  # also the (3,9,15) certificate
"""
import argparse
import os
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--stretch", action="store_true", help="run the identifiability-only stretch case")
    ap.add_argument("-k", default=None, help="pytest -k expression")
    args = ap.parse_args(argv)
    if args.stretch:
        os.environ["TENSORDEC_STRETCH"] = "1"
    opts = ["-q", str(ROOT / "tests" / "test_acceptance.py"), "-p", "no:cacheprovider"]
    if args.k:
        opts += ["-k", args.k]
    return pytest.main(opts)


if __name__ == "__main__":
    sys.exit(main())
