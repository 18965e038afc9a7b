#!/usr/bin/env python3
"""Download and prepare the UCI abalone dataset as data/abalone.csv.

The package's CLI and tests take dataset paths as inputs and never fetch
anything themselves; run this helper once on a machine with network
access.  The housing table (data/housing.csv) already ships with the
repository.

The abalone "Sex" column is categorical (M/F/I) and is encoded
numerically in alphabetic order: F=0, I=1, M=2.  All other columns are
numeric as distributed.

Usage:
    python scripts/fetch_uci.py [--dest data/abalone.csv]
"""
import argparse
import os
import sys
import urllib.request

ABALONE_URL = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/abalone/abalone.data"
)
ABALONE_COLUMNS = [
    "sex",
    "length",
    "diameter",
    "height",
    "whole_weight",
    "shucked_weight",
    "viscera_weight",
    "shell_weight",
    "rings",
]
SEX_CODES = {"F": "0", "I": "1", "M": "2"}
EXPECTED_ROWS = 4177


def fetch_abalone(dest: str) -> None:
    print(f"downloading {ABALONE_URL} ...")
    with urllib.request.urlopen(ABALONE_URL, timeout=60) as response:
        body = response.read().decode("ascii")
    rows = [line for line in body.strip().split("\n") if line]
    if len(rows) != EXPECTED_ROWS:
        raise SystemExit(
            f"expected {EXPECTED_ROWS} rows, got {len(rows)}; refusing to write"
        )
    os.makedirs(os.path.dirname(dest) or ".", exist_ok=True)
    with open(dest, "w", encoding="utf-8") as handle:
        handle.write(",".join(ABALONE_COLUMNS) + "\n")
        for line in rows:
            fields = line.split(",")
            if len(fields) != len(ABALONE_COLUMNS):
                raise SystemExit(f"malformed row: {line!r}")
            fields[0] = SEX_CODES[fields[0]]
            handle.write(",".join(fields) + "\n")
    print(f"wrote {dest} ({len(rows)} rows)")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--dest",
        default=os.path.join(os.path.dirname(__file__), "..", "data", "abalone.csv"),
        help="output CSV path (default: data/abalone.csv)",
    )
    args = parser.parse_args()
    fetch_abalone(os.path.normpath(args.dest))
    return 0


if __name__ == "__main__":
    sys.exit(main())
