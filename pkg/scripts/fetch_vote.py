#!/usr/bin/env python3
"""Fetch the congressional voting-records dataset and write a numeric CSV.

Downloads house-votes-84.data (435 rows, 16 categorical votes plus a class
column), encodes y=1 / n=0 / ?=0.5, and writes data/house-votes-84.csv with
the class id (0/1 by first appearance) as a trailing label column — the
format the acceptance suite and `--labels-col last` expect.

Usage:  python scripts/fetch_vote.py [dest.csv]
"""

from __future__ import annotations

import sys
import urllib.request
from pathlib import Path

URLS = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/voting-records/house-votes-84.data",
    "https://raw.githubusercontent.com/jbrownlee/Datasets/master/house-votes-84.csv",
)

VOTE_VALUES = {"y": "1", "n": "0", "?": "0.5"}


def fetch() -> str:
    last_error = None
    for url in URLS:
        try:
            with urllib.request.urlopen(url, timeout=30) as resp:
                return resp.read().decode("utf-8")
        except Exception as exc:  # noqa: BLE001 - report every mirror failure
            print(f"  {url}: {exc}", file=sys.stderr)
            last_error = exc
    raise SystemExit(f"could not download the dataset from any mirror: {last_error}")


def convert(raw: str) -> list[str]:
    rows = []
    classes: dict[str, int] = {}
    for line in raw.strip().splitlines():
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 17:
            raise SystemExit(f"unexpected row width {len(cells)}: {line!r}")
        # class first (original layout) or last (some mirrors)
        if cells[0] in ("democrat", "republican"):
            cls, votes = cells[0], cells[1:]
        else:
            cls, votes = cells[-1], cells[:-1]
        label = classes.setdefault(cls, len(classes))
        rows.append(",".join(VOTE_VALUES[v] for v in votes) + f",{label}")
    if len(rows) != 435:
        raise SystemExit(f"expected 435 rows, got {len(rows)}")
    return rows


def main() -> None:
    dest = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "data" / "house-votes-84.csv"
    )
    dest.parent.mkdir(parents=True, exist_ok=True)
    print("downloading house-votes-84 ...")
    rows = convert(fetch())
    dest.write_text("\n".join(rows) + "\n")
    print(f"wrote {dest} ({len(rows)} rows, 16 features + label column)")


if __name__ == "__main__":
    main()
