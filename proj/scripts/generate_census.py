"""Regenerates data/census_le7.csv: prime knots and links with at most seven
crossings, PD codes exported from spherogram with arc labels shifted to start
at 1."""

import csv
import json
import sys

import spherogram

KNOTS = ["3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3"] + [f"7_{k}" for k in range(1, 8)]
LINKS = (["L2a1", "L4a1", "L5a1"] + [f"L6a{k}" for k in range(1, 6)] + ["L6n1"]
         + [f"L7a{k}" for k in range(1, 8)] + ["L7n1", "L7n2"])


def pd_of(name):
    code = spherogram.Link(name).PD_code()
    return [[a + 1 for a in crossing] for crossing in code]


def main(path):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(["name", "pd", "free_circles"])
        for name in KNOTS + LINKS:
            writer.writerow([name, json.dumps(pd_of(name), separators=(",", ":")), 0])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/census_le7.csv")
