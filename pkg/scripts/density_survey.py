#!/usr/bin/env python3
"""Survey the exact extremal densities at desk scale.

Prints one row per instance across the four structure families, plus the
forbidden-configuration-free densities of the matching question supports
when --eq is given, so the family/support equalities can be read off a
single table.  All values are exact rationals.
"""

import argparse
import csv
import sys

from replab import forbidden, structures
from replab.fields import FiniteField
from replab.games import unit_tuples
from replab.records import fraction_str
from replab.structures import ghz_support, grid_question_set


def density_rows(line_n: int) -> list[dict]:
    rows = []

    def add(record):
        rows.append({
            "family": record.family,
            "params": ", ".join(f"{k}={record.params[k]}"
                                for k in sorted(record.params)),
            "value": fraction_str(record.value),
            "witness": record.witness_size,
            "universe": record.universe_size,
            "method": record.method,
        })

    for n in range(1, line_n + 1):
        add(structures.r_line(2, n, method="search"))
    for n in range(line_n + 1, 17):
        add(structures.r_line(2, n, method="closed-form"))
    for n in (1, 2):
        add(structures.r_line(3, n))
    for n in (1, 2):
        add(structures.r_square(n))
    for n in (1, 2):
        add(structures.r_corner(n))
    f2, f3, f4 = FiniteField(2), FiniteField(3), FiniteField(2, 2)
    for n in (1, 2):
        add(structures.r_grid(f2, 2, n))
    for n in (1, 2):
        add(structures.r_grid(f3, 1, n))
    add(structures.r_grid(f3, 2, 1))
    add(structures.r_grid(f4, 2, 1))
    return rows


def eq_rows() -> list[dict]:
    rows = []
    supports = [
        ("two-point", list(unit_tuples(2)), (1, 2, 3)),
        ("unitvec(3)", list(unit_tuples(3)), (1, 2)),
        ("ghz", list(ghz_support()), (1, 2)),
        ("grid GF(3) k=2", list(grid_question_set(FiniteField(3), 2)), (1,)),
    ]
    for label, support, spans in supports:
        for n in spans:
            record = forbidden.compute_eq(support, n)
            rows.append({
                "family": "forbidden-free",
                "params": f"support={label}, n={n}",
                "value": fraction_str(record.value),
                "witness": record.witness_size,
                "universe": record.universe_size,
                "method": record.method,
            })
    return rows


def print_table(rows: list[dict]) -> None:
    widths = {key: max(len(key), *(len(str(r[key])) for r in rows))
              for key in rows[0]}
    header = "  ".join(key.ljust(widths[key]) for key in rows[0])
    print(header)
    print("-" * len(header))
    for r in rows:
        print("  ".join(str(r[key]).ljust(widths[key]) for key in r))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--line-n", type=int, default=5,
                        help="largest n solved by search for the q=2 line "
                             "family (closed form above, default 5)")
    parser.add_argument("--eq", action="store_true",
                        help="also list forbidden-free support densities")
    parser.add_argument("--csv", default=None, help="write the rows here")
    args = parser.parse_args(argv)

    rows = density_rows(args.line_n)
    if args.eq:
        rows += eq_rows()
    print_table(rows)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        print(f"\nwrote {len(rows)} rows -> {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
