"""Inner and full automorphism groups of the 73 quandles of order six.

Prints one row per quandle and then lists the groups that occur together
with how often they do.
"""
from __future__ import annotations

from collections import Counter

from quandles.analyze import analyze_library, load_order6


def main() -> None:
    labels, quandles = load_order6()
    rows = analyze_library(quandles, labels)
    for r in rows:
        mark = "faithful" if r.faithful else ""
        print(f"{r.label:<4} Inn = {r.inn_name.pretty():<14} ({r.inn.order:>3})  "
              f"Aut = {r.aut_name.pretty():<18} ({r.aut.order:>3})  {mark}")

    pairs = Counter((str(r.inn_name), str(r.aut_name)) for r in rows)
    print()
    print("most common (Inn, Aut) pairs:")
    for (inn, aut), k in pairs.most_common(8):
        print(f"  {k:>3} x  {inn} / {aut}")


if __name__ == "__main__":
    main()
