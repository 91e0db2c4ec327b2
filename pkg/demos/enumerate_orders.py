"""Count quandles of orders 1..7 and show how much work deduplication saves.

Run with ``python demos/enumerate_orders.py``.  The first call compiles the
kernels, so the order-1 time includes a few seconds of JIT.
"""
from __future__ import annotations

import time

from quandles.core import format_cycle_columns
from quandles.enumeration import enumerate_quandles, generate_raw
from quandles.iso import fingerprint


def main(max_order: int = 7) -> None:
    print(f"{'n':>2} {'raw':>7} {'classes':>8} {'seconds':>8}")
    for n in range(1, max_order + 1):
        start = time.perf_counter()
        classes = enumerate_quandles(n, workers=1)
        elapsed = time.perf_counter() - start
        raw = generate_raw(n)
        print(f"{n:>2} {raw:>7} {len(classes):>8} {elapsed:>8.2f}")

    # the four-element quandles, in output order, with their column cycle types
    print()
    for q in enumerate_quandles(4):
        print(f"{format_cycle_columns(q):<28} level-1 fingerprint {fingerprint(q, 1).payload}")


if __name__ == "__main__":
    main()
