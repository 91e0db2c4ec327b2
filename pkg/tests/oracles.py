"""Brute-force reference implementations used as test oracles.

Nothing here touches the propagation or search code of the package: quandles
are found by choosing whole column permutations and checking the axioms
directly, and isomorphisms by trying all n! bijections.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np


def satisfies_axioms(table) -> bool:
    n = len(table)
    if any(table[i][i] != i for i in range(n)):
        return False
    for c in range(n):
        if sorted(table[r][c] for r in range(n)) != list(range(n)):
            return False
    return all(
        table[table[a][b]][c] == table[table[a][c]][table[b][c]]
        for a in range(n) for b in range(n) for c in range(n)
    )


@lru_cache(maxsize=None)
def all_quandles(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Every quandle table on ``0..n-1`` (labelled, not up to isomorphism)."""
    cols_for = [[p for p in permutations(range(n)) if p[j] == j] for j in range(n)]
    found = []
    cols: list[tuple[int, ...]] = []

    def consistent(m: int) -> bool:
        # S_c S_b = S_{b*c} S_c whenever columns b, c and b*c are chosen
        for c in range(m):
            sc = cols[c]
            for b in range(m):
                bc = cols[c][b]
                if bc >= m or (b != m - 1 and c != m - 1 and bc != m - 1):
                    continue
                sb, sbc = cols[b], cols[bc]
                if any(sc[sb[a]] != sbc[sc[a]] for a in range(n)):
                    return False
        return True

    def extend(m: int) -> None:
        if m == n:
            found.append(tuple(tuple(cols[c][r] for c in range(n)) for r in range(n)))
            return
        for p in cols_for[m]:
            cols.append(p)
            if consistent(m + 1):
                extend(m + 1)
            cols.pop()

    extend(0)
    return tuple(found)


@lru_cache(maxsize=None)
def _perms(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)


def brute_isomorphisms(t1, t2) -> set[tuple[int, ...]]:
    """All bijections ``f`` with ``f(a*b) = f(a)*f(b)``."""
    a = np.asarray(t1, dtype=np.int64)
    b = np.asarray(t2, dtype=np.int64)
    n = a.shape[0]
    if b.shape[0] != n:
        return set()
    P = _perms(n)
    lhs = P[:, a]                                   # f(a*b)
    rhs = b[P[:, :, None], P[:, None, :]]           # f(a)*f(b)
    ok = (lhs == rhs).reshape(len(P), -1).all(axis=1)
    return {tuple(int(v) for v in row) for row in P[ok]}


def brute_automorphisms(t) -> set[tuple[int, ...]]:
    return brute_isomorphisms(t, t)


def brute_is_isomorphic(t1, t2) -> bool:
    return bool(brute_isomorphisms(t1, t2))


def brute_classes(tables) -> list[list[int]]:
    """Partition of indices into isomorphism classes."""
    classes: list[list[int]] = []
    for k, t in enumerate(tables):
        for cls in classes:
            if brute_is_isomorphic(tables[cls[0]], t):
                cls.append(k)
                break
        else:
            classes.append([k])
    return classes


def brute_closure(n: int, gens) -> set[tuple[int, ...]]:
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[g[i]] for i in range(n))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen
