"""Isomorphism testing and deduplication of quandles.

Quandles are bucketed by a column-cycle fingerprint; only quandles that share
a bucket are compared, by a backtracking search over partial maps that are
closed under the homomorphism equation after every binding.
"""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from math import prod

import numpy as np

from . import _kernels as K
from .core import CycleStructure, Permutation, Quandle

__all__ = [
    "Deduper",
    "Fingerprint",
    "PartialIso",
    "are_isomorphic",
    "dedup",
    "fingerprint",
    "isomorphisms",
    "propagate_iso",
    "sort_key",
]


@dataclass(frozen=True, order=True)
class Fingerprint:
    """Isomorphism invariant built from the cycle types of the columns.

    ``payload`` is the canonical encoding: the total cycle count (level 1),
    the sorted per-column cycle counts (level 2), or the sorted per-column
    cycle structures (level 3).
    """

    level: int
    payload: tuple


def _structures(q: Quandle) -> list[CycleStructure]:
    return [p.cycle_structure() for p in q.columns()]


def fingerprint(q: Quandle, level: int = 3) -> Fingerprint:
    if level not in (1, 2, 3):
        raise ValueError(f"fingerprint level must be 1..3, got {level}")
    structs = _structures(q)
    if level == 1:
        payload: tuple = (sum(len(s) for s in structs),)
    elif level == 2:
        payload = tuple(sorted(len(s) for s in structs))
    else:
        payload = tuple(sorted(s.lengths for s in structs))
    return Fingerprint(level, payload)


def sort_key(q: Quandle, level: int = 3) -> tuple:
    """Output order of deduplicated lists: fingerprint, then the table."""
    fp = fingerprint(q, level).payload if level else ()
    return (fp, q.table)


@dataclass(frozen=True)
class PartialIso:
    """Partial injective map; ``-1`` marks an unset entry."""

    forward: tuple[int, ...]
    backward: tuple[int, ...]

    @classmethod
    def empty(cls, n: int) -> PartialIso:
        return cls((-1,) * n, (-1,) * n)

    @property
    def n(self) -> int:
        return len(self.forward)

    def is_total(self) -> bool:
        return all(v >= 0 for v in self.forward)

    def to_permutation(self) -> Permutation:
        return Permutation(self.forward)


def propagate_iso(phi: PartialIso, q: Quandle, q2: Quandle, i: int, j: int) -> PartialIso | None:
    """Record ``phi(i) = j`` and close under the three extension rules.

    Returns ``None`` when the extension contradicts the operation tables or
    the injectivity of ``phi``.
    """
    n = q.n
    fwd = np.array(phi.forward, dtype=np.int64)
    bwd = np.array(phi.backward, dtype=np.int64)
    zeros = np.zeros(n, np.int64)
    trail = np.zeros(n, np.int64)
    work = np.zeros(n + 1, np.int64)
    ok, tp, wp = K.bind(fwd, bwd, zeros, zeros, trail, 0, work, 0, i, j)
    if not ok:
        return None
    a, b = q.flat, q2.flat
    ok, _ = K.propagate_iso(a, K.inverse_flat(a, n), b, K.inverse_flat(b, n), n,
                            fwd, bwd, zeros, zeros, trail, tp, work, wp)
    if not ok:
        return None
    return PartialIso(tuple(int(v) for v in fwd), tuple(int(v) for v in bwd))


def _is_iso(q: Quandle, q2: Quandle, f: tuple[int, ...]) -> bool:
    t, t2 = q.table, q2.table
    n = q.n
    return all(f[t[a][b]] == t2[f[a]][f[b]] for a in range(n) for b in range(n))


def _search(q: Quandle, q2: Quandle, collect: bool) -> list[tuple[int, ...]]:
    n = q.n
    a, b = q.flat, q2.flat
    args = (a, K.inverse_flat(a, n), K.refine_colors(a, n), b, K.inverse_flat(b, n), K.refine_colors(b, n), n)
    size = 1
    if collect:
        size = min(prod(range(1, n + 1)), 1024)
    while True:
        out = np.zeros((size, n), np.int64)
        found = K.iso_search(*args, collect, out)
        if found >= 0:
            return [tuple(int(v) for v in row) for row in out[:found]]
        size *= 2


def are_isomorphic(q: Quandle, q2: Quandle, level: int = 3) -> Permutation | None:
    """A witnessing isomorphism ``q -> q2``, or ``None``.

    With ``level >= 1`` differing fingerprints short-circuit the search.
    """
    if q.n != q2.n:
        return None
    if level and fingerprint(q, level) != fingerprint(q2, level):
        return None
    found = _search(q, q2, collect=False)
    if not found:
        return None
    f = found[0]
    if not _is_iso(q, q2, f):
        raise AssertionError("isomorphism search returned an invalid map")
    return Permutation(f)


def isomorphisms(q: Quandle, q2: Quandle) -> list[Permutation]:
    """Every isomorphism ``q -> q2``, in search order."""
    if q.n != q2.n:
        return []
    return [Permutation(f) for f in _search(q, q2, collect=True)]


class Deduper:
    """Keeps the first-arriving member of every isomorphism class.

    Tables enter as flat ``int64`` rows (see :mod:`quandles._kernels`).
    """

    def __init__(self, n: int, level: int = 3):
        if level not in (0, 1, 2, 3):
            raise ValueError(f"invariant level must be 0..3, got {level}")
        self.n = n
        self.level = level
        self._buckets: dict[bytes, np.ndarray] = {}
        cap = 64
        self._t = np.zeros((cap, n * n), np.int64)
        self._inv = np.zeros((cap, n * n), np.int64)
        self._codes = np.zeros((cap, n), np.int64)
        self._sorted = np.zeros((cap, n), np.int64)
        self._size = 0
        self._out = np.zeros((1, n), np.int64)
        self.seen = 0

    def __len__(self) -> int:
        return self._size

    def _fill(self, k: int, t: np.ndarray) -> None:
        self._t[k] = t
        self._inv[k] = K.inverse_flat(t, self.n)
        self._codes[k] = K.refine_colors(t, self.n)
        self._sorted[k] = np.sort(self._codes[k])

    def _store(self, t: np.ndarray) -> int:
        if self._size == self._t.shape[0]:
            grow = self._t.shape[0]
            self._t = np.concatenate([self._t, np.zeros_like(self._t[:grow])])
            self._inv = np.concatenate([self._inv, np.zeros_like(self._inv[:grow])])
            self._codes = np.concatenate([self._codes, np.zeros_like(self._codes[:grow])])
            self._sorted = np.concatenate([self._sorted, np.zeros_like(self._sorted[:grow])])
        k = self._size
        self._fill(k, t)
        self._size += 1
        return k

    def add_batch(self, tables: np.ndarray) -> int:
        """Feed complete tables in arrival order; returns how many were novel."""
        if len(tables) == 0:
            return 0
        tables = np.ascontiguousarray(tables, dtype=np.int64)
        keys = K.fingerprint_rows(tables, self.n, self.level)
        novel = 0
        buckets = self._buckets
        for t, key in zip(tables, keys):
            kb = key.tobytes()
            members = buckets.get(kb)
            if members is not None:
                if K.match_any(t, self._t, self._inv, self._codes, self._sorted, members, self._out) >= 0:
                    continue
            k = self._store(t)
            buckets[kb] = np.array([k], np.int64) if members is None else np.append(members, k)
            novel += 1
        self.seen += len(tables)
        return novel

    def add(self, q: Quandle) -> bool:
        return self.add_batch(q.flat.reshape(1, -1)) == 1

    def representatives(self) -> np.ndarray:
        """Flat tables of the kept representatives, in arrival order."""
        return self._t[: self._size].copy()

    def result(self) -> list[Quandle]:
        """Representatives in the canonical output order."""
        qs = [Quandle.from_flat(t, self.n) for t in self._t[: self._size]]
        return sorted(qs, key=lambda q: sort_key(q, self.level))


def dedup(stream: Iterable[Quandle], level: int = 3) -> list[Quandle]:
    """One representative per isomorphism class, deterministically ordered."""
    deduper = None
    for q in stream:
        if deduper is None:
            deduper = Deduper(q.n, level)
        elif q.n != deduper.n:
            raise ValueError("all quandles must have the same order")
        deduper.add(q)
    return deduper.result() if deduper is not None else []
