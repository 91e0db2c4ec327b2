"""Generation of quandle tables by propagating partial Cayley tables.

Cells are filled depth-first; every assignment ``j*i = k`` is closed under
the five self-distributivity completion rules plus column uniqueness, so
dead branches are cut as soon as they become contradictory.  Branching on
values that have not appeared yet is limited to one such value per cell,
since unused element names are interchangeable.
"""
from __future__ import annotations

import os
from collections.abc import Callable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .core import Quandle
from .iso import Deduper

__all__ = [
    "UNKNOWN",
    "Consistent",
    "Contradiction",
    "PartialTable",
    "enumerate_quandles",
    "frontier",
    "generate_raw",
    "iter_raw_batches",
    "propagate_all",
    "retrieve",
    "retrieve_bar",
    "set_and_propagate",
]

UNKNOWN = None

RULE_NAMES = {
    K.ASSIGN_CONFLICT: "assignment",
    1: "rule 1",
    2: "rule 2",
    3: "rule 3",
    4: "rule 4",
    5: "rule 5",
    K.COLUMN_UNIQUENESS: "column uniqueness",
}

BATCH = 4096


class PartialTable:
    """A Cayley table under construction; ``None`` marks an undefined cell.

    Instances are never mutated once returned to callers.
    """

    __slots__ = ("n", "_t", "_inv", "_colcnt", "_intro")

    def __init__(self, n: int, t: np.ndarray, inv: np.ndarray, colcnt: np.ndarray, intro: np.ndarray):
        self.n = n
        self._t = t
        self._inv = inv
        self._colcnt = colcnt
        self._intro = intro

    @classmethod
    def fresh(cls, n: int) -> PartialTable:
        """Only the diagonal (``a*a = a``) defined."""
        if n < 1:
            raise ValueError("order must be positive")
        return cls.from_flat(np.array([i if i == j else -1 for i in range(n) for j in range(n)]), n)

    @classmethod
    def from_cells(cls, cells) -> PartialTable:
        """Load cells as given, without propagating anything."""
        n = len(cells)
        flat = [(-1 if v is None else int(v)) for row in cells for v in row]
        if len(flat) != n * n:
            raise ValueError("cells must be square")
        return cls.from_flat(np.array(flat, np.int64), n)

    @classmethod
    def from_flat(cls, flat: np.ndarray, n: int) -> PartialTable:
        t = np.array(flat, dtype=np.int64).reshape(-1)
        inv = -np.ones(n * n, np.int64)
        colcnt = np.zeros(n, np.int64)
        intro = np.zeros(n, np.int64)
        for x in range(n):
            if t[x * n + x] != x:
                raise ValueError(f"diagonal cell ({x},{x}) must be {x}")
            for y in range(n):
                v = int(t[x * n + y])
                if v < 0:
                    continue
                if v >= n:
                    raise ValueError(f"value {v} out of range")
                if inv[y * n + v] >= 0:
                    raise ValueError(f"column {y} repeats value {v}")
                inv[y * n + v] = x
                colcnt[y] += 1
                if x != y:
                    intro[x] += 1
                    intro[y] += 1
                    intro[v] += 1
        return cls(n, t, inv, colcnt, intro)

    def _copy(self) -> PartialTable:
        return PartialTable(self.n, self._t.copy(), self._inv.copy(), self._colcnt.copy(), self._intro.copy())

    @property
    def cells(self) -> tuple[tuple[int | None, ...], ...]:
        n = self.n
        return tuple(tuple(None if v < 0 else int(v) for v in self._t[i * n:(i + 1) * n]) for i in range(n))

    @property
    def defined_count(self) -> int:
        return int(np.count_nonzero(self._t >= 0))

    def is_complete(self) -> bool:
        return self.defined_count == self.n * self.n

    def introduced(self) -> set[int]:
        """Elements mentioned by some defined off-diagonal cell."""
        return {e for e in range(self.n) if self._intro[e] > 0}

    def to_quandle(self) -> Quandle:
        if not self.is_complete():
            raise ValueError("table is not complete")
        return Quandle.from_flat(self._t, self.n, check=True)

    @property
    def flat(self) -> np.ndarray:
        return self._t.copy()

    def __eq__(self, other) -> bool:
        return isinstance(other, PartialTable) and np.array_equal(self._t, other._t)

    def __repr__(self) -> str:
        rows = [" ".join("." if v is None else str(v) for v in row) for row in self.cells]
        return "PartialTable(\n  " + "\n  ".join(rows) + "\n)"


@dataclass(frozen=True)
class Consistent:
    table: PartialTable
    forced: tuple[tuple[int, int], ...]

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Contradiction:
    """``rule`` is 1..5, 0 for a clash of the requested assignment itself, or
    6 when a column's last free cell cannot take its last free value."""

    rule: int
    cell: tuple[int, int]

    def __bool__(self) -> bool:
        return False

    @property
    def rule_name(self) -> str:
        return RULE_NAMES[self.rule]


PropagationOutcome = Consistent | Contradiction


def retrieve(p: PartialTable, a: int, b: int) -> int | None:
    """``a*b`` if that cell is defined."""
    v = int(p._t[a * p.n + b])
    return None if v < 0 else v


def retrieve_bar(p: PartialTable, a: int, b: int) -> int | None:
    """The ``x`` with ``x*b = a``, if some defined cell says so."""
    v = int(p._inv[b * p.n + a])
    return None if v < 0 else v


def _run(p: PartialTable, seed: list[int], assignment: tuple[int, int, int] | None) -> PropagationOutcome:
    q = p._copy()
    n = q.n
    trail = np.zeros(n * n, np.int64)
    work = np.zeros(n * n + 1, np.int64)
    info = np.zeros(3, np.int64)
    if assignment is not None:
        j, i, k = assignment
        ok, tp = K.assign(q._t, q._inv, q._colcnt, q._intro, trail, 0, work, n, j, i, k, info)
    else:
        work[: len(seed)] = seed
        ok, tp = K.propagate(q._t, q._inv, q._colcnt, q._intro, trail, 0, work, len(seed), n, info)
    if not ok:
        return Contradiction(int(info[0]), (int(info[1]), int(info[2])))
    forced = tuple(divmod(int(c), n) for c in trail[:tp])
    if assignment is not None:
        forced = forced[1:]
    return Consistent(q, forced)


def set_and_propagate(p: PartialTable, j: int, i: int, k: int) -> PropagationOutcome:
    """Set ``j*i = k`` and close the table under the completion rules.

    ``forced`` lists the cells defined by propagation (not the assignment
    itself).  Contradictions are ordinary results.
    """
    n = p.n
    if not (0 <= j < n and 0 <= i < n and 0 <= k < n):
        raise IndexError("cell or value out of range")
    cur = retrieve(p, j, i)
    if cur == k:
        return Consistent(p, ())
    return _run(p, [], (j, i, k))


def propagate_all(p: PartialTable) -> PropagationOutcome:
    """Propagate from every defined off-diagonal cell at once.

    Useful for tables assembled by hand with :meth:`PartialTable.from_cells`.
    """
    n = p.n
    seed = [x * n + y for x in range(n) for y in range(n) if x != y and p._t[x * n + y] >= 0]
    return _run(p, seed, None)


def candidates(p: PartialTable, r: int, c: int, symmetry_break: bool = True) -> list[int]:
    """Values the search tries in cell ``(r, c)``, ascending."""
    out = []
    fresh_taken = False
    for v in range(p.n):
        if K.is_candidate(p._t, p._inv, p._intro, p.n, r, c, v, symmetry_break, fresh_taken):
            out.append(v)
            if p._intro[v] == 0 and v != r and v != c:
                fresh_taken = True
    return out


class _Search:
    """Resumable search state rooted at one partial table."""

    def __init__(self, root: PartialTable, symmetry_break: bool, max_depth: int = -1):
        q = root._copy()
        n = q.n
        nn = n * n
        self.n = n
        self.q = q
        self.trail = np.zeros(nn, np.int64)
        self.work = np.zeros(nn + 1, np.int64)
        self.spos = np.zeros(nn + 1, np.int64)
        self.sval = np.zeros(nn + 1, np.int64)
        self.smark = np.zeros(nn + 1, np.int64)
        self.scal = np.zeros(5, np.int64)
        self.scal[K.S_SYMBREAK] = int(symmetry_break)
        self.scal[K.S_MAXDEPTH] = max_depth
        self.info = np.zeros(3, np.int64)

    def batches(self, size: int = BATCH) -> Iterator[np.ndarray]:
        out = np.zeros((size, self.n * self.n), np.int64)
        q = self.q
        while not self.scal[K.S_DONE]:
            m = K.search(q._t, q._inv, q._colcnt, q._intro, self.trail, self.work,
                         self.spos, self.sval, self.smark, self.scal, self.info, out, size)
            if m:
                yield out[:m].copy()


def iter_raw_batches(n: int, symmetry_break: bool = True, root: PartialTable | None = None,
                     size: int = BATCH) -> Iterator[np.ndarray]:
    """Complete tables in search order, as batches of flat rows."""
    root = PartialTable.fresh(n) if root is None else root
    yield from _Search(root, symmetry_break).batches(size)


def frontier(n: int, depth: int, symmetry_break: bool = True) -> list[PartialTable]:
    """Search states ``depth`` guesses below the root, in search order.

    Tables completed in fewer guesses appear as complete states.  Searching
    every state in order visits exactly the leaves of the full search.
    """
    states = []
    for batch in _Search(PartialTable.fresh(n), symmetry_break, depth).batches():
        states.extend(PartialTable.from_flat(row, n) for row in batch)
    return states


def generate_raw(n: int, symmetry_break: bool = True,
                 sink: Callable[[Quandle], object] | None = None) -> int:
    """Run the search and hand every complete table to ``sink``.

    Every isomorphism class of order ``n`` gets at least one table.  Returns
    the number of tables emitted.
    """
    count = 0
    for batch in iter_raw_batches(n, symmetry_break):
        for row in batch:
            if not K.is_quandle(row, n):
                raise AssertionError("search emitted a table violating the axioms")
            if sink is not None:
                sink(Quandle.from_flat(row, n))
        count += len(batch)
    return count


def _dedup_subtree(args) -> np.ndarray:
    n, flat, level, symmetry_break = args
    deduper = Deduper(n, level)
    root = PartialTable.from_flat(flat, n)
    for batch in iter_raw_batches(n, symmetry_break, root):
        deduper.add_batch(batch)
    return deduper.representatives()


def _split_depth(n: int, workers: int, symmetry_break: bool) -> list[PartialTable]:
    states = [PartialTable.fresh(n)]
    for depth in range(1, n * n):
        states = frontier(n, depth, symmetry_break)
        if len(states) >= 8 * workers or all(s.is_complete() for s in states):
            break
    return states


def enumerate_quandles(n: int, invariant_level: int = 3, *, workers: int = 1,
                       symmetry_break: bool = True) -> list[Quandle]:
    """All quandles of order ``n`` up to isomorphism.

    Deduplication runs alongside generation.  With ``workers > 1`` subtrees
    are deduplicated in separate processes and merged in search order, which
    keeps the same representatives as a single-process run.
    """
    if n < 1:
        raise ValueError("order must be positive")
    deduper = Deduper(n, invariant_level)
    if workers <= 1:
        for batch in iter_raw_batches(n, symmetry_break):
            deduper.add_batch(batch)
    else:
        states = _split_depth(n, workers, symmetry_break)
        tasks = [(n, s.flat, invariant_level, symmetry_break) for s in states]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for reps in pool.map(_dedup_subtree, tasks, chunksize=max(1, len(tasks) // (4 * workers))):
                deduper.add_batch(reps)
    result = deduper.result()
    for q in result:
        if not K.is_quandle(q.flat, n):
            raise AssertionError("representative violates the axioms")
    return result


def default_workers() -> int:
    return os.cpu_count() or 1
