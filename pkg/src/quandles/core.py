"""Quandles as Cayley tables, their symmetries and standard families.

Elements are ``0..n-1`` internally.  ``table[i][j]`` is ``i * j``, so column
``j`` is the symmetry ``S_j : x -> x * j``.  The cycle-notation codec is the
only place where 1-based labels appear.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

__all__ = [
    "AxiomReport",
    "CycleStructure",
    "NotAQuandleError",
    "Permutation",
    "Quandle",
    "TableFormatError",
    "alexander_quandle",
    "check_axioms",
    "column_perm",
    "conj_quandle",
    "dihedral_quandle",
    "format_cycle_columns",
    "format_permutation",
    "inverse_table",
    "parse_cycle_columns",
    "parse_permutation",
    "relabel",
    "trivial_quandle",
]


class TableFormatError(ValueError):
    """The input is not an ``n x n`` table over ``0..n-1`` (or not parseable)."""


class NotAQuandleError(ValueError):
    """A well-formed table that violates at least one quandle axiom."""

    def __init__(self, report: AxiomReport):
        self.report = report
        axiom, witness = report.violations[0]
        super().__init__(f"axiom {axiom} violated at {witness}")


@dataclass(frozen=True)
class CycleStructure:
    """Cycle lengths of a permutation, fixed points included, longest first."""

    lengths: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.lengths)

    def __len__(self) -> int:
        return len(self.lengths)


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``0..n-1``; ``images[i]`` is the image of ``i``.

    ``p * q`` is composition with ``q`` applied first.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> Permutation:
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls._trusted(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]]) -> Permutation:
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, (*cyc[1:], cyc[0])):
                images[a] = b
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        p = self.images
        return Permutation._trusted(tuple([p[i] for i in other.images]))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, v in enumerate(self.images):
            inv[v] = i
        return Permutation._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point, sorted."""
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            cyc = []
            x = s
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_structure(self) -> CycleStructure:
        seen = [False] * self.n
        lengths = []
        for s in range(self.n):
            length = 0
            x = s
            while not seen[x]:
                seen[x] = True
                x = self.images[x]
                length += 1
            if length:
                lengths.append(length)
        return CycleStructure(tuple(sorted(lengths, reverse=True)))

    def order(self) -> int:
        return math.lcm(*self.cycle_structure().lengths) if self.n else 1

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


@dataclass(frozen=True)
class AxiomReport:
    """Result of :func:`check_axioms`.

    Each violation is ``(axiom, witness)``; axiom 1 carries ``(i,)``, axiom 2
    carries ``(column, value)`` for a repeated value, axiom 3 the triple
    ``(a, b, c)``.
    """

    violations: tuple[tuple[int, tuple[int, ...]], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _validate_shape(n: int, table) -> tuple[tuple[int, ...], ...]:
    try:
        rows = tuple(tuple(int(v) for v in row) for row in table)
    except (TypeError, ValueError) as exc:
        raise TableFormatError(f"table entries must be integers: {exc}") from None
    if n < 1 or len(rows) != n or any(len(r) != n for r in rows):
        raise TableFormatError(f"expected a {n}x{n} table")
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise TableFormatError(f"entry ({i},{j})={v} out of range 0..{n - 1}")
    return rows


def check_axioms(n: int, table) -> AxiomReport:
    """Check idempotence, column bijectivity and right self-distributivity.

    Raises :class:`TableFormatError` for malformed input; axiom failures are
    reported, never raised.
    """
    t = _validate_shape(n, table)
    violations: list[tuple[int, tuple[int, ...]]] = []
    for i in range(n):
        if t[i][i] != i:
            violations.append((1, (i,)))
    for j in range(n):
        seen = set()
        for i in range(n):
            v = t[i][j]
            if v in seen:
                violations.append((2, (j, v)))
                break
            seen.add(v)
    for a in range(n):
        ta = t[a]
        for b in range(n):
            tab = t[ta[b]]
            tb = t[b]
            for c in range(n):
                if tab[c] != t[ta[c]][tb[c]]:
                    violations.append((3, (a, b, c)))
    return AxiomReport(tuple(violations))


@dataclass(frozen=True)
class Quandle:
    """A finite quandle given by its Cayley table.

    The constructor validates the axioms and raises :class:`NotAQuandleError`.
    """

    table: tuple[tuple[int, ...], ...]

    def __init__(self, table, *, check: bool = True):
        n = len(table)
        rows = _validate_shape(n, table) if check else tuple(tuple(map(int, r)) for r in table)
        if check:
            report = check_axioms(n, rows)
            if not report.ok:
                raise NotAQuandleError(report)
        object.__setattr__(self, "table", rows)

    @classmethod
    def from_flat(cls, flat, n: int, *, check: bool = False) -> Quandle:
        flat = [int(v) for v in flat]
        return cls([flat[i * n:(i + 1) * n] for i in range(n)], check=check)

    @property
    def n(self) -> int:
        return len(self.table)

    def __call__(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def flat(self) -> np.ndarray:
        """Row-major ``int64`` copy of the table (read-only)."""
        arr = np.array(self.table, dtype=np.int64).reshape(-1)
        arr.setflags(write=False)
        return arr

    def columns(self) -> list[Permutation]:
        return [column_perm(self, u) for u in range(self.n)]

    def __str__(self) -> str:
        return "\n".join(" ".join(map(str, row)) for row in self.table)


def relabel(q: Quandle, sigma: Permutation | Sequence[int]) -> Quandle:
    """The isomorphic copy with ``table'[s(i)][s(j)] = s(table[i][j])``."""
    s = sigma.images if isinstance(sigma, Permutation) else tuple(sigma)
    n = q.n
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[s[i]][s[j]] = s[q.table[i][j]]
    return Quandle(out, check=False)


def column_perm(q: Quandle, u: int) -> Permutation:
    """The symmetry ``S_u``, i.e. column ``u`` of the table."""
    if not 0 <= u < q.n:
        raise IndexError(f"element {u} out of range")
    return Permutation._trusted(tuple(row[u] for row in q.table))


def inverse_table(q: Quandle) -> Quandle:
    """Table of the dual operation: column ``u`` is the inverse of ``S_u``."""
    n = q.n
    out = [[0] * n for _ in range(n)]
    for x in range(n):
        for u in range(n):
            out[q.table[x][u]][u] = x
    return Quandle(out, check=False)


def trivial_quandle(n: int) -> Quandle:
    if n < 1:
        raise ValueError("order must be positive")
    return Quandle([[i] * n for i in range(n)], check=False)


def dihedral_quandle(n: int) -> Quandle:
    """``R_n``: ``i * j = 2j - i (mod n)``."""
    if n < 1:
        raise ValueError("order must be positive")
    return Quandle([[(2 * j - i) % n for j in range(n)] for i in range(n)], check=False)


def alexander_quandle(n: int, t: int) -> Quandle:
    """Linear Alexander quandle on ``Z_n``: ``a * b = t*a + (1 - t)*b``."""
    if n < 1:
        raise ValueError("order must be positive")
    if math.gcd(t, n) != 1:
        raise ValueError(f"t={t} is not a unit mod {n}")
    return Quandle([[(t * i + (1 - t) * j) % n for j in range(n)] for i in range(n)], check=False)


def conj_quandle(group, m: int = 1) -> Quandle:
    """``m``-fold conjugation quandle ``a * b = b^-m a b^m`` on a group.

    ``group`` is any object with an ``elements`` sequence of
    :class:`Permutation` (e.g. a ``PermGroup``); element ``k`` of the quandle
    is ``group.elements[k]``.
    """
    elems = list(group.elements)
    index = {g: k for k, g in enumerate(elems)}
    ident = Permutation.identity(elems[0].n)
    powers = []
    for b in elems:
        p = ident
        for _ in range(abs(m)):
            p = p * b
        if m < 0:
            p = p.inverse()
        powers.append((p, p.inverse()))
    table = [[index[pb_inv * a * pb] for pb, pb_inv in powers] for a in elems]
    return Quandle(table)


# -- cycle notation -------------------------------------------------------------

_CYCLE = re.compile(r"\(([^()]*)\)")


def _parse_cycle_body(body: str, n: int) -> list[int]:
    body = body.strip()
    if " " in body or "," in body:
        tokens = [tok for tok in re.split(r"[\s,]+", body) if tok]
    elif n <= 9:
        tokens = list(body)
    else:
        tokens = [body]
    try:
        pts = [int(tok) for tok in tokens]
    except ValueError:
        raise TableFormatError(f"bad cycle '({body})'") from None
    for p in pts:
        if not 1 <= p <= n:
            raise TableFormatError(f"symbol {p} out of range 1..{n}")
    if len(set(pts)) != len(pts):
        raise TableFormatError(f"repeated symbol in cycle '({body})'")
    return [p - 1 for p in pts]


def _split_columns(text: str) -> list[str]:
    cols, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise TableFormatError("unbalanced parentheses")
        if ch == "," and depth == 0:
            cols.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise TableFormatError("unbalanced parentheses")
    cols.append("".join(cur))
    return cols


def parse_permutation(n: int, text: str) -> Permutation:
    """Parse one product of disjoint cycles over ``1..n``; ``(1)`` is the identity."""
    text = text.strip()
    if not text or _CYCLE.sub("", text).strip():
        raise TableFormatError(f"bad permutation '{text}'")
    images = list(range(n))
    used: set[int] = set()
    for body in _CYCLE.findall(text):
        pts = _parse_cycle_body(body, n)
        if len(pts) == 1:
            continue
        if used & set(pts):
            raise TableFormatError(f"cycles not disjoint in '{text}'")
        used.update(pts)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a] = b
    return Permutation(tuple(images))


def parse_cycle_columns(n: int | None, text: str) -> Quandle:
    """Build a quandle from ``n`` comma-separated column permutations.

    With ``n=None`` the order is the number of columns.

    >>> parse_cycle_columns(3, "(23),(13),(12)") == dihedral_quandle(3)
    True
    """
    cols = _split_columns(text.strip())
    if n is None:
        n = len(cols)
    if len(cols) != n:
        raise TableFormatError(f"expected {n} columns, got {len(cols)}")
    perms = [parse_permutation(n, c) for c in cols]
    table = [[perms[j].images[i] for j in range(n)] for i in range(n)]
    return Quandle(table)


def format_permutation(p: Permutation) -> str:
    cyc = p.cycles()
    if not cyc:
        return "(1)"
    sep = "" if p.n <= 9 else " "
    return "".join("(" + sep.join(str(x + 1) for x in c) + ")" for c in cyc)


def format_cycle_columns(q: Quandle) -> str:
    """1-based disjoint-cycle notation of the columns, comma separated."""
    return ",".join(format_permutation(column_perm(q, u)) for u in range(q.n))
