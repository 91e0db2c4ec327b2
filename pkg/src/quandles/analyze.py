"""Automorphism and inner automorphism groups of quandles.

Also houses the dihedral and conjugation-quandle theorem checks and the
analysis of the bundled library of order-6 quandles.
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from importlib import resources

from .core import (
    Permutation,
    Quandle,
    column_perm,
    conj_quandle,
    dihedral_quandle,
    format_permutation,
    parse_cycle_columns,
)
from .iso import are_isomorphic, isomorphisms
from .permgroup import (
    DEFAULT_CAP,
    GroupName,
    PermGroup,
    catalog_construct,
    closure,
    dihedral,
    group_from_elements,
    groups_isomorphic,
    identify,
    parse_group_name,
    quotient_by_center,
)

__all__ = [
    "QuandleAnalysis",
    "TheoremReport",
    "affine_group_of",
    "analyze",
    "analyze_library",
    "automorphism_group",
    "converse_observation",
    "inner_group",
    "is_faithful",
    "load_order6",
    "matches_name",
    "verify_conj_inn",
    "verify_dihedral_aut",
    "verify_dihedral_inn",
]


def automorphism_group(q: Quandle) -> PermGroup:
    """``Aut(Q)``, found by the propagating isomorphism search from ``Q`` to itself."""
    return group_from_elements(q.n, isomorphisms(q, q))


def inner_group(q: Quandle, cap: int = DEFAULT_CAP) -> PermGroup:
    """``Inn(Q)``: the group generated by the columns of the table."""
    return closure(q.n, [column_perm(q, u) for u in range(q.n)], cap=cap)


def is_faithful(q: Quandle) -> bool:
    """True when every column is a different permutation."""
    cols = {column_perm(q, u) for u in range(q.n)}
    return len(cols) == q.n


def affine_group_of(n: int) -> PermGroup:
    """All maps ``x -> a*x + b`` on ``Z_n`` with ``a`` a unit, ordered by ``(a, b)``."""
    if n < 1:
        raise ValueError("modulus must be positive")
    units = [a for a in range(n) if math.gcd(a, n) == 1] if n > 1 else [0]
    elems = [Permutation(tuple((a * x + b) % n for x in range(n))) for a in units for b in range(n)]
    return group_from_elements(n, elems)


def _totient(n: int) -> int:
    return sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def matches_name(g: PermGroup, name: GroupName | str) -> bool:
    """Whether ``g`` is isomorphic to the catalog group called ``name``."""
    if isinstance(name, str):
        name = parse_group_name(name)
    if name.order != g.order:
        return False
    return groups_isomorphic(g, catalog_construct(name, cap=max(DEFAULT_CAP, name.order)))


@dataclass(frozen=True)
class QuandleAnalysis:
    label: str
    quandle: Quandle = field(repr=False)
    inn: PermGroup
    inn_name: GroupName
    aut: PermGroup
    aut_name: GroupName
    faithful: bool

    def as_row(self) -> dict:
        """Flat record: label, group names (ASCII) and orders, faithfulness."""
        return {
            "label": self.label,
            "inn_name": str(self.inn_name),
            "inn_order": self.inn.order,
            "aut_name": str(self.aut_name),
            "aut_order": self.aut.order,
            "faithful": self.faithful,
        }


def analyze(q: Quandle, label: str = "") -> QuandleAnalysis:
    inn = inner_group(q)
    aut = automorphism_group(q)
    return QuandleAnalysis(label, q, inn, identify(inn), aut, identify(aut), is_faithful(q))


def analyze_library(quandles: Sequence[Quandle], labels: Sequence[str] | None = None) -> list[QuandleAnalysis]:
    """One analysis per quandle, in input order."""
    if labels is None:
        labels = [f"Q{k + 1}" for k in range(len(quandles))]
    if len(labels) != len(quandles):
        raise ValueError("need exactly one label per quandle")
    return [analyze(q, lab) for q, lab in zip(quandles, labels)]


def load_order6() -> tuple[list[str], list[Quandle]]:
    """The bundled list of all 73 quandles of order 6 with labels ``Q1..Q73``."""
    text = resources.files("quandles").joinpath("data/order6.txt").read_text()
    labels, quandles = [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, cycles = line.split(None, 1)
        labels.append(label)
        quandles.append(parse_cycle_columns(6, cycles))
    return labels, quandles


# -- theorem checks ---------------------------------------------------------------


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of one theorem check.  A failed check carries its witness in ``details``."""

    theorem: str
    parameter: str
    passed: bool
    details: dict

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = " ".join(f"{k}={v}" for k, v in self.details.items())
        return f"{status} {self.theorem} {self.parameter} {extra}".rstrip()


def verify_dihedral_aut(n: int) -> TheoremReport:
    """``Aut(R_n)`` equals the affine group of ``Z_n`` as a set of permutations."""
    if n < 2:
        raise ValueError("modulus must be at least 2")
    aut = automorphism_group(dihedral_quandle(n))
    aff = affine_group_of(n)
    expected = n * _totient(n)
    details: dict = {"order": aut.order, "expected": expected}
    extra = aut.image_set() - aff.image_set()
    missing = aff.image_set() - aut.image_set()
    if extra:
        details["non_affine"] = format_permutation(Permutation(min(extra)))
    if missing:
        details["not_automorphism"] = format_permutation(Permutation(min(missing)))
    passed = not extra and not missing and aut.order == expected
    return TheoremReport("dihedral-aut", f"n={n}", passed, details)


def verify_dihedral_inn(n: int) -> TheoremReport:
    """``Inn(R_n)`` is dihedral of order ``lcm(n, 2)``."""
    if n < 2:
        raise ValueError("modulus must be at least 2")
    inn = inner_group(dihedral_quandle(n))
    m = math.lcm(n, 2)
    target = dihedral(m // 2).canonical()
    details: dict = {"order": inn.order, "expected": m, "name": str(identify(inn))}
    passed = inn.order == m and matches_name(inn, target)
    if not passed:
        details["expected_name"] = str(target)
    return TheoremReport("dihedral-inn", f"n={n}", passed, details)


def verify_conj_inn(g: PermGroup, label: str | None = None) -> TheoremReport:
    """``Inn(Conj(G))`` is isomorphic to ``G / Z(G)``."""
    if g.order > 100:
        raise ValueError("group too large for a conjugation quandle check")
    inn = inner_group(conj_quandle(g, 1))
    quo = quotient_by_center(g)
    details: dict = {"inn_order": inn.order, "quotient_order": quo.order}
    passed = inn.order == quo.order and groups_isomorphic(inn, quo)
    if not passed:
        details["inn_name"] = str(identify(inn))
        details["quotient_name"] = str(identify(quo))
    return TheoremReport("conj-inn", f"group={label or identify(g)}", passed, details)


def converse_observation(q: Quandle) -> bool | None:
    """For a faithful quandle whose columns make up all of ``Inn(Q)``, whether
    ``Q`` is isomorphic to ``Conj(Inn(Q))``; ``None`` when the hypothesis fails."""
    if not is_faithful(q):
        return None
    inn = inner_group(q)
    if inn.order != q.n:
        return None
    return are_isomorphic(q, conj_quandle(inn, 1)) is not None
