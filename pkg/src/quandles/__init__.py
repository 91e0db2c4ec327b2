"""Enumeration and automorphism analysis of finite quandles."""
from .core import (
    AxiomReport,
    CycleStructure,
    NotAQuandleError,
    Permutation,
    Quandle,
    TableFormatError,
    alexander_quandle,
    check_axioms,
    column_perm,
    conj_quandle,
    dihedral_quandle,
    format_cycle_columns,
    inverse_table,
    parse_cycle_columns,
    relabel,
    trivial_quandle,
)
from .enumeration import enumerate_quandles, generate_raw
from .iso import are_isomorphic, dedup, fingerprint

__version__ = "0.1.0"
