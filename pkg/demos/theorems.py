"""Check the dihedral and conjugation statements numerically.

The inner-group claim for dihedral quandles fails at n = 2: there the
dihedral quandle is trivial, so its inner group has one element.
"""
from __future__ import annotations

from quandles.analyze import verify_conj_inn, verify_dihedral_aut, verify_dihedral_inn
from quandles.permgroup import catalog_construct, catalog_names


def main() -> None:
    for n in range(2, 13):
        print(verify_dihedral_aut(n).line())
    for n in range(2, 13):
        print(verify_dihedral_inn(n).line())
    reports = [verify_conj_inn(catalog_construct(name), str(name)) for name in catalog_names(24)]
    failed = [r.line() for r in reports if not r.passed]
    print(f"conj-inn: {len(reports) - len(failed)}/{len(reports)} catalog groups of order <= 24 pass")
    for line in failed:
        print(line)


if __name__ == "__main__":
    main()
