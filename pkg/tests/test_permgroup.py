from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_automorphisms, brute_closure
from quandles.analyze import automorphism_group, inner_group, load_order6
from quandles.core import Permutation, dihedral_quandle, trivial_quandle
from quandles.permgroup import (
    AFFINE_F20,
    TRIVIAL,
    WREATH_D3,
    GroupName,
    GroupOrderError,
    catalog_construct,
    catalog_names,
    center,
    closure,
    cyclic,
    dihedral,
    group_from_elements,
    groups_isomorphic,
    identify,
    invariants,
    parse_group_name,
    product,
    quotient_by_center,
    sym,
)

_, LIBRARY = load_order6()


def s3():
    return closure(3, [(1, 0, 2), (1, 2, 0)])


# -- closure -----------------------------------------------------------------------


def test_closure_examples():
    assert closure(4, []).order == 1
    assert closure(3, [p.images for p in dihedral_quandle(3).columns()]).order == 6
    klein = closure(4, [(1, 0, 3, 2), (2, 3, 0, 1)])
    assert klein.order == 4
    assert identify(klein) == product(cyclic(2), cyclic(2))


def test_closure_element_order():
    g = closure(4, [(1, 2, 3, 0), (1, 0, 2, 3)])
    els = [p.images for p in g.elements]
    assert els[0] == (0, 1, 2, 3)
    assert els[1:3] == [(1, 2, 3, 0), (1, 0, 2, 3)]
    assert [p.images for p in closure(4, [(1, 2, 3, 0), (1, 0, 2, 3)]).elements] == els


def test_closure_is_a_group():
    g = closure(5, [(1, 2, 3, 4, 0), (0, 2, 4, 1, 3)])
    ims = g.image_set()
    assert (0, 1, 2, 3, 4) in ims
    for p in g.elements:
        assert p.inverse().images in ims
        for q in g.generators:
            assert (p * q).images in ims
    assert all(s in g for s in g.generators)
    assert ims == brute_closure(5, [p.images for p in g.generators])


def test_closure_cap_and_degree():
    with pytest.raises(GroupOrderError):
        closure(6, [(1, 2, 3, 4, 5, 0), (1, 0, 2, 3, 4, 5)], cap=100)
    with pytest.raises(ValueError):
        closure(3, [(1, 0)])
    assert closure(6, [(1, 2, 3, 4, 5, 0), (1, 0, 2, 3, 4, 5)]).order == 720


def test_group_from_elements_regenerates():
    g = closure(4, [(1, 2, 3, 0), (3, 2, 1, 0)])
    h = group_from_elements(4, list(reversed(g.elements)))
    assert h.image_set() == g.image_set()
    assert brute_closure(4, [p.images for p in h.generators]) == g.image_set()


# -- invariants -------------------------------------------------------------------------


def test_invariants_s3():
    inv = invariants(s3())
    assert (inv.order, inv.abelian, inv.center_order, inv.derived_subgroup_order) == (6, False, 1, 3)
    assert inv.histogram == {1: 1, 2: 3, 3: 2}


def test_invariants_cyclic4():
    inv = invariants(catalog_construct("Z4"))
    assert (inv.order, inv.abelian, inv.center_order) == (4, True, 4)
    assert inv.histogram == {1: 1, 2: 1, 4: 2}


def test_invariants_trivial():
    inv = invariants(closure(3, []))
    assert (inv.order, inv.abelian, inv.center_order, inv.histogram, inv.derived_subgroup_order) == (1, True, 1, {1: 1}, 1)


@pytest.mark.parametrize("name", [str(n) for n in catalog_names(60)])
def test_lagrange(name):
    g = catalog_construct(name)
    inv = invariants(g)
    assert g.order % inv.center_order == 0
    assert g.order % inv.derived_subgroup_order == 0
    assert quotient_by_center(g).order * inv.center_order == g.order
    assert center(g).order == inv.center_order


# -- isomorphism ------------------------------------------------------------------------


def test_groups_isomorphic_examples():
    assert groups_isomorphic(catalog_construct("Z6"), catalog_construct(product(cyclic(2), cyclic(3))))
    assert not groups_isomorphic(catalog_construct("D3"), catalog_construct("Z6"))
    aut_r5 = automorphism_group(dihedral_quandle(5))
    assert groups_isomorphic(aut_r5, catalog_construct(AFFINE_F20))


def test_groups_isomorphic_same_invariants_different_groups():
    # the quaternion group shares order, centre and derived-subgroup orders with D4
    q8 = closure(8, [(1, 2, 3, 0, 5, 6, 7, 4), (4, 7, 6, 5, 2, 1, 0, 3)])
    d4 = catalog_construct("D4")
    assert q8.order == 8 and invariants(q8).center_order == invariants(d4).center_order == 2
    assert not groups_isomorphic(q8, d4)
    assert identify(q8).kind == "unidentified"


@pytest.mark.parametrize("a,b", [("D6", "D3 x Z2"), ("D10", "D5 x Z2"), ("D3 x Z6", "D6 x Z3"), ("S4", "S4")])
def test_groups_isomorphic_coincidences(a, b):
    g, h = catalog_construct(a), catalog_construct(b)
    assert groups_isomorphic(g, h) and groups_isomorphic(h, g)


def test_groups_isomorphic_is_an_equivalence_on_a_pool():
    pool = [catalog_construct(n) for n in ("D6", "D3 x Z2", "A4", "Z12", "Z6 x Z2", "D4 x Z3")]
    rel = [[groups_isomorphic(g, h) for h in pool] for g in pool]
    for i in range(len(pool)):
        assert rel[i][i]
        for j in range(len(pool)):
            assert rel[i][j] == rel[j][i]
            for k in range(len(pool)):
                if rel[i][j] and rel[j][k]:
                    assert rel[i][k]


# -- catalog and names ----------------------------------------------------------------------


def test_catalog_construct_examples():
    d4 = catalog_construct(dihedral(4))
    assert (d4.order, d4.degree) == (8, 4)
    assert catalog_construct(AFFINE_F20).order == 20
    assert catalog_construct(WREATH_D3).order == 72
    assert catalog_construct(sym(6)).order == 720
    with pytest.raises(GroupOrderError):
        catalog_construct(sym(7))
    assert catalog_construct(sym(7), cap=5040).order == 5040
    with pytest.raises(ValueError):
        catalog_construct(GroupName("unidentified", (None,)))


def test_degenerate_dihedral_names():
    assert dihedral(1).canonical() == cyclic(2)
    assert dihedral(2).canonical() == product(cyclic(2), cyclic(2))
    assert parse_group_name("S3") == dihedral(3)
    assert identify(s3()) == dihedral(3)


def test_abelian_canonical_form():
    assert parse_group_name("Z2 x Z3") == cyclic(6)
    assert parse_group_name("Z2 x Z4 x Z3") == product(cyclic(12), cyclic(2))
    assert str(parse_group_name("Z1 x D5")) == "D5"
    assert parse_group_name("1") == TRIVIAL


@pytest.mark.parametrize("text,ascii_,pretty", [
    ("Z5:Z4", "Z5:Z4", "ℤ5⋊ℤ4"),
    ("D3 x Z2", "D3 x Z2", "D3 × ℤ2"),
    ("S6", "S6", "Σ6"),
    ("(D3 x D3):Z2", "(D3 x D3):Z2", "(D3 × D3)⋊ℤ2"),
    ("ℤ5⋊ℤ4", "Z5:Z4", "ℤ5⋊ℤ4"),
    ("Σ4", "S4", "Σ4"),
])
def test_rendering(text, ascii_, pretty):
    name = parse_group_name(text)
    assert str(name) == ascii_
    assert name.pretty() == pretty
    assert parse_group_name(name.pretty()) == name


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_group_name("Q8")
    with pytest.raises(ValueError):
        parse_group_name("D")


def test_catalog_small_orders():
    names = catalog_names(8)
    assert [str(n) for n in names if n.order == 8] == ["Z8", "Z4 x Z2", "Z2 x Z2 x Z2", "D4"]
    assert [str(n) for n in names if n.order == 6] == ["Z6", "D3"]
    assert len({str(n) for n in catalog_names(72)}) == len(catalog_names(72))


@pytest.mark.parametrize("name", [str(n) for n in catalog_names(120)])
def test_identify_inverts_construct(name):
    assert identify(catalog_construct(name)) == parse_group_name(name)


@pytest.mark.slow
def test_identify_inverts_construct_up_to_720():
    names = catalog_names(720)
    for name in names:
        if name.order > 120:
            assert identify(catalog_construct(name)) == name, str(name)


def test_identify_examples():
    assert identify(automorphism_group(trivial_quandle(6))) == sym(6)
    assert str(identify(inner_group(LIBRARY[49]))) == "Z5:Z4"
    assert identify(inner_group(LIBRARY[49])).pretty() == "ℤ5⋊ℤ4"


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([str(n) for n in catalog_names(24)]), st.permutations(range(8)))
def test_identify_ignores_representation(name, sigma):
    # conjugating a representation changes the elements, not the group
    g = catalog_construct(name)
    d = g.degree
    if d > 8:
        return
    tau = [v for v in sigma if v < d]
    Pt = Permutation(tuple(tau))
    h = closure(d, [(Pt * s * Pt.inverse()).images for s in g.generators])
    assert h.order == g.order and identify(h) == identify(g)


# -- quotients -------------------------------------------------------------------------------


def test_quotient_by_center_examples():
    assert quotient_by_center(catalog_construct("Z6 x Z2")).order == 1
    q = quotient_by_center(s3())
    assert q.order == 6 and groups_isomorphic(q, s3())
    k = quotient_by_center(catalog_construct("D4"))
    assert k.order == 4 and identify(k) == product(cyclic(2), cyclic(2))


def test_center_of_library_inner_groups_matches_brute_force():
    for q in LIBRARY[:20]:
        g = inner_group(q)
        ref = [p for p in g.elements if all(p * s == s * p for s in g.elements)]
        assert center(g).image_set() == {p.images for p in ref}


def test_automorphism_group_brute_force_order():
    for q in LIBRARY[40:50]:
        assert automorphism_group(q).order == len(brute_automorphisms(q.table))

