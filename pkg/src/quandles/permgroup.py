"""Small permutation groups: closure, invariants, isomorphism and naming.

Everything here works on explicitly listed elements, which is fine for the
group orders that arise from small quandles (up to 720 by default).
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .core import Permutation

__all__ = [
    "AFFINE_F20",
    "TRIVIAL",
    "WREATH_D3",
    "GroupInvariants",
    "GroupName",
    "GroupOrderError",
    "PermGroup",
    "alt",
    "catalog_construct",
    "catalog_names",
    "closure",
    "cyclic",
    "dihedral",
    "group_from_elements",
    "groups_isomorphic",
    "identify",
    "invariants",
    "parse_group_name",
    "product",
    "quotient_by_center",
    "sym",
]

DEFAULT_CAP = 720

Perm = tuple


class GroupOrderError(RuntimeError):
    """Closure grew past the configured order cap."""


def _mul(p: Perm, q: Perm) -> Perm:
    # p after q
    return tuple([p[i] for i in q])


def _inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _order(p: Perm) -> int:
    seen = [False] * len(p)
    result = 1
    for s in range(len(p)):
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        if length:
            result = math.lcm(result, length)
    return result


def _closure(n: int, gens: list[Perm], cap: int | None) -> list[Perm]:
    ident = tuple(range(n))
    elems = [ident]
    seen = {ident}
    for g in gens:
        if g not in seen:
            seen.add(g)
            elems.append(g)
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in gens:
            y = _mul(x, g)
            if y not in seen:
                seen.add(y)
                elems.append(y)
                if cap is not None and len(elems) > cap:
                    raise GroupOrderError(f"group order exceeds cap {cap}")
        i += 1
    return elems


@dataclass(frozen=True, eq=False)
class PermGroup:
    """An explicitly enumerated permutation group on ``0..degree-1``."""

    degree: int
    generators: tuple[Permutation, ...]
    elements: tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p.images in self._image_set

    @cached_property
    def _image_set(self) -> frozenset:
        return frozenset(p.images for p in self.elements)

    @cached_property
    def _raw(self) -> list[Perm]:
        return [p.images for p in self.elements]

    @cached_property
    def _raw_gens(self) -> list[Perm]:
        return [p.images for p in self.generators]

    def image_set(self) -> frozenset:
        """Elements as a set of image tuples, for set comparisons."""
        return self._image_set

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order})"


def closure(n: int, gens, cap: int | None = DEFAULT_CAP) -> PermGroup:
    """Group generated by ``gens`` on ``n`` points.

    Elements come out in discovery order: identity, the generators, then
    products breadth first.  Raises :class:`GroupOrderError` past ``cap``.
    """
    raw = [g.images if isinstance(g, Permutation) else tuple(g) for g in gens]
    for g in raw:
        if len(g) != n:
            raise ValueError(f"generator {g} is not of degree {n}")
    elems = _closure(n, raw, cap)
    return PermGroup(n, tuple(Permutation(g) for g in raw),
                     tuple(Permutation._trusted(e) for e in elems))


def _generating_set(n: int, elems: list[Perm]) -> list[Perm]:
    target = len(elems)
    by_order = sorted(range(target), key=lambda k: (-_order(elems[k]), k))
    gens: list[Perm] = []
    span = {tuple(range(n))}
    for k in by_order:
        if len(span) == target:
            break
        g = elems[k]
        if g not in span:
            gens.append(g)
            span = set(_closure(n, gens, None))
    return gens


def group_from_elements(n: int, elements) -> PermGroup:
    """Wrap a complete element list; a small generating set is derived."""
    raw = [e.images if isinstance(e, Permutation) else tuple(e) for e in elements]
    gens = _generating_set(n, raw)
    return PermGroup(n, tuple(Permutation._trusted(g) for g in gens),
                     tuple(Permutation._trusted(e) for e in raw))


@dataclass(frozen=True)
class GroupInvariants:
    order: int
    abelian: bool
    center_order: int
    element_order_histogram: tuple[tuple[int, int], ...]
    derived_subgroup_order: int

    @property
    def histogram(self) -> dict[int, int]:
        return dict(self.element_order_histogram)


def _center(g: PermGroup) -> list[Perm]:
    gens = g._raw_gens
    return [x for x in g._raw if all(_mul(x, s) == _mul(s, x) for s in gens)]


def _derived(g: PermGroup) -> list[Perm]:
    """Normal closure of the generator commutators, which is ``[G, G]``."""
    gens = g._raw_gens
    ident = tuple(range(g.degree))
    chosen: list[Perm] = []
    span = {ident}
    pending = [_mul(_mul(_inv(a), _inv(b)), _mul(a, b)) for a in gens for b in gens]
    while pending:
        c = pending.pop()
        if c in span:
            continue
        chosen.append(c)
        span = set(_closure(g.degree, chosen, None))
        pending.extend(_mul(_mul(s, c), _inv(s)) for s in gens)
        pending.extend(_mul(_mul(s, d), _inv(s)) for s in gens for d in chosen[:-1])
    return list(span)


def invariants(g: PermGroup) -> GroupInvariants:
    """Order, commutativity, centre and derived-subgroup orders, order histogram."""
    cached = g.__dict__.get("_invariants")
    if cached is not None:
        return cached
    gens = g._raw_gens
    abelian = all(_mul(a, b) == _mul(b, a) for a in gens for b in gens)
    hist = Counter(_order(x) for x in g._raw)
    inv = GroupInvariants(
        order=g.order,
        abelian=abelian,
        center_order=g.order if abelian else len(_center(g)),
        element_order_histogram=tuple(sorted(hist.items())),
        derived_subgroup_order=1 if abelian else len(_derived(g)),
    )
    g.__dict__["_invariants"] = inv
    return inv


def center(g: PermGroup) -> PermGroup:
    return group_from_elements(g.degree, _center(g))


def _classes(g: PermGroup) -> tuple[dict[Perm, int], list[Perm]]:
    """Conjugacy class index of every element and one representative per class."""
    cls: dict[Perm, int] = {}
    reps: list[Perm] = []
    gens = g._raw_gens
    ginv = [_inv(s) for s in gens]
    for x in g._raw:
        if x in cls:
            continue
        k = len(reps)
        reps.append(x)
        cls[x] = k
        queue = [x]
        while queue:
            y = queue.pop()
            for s, si in zip(gens, ginv):
                z = _mul(_mul(s, y), si)
                if z not in cls:
                    cls[z] = k
                    queue.append(z)
    return cls, reps


def _element_profile(g: PermGroup):
    cached = g.__dict__.get("_profile")
    if cached is None:
        cls, reps = _classes(g)
        sizes = Counter(cls.values())
        key = {x: (_order(x), sizes[cls[x]]) for x in g._raw}
        cached = (key, reps, Counter(key.values()))
        g.__dict__["_profile"] = cached
    return cached


def groups_isomorphic(g: PermGroup, h: PermGroup) -> bool:
    """Exact isomorphism test by backtracking over generator images."""
    if g is h:
        return True
    ig, ih = invariants(g), invariants(h)
    if ig != ih:
        return False
    if ig.abelian:
        # finite abelian groups are determined by their element orders
        return True
    gkey, _, gcount = _element_profile(g)
    hkey, hreps, hcount = _element_profile(h)
    if gcount != hcount:
        return False
    gens = _search_generators(g, gkey, gcount)
    targets = [[y for y in h._raw if hkey[y] == gkey[x]] for x in gens]
    # an inner automorphism of h moves the first image anywhere in its class
    targets[0] = [y for y in hreps if hkey[y] == gkey[gens[0]]]
    # class data of g_a g_b and g_a g_b^-1 must be matched by the images
    pair_keys = {(a, b): (gkey[_mul(gens[a], gens[b])], gkey[_mul(gens[a], _inv(gens[b]))])
                 for a in range(len(gens)) for b in range(a)}
    sub_orders = [len(_closure(g.degree, gens[:k + 1], None)) for k in range(len(gens))]
    images: list[Perm] = []

    def extend(k: int) -> bool:
        if k == len(gens):
            return True
        for y in targets[k]:
            if any((hkey[_mul(y, images[b])], hkey[_mul(y, _inv(images[b]))]) != pair_keys[(k, b)]
                   for b in range(k)):
                continue
            images.append(y)
            # the images chosen so far must already give an embedding of <g_0..g_k>
            if _embeds(g.degree, h.degree, gens[:k + 1], images, sub_orders[k], gkey, hkey) and extend(k + 1):
                return True
            images.pop()
        return False

    return extend(0)


def _search_generators(g: PermGroup, gkey: dict, gcount: Counter) -> list[Perm]:
    """Greedy generating set, rarest element class data first (fail-first)."""
    ranked = sorted(g._raw, key=lambda x: (gcount[gkey[x]], -gkey[x][0], x))
    gens: list[Perm] = []
    span = {tuple(range(g.degree))}
    for x in ranked:
        if len(span) == g.order:
            break
        if x not in span:
            gens.append(x)
            span = set(_closure(g.degree, gens, None))
    return gens


def _embeds(gdeg: int, hdeg: int, gens: list[Perm], images: list[Perm], order: int,
            gkey: dict, hkey: dict) -> bool:
    """Whether ``gens[i] -> images[i]`` extends to an injective homomorphism
    of the subgroup ``<gens>`` (of the given order)."""
    ident_g = tuple(range(gdeg))
    phi = {ident_g: tuple(range(hdeg))}
    queue = [ident_g]
    for x in queue:
        fx = phi[x]
        for s, t in zip(gens, images):
            y = _mul(x, s)
            fy = _mul(fx, t)
            known = phi.get(y)
            if known is None:
                if hkey.get(fy) != gkey[y]:
                    return False
                phi[y] = fy
                queue.append(y)
            elif known != fy:
                return False
    return len(phi) == order and len(set(phi.values())) == order


def quotient_by_center(g: PermGroup) -> PermGroup:
    """``G / Z(G)`` acting on the cosets of the centre by left multiplication."""
    z = _center(g)
    coset_of: dict[Perm, int] = {}
    reps: list[Perm] = []
    for x in g._raw:
        if x in coset_of:
            continue
        k = len(reps)
        reps.append(x)
        for c in z:
            coset_of[_mul(x, c)] = k
    gens = [tuple(coset_of[_mul(s, r)] for r in reps) for s in g._raw_gens]
    return closure(len(reps), gens, cap=None)


# -- names ---------------------------------------------------------------------


@dataclass(frozen=True)
class GroupName:
    """Structured group name.

    ``kind`` is one of ``trivial``, ``cyclic``, ``dihedral`` (``D_m`` has
    order ``2m``), ``sym``, ``alt``, ``product``, ``affine_f20``
    (``Z5:Z4``), ``wreath_d3`` (``(D3 x D3):Z2``) or ``unidentified``.
    """

    kind: str
    args: tuple = ()

    def canonical(self) -> GroupName:
        return _canonical(self)

    @property
    def order(self) -> int:
        k, a = self.kind, self.args
        if k == "trivial":
            return 1
        if k == "cyclic":
            return a[0]
        if k == "dihedral":
            return 2 * a[0]
        if k == "sym":
            return math.factorial(a[0])
        if k == "alt":
            return max(1, math.factorial(a[0]) // 2)
        if k == "product":
            return math.prod(f.order for f in a)
        if k == "affine_f20":
            return 20
        if k == "wreath_d3":
            return 72
        return a[0].order

    def is_abelian(self) -> bool:
        c = self.canonical()
        if c.kind == "product":
            return all(f.is_abelian() for f in c.args)
        return c.kind in ("trivial", "cyclic")

    def __str__(self) -> str:
        return self.render(ascii=True)

    def pretty(self) -> str:
        return self.render(ascii=False)

    def render(self, ascii: bool = True) -> str:
        k, a = self.kind, self.args
        z = "Z" if ascii else "ℤ"
        if k == "trivial":
            return "1"
        if k == "cyclic":
            return f"{z}{a[0]}"
        if k == "dihedral":
            return f"D{a[0]}"
        if k == "sym":
            return f"{'S' if ascii else 'Σ'}{a[0]}"
        if k == "alt":
            return f"A{a[0]}"
        if k == "affine_f20":
            return f"{z}5:{z}4" if ascii else f"{z}5⋊{z}4"
        if k == "wreath_d3":
            return "(D3 x D3):Z2" if ascii else f"(D3 × D3)⋊{z}2"
        if k == "product":
            sep = " x " if ascii else " × "
            return sep.join(f.render(ascii) for f in a)
        inv = a[0]
        return f"?(order={inv.order}, center={inv.center_order}, derived={inv.derived_subgroup_order})"


TRIVIAL = GroupName("trivial")
AFFINE_F20 = GroupName("affine_f20")
WREATH_D3 = GroupName("wreath_d3")


def cyclic(n: int) -> GroupName:
    return GroupName("cyclic", (n,))


def dihedral(m: int) -> GroupName:
    return GroupName("dihedral", (m,))


def sym(n: int) -> GroupName:
    return GroupName("sym", (n,))


def alt(n: int) -> GroupName:
    return GroupName("alt", (n,))


def product(*factors: GroupName) -> GroupName:
    return GroupName("product", tuple(factors))


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _invariant_factors(prime_powers: dict[int, list[int]]) -> list[int]:
    """Combine exponent lists per prime into invariant factors, largest first."""
    width = max((len(v) for v in prime_powers.values()), default=0)
    factors = [1] * width
    for p, exps in prime_powers.items():
        for k, e in enumerate(sorted(exps, reverse=True)):
            factors[k] *= p ** e
    return [f for f in factors if f > 1]


def _abelian_name(factors: list[int]) -> GroupName:
    factors = sorted((f for f in factors if f > 1), reverse=True)
    if not factors:
        return TRIVIAL
    if len(factors) == 1:
        return cyclic(factors[0])
    return GroupName("product", tuple(cyclic(f) for f in factors))


def _canonical(name: GroupName) -> GroupName:
    k, a = name.kind, name.args
    if k == "cyclic":
        return TRIVIAL if a[0] == 1 else name
    if k == "dihedral":
        if a[0] == 1:
            return cyclic(2)
        if a[0] == 2:
            return _abelian_name([2, 2])
        return name
    if k == "sym":
        return {1: TRIVIAL, 2: cyclic(2), 3: dihedral(3)}.get(a[0], name)
    if k == "alt":
        return {1: TRIVIAL, 2: TRIVIAL, 3: cyclic(3)}.get(a[0], name)
    if k != "product":
        return name
    flat: list[GroupName] = []
    stack = [_canonical(f) for f in a]
    while stack:
        f = stack.pop(0)
        if f.kind == "product":
            stack[:0] = list(f.args)
        elif f.kind != "trivial":
            flat.append(f)
    powers: dict[int, list[int]] = {}
    rest = []
    for f in flat:
        if f.kind == "cyclic":
            for p, e in _factorize(f.args[0]).items():
                powers.setdefault(p, []).append(e)
        else:
            rest.append(f)
    rest.sort(key=lambda f: (f.order, str(f)))
    ab = _abelian_name(_invariant_factors(powers))
    parts = rest + ([] if ab.kind == "trivial" else list(ab.args) if ab.kind == "product" else [ab])
    if not parts:
        return TRIVIAL
    if len(parts) == 1:
        return parts[0]
    return GroupName("product", tuple(parts))


_ATOM = re.compile(r"^(Z|ℤ|D|S|Σ|A)(\d+)$")


def parse_group_name(text: str) -> GroupName:
    """Parse names like ``Z2 x Z2``, ``D3``, ``S4``, ``Z5:Z4``, ``(D3 x D3):Z2``."""
    s = text.strip().replace("×", " x ").replace("⋊", ":").replace("ℤ", "Z").replace("Σ", "S")
    s = re.sub(r"\s+", " ", s)
    if s in ("1", "{1}", "Trivial", "trivial", "e"):
        return TRIVIAL
    if s.replace(" ", "") == "Z5:Z4":
        return AFFINE_F20
    if s.replace(" ", "") == "(D3xD3):Z2":
        return WREATH_D3
    parts = [p.strip() for p in s.split(" x ")]
    if len(parts) > 1:
        return product(*(parse_group_name(p) for p in parts)).canonical()
    m = _ATOM.match(s)
    if not m:
        raise ValueError(f"unknown group name '{text}'")
    kind = {"Z": "cyclic", "D": "dihedral", "S": "sym", "A": "alt"}[m.group(1)]
    return GroupName(kind, (int(m.group(2)),)).canonical()


# -- catalog -------------------------------------------------------------------


def _rotation(n: int, offset: int = 0, degree: int | None = None) -> Perm:
    degree = n if degree is None else degree
    p = list(range(degree))
    for i in range(n):
        p[offset + i] = offset + (i + 1) % n
    return tuple(p)


def _shift(p: Perm, offset: int, degree: int) -> Perm:
    out = list(range(degree))
    for i, v in enumerate(p):
        out[offset + i] = offset + v
    return tuple(out)


def _construct_gens(name: GroupName) -> tuple[int, list[Perm]]:
    k, a = name.kind, name.args
    if k == "trivial":
        return 1, []
    if k == "cyclic":
        return a[0], [_rotation(a[0])]
    if k == "dihedral":
        m = a[0]
        return m, [_rotation(m), tuple((-i) % m for i in range(m))]
    if k == "sym":
        n = a[0]
        if n < 2:
            return max(n, 1), []
        swap = (1, 0) + tuple(range(2, n))
        return n, [_rotation(n), swap] if n > 2 else [swap]
    if k == "alt":
        n = a[0]
        if n < 3:
            return max(n, 1), []
        return n, [tuple([1, 2, 0] + list(range(3, n)))] + [
            tuple(list(range(i)) + [i + 1, i + 2, i] + list(range(i + 3, n))) for i in range(1, n - 2)
        ]
    if k == "affine_f20":
        return 5, [tuple((x + 1) % 5 for x in range(5)), tuple((2 * x) % 5 for x in range(5))]
    if k == "wreath_d3":
        r = (1, 2, 0, 3, 4, 5)
        f = (0, 2, 1, 3, 4, 5)
        swap = (3, 4, 5, 0, 1, 2)
        return 6, [r, f, swap]
    if k == "product":
        parts = [_construct_gens(f) for f in a]
        degree = sum(d for d, _ in parts)
        gens = []
        offset = 0
        for d, gs in parts:
            gens.extend(_shift(s, offset, degree) for s in gs)
            offset += d
        return degree, gens
    raise ValueError(f"cannot construct group '{name}'")


@lru_cache(maxsize=None)
def _catalog_cached(name: GroupName) -> PermGroup:
    degree, gens = _construct_gens(name)
    return closure(degree, gens, cap=None)


def catalog_construct(name: GroupName | str, cap: int = DEFAULT_CAP) -> PermGroup:
    """Standard permutation representation of a named group."""
    if isinstance(name, str):
        name = parse_group_name(name)
    if name.kind == "unidentified":
        raise ValueError("cannot construct an unidentified group")
    if name.order > cap:
        raise GroupOrderError(f"{name} has order {name.order} > cap {cap}")
    return _catalog_cached(name)


def _abelian_types(order: int) -> list[list[int]]:
    """All abelian groups of the given order as invariant-factor lists."""

    def partitions(e: int, largest: int | None = None):
        largest = e if largest is None else largest
        if e == 0:
            yield []
            return
        for first in range(min(e, largest), 0, -1):
            for rest in partitions(e - first, first):
                yield [first] + rest

    types: list[dict[int, list[int]]] = [{}]
    for p, e in _factorize(order).items():
        types = [dict(t, **{str(p): part}) for t in types for part in partitions(e)]
    return [_invariant_factors({int(p): v for p, v in t.items()}) for t in types]


def _nonabelian_bases(max_order: int) -> list[GroupName]:
    bases = [dihedral(m) for m in range(3, max_order // 2 + 1)]
    k = 4
    while math.factorial(k) // 2 <= max_order:
        if math.factorial(k) <= max_order:
            bases.append(sym(k))
        bases.append(alt(k))
        k += 1
    if max_order >= 20:
        bases.append(AFFINE_F20)
    if max_order >= 72:
        bases.append(WREATH_D3)
    return bases


def _candidate_names(order: int) -> list[GroupName]:
    """Non-abelian catalog names of the given order, in preference order."""
    out: list[GroupName] = []
    k = 4
    while math.factorial(k) <= order:
        if math.factorial(k) == order:
            out.append(sym(k))
        k += 1
    k = 4
    while math.factorial(k) // 2 <= order:
        if math.factorial(k) // 2 == order:
            out.append(alt(k))
        k += 1
    if order % 2 == 0 and order // 2 >= 3:
        out.append(dihedral(order // 2))
    if order == 20:
        out.append(AFFINE_F20)
    if order == 72:
        out.append(WREATH_D3)
    seen = {str(n) for n in out}
    products = []
    bases = [b for b in _nonabelian_bases(order // 2) if order % b.order == 0]

    def combos(start: int, left: int, room: int):
        # multisets of at most ``room`` bases, non-decreasing index, order dividing ``left``
        yield ()
        if room == 0:
            return
        for k in range(start, len(bases)):
            b = bases[k]
            if left % b.order == 0:
                for rest in combos(k, left // b.order, room - 1):
                    yield (b,) + rest

    for combo in combos(0, order, 3):
        if not combo:
            continue
        rest = order // math.prod(b.order for b in combo)
        if len(combo) == 1 and rest == 1:
            continue
        for factors in _abelian_types(rest):
            name = product(*combo, *(cyclic(f) for f in factors)).canonical()
            if str(name) not in seen:
                seen.add(str(name))
                products.append(name)
    products.sort(key=lambda nm: (len(nm.args) if nm.kind == "product" else 1, str(nm)))
    return out + products


@lru_cache(maxsize=None)
def _distinct_names(order: int) -> tuple[GroupName, ...]:
    """Candidate names of one order with isomorphic repeats dropped.

    A repeat such as ``D3 x Z2`` (which is ``D6``) loses to the earlier,
    preferred name, so every kept name is what :func:`identify` reports.
    """
    kept: list[tuple[GroupName, PermGroup]] = []
    for name in _candidate_names(order):
        g = _catalog_cached(name)
        inv = invariants(g)
        if any(invariants(h) == inv and groups_isomorphic(g, h) for _, h in kept):
            continue
        kept.append((name, g))
    return tuple(name for name, _ in kept)


def catalog_names(max_order: int) -> list[GroupName]:
    """Every catalog group of order at most ``max_order``, one name per group."""
    names: list[GroupName] = []
    for order in range(1, max_order + 1):
        names.extend(_abelian_name(f) for f in _abelian_types(order))
        names.extend(_distinct_names(order))
    return names


def _abelian_identify(g: PermGroup) -> GroupName:
    orders = [_order(x) for x in g._raw]
    powers = {}
    for p, e in _factorize(g.order).items():
        # count[k] = p ** (number of cyclic p-factors of exponent >= 1..k, summed)
        count = [sum(1 for o in orders if p ** k % o == 0) for k in range(e + 1)]
        at_least = [round(math.log(count[k] // count[k - 1], p)) for k in range(1, e + 1)] + [0]
        powers[p] = [k for k in range(1, e + 1) for _ in range(at_least[k - 1] - at_least[k])]
    return _abelian_name(_invariant_factors(powers))


def identify(g: PermGroup) -> GroupName:
    """Name of ``g`` from the catalog, or an ``unidentified`` name.

    Abelian groups get their invariant-factor name.  Otherwise candidates of
    the same order are tried in the order Sym, Alt, Dihedral, Z5:Z4,
    (D3 x D3):Z2, products; ``S3`` is reported as ``D3``.
    """
    inv = invariants(g)
    if inv.abelian:
        return _abelian_identify(g)
    for name in _candidate_names(g.order):
        if invariants(_catalog_cached(name)) != inv:
            continue
        if groups_isomorphic(g, _catalog_cached(name)):
            return name
    return GroupName("unidentified", (inv,))
