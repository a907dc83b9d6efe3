"""Finite-set-valued presheaves on finite posets and their total spaces.

A presheaf here is a covariant assignment x -> F(x) of finite fibers with
restriction maps F(x) -> F(y) for x <= y satisfying identity and
composition.  Its total space (disjoint union of fibers, ordered by
"restricts to") projects onto the base by a strict p-morphism, and that
projection determines the presheaf back up to isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import BaseMismatch, InvalidPresheaf, NotStrict, UnknownElement
from .heyting import (
    FiniteHeytingAlgebra,
    HeytingHom,
    product_algebra,
    upset_algebra,
)
from .poset import (
    FinitePoset,
    PosetMap,
    all_upsets,
    bits_of,
    induced_subposet,
    is_monotone,
    is_strict_p_morphism,
)


@dataclass(frozen=True)
class Presheaf:
    """Fibers (by size) and restriction assignments for every comparable
    pair x < y.  Empty fibers are legal; a nonempty fiber below an empty
    one is not (there is no map into the empty set)."""

    base: FinitePoset
    sizes: tuple[int, ...]
    restrictions: tuple[tuple[int, int, tuple[int, ...]], ...]

    def __post_init__(self):
        base, sizes = self.base, self.sizes
        if len(sizes) != base.n or any(s < 0 for s in sizes):
            raise InvalidPresheaf("one fiber size per base element required")
        rmap = {}
        for x, y, assign in self.restrictions:
            if not (0 <= x < base.n and 0 <= y < base.n):
                raise InvalidPresheaf("restriction outside the base carrier")
            if x == y or not base.leq(x, y):
                raise InvalidPresheaf(
                    f"restriction on non-strict or incomparable pair ({x}, {y})"
                )
            if (x, y) in rmap:
                raise InvalidPresheaf(f"duplicate restriction for ({x}, {y})")
            if len(assign) != sizes[x] or any(not 0 <= v < sizes[y] for v in assign):
                raise InvalidPresheaf(f"restriction ({x}, {y}) is not total")
            rmap[(x, y)] = assign
        for x in range(base.n):
            for y in bits_of(base.up[x] & ~(1 << x)):
                if (x, y) not in rmap:
                    raise InvalidPresheaf(f"missing restriction for ({x}, {y})")
        # composition law along every comparable triple
        for (x, y), rxy in rmap.items():
            for z in bits_of(base.up[y] & ~(1 << y)):
                rxz = rmap[(x, z)]
                ryz = rmap[(y, z)]
                if any(ryz[rxy[i]] != rxz[i] for i in range(self.sizes[x])):
                    raise InvalidPresheaf(
                        f"composition fails along {x} <= {y} <= {z}"
                    )
        object.__setattr__(self, "_rmap", rmap)

    def restriction(self, x: int, y: int) -> tuple[int, ...]:
        if x == y:
            return tuple(range(self.sizes[x]))
        try:
            return self._rmap[(x, y)]
        except KeyError:
            raise InvalidPresheaf(f"no restriction for ({x}, {y})") from None

    @property
    def total_size(self) -> int:
        return sum(self.sizes)


def make_presheaf(base: FinitePoset, sizes: Sequence[int],
                  cover_maps: dict) -> Presheaf:
    """Build a presheaf from restriction data on cover pairs; composites are
    derived, and explicitly supplied non-cover pairs are checked against
    them."""
    sizes = tuple(sizes)
    cover_maps = {k: tuple(v) for k, v in cover_maps.items()}
    pairs = [
        (x, y)
        for x in range(base.n)
        for y in bits_of(base.up[x] & ~(1 << x))
    ]
    # fill in by increasing interval size so factorizations already exist
    pairs.sort(key=lambda p: bin(base.up[p[0]] & base.down[p[1]]).count("1"))
    rmap: dict[tuple[int, int], tuple[int, ...]] = {}
    covers = set(base.covers)
    for x, y in pairs:
        if (x, y) in covers:
            if (x, y) in cover_maps:
                rmap[(x, y)] = cover_maps[(x, y)]
            elif sizes[x] == 0:
                rmap[(x, y)] = ()
            else:
                raise InvalidPresheaf(f"missing restriction for cover ({x}, {y})")
            continue
        mids = [z for z in bits_of(base.up[x] & base.down[y]) if z not in (x, y)]
        z = mids[0]
        composite = tuple(rmap[(z, y)][v] for v in rmap[(x, z)])
        if (x, y) in cover_maps and cover_maps[(x, y)] != composite:
            raise InvalidPresheaf(
                f"explicit restriction for ({x}, {y}) conflicts with composites"
            )
        rmap[(x, y)] = composite
    items = tuple(sorted((x, y, assign) for (x, y), assign in rmap.items()))
    return Presheaf(base, sizes, items)


@dataclass(frozen=True)
class Bundle:
    """A poset over a base whose projection is a strict p-morphism
    (verified at construction)."""

    total: FinitePoset
    base: FinitePoset
    projection: PosetMap

    def __post_init__(self):
        if self.projection.domain != self.total or self.projection.codomain != self.base:
            raise ValueError("projection must map total -> base")
        if not is_strict_p_morphism(self.projection):
            raise NotStrict("projection is not a strict p-morphism")

    def fiber_points(self, x: int) -> list[int]:
        return [t for t, v in enumerate(self.projection.assignment) if v == x]


def grothendieck(F: Presheaf) -> Bundle:
    """Total space of F: points (x, xi), with (x1, xi1) <= (x2, xi2) iff
    x1 <= x2 and the restriction carries xi1 to xi2.  Points over empty
    fibers simply do not occur."""
    base = F.base
    offsets = []
    acc = 0
    for x in range(base.n):
        offsets.append(acc)
        acc += F.sizes[x]
    n_total = acc
    labels = []
    proj = []
    for x in range(base.n):
        for i in range(F.sizes[x]):
            labels.append((base.labels[x], i))
            proj.append(x)
    up = [0] * n_total
    for x in range(base.n):
        for i in range(F.sizes[x]):
            t = offsets[x] + i
            m = 0
            for y in bits_of(base.up[x]):
                m |= 1 << (offsets[y] + F.restriction(x, y)[i])
            up[t] = m
    total = FinitePoset(tuple(labels), tuple(up))
    return Bundle(total, base, PosetMap(total, base, tuple(proj)))


def fiber_presheaf(b: Bundle) -> Presheaf:
    """Fibers are the projection preimages; restrictions send xi to the
    unique point above it in the target fiber (strictness)."""
    base = b.base
    fibers = [b.fiber_points(x) for x in range(base.n)]
    pos = {}
    for x, pts in enumerate(fibers):
        for i, t in enumerate(pts):
            pos[t] = (x, i)
    sizes = tuple(len(pts) for pts in fibers)
    items = []
    for x in range(base.n):
        for y in bits_of(base.up[x] & ~(1 << x)):
            assign = []
            for t in fibers[x]:
                over_y = [
                    t2 for t2 in bits_of(b.total.up[t])
                    if b.projection.assignment[t2] == y
                ]
                if len(over_y) != 1:
                    raise NotStrict("projection lost strictness")
                assign.append(pos[over_y[0]][1])
            items.append((x, y, tuple(assign)))
    return Presheaf(base, sizes, tuple(items))


def bundles_isomorphic_over_base(b1: Bundle, b2: Bundle) -> bool:
    """Order isomorphism of totals commuting with the projections."""
    if b1.base != b2.base:
        return False
    T1, T2 = b1.total, b2.total
    if T1.n != T2.n:
        return False
    fibers2 = {x: b2.fiber_points(x) for x in range(b2.base.n)}
    for x in range(b1.base.n):
        if len(b1.fiber_points(x)) != len(fibers2[x]):
            return False
    assign = [-1] * T1.n
    used = [False] * T2.n

    def rec(t):
        if t == T1.n:
            return True
        x = b1.projection.assignment[t]
        for cand in fibers2[x]:
            if used[cand]:
                continue
            ok = True
            for s in range(t):
                le1 = (T1.up[s] >> t) & 1
                ge1 = (T1.up[t] >> s) & 1
                le2 = (T2.up[assign[s]] >> cand) & 1
                ge2 = (T2.up[cand] >> assign[s]) & 1
                if le1 != le2 or ge1 != ge2:
                    ok = False
                    break
            if not ok:
                continue
            assign[t] = cand
            used[cand] = True
            if rec(t + 1):
                return True
            used[cand] = False
            assign[t] = -1
        return False

    return rec(0)


def presheaves_isomorphic(F1: Presheaf, F2: Presheaf) -> bool:
    """A family of fiber bijections commuting with every restriction."""
    if F1.base != F2.base or F1.sizes != F2.sizes:
        return False
    base = F1.base
    perms: dict[int, tuple[int, ...]] = {}
    order = list(range(base.n))

    def compatible(x, perm):
        for y, py in perms.items():
            if base.leq(x, y):
                r1, r2 = F1.restriction(x, y), F2.restriction(x, y)
                if any(py[r1[i]] != r2[perm[i]] for i in range(F1.sizes[x])):
                    return False
            if base.leq(y, x):
                r1, r2 = F1.restriction(y, x), F2.restriction(y, x)
                if any(perm[r1[i]] != r2[py[i]] for i in range(F1.sizes[y])):
                    return False
        return True

    def rec(k):
        if k == base.n:
            return True
        x = order[k]
        for perm in itertools.permutations(range(F1.sizes[x])):
            if not compatible(x, perm):
                continue
            perms[x] = perm
            if rec(k + 1):
                return True
            del perms[x]
        return False

    return rec(0)


def round_trip_total(b: Bundle) -> bool:
    """Rebuilding the bundle through its fiber presheaf gives an isomorphic
    bundle over the same base."""
    return bundles_isomorphic_over_base(grothendieck(fiber_presheaf(b)), b)


def round_trip_presheaf(F: Presheaf) -> bool:
    """Reading fibers off the total space gives back an isomorphic presheaf."""
    return presheaves_isomorphic(fiber_presheaf(grothendieck(F)), F)


@dataclass(frozen=True)
class Subfunctor:
    """Componentwise subset respected by all restrictions."""

    presheaf: Presheaf
    masks: tuple[int, ...]

    def __post_init__(self):
        F = self.presheaf
        if len(self.masks) != F.base.n:
            raise InvalidPresheaf("one fiber mask per base element required")
        for x in range(F.base.n):
            if self.masks[x] >> F.sizes[x]:
                raise InvalidPresheaf("mask exceeds fiber")
            for y in bits_of(F.base.up[x] & ~(1 << x)):
                r = F.restriction(x, y)
                for i in bits_of(self.masks[x]):
                    if not (self.masks[y] >> r[i]) & 1:
                        raise InvalidPresheaf(
                            "restriction leaves the subfunctor"
                        )

    def meet(self, other: "Subfunctor") -> "Subfunctor":
        return Subfunctor(self.presheaf,
                          tuple(a & b for a, b in zip(self.masks, other.masks)))

    def join(self, other: "Subfunctor") -> "Subfunctor":
        return Subfunctor(self.presheaf,
                          tuple(a | b for a, b in zip(self.masks, other.masks)))


def _offsets(F: Presheaf) -> list[int]:
    out, acc = [], 0
    for x in range(F.base.n):
        out.append(acc)
        acc += F.sizes[x]
    return out


def total_mask_to_subfunctor(F: Presheaf, mask: int) -> Subfunctor:
    offsets = _offsets(F)
    fiber_masks = []
    for x in range(F.base.n):
        fiber_masks.append((mask >> offsets[x]) & ((1 << F.sizes[x]) - 1))
    return Subfunctor(F, tuple(fiber_masks))


def subfunctor_to_total_mask(sf: Subfunctor) -> int:
    offsets = _offsets(sf.presheaf)
    m = 0
    for x, fm in enumerate(sf.masks):
        for i in bits_of(fm):
            m |= 1 << (offsets[x] + i)
    return m


def subfunctor_upsets(F: Presheaf) -> list[Subfunctor]:
    """All subfunctors, in bijection with the upsets of the total space
    (same canonical order)."""
    total = grothendieck(F).total
    return [total_mask_to_subfunctor(F, m) for m in all_upsets(total)]


def subfunctor_algebra(F: Presheaf) -> FiniteHeytingAlgebra:
    """The Heyting algebra of subfunctors, realized as Up(total)."""
    return upset_algebra(grothendieck(F).total)


def m_component(F: Presheaf, x: int, xi: int) -> HeytingHom:
    """Component at (x, xi) of the embedding into a product of principal
    upset algebras: a subfunctor goes to {y >= x | xi restricted to y lies
    in it}, an upset of the subposet above x."""
    if not (0 <= x < F.base.n) or not (0 <= xi < F.sizes[x]):
        raise UnknownElement(f"no fiber point ({x}, {xi})")
    H_F = subfunctor_algebra(F)
    sub_x, members = induced_subposet(F.base, F.base.up[x])
    codomain = upset_algebra(sub_x)
    offsets = _offsets(F)
    assign = []
    for mask in H_F.upset_masks:
        m = 0
        for k, y in enumerate(members):
            t = offsets[y] + F.restriction(x, y)[xi]
            if (mask >> t) & 1:
                m |= 1 << k
        assign.append(codomain.index_of_upset(m))
    return HeytingHom(H_F, codomain, tuple(assign))


def product_embedding(F: Presheaf) -> HeytingHom:
    """Tupled components over every fiber point; injective."""
    comps = []
    for x in range(F.base.n):
        for xi in range(F.sizes[x]):
            comps.append(m_component(F, x, xi))
    H_F = subfunctor_algebra(F)
    codomain = product_algebra([c.codomain for c in comps])
    strides = [1] * len(comps)
    for k in range(len(comps) - 2, -1, -1):
        strides[k] = strides[k + 1] * comps[k + 1].codomain.n
    assign = []
    for a in range(H_F.n):
        idx = sum(strides[k] * comps[k].assignment[a] for k in range(len(comps)))
        assign.append(idx)
    return HeytingHom(H_F, codomain, tuple(assign))


def pointwise_product(F1: Presheaf, F2: Presheaf) -> Presheaf:
    """(F1 x F2)(x) = F1(x) x F2(x), restrictions componentwise."""
    if F1.base != F2.base:
        raise BaseMismatch("pointwise product needs a common base")
    base = F1.base
    sizes = tuple(F1.sizes[x] * F2.sizes[x] for x in range(base.n))
    items = []
    for x in range(base.n):
        for y in bits_of(base.up[x] & ~(1 << x)):
            r1, r2 = F1.restriction(x, y), F2.restriction(x, y)
            assign = []
            for i in range(F1.sizes[x]):
                for j in range(F2.sizes[x]):
                    assign.append(r1[i] * F2.sizes[y] + r2[j])
            items.append((x, y, tuple(assign)))
    return Presheaf(base, sizes, tuple(items))


@dataclass(frozen=True)
class PresheafMap:
    """Componentwise functions commuting with restrictions (naturality is a
    checkable predicate)."""

    source: Presheaf
    target: Presheaf
    components: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.source.base != self.target.base:
            raise BaseMismatch("presheaf map needs a common base")
        if len(self.components) != self.source.base.n:
            raise InvalidPresheaf("one component per base element required")
        for x, comp in enumerate(self.components):
            if len(comp) != self.source.sizes[x]:
                raise InvalidPresheaf("component is not total")
            if any(not 0 <= v < self.target.sizes[x] for v in comp):
                raise InvalidPresheaf("component leaves the target fiber")


def is_natural(gamma: PresheafMap) -> bool:
    F1, F2 = gamma.source, gamma.target
    base = F1.base
    for x in range(base.n):
        for y in bits_of(base.up[x] & ~(1 << x)):
            r1, r2 = F1.restriction(x, y), F2.restriction(x, y)
            cx, cy = gamma.components[x], gamma.components[y]
            if any(cy[r1[i]] != r2[cx[i]] for i in range(F1.sizes[x])):
                return False
    return True


def bundle_map_of(gamma: PresheafMap) -> PosetMap:
    """The induced map of total spaces over the base."""
    B1 = grothendieck(gamma.source)
    B2 = grothendieck(gamma.target)
    off1 = _offsets(gamma.source)
    off2 = _offsets(gamma.target)
    assign = []
    for t, x in enumerate(B1.projection.assignment):
        i = t - off1[x]
        assign.append(off2[x] + gamma.components[x][i])
    f = PosetMap(B1.total, B2.total, tuple(assign))
    if not is_monotone(f):
        raise InvalidPresheaf("map of totals is not monotone; gamma not natural")
    return f
