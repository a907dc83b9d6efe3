"""Finite duality: prime-filter spaces, dual morphisms, round-trip isos.

Prime filters are represented as bitmasks over the algebra carrier; the
dual poset's element labels *are* those masks, ordered by inclusion.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import NotAHomomorphism, NotAPMorphism, NotDistributive
from .heyting import FiniteHeytingAlgebra, HeytingHom, is_homomorphism, upset_algebra
from .poset import (
    FinitePoset,
    PosetMap,
    bits_of,
    inverse_image,
    is_p_morphism,
)


def is_prime_filter(A: FiniteHeytingAlgebra, mask: int) -> bool:
    """Nonempty meet-closed upset avoiding bottom, with a|b inside forcing
    a or b inside."""
    if mask == 0 or (mask >> A.bottom) & 1:
        return False
    up = A.up_masks
    meet = A.meet_l
    join = A.join_l
    members = list(bits_of(mask))
    for a in members:
        if up[a] & ~mask:
            return False
        for b in members:
            if not (mask >> meet[a][b]) & 1:
                return False
    # primality over all pairs, not just members
    for a in range(A.n):
        if (mask >> a) & 1:
            continue
        for b in range(A.n):
            if (mask >> b) & 1:
                continue
            if (mask >> join[a][b]) & 1:
                return False
    return True


@lru_cache(maxsize=512)
def dual_poset(A: FiniteHeytingAlgebra) -> FinitePoset:
    """Prime filters of A ordered by inclusion.

    A filter of a finite lattice contains the meet of all its members, so
    every filter is a principal upset; candidates are scanned as such and
    kept when join-prime.  The degenerate algebra dualizes to the empty
    poset.
    """
    n = A.n
    down = A.down_masks
    join = A.join_l
    # a is join-prime iff a <= b|c implies a <= b or a <= c
    bad = 0
    for b in range(n):
        down_b = down[b]
        for c in range(n):
            bad |= down[join[b][c]] & ~down_b & ~down[c]
    filters = sorted(
        A.up_masks[a] for a in range(n) if a != A.bottom and not (bad >> a) & 1
    )
    k = len(filters)
    up = []
    for i in range(k):
        m = 0
        for j in range(k):
            if filters[i] & ~filters[j] == 0:  # F_i subset of F_j
                m |= 1 << j
        up.append(m)
    return FinitePoset(tuple(filters), tuple(up))


def upset_hom_of_monotone(f: PosetMap) -> HeytingHom:
    """Inverse image on upsets; a bounded-lattice homomorphism for any
    monotone map (a full Heyting homomorphism needs the back condition,
    see dual_of_pmorphism)."""
    from .poset import is_monotone

    if not is_monotone(f):
        raise NotAPMorphism("inverse image preserves upsets only for monotone maps")
    A = upset_algebra(f.codomain)
    B = upset_algebra(f.domain)
    assignment = tuple(
        B.index_of_upset(inverse_image(f, mask)) for mask in A.upset_masks
    )
    return HeytingHom(A, B, assignment)


def dual_of_pmorphism(f: PosetMap) -> HeytingHom:
    """Inverse image restricted to upsets: Up(codomain f) -> Up(domain f)."""
    if not is_p_morphism(f):
        raise NotAPMorphism("dual_of_pmorphism requires a p-morphism")
    return upset_hom_of_monotone(f)


@lru_cache(maxsize=8192)
def dual_of_homomorphism(h: HeytingHom) -> PosetMap:
    """Prime filters pull back: dual_poset(codomain h) -> dual_poset(domain h)."""
    if not is_homomorphism(h):
        raise NotAHomomorphism("dual_of_homomorphism requires a Heyting homomorphism")
    return dual_of_lattice_hom(h)


def dual_of_lattice_hom(h: HeytingHom) -> PosetMap:
    """Priestley dual of a bounded lattice homomorphism (no implication use).

    Shared machinery for the Heyting case and for distributive-lattice
    pushouts; the caller vouches for lattice-homomorphism-ness.
    """
    XB = dual_poset(h.codomain)
    XA = dual_poset(h.domain)
    index = {mask: i for i, mask in enumerate(XA.labels)}
    assign = []
    for fmask in XB.labels:
        pre = 0
        for a, img in enumerate(h.assignment):
            if (fmask >> img) & 1:
                pre |= 1 << a
        assign.append(index[pre])
    return PosetMap(XB, XA, tuple(assign))


def unit_iso(X: FinitePoset) -> PosetMap:
    """x maps to the filter {U in Up(X) | x in U}; an order isomorphism
    onto dual_poset(upset_algebra(X))."""
    A = upset_algebra(X)
    D = dual_poset(A)
    index = {mask: i for i, mask in enumerate(D.labels)}
    assign = []
    for x in range(X.n):
        fmask = 0
        for i, m in enumerate(A.upset_masks):
            if (m >> x) & 1:
                fmask |= 1 << i
        assign.append(index[fmask])
    return PosetMap(X, D, tuple(assign))


@lru_cache(maxsize=8192)
def counit_iso(A: FiniteHeytingAlgebra) -> HeytingHom:
    """a maps to {F prime | a in F}, an isomorphism A -> Up(dual_poset(A)).

    Raises NotDistributive when the map fails to be a bijective
    homomorphism (callers are expected to feed verified Heyting algebras).
    """
    D = dual_poset(A)
    B = upset_algebra(D)
    assign = []
    for a in range(A.n):
        m = 0
        for k, fmask in enumerate(D.labels):
            if (fmask >> a) & 1:
                m |= 1 << k
        try:
            assign.append(B.index_of_upset(m))
        except KeyError:
            raise NotDistributive("counit image is not an upset of the dual") from None
    h = HeytingHom(A, B, tuple(assign))
    if len(set(assign)) != A.n or B.n != A.n or not is_homomorphism(h):
        raise NotDistributive("counit is not a Heyting isomorphism")
    return h
