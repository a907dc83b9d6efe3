"""Finite limits of bundles over a fixed base and the dual colimits.

Products of bundles are computed as plain ordered-space pullbacks; the
coproduct of axiom-validating algebra expansions is read off by duality,
and coincides (carrier and legs) with the distributive-lattice pushout of
the structure maps, which is computed the same dual way.  Pushouts by
presentation/congruence generation are deliberately avoided.
"""

from __future__ import annotations

from dataclasses import dataclass

from .duality import counit_iso, dual_of_homomorphism, dual_of_lattice_hom, dual_poset
from .errors import BaseMismatch, CodomainMismatch, DomainMismatch, NotAHomomorphism, NotEtale
from .etale import HAlgebra, is_etale
from .heyting import (
    FiniteHeytingAlgebra,
    HeytingHom,
    is_lattice_homomorphism,
    upset_algebra,
)
from .poset import (
    FinitePoset,
    PosetMap,
    compose,
    identity_map,
    inverse_image,
    is_monotone,
)
from .presheaf import Bundle


def terminal_bundle(X: FinitePoset) -> Bundle:
    """The identity projection; terminal among bundles over X."""
    return Bundle(X, X, identity_map(X))


def poset_pullback(g: PosetMap, h: PosetMap):
    """Pullback of monotone maps with common codomain, with componentwise
    order.  Returns (P, to_domain_of_g, to_domain_of_h)."""
    if g.codomain != h.codomain:
        raise CodomainMismatch("pullback legs must share a codomain")
    if not (is_monotone(g) and is_monotone(h)):
        raise ValueError("pullback legs must be monotone")
    Y2, Y3 = g.domain, h.domain
    points = [
        (i, j)
        for i in range(Y2.n)
        for j in range(Y3.n)
        if g.assignment[i] == h.assignment[j]
    ]
    pos = {p: k for k, p in enumerate(points)}
    up = []
    for (i, j) in points:
        m = 0
        for (i2, j2), k2 in pos.items():
            if Y2.leq(i, i2) and Y3.leq(j, j2):
                m |= 1 << k2
        up.append(m)
    labels = tuple((Y2.labels[i], Y3.labels[j]) for i, j in points)
    P = FinitePoset(labels, tuple(up))
    p1 = PosetMap(P, Y2, tuple(i for i, _ in points))
    p2 = PosetMap(P, Y3, tuple(j for _, j in points))
    return P, p1, p2


def bundle_product_legs(f1: Bundle, f2: Bundle):
    """Product in the category of bundles over a common base, with its two
    projection legs."""
    if f1.base != f2.base:
        raise BaseMismatch("bundle product needs a common base")
    P, p1, p2 = poset_pullback(f1.projection, f2.projection)
    product = Bundle(P, f1.base, compose(f1.projection, p1))
    return product, p1, p2


def bundle_product(f1: Bundle, f2: Bundle) -> Bundle:
    return bundle_product_legs(f1, f2)[0]


@dataclass(frozen=True)
class DLPushout:
    """Distributive-lattice pushout: the carrier (a Heyting algebra used as
    a lattice) and the two legs out of the summands."""

    lattice: FiniteHeytingAlgebra
    leg1: HeytingHom
    leg2: HeytingHom


def _upset_leg(A: FiniteHeytingAlgebra, p: PosetMap,
               carrier: FiniteHeytingAlgebra) -> HeytingHom:
    # A -> Up(P): counit into Up(dual A), then inverse image along p
    cu = counit_iso(A)
    UpXA = cu.codomain
    assign = tuple(
        carrier.index_of_upset(inverse_image(p, UpXA.upset_masks[cu.assignment[a]]))
        for a in range(A.n)
    )
    return HeytingHom(A, carrier, assign)


def dl_pushout(c1: HeytingHom, c2: HeytingHom) -> DLPushout:
    """Pushout of two lattice homomorphisms out of a common algebra,
    computed by duality: pull the prime-filter duals back over the dual of
    the common domain and take the upset lattice of the result."""
    if c1.domain != c2.domain:
        raise DomainMismatch("pushout legs must share a domain")
    if not (is_lattice_homomorphism(c1) and is_lattice_homomorphism(c2)):
        raise NotAHomomorphism("pushout legs must be lattice homomorphisms")
    g1 = dual_of_lattice_hom(c1)
    g2 = dual_of_lattice_hom(c2)
    P, p1, p2 = poset_pullback(g1, g2)
    L = upset_algebra(P)
    return DLPushout(L, _upset_leg(c1.codomain, p1, L), _upset_leg(c2.codomain, p2, L))


def etale_coproduct_legs(c1: HAlgebra, c2: HAlgebra):
    """Coproduct of two axiom-validating expansions of the same base, with
    coprojections; dual to the product of the dual bundles."""
    if c1.base != c2.base:
        raise BaseMismatch("coproduct needs a common base algebra")
    if not is_etale(c1) or not is_etale(c2):
        raise NotEtale("coproduct is only taken of axiom-validating expansions")
    H = c1.base
    XH = dual_poset(H)
    f1 = dual_of_homomorphism(c1.structure)
    f2 = dual_of_homomorphism(c2.structure)
    b1 = Bundle(f1.domain, XH, f1)
    b2 = Bundle(f2.domain, XH, f2)
    product, p1, p2 = bundle_product_legs(b1, b2)
    C = upset_algebra(product.total)
    cuH = counit_iso(H)
    UpXH = cuH.codomain
    structure = HeytingHom(H, C, tuple(
        C.index_of_upset(
            inverse_image(product.projection, UpXH.upset_masks[cuH.assignment[h]])
        )
        for h in range(H.n)
    ))
    result = HAlgebra(H, C, structure)
    return result, _upset_leg(c1.carrier, p1, C), _upset_leg(c2.carrier, p2, C)


def etale_coproduct(c1: HAlgebra, c2: HAlgebra) -> HAlgebra:
    return etale_coproduct_legs(c1, c2)[0]
