"""Expansions of a Heyting algebra by a subalgebra of constants, and the
disjunction axiom deciding local invertibility of the dual map.

An `HAlgebra` is a homomorphism c: H -> A; the constants of the expanded
signature are exactly the images c(h).  For finite carriers, membership in
the variety generated by the identity expansion is decided by the axiom

    join over h in H of (x <=> c(h))  ==  top,

evaluated in A for every x.  On upset-backed carriers the evaluation runs
on raw bitmasks: (u <=> v) there is {x | up(x) & (u ^ v) == 0} and joins
are unions, which keeps the exhaustive sweeps off the operation tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotAHomomorphism
from .heyting import (
    FiniteHeytingAlgebra,
    HeytingHom,
    identity_hom,
    is_homomorphism,
)


@dataclass(frozen=True)
class HAlgebra:
    """A Heyting algebra A together with a structure homomorphism from H."""

    base: FiniteHeytingAlgebra
    carrier: FiniteHeytingAlgebra
    structure: HeytingHom

    def __post_init__(self):
        if self.structure.domain != self.base or self.structure.codomain != self.carrier:
            raise ValueError("structure map must go base -> carrier")
        if not is_homomorphism(self.structure):
            raise NotAHomomorphism("structure map is not a Heyting homomorphism")

    def constant(self, h: int) -> int:
        return self.structure.assignment[h]


def identity_halgebra(H: FiniteHeytingAlgebra) -> HAlgebra:
    return HAlgebra(H, H, identity_hom(H))


def _axiom_accumulator_masks(c: HAlgebra):
    """Final disjunction value at every carrier element, as upset masks.

    Only for upset-backed carriers; numpy-vectorized when the carrier is
    large and the base fits a machine word.
    """
    A = c.carrier
    base = A.base_poset
    masks = A.upset_masks
    full = masks[A.top]
    consts = [masks[v] for v in c.structure.assignment]
    if A.n > 64 and base.n <= 63:
        arr = np.array(masks, dtype=np.uint64)
        acc = np.zeros(A.n, dtype=np.uint64)
        fullu = np.uint64(full)
        for cm in consts:
            diff = arr ^ np.uint64(cm)
            bc = np.zeros(A.n, dtype=np.uint64)
            for x in range(base.n):
                ok = (diff & np.uint64(base.up[x])) == 0
                bc |= np.where(ok, np.uint64(1 << x), np.uint64(0))
            acc |= bc
            if (acc == fullu).all():
                break
        return [int(v) for v in acc]
    ups = base.up
    out = []
    for u in masks:
        acc = 0
        for cm in consts:
            diff = u ^ cm
            bc = 0
            for x in range(base.n):
                if ups[x] & diff == 0:
                    bc |= 1 << x
            acc |= bc
            if acc == full:
                break
        out.append(acc)
    return out


def _axiom_values_table(c: HAlgebra) -> np.ndarray:
    A = c.carrier
    acc = np.full(A.n, A.bottom, dtype=np.int64)
    top = A.top
    for ch in c.structure.assignment:
        bc = A.meet[A.imp[:, ch].astype(np.int64), A.imp[ch, :].astype(np.int64)]
        acc = A.join[acc, bc.astype(np.int64)].astype(np.int64)
        if (acc == top).all():
            break
    return acc


def etale_axiom_value(c: HAlgebra, a: int) -> int:
    """join over h of (a <=> c(h)), computed in the carrier.

    Constants are scanned in base carrier-index order with early exit once
    the join reaches top (the result is order-independent).
    """
    A = c.carrier
    if A.upset_masks is not None:
        base, masks = A.base_poset, A.upset_masks
        u, full = masks[a], masks[A.top]
        acc = 0
        for v in c.structure.assignment:
            diff = u ^ masks[v]
            bc = 0
            for x in range(base.n):
                if base.up[x] & diff == 0:
                    bc |= 1 << x
            acc |= bc
            if acc == full:
                break
        return A.index_of_upset(acc)
    meet, join, imp = A.meet_l, A.join_l, A.imp_l
    acc = A.bottom
    for ch in c.structure.assignment:
        bc = meet[imp[a][ch]][imp[ch][a]]
        acc = join[acc][bc]
        if acc == A.top:
            break
    return acc


def etale_axiom_holds(c: HAlgebra) -> bool:
    A = c.carrier
    if A.upset_masks is not None:
        full = A.upset_masks[A.top]
        return all(v == full for v in _axiom_accumulator_masks(c))
    return bool((_axiom_values_table(c) == A.top).all())


def failure_witness(c: HAlgebra) -> Optional[int]:
    """Some a with axiom value below top, or None when the axiom holds."""
    A = c.carrier
    if A.upset_masks is not None:
        full = A.upset_masks[A.top]
        for a, v in enumerate(_axiom_accumulator_masks(c)):
            if v != full:
                return a
        return None
    bad = (_axiom_values_table(c) != A.top).nonzero()[0]
    return int(bad[0]) if len(bad) else None


def is_etale(c: HAlgebra) -> bool:
    """Variety membership for finite base and carrier.

    Defined as the axiom check: for finite carriers the axiom, strictness
    of the dual map, and membership in the variety generated by the
    identity expansion all coincide, so no generate-and-search is run.
    """
    return etale_axiom_holds(c)
