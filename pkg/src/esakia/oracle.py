"""Exhaustive generators: labeled posets, maps, homomorphisms, presheaves.

These are the instance streams the theorem suites sweep.  Enumeration is
labeled (never up to isomorphism) and deterministic; filters call the
public predicates of the structure modules.  The compiled kernel offers a
faster map sweep, which tests check against these streams.
"""

from __future__ import annotations

import hashlib
import itertools
from functools import lru_cache
from typing import Iterator

from .errors import InvalidPresheaf
from .heyting import FiniteHeytingAlgebra, HeytingHom
from .poset import (
    FinitePoset,
    PosetMap,
    all_upsets,
    bits_of,
    is_monotone,
    is_p_morphism,
    is_strict_p_morphism,
)
from .presheaf import Presheaf, PresheafMap, is_natural


@lru_cache(maxsize=None)
def _poset_up_masks(n: int) -> tuple[tuple[int, ...], ...]:
    # each poset on 0..n-1 arises exactly once from its restriction to
    # 0..n-2 plus the strict down- and up-sets of the new top index
    if n == 0:
        return ((),)
    out = []
    newbit = 1 << (n - 1)
    for rows in _poset_up_masks(n - 1):
        P = FinitePoset(tuple(range(n - 1)), rows)
        ups = all_upsets(P)
        full = P.full_mask
        downs = [full ^ u for u in ups]
        for d in downs:
            # every element below the new one must already sit below all of U
            cap = full
            for i in bits_of(d):
                cap &= P.up[i]
            for u in ups:
                if u & d or u & ~cap:
                    continue
                new_rows = [
                    rows[i] | (newbit if (d >> i) & 1 else 0)
                    for i in range(n - 1)
                ]
                new_rows.append(u | newbit)
                out.append(tuple(new_rows))
    out.sort()
    return tuple(out)


def count_labeled_posets(n: int) -> int:
    return len(_poset_up_masks(n))


def all_labeled_posets(n: int) -> Iterator[FinitePoset]:
    """Every partial order on {0..n-1}, exactly once, ascending by the
    up-mask tuple."""
    labels = tuple(range(n))
    for rows in _poset_up_masks(n):
        yield FinitePoset(labels, rows)


def posets_up_to(n: int) -> Iterator[FinitePoset]:
    for k in range(n + 1):
        yield from all_labeled_posets(k)


def _all_maps(P: FinitePoset, Q: FinitePoset) -> Iterator[PosetMap]:
    if P.n == 0:
        yield PosetMap(P, Q, ())
        return
    if Q.n == 0:
        return
    for assign in itertools.product(range(Q.n), repeat=P.n):
        yield PosetMap(P, Q, assign)


def all_monotone_maps(P: FinitePoset, Q: FinitePoset) -> Iterator[PosetMap]:
    return (f for f in _all_maps(P, Q) if is_monotone(f))


def all_p_morphisms(P: FinitePoset, Q: FinitePoset) -> Iterator[PosetMap]:
    return (f for f in _all_maps(P, Q) if is_p_morphism(f))


def all_strict_p_morphisms(P: FinitePoset, Q: FinitePoset) -> Iterator[PosetMap]:
    return (f for f in _all_maps(P, Q) if is_strict_p_morphism(f))


def _hom_stream(A: FiniteHeytingAlgebra, B: FiniteHeytingAlgebra, with_imp: bool):
    """Backtracking over assignments in lexicographic order.

    Operation constraints are enforced as soon as all indices involved are
    assigned, so the full |B|^|A| grid is never materialized.
    """
    n = A.n
    tables_a = [A.meet_l, A.join_l] + ([A.imp_l] if with_imp else [])
    tables_b = [B.meet_l, B.join_l] + ([B.imp_l] if with_imp else [])
    assign = [0] * n

    def consistent(k: int) -> bool:
        if k == A.bottom and assign[k] != B.bottom:
            return False
        if k == A.top and assign[k] != B.top:
            return False
        for ta, tb in zip(tables_a, tables_b):
            row = ta[k]
            for j in range(k + 1):
                r = row[j]
                if r <= k and tb[assign[k]][assign[j]] != assign[r]:
                    return False
                r = ta[j][k]
                if r <= k and tb[assign[j]][assign[k]] != assign[r]:
                    return False
        return True

    def rec(k: int):
        if k == n:
            yield HeytingHom(A, B, tuple(assign))
            return
        for v in range(B.n):
            assign[k] = v
            if consistent(k):
                yield from rec(k + 1)

    if n:
        yield from rec(0)


def all_homomorphisms(A: FiniteHeytingAlgebra, B: FiniteHeytingAlgebra) -> Iterator[HeytingHom]:
    """All maps preserving meet, join, implies, bottom, top."""
    return _hom_stream(A, B, with_imp=True)


def all_lattice_homomorphisms(A: FiniteHeytingAlgebra, B: FiniteHeytingAlgebra) -> Iterator[HeytingHom]:
    return _hom_stream(A, B, with_imp=False)


def all_presheaves(X: FinitePoset, max_fiber: int) -> Iterator[Presheaf]:
    """All fiber-size vectors bounded by max_fiber, with every functorial
    family of restrictions."""
    pairs = [
        (x, y)
        for x in range(X.n)
        for y in bits_of(X.up[x] & ~(1 << x))
    ]
    for sizes in itertools.product(range(max_fiber + 1), repeat=X.n):
        per_pair = []
        feasible = True
        for x, y in pairs:
            fns = list(itertools.product(range(sizes[y]), repeat=sizes[x]))
            if not fns:
                if sizes[x] > 0:
                    feasible = False
                    break
                fns = [()]
            per_pair.append(fns)
        if not feasible:
            continue
        for family in itertools.product(*per_pair):
            items = tuple(
                (x, y, assign) for (x, y), assign in zip(pairs, family)
            )
            try:
                yield Presheaf(X, sizes, items)
            except InvalidPresheaf:
                continue


def all_presheaf_maps(F1: Presheaf, F2: Presheaf) -> Iterator[PresheafMap]:
    per_x = [
        list(itertools.product(range(F2.sizes[x]), repeat=F1.sizes[x]))
        or ([()] if F1.sizes[x] == 0 else [])
        for x in range(F1.base.n)
    ]
    for comps in itertools.product(*per_x):
        gamma = PresheafMap(F1, F2, tuple(comps))
        if is_natural(gamma):
            yield gamma


def stream_hash(items) -> str:
    """Stable digest of a stream, for generator-determinism goldens."""
    h = hashlib.sha256()
    for it in items:
        h.update(repr(it).encode())
        h.update(b"\n")
    return h.hexdigest()
