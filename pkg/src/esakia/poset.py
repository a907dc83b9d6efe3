"""Finite posets, bitmask subsets, and the map predicates.

Elements are dense indices 0..n-1; user-facing labels live in a side table.
Subsets of a carrier are plain ints used as bit patterns, so the exhaustive
suites can churn through millions of them.  The empty poset is permitted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from . import _kernel
from .errors import (
    AntisymmetryViolation,
    CodomainMismatch,
    DuplicateElement,
    UnknownElement,
)


def bits_of(mask: int):
    """Indices of the set bits of a mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask &= mask - 1


@dataclass(frozen=True)
class FinitePoset:
    """Immutable finite poset: label table plus one up-mask per element.

    ``up[i]`` has bit j set iff i <= j (diagonal included).
    """

    labels: tuple[Hashable, ...]
    up: tuple[int, ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(self.up) != n:
            raise ValueError("labels and up masks disagree in length")

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def down(self) -> tuple[int, ...]:
        n = self.n
        d = [0] * n
        for i in range(n):
            for j in bits_of(self.up[i]):
                d[j] |= 1 << i
        return tuple(d)

    @cached_property
    def _index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElement(f"unknown element {label!r}") from None

    def leq(self, i: int, j: int) -> bool:
        return bool((self.up[i] >> j) & 1)

    def leq_labels(self, a, b) -> bool:
        return self.leq(self.index(a), self.index(b))

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Hasse diagram: pairs (i, j) with i < j and nothing strictly between."""
        out = []
        for i in range(self.n):
            strict = self.up[i] & ~(1 << i)
            for j in bits_of(strict):
                between = strict & (self.down[j] & ~(1 << j))
                if between == 0:
                    out.append((i, j))
        return tuple(out)

    def subset(self, labels: Iterable) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self.index(lab)
        return m

    def labels_of(self, mask: int) -> tuple:
        return tuple(self.labels[i] for i in bits_of(mask))

    def format_subset(self, mask: int) -> str:
        return "{" + ",".join(str(lab) for lab in self.labels_of(mask)) + "}"

    def __repr__(self):
        return f"FinitePoset({list(self.labels)!r}, covers={list(self.covers)!r})"


def _transitive_closure(n: int, rows: list[int]) -> list[int]:
    for k in range(n):
        bit = 1 << k
        row_k = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= row_k
    return rows


def make_poset(elements: Sequence, covers: Iterable[tuple] = ()) -> FinitePoset:
    """Build a poset from cover pairs; leq is their reflexive-transitive closure.

    Raises DuplicateElement, UnknownElement, or AntisymmetryViolation when the
    closure creates a 2-cycle.
    """
    labels = tuple(elements)
    if len(set(labels)) != len(labels):
        raise DuplicateElement(f"duplicate element among {labels!r}")
    index = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    rows = [1 << i for i in range(n)]
    for a, b in covers:
        if a not in index:
            raise UnknownElement(f"unknown element {a!r} in cover")
        if b not in index:
            raise UnknownElement(f"unknown element {b!r} in cover")
        rows[index[a]] |= 1 << index[b]
    rows = _transitive_closure(n, rows)
    for i in range(n):
        for j in bits_of(rows[i]):
            if j != i and rows[j] >> i & 1:
                raise AntisymmetryViolation(
                    f"elements {labels[i]!r} and {labels[j]!r} form a cycle"
                )
    return FinitePoset(labels, tuple(rows))


def from_up_masks(labels: Sequence, up: Sequence[int]) -> FinitePoset:
    """Wrap precomputed up masks; validates the three order axioms."""
    P = FinitePoset(tuple(labels), tuple(up))
    n = P.n
    for i in range(n):
        if not (P.up[i] >> i) & 1:
            raise ValueError("relation not reflexive")
        for j in bits_of(P.up[i]):
            if j != i and (P.up[j] >> i) & 1:
                raise AntisymmetryViolation("relation not antisymmetric")
            if P.up[j] & ~P.up[i]:
                raise ValueError("relation not transitive")
    return P


def induced_subposet(P: FinitePoset, mask: int) -> tuple[FinitePoset, list[int]]:
    """Restriction of P to the elements of `mask`.

    Returns the subposet together with the list of original indices in the
    new element order (ascending original index).
    """
    members = list(bits_of(mask))
    pos = {orig: k for k, orig in enumerate(members)}
    up = []
    for orig in members:
        m = 0
        for j in bits_of(P.up[orig] & mask):
            m |= 1 << pos[j]
        up.append(m)
    labels = tuple(P.labels[i] for i in members)
    return FinitePoset(labels, tuple(up)), members


# -- subsets ---------------------------------------------------------------


def principal_upset(P: FinitePoset, x) -> int:
    """{x' | x <= x'} as a mask; the smallest upset containing x."""
    return P.up[P.index(x)]


def principal_downset(P: FinitePoset, x) -> int:
    return P.down[P.index(x)]


def is_upset(P: FinitePoset, mask: int) -> bool:
    """True iff membership is closed upward."""
    for i in bits_of(mask):
        if P.up[i] & ~mask:
            return False
    return True


def is_downset(P: FinitePoset, mask: int) -> bool:
    for i in bits_of(mask):
        if P.down[i] & ~mask:
            return False
    return True


def all_upsets(P: FinitePoset) -> list[int]:
    """Every upward-closed subset, ascending by characteristic bit pattern."""
    if P.n == 0:
        return [0]
    return _kernel.upsets_of(P.up, P.down)


# -- maps ------------------------------------------------------------------


@dataclass(frozen=True)
class PosetMap:
    """Total map between poset carriers, stored as a tuple of codomain indices."""

    domain: FinitePoset
    codomain: FinitePoset
    assignment: tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != self.domain.n:
            raise UnknownElement("assignment must cover every domain element")
        for v in self.assignment:
            if not 0 <= v < self.codomain.n:
                raise UnknownElement(f"image index {v} outside codomain")

    @classmethod
    def from_labels(cls, domain: FinitePoset, codomain: FinitePoset, mapping: dict) -> "PosetMap":
        assign = [None] * domain.n
        for a, b in mapping.items():
            assign[domain.index(a)] = codomain.index(b)
        if any(v is None for v in assign):
            missing = [domain.labels[i] for i, v in enumerate(assign) if v is None]
            raise UnknownElement(f"map does not assign {missing!r}")
        return cls(domain, codomain, tuple(assign))

    def __call__(self, i: int) -> int:
        return self.assignment[i]

    def apply_label(self, label):
        return self.codomain.labels[self.assignment[self.domain.index(label)]]


def identity_map(P: FinitePoset) -> PosetMap:
    return PosetMap(P, P, tuple(range(P.n)))


def compose(g: PosetMap, f: PosetMap) -> PosetMap:
    """g after f."""
    if f.codomain != g.domain:
        raise CodomainMismatch("compose: codomain of f differs from domain of g")
    return PosetMap(f.domain, g.codomain, tuple(g.assignment[v] for v in f.assignment))


def direct_image(f: PosetMap, mask: int) -> int:
    """f_!(U) = {f(x) | x in U}."""
    out = 0
    for i in bits_of(mask):
        out |= 1 << f.assignment[i]
    return out


def inverse_image(f: PosetMap, mask: int) -> int:
    """f^*(V) = {x | f(x) in V}."""
    out = 0
    for i, v in enumerate(f.assignment):
        if (mask >> v) & 1:
            out |= 1 << i
    return out


def is_monotone(f: PosetMap) -> bool:
    up_d, up_c = f.domain.up, f.codomain.up
    for i in range(f.domain.n):
        fi = f.assignment[i]
        for j in bits_of(up_d[i]):
            if not (up_c[fi] >> f.assignment[j]) & 1:
                return False
    return True


def monotone_witness(f: PosetMap):
    """A pair (x1, x2) with x1 <= x2 but f(x1) !<= f(x2), or None."""
    for i in range(f.domain.n):
        fi = f.assignment[i]
        for j in bits_of(f.domain.up[i]):
            if not (f.codomain.up[fi] >> f.assignment[j]) & 1:
                return (i, j)
    return None


def _back_condition_witness(f: PosetMap):
    # fails at (x, y) when y >= f(x) has no preimage above x
    for x in range(f.domain.n):
        img = direct_image(f, f.domain.up[x])
        missing = f.codomain.up[f.assignment[x]] & ~img
        if missing:
            y = next(bits_of(missing))
            return (x, y)
    return None


def is_p_morphism(f: PosetMap) -> bool:
    """Monotone and: every y >= f(x) has a preimage above x."""
    return is_monotone(f) and _back_condition_witness(f) is None


def p_morphism_witness(f: PosetMap):
    """(kind, data) describing the first failure, or None if f is a p-morphism."""
    w = monotone_witness(f)
    if w is not None:
        return ("monotone", w)
    w = _back_condition_witness(f)
    if w is not None:
        return ("back", w)
    return None


def is_strict_p_morphism(f: PosetMap) -> bool:
    """p-morphism whose back-condition witness is unique; equivalently f
    restricted to each up(x) is a bijection onto up(f(x))."""
    return is_p_morphism(f) and strictness_witness(f) is None


def strictness_witness(f: PosetMap):
    """Two distinct x1, x2 above some x with equal images, or None.

    Presumes nothing: duplicate images above x falsify uniqueness whether or
    not f is a p-morphism.
    """
    for x in range(f.domain.n):
        seen: dict[int, int] = {}
        for xp in bits_of(f.domain.up[x]):
            y = f.assignment[xp]
            if y in seen:
                return (x, seen[y], xp)
            seen[y] = xp
    return None


def is_order_isomorphism(f: PosetMap) -> bool:
    if f.domain.n != f.codomain.n:
        return False
    if len(set(f.assignment)) != f.domain.n:
        return False
    for i in range(f.domain.n):
        image_up = 0
        for j in bits_of(f.domain.up[i]):
            image_up |= 1 << f.assignment[j]
        if image_up != f.codomain.up[f.assignment[i]]:
            return False
    return True


# -- canned examples used across tests and docs -----------------------------


def chain(n: int, prefix: str = "c") -> FinitePoset:
    labels = [f"{prefix}{i}" for i in range(n)]
    return make_poset(labels, [(labels[i], labels[i + 1]) for i in range(n - 1)])


def antichain(n: int, prefix: str = "a") -> FinitePoset:
    return make_poset([f"{prefix}{i}" for i in range(n)], [])
