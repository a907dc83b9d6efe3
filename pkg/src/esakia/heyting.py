"""Finite Heyting algebras: upset algebras, law checking, homomorphisms.

Carriers are index sets 0..n-1 with meet/join/implies operation tables
(numpy uint16).  When an algebra is built as Up(X) the index-to-upset
correspondence is retained for printing and for duality, and the tables
and order matrix are materialized on first use: the colimit sweeps create
thousands of short-lived carriers with up to a few thousand elements whose
checks run on the upset bitmasks alone.  Equality of algebra *objects* is
literal; equality up to relabeling goes through `find_isomorphism`.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from .errors import DomainMismatch, NotALattice, NotDistributive
from .poset import FinitePoset, all_upsets, bits_of

_IDX = np.uint16


def upset_imp_mask(base: FinitePoset, u: int, v: int) -> int:
    """Implication in Up(base) on raw masks: the greatest upset whose
    intersection with u lies in v."""
    out = 0
    for x in range(base.n):
        if base.up[x] & u & ~v == 0:
            out |= 1 << x
    return out


class FiniteHeytingAlgebra:
    """Bounded lattice order plus meet/join/implies tables and 0, 1."""

    __slots__ = (
        "_labels",
        "_leq",
        "_meet",
        "_join",
        "_imp",
        "bottom",
        "top",
        "n",
        "upset_masks",
        "base_poset",
        "_hash",
        "_up_masks",
        "_down_masks",
        "_meet_l",
        "_join_l",
        "_imp_l",
    )

    def __init__(self, labels, leq, meet, join, imp, bottom, top,
                 upset_masks=None, base_poset=None):
        self.upset_masks = tuple(upset_masks) if upset_masks is not None else None
        self.base_poset = base_poset
        if self.upset_masks is not None:
            self.n = len(self.upset_masks)
            if base_poset is None:
                raise ValueError("upset-backed algebra needs its base poset")
        else:
            self.n = len(labels)
        lazy_ok = self.upset_masks is not None
        if not lazy_ok and (labels is None or leq is None or meet is None):
            raise ValueError("tables may be deferred only for upset-backed algebras")
        self._labels = tuple(labels) if labels is not None else None
        self._leq = None if leq is None else np.asarray(leq, dtype=bool)
        self._meet = None if meet is None else np.asarray(meet, dtype=_IDX)
        self._join = None if join is None else np.asarray(join, dtype=_IDX)
        self._imp = None if imp is None else np.asarray(imp, dtype=_IDX)
        self.bottom = int(bottom)
        self.top = int(top)
        self._hash = None
        self._up_masks = None
        self._down_masks = None
        self._meet_l = None
        self._join_l = None
        self._imp_l = None

    @property
    def is_degenerate(self) -> bool:
        return self.bottom == self.top

    # -- lazy views ---------------------------------------------------------

    @property
    def labels(self) -> tuple:
        if self._labels is None:
            base = self.base_poset
            self._labels = tuple(base.labels_of(m) for m in self.upset_masks)
        return self._labels

    def _build_tables(self):
        base, masks = self.base_poset, self.upset_masks
        n = self.n
        if base.n <= 63:
            arr = np.array(masks, dtype=np.uint64)
            not_v = ~arr
            self._leq = (arr[:, None] & not_v[None, :]) == 0
            self._meet = np.searchsorted(arr, arr[:, None] & arr[None, :]).astype(_IDX)
            self._join = np.searchsorted(arr, arr[:, None] | arr[None, :]).astype(_IDX)
            imp_masks = np.zeros((n, n), dtype=np.uint64)
            for x in range(base.n):
                ux = np.uint64(base.up[x])
                bad = (arr & ux)[:, None] & not_v[None, :]
                imp_masks |= np.where(bad == 0, np.uint64(1 << x), np.uint64(0))
            self._imp = np.searchsorted(arr, imp_masks).astype(_IDX)
        else:
            index = {m: i for i, m in enumerate(masks)}
            meet = np.zeros((n, n), dtype=_IDX)
            join = np.zeros((n, n), dtype=_IDX)
            imp = np.zeros((n, n), dtype=_IDX)
            leq = np.zeros((n, n), dtype=bool)
            for i, mi in enumerate(masks):
                for j, mj in enumerate(masks):
                    meet[i, j] = index[mi & mj]
                    join[i, j] = index[mi | mj]
                    imp[i, j] = index[upset_imp_mask(base, mi, mj)]
                    leq[i, j] = mi & ~mj == 0
            self._meet, self._join, self._imp, self._leq = meet, join, imp, leq

    @property
    def leq(self) -> np.ndarray:
        if self._leq is None:
            self._build_tables()
        return self._leq

    @property
    def meet(self) -> np.ndarray:
        if self._meet is None:
            self._build_tables()
        return self._meet

    @property
    def join(self) -> np.ndarray:
        if self._join is None:
            self._build_tables()
        return self._join

    @property
    def imp(self) -> np.ndarray:
        if self._imp is None:
            self._build_tables()
        return self._imp

    # -- identity -----------------------------------------------------------

    def _key(self):
        if self.upset_masks is not None:
            base = self.base_poset
            return ("upsets", base.labels, base.up, self.upset_masks,
                    self.bottom, self.top)
        return (
            "tables",
            self._labels,
            self._leq.tobytes(),
            self._meet.tobytes(),
            self._join.tobytes(),
            self._imp.tobytes(),
            self.bottom,
            self.top,
        )

    def __eq__(self, other):
        if not isinstance(other, FiniteHeytingAlgebra):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"FiniteHeytingAlgebra(n={self.n}, bottom={self.bottom}, top={self.top})"

    # -- mask views of the order, for bit-level scans ------------------------

    @property
    def up_masks(self) -> tuple[int, ...]:
        if self._up_masks is None:
            packed = np.packbits(self.leq, axis=1, bitorder="little")
            self._up_masks = tuple(
                int.from_bytes(packed[i].tobytes(), "little") for i in range(self.n)
            )
        return self._up_masks

    @property
    def down_masks(self) -> tuple[int, ...]:
        if self._down_masks is None:
            packed = np.packbits(self.leq.T, axis=1, bitorder="little")
            self._down_masks = tuple(
                int.from_bytes(packed[i].tobytes(), "little") for i in range(self.n)
            )
        return self._down_masks

    # plain-list table views, faster than numpy scalar indexing in hot loops

    @property
    def meet_l(self):
        if self._meet_l is None:
            self._meet_l = self.meet.tolist()
        return self._meet_l

    @property
    def join_l(self):
        if self._join_l is None:
            self._join_l = self.join.tolist()
        return self._join_l

    @property
    def imp_l(self):
        if self._imp_l is None:
            self._imp_l = self.imp.tolist()
        return self._imp_l

    def leq_(self, i: int, j: int) -> bool:
        if self.upset_masks is not None:
            return self.upset_masks[i] & ~self.upset_masks[j] == 0
        return bool(self.leq[i, j])

    def index_of_upset(self, mask: int) -> int:
        """Index of an upset mask in an Up(X)-backed carrier."""
        if self.upset_masks is None:
            raise ValueError("algebra is not upset-backed")
        k = bisect_left(self.upset_masks, mask)
        if k == len(self.upset_masks) or self.upset_masks[k] != mask:
            raise KeyError(f"mask {mask:#x} is not an upset of the base")
        return k

    def format_element(self, i: int) -> str:
        lab = self.labels[i]
        if isinstance(lab, tuple):
            return "{" + ",".join(str(x) for x in lab) + "}"
        return str(lab)


def upset_algebra(X: FinitePoset) -> FiniteHeytingAlgebra:
    """The Heyting algebra Up(X): meet is intersection, join is union,
    U => V is the greatest upset contained in (X \\ U) union V, i.e.
    {x | up(x) & U <= V}.

    Memoized in two tiers: small bases stay cached across a whole suite,
    large carriers (exponential in the base) keep only the most recent few
    to bound memory.
    """
    if X.n <= 8:
        return _upset_algebra_small(X)
    return _upset_algebra_large(X)


@lru_cache(maxsize=8192)
def _upset_algebra_small(X: FinitePoset) -> FiniteHeytingAlgebra:
    return _make_upset_algebra(X)


@lru_cache(maxsize=2)
def _upset_algebra_large(X: FinitePoset) -> FiniteHeytingAlgebra:
    return _make_upset_algebra(X)


def _make_upset_algebra(X: FinitePoset) -> FiniteHeytingAlgebra:
    masks = all_upsets(X)
    return FiniteHeytingAlgebra(
        None, None, None, None, None,
        bottom=0, top=len(masks) - 1, upset_masks=masks, base_poset=X,
    )


def verify_heyting(A: FiniteHeytingAlgebra) -> bool:
    """Check every axiom from scratch: the order axioms, that meet/join are
    actual glb/lub, bounds, residuation a&b <= c iff a <= (b=>c), and
    distributivity.  The one-element algebra passes (degenerate, flagged
    via `is_degenerate`)."""
    n = A.n
    if n == 0:
        return False
    leq = A.leq
    if not leq.diagonal().all():
        return False
    if (leq & leq.T).sum() != n:
        return False
    reach = (leq.astype(np.int32) @ leq.astype(np.int32)) > 0
    if (reach & ~leq).any():
        return False
    if not (leq[A.bottom, :].all() and leq[:, A.top].all()):
        return False
    if int(A.meet.max()) >= n or int(A.join.max()) >= n or int(A.imp.max()) >= n:
        return False
    # meet[i,j] is the greatest lower bound: below(meet) == below(i) & below(j)
    below = leq.T  # below[i] = {w | w <= i}
    if not (below[A.meet] == below[:, None, :] & below[None, :, :]).all():
        return False
    above = leq
    if not (above[A.join] == above[:, None, :] & above[None, :, :]).all():
        return False
    # residuation, as a three-index table identity
    lhs = leq[A.meet]                    # [a,b,c] = meet(a,b) <= c
    rhs = leq[:, A.imp]                  # [a,b,c] = a <= imp(b,c)
    if not (lhs == rhs).all():
        return False
    lhs_d = A.meet[:, A.join]            # [a,b,c] = a & (b | c)
    rhs_d = A.join[A.meet[:, :, None], A.meet[:, None, :]]
    if not (lhs_d == rhs_d).all():
        return False
    return True


def biconditional(A: FiniteHeytingAlgebra, a: int, b: int) -> int:
    """(a => b) & (b => a)."""
    imp = A.imp_l
    return A.meet_l[imp[a][b]][imp[b][a]]


@dataclass(frozen=True)
class HeytingHom:
    """Assignment between algebra carriers; structure preservation is a
    checkable predicate, not a construction invariant."""

    domain: FiniteHeytingAlgebra
    codomain: FiniteHeytingAlgebra
    assignment: tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != self.domain.n:
            raise ValueError("assignment must cover the whole domain")

    def __call__(self, i: int) -> int:
        return self.assignment[i]


def identity_hom(A: FiniteHeytingAlgebra) -> HeytingHom:
    return HeytingHom(A, A, tuple(range(A.n)))


def compose_homs(g: HeytingHom, f: HeytingHom) -> HeytingHom:
    if f.codomain != g.domain:
        raise DomainMismatch("compose_homs: middle algebras differ")
    return HeytingHom(f.domain, g.codomain, tuple(g.assignment[v] for v in f.assignment))


def _tables_preserved(h: HeytingHom, tables) -> bool:
    perm = np.asarray(h.assignment, dtype=np.int64)
    for ta, tb in tables:
        if not (perm[ta] == tb[perm[:, None], perm[None, :]]).all():
            return False
    return True


def _hom_via_masks(h: HeytingHom, with_imp: bool) -> bool:
    # codomain checks on raw upset masks; avoids building big tables
    A, B = h.domain, h.codomain
    masks = B.upset_masks
    base = B.base_poset
    hm = [masks[v] for v in h.assignment]
    if masks[B.bottom] != 0 or hm[A.bottom] != 0 or hm[A.top] != masks[B.top]:
        return False
    meet_a, join_a, imp_a = A.meet_l, A.join_l, A.imp_l
    for a in range(A.n):
        for b in range(A.n):
            if hm[meet_a[a][b]] != hm[a] & hm[b]:
                return False
            if hm[join_a[a][b]] != hm[a] | hm[b]:
                return False
            if with_imp and hm[imp_a[a][b]] != upset_imp_mask(base, hm[a], hm[b]):
                return False
    return True


def _prefer_masks(A, B) -> bool:
    # large upset-backed codomains without materialized tables stay that way
    return (B.upset_masks is not None and B._meet is None
            and B.n > 256 and A.n <= 512)


def is_lattice_homomorphism(h: HeytingHom) -> bool:
    A, B = h.domain, h.codomain
    if _prefer_masks(A, B):
        return _hom_via_masks(h, with_imp=False)
    if h.assignment[A.bottom] != B.bottom or h.assignment[A.top] != B.top:
        return False
    return _tables_preserved(h, [(A.meet, B.meet), (A.join, B.join)])


def is_homomorphism(h: HeytingHom) -> bool:
    """Preserves meet, join, implies, bottom and top."""
    A, B = h.domain, h.codomain
    if _prefer_masks(A, B):
        return _hom_via_masks(h, with_imp=True)
    if h.assignment[A.bottom] != B.bottom or h.assignment[A.top] != B.top:
        return False
    return _tables_preserved(
        h, [(A.meet, B.meet), (A.join, B.join), (A.imp, B.imp)]
    )


def join_irreducibles(A: FiniteHeytingAlgebra) -> list[int]:
    """Elements a != bottom with a = b|c only trivially.

    In a finite lattice these are exactly the elements with a unique lower
    cover; for Up(X) carriers they are the principal upsets.
    """
    if A.upset_masks is not None and A.base_poset is not None:
        out = [A.index_of_upset(A.base_poset.up[p]) for p in range(A.base_poset.n)]
        return sorted(out)
    out = []
    down = A.down_masks
    up = A.up_masks
    for a in range(A.n):
        if a == A.bottom:
            continue
        strictly_below = down[a] & ~(1 << a)
        covers = 0
        for m in bits_of(strictly_below):
            if strictly_below & (up[m] & ~(1 << m)) == 0:
                covers += 1
                if covers > 1:
                    break
        if covers == 1:
            out.append(a)
    return out


def _join_fold(A: FiniteHeytingAlgebra, items) -> int:
    return reduce(lambda x, y: A.join_l[x][y], items, A.bottom)


def find_isomorphism(A: FiniteHeytingAlgebra, B: FiniteHeytingAlgebra,
                     force: Sequence[tuple[int, int]] = ()):
    """Search for a Heyting isomorphism A -> B as an assignment tuple.

    Backtracks over degree-compatible bijections of join-irreducibles and
    extends by joins; `force` pins carrier-level pairs (ia, ib).  Returns
    None when no isomorphism exists.
    """
    if A.n != B.n:
        return None
    ja, jb = join_irreducibles(A), join_irreducibles(B)
    if len(ja) != len(jb):
        return None
    down_a, down_b = A.down_masks, B.down_masks
    up_a, up_b = A.up_masks, B.up_masks

    def sig(j, down, up, irr):
        irr_mask = 0
        for k in irr:
            irr_mask |= 1 << k
        return (
            bin(down[j]).count("1"),
            bin(up[j]).count("1"),
            bin(down[j] & irr_mask).count("1"),
            bin(up[j] & irr_mask).count("1"),
        )

    sig_a = {j: sig(j, down_a, up_a, ja) for j in ja}
    sig_b = {j: sig(j, down_b, up_b, jb) for j in jb}

    force = tuple(force)

    def extend(jmap: dict) -> tuple | None:
        phi = [0] * A.n
        for a in range(A.n):
            parts = [jmap[j] for j in ja if (down_a[a] >> j) & 1]
            phi[a] = _join_fold(B, parts)
        if len(set(phi)) != A.n:
            return None
        perm = np.asarray(phi, dtype=np.int64)
        if not (A.leq == B.leq[perm[:, None], perm[None, :]]).all():
            return None
        for ia, ib in force:
            if phi[ia] != ib:
                return None
        return tuple(phi)

    result = None

    def rec(k, jmap, used):
        nonlocal result
        if result is not None:
            return
        if k == len(ja):
            result = extend(jmap)
            return
        j = ja[k]
        for cand in jb:
            if cand in used or sig_a[j] != sig_b[cand]:
                continue
            ok = True
            for j2, c2 in jmap.items():
                if ((down_a[j] >> j2) & 1) != ((down_b[cand] >> c2) & 1):
                    ok = False
                    break
                if ((up_a[j] >> j2) & 1) != ((up_b[cand] >> c2) & 1):
                    ok = False
                    break
            if not ok:
                continue
            jmap[j] = cand
            used.add(cand)
            rec(k + 1, jmap, used)
            del jmap[j]
            used.discard(cand)
            if result is not None:
                return

    rec(0, {}, set())
    return result


def lattice_iso_from_generators(A: FiniteHeytingAlgebra, B: FiniteHeytingAlgebra,
                                pairs: Sequence[tuple[int, int]]):
    """The unique lattice map A -> B extending `pairs` under meet/join closure,
    verified to be an order isomorphism; None if the closure is inconsistent,
    does not exhaust the carriers, or fails the order check.

    Sound only when the pairs generate A (which holds for pushout carriers
    generated by their leg images).
    """
    if A.n != B.n:
        return None
    if A == B and all(s == d for s, d in pairs):
        return tuple(range(A.n))
    first = {}
    for s, d in pairs:
        if s in first and first[s] != d:
            return None
        first[s] = d
    src = np.array(sorted(first), dtype=np.int64)
    dst = np.array([first[s] for s in src], dtype=np.int64)
    if len(set(dst.tolist())) != len(dst):
        return None

    while True:
        ms = A.meet[np.ix_(src, src)].ravel()
        md = B.meet[np.ix_(dst, dst)].ravel()
        js = A.join[np.ix_(src, src)].ravel()
        jd = B.join[np.ix_(dst, dst)].ravel()
        all_s = np.concatenate([src, ms, js])
        all_d = np.concatenate([dst, md, jd])
        order = np.lexsort((all_d, all_s))
        all_s, all_d = all_s[order], all_d[order]
        keep = np.ones(len(all_s), dtype=bool)
        keep[1:] = (all_s[1:] != all_s[:-1]) | (all_d[1:] != all_d[:-1])
        all_s, all_d = all_s[keep], all_d[keep]
        # functional consistency: one image per source
        if len(all_s) and (all_s[1:] == all_s[:-1]).any():
            return None
        if len(all_s) == len(src):
            break
        src, dst = all_s, all_d

    if len(src) != A.n or len(set(dst.tolist())) != A.n:
        return None
    phi = np.empty(A.n, dtype=np.int64)
    phi[src] = dst
    if not (A.leq == B.leq[phi[:, None], phi[None, :]]).all():
        return None
    return tuple(int(v) for v in phi)


def product_algebra(factors: Sequence[FiniteHeytingAlgebra]) -> FiniteHeytingAlgebra:
    """Pointwise product; the empty product is the one-element algebra."""
    factors = list(factors)
    if not factors:
        one = np.zeros((1, 1), dtype=_IDX)
        return FiniteHeytingAlgebra(
            [()], np.ones((1, 1), dtype=bool), one, one, one, 0, 0
        )
    sizes = [f.n for f in factors]
    n = int(np.prod(sizes))
    if n == 0:
        raise ValueError("factor with empty carrier")
    strides = [1] * len(sizes)
    for k in range(len(sizes) - 2, -1, -1):
        strides[k] = strides[k + 1] * sizes[k + 1]
    idx = np.arange(n, dtype=np.int64)
    digits = [(idx // strides[k]) % sizes[k] for k in range(len(sizes))]

    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    imp = np.zeros((n, n), dtype=np.int64)
    leq = np.ones((n, n), dtype=bool)
    for k, f in enumerate(factors):
        dk = digits[k]
        meet += strides[k] * f.meet.astype(np.int64)[dk[:, None], dk[None, :]]
        join += strides[k] * f.join.astype(np.int64)[dk[:, None], dk[None, :]]
        imp += strides[k] * f.imp.astype(np.int64)[dk[:, None], dk[None, :]]
        leq &= f.leq[dk[:, None], dk[None, :]]
    bottom = sum(strides[k] * factors[k].bottom for k in range(len(sizes)))
    top = sum(strides[k] * factors[k].top for k in range(len(sizes)))
    labels = []
    for i in range(n):
        labels.append(tuple(factors[k].labels[digits[k][i]] for k in range(len(sizes))))
    return FiniteHeytingAlgebra(labels, leq, meet, join, imp, bottom, top)


def algebra_from_lattice_poset(P: FinitePoset) -> FiniteHeytingAlgebra:
    """Read a poset as the order of a Heyting algebra, deriving the tables.

    Raises NotALattice when some pair lacks a glb/lub or bounds are missing,
    NotDistributive when some residual max{w | w & b <= c} does not exist.
    """
    n = P.n
    if n == 0:
        raise NotALattice("empty carrier has no bounds")
    up, down = P.up, P.down
    full = P.full_mask
    bottoms = [i for i in range(n) if up[i] == full]
    tops = [i for i in range(n) if down[i] == full]
    if not bottoms or not tops:
        raise NotALattice("order lacks a bottom or a top")
    bottom, top = bottoms[0], tops[0]

    meet = np.zeros((n, n), dtype=_IDX)
    join = np.zeros((n, n), dtype=_IDX)
    for i in range(n):
        for j in range(n):
            common = down[i] & down[j]
            m = None
            for w in bits_of(common):
                if common & ~down[w] == 0:
                    m = w
                    break
            if m is None:
                raise NotALattice(
                    f"{P.labels[i]!r} and {P.labels[j]!r} have no meet"
                )
            meet[i, j] = m
            common_up = up[i] & up[j]
            jn = None
            for w in bits_of(common_up):
                if common_up & ~up[w] == 0:
                    jn = w
                    break
            if jn is None:
                raise NotALattice(
                    f"{P.labels[i]!r} and {P.labels[j]!r} have no join"
                )
            join[i, j] = jn

    meet_l = meet.tolist()
    imp = np.zeros((n, n), dtype=_IDX)
    for b in range(n):
        for c in range(n):
            cand = 0
            for w in range(n):
                if (down[c] >> meet_l[w][b]) & 1:
                    cand |= 1 << w
            m = None
            for w in bits_of(cand):
                if cand & ~down[w] == 0:
                    m = w
                    break
            if m is None:
                raise NotDistributive(
                    f"no residual for {P.labels[b]!r} => {P.labels[c]!r}"
                )
            imp[b, c] = m

    leq = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in bits_of(up[i]):
            leq[i, j] = True
    return FiniteHeytingAlgebra(P.labels, leq, meet, join, imp, bottom, top)
