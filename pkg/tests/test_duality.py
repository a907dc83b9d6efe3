import pytest

from esakia._kernel import pure
from esakia.duality import (
    counit_iso,
    dual_of_homomorphism,
    dual_of_pmorphism,
    dual_poset,
    is_prime_filter,
    unit_iso,
)
from esakia.errors import NotAHomomorphism, NotAPMorphism, NotDistributive
from esakia.heyting import (
    FiniteHeytingAlgebra,
    HeytingHom,
    compose_homs,
    identity_hom,
    is_homomorphism,
    join_irreducibles,
    upset_algebra,
)
from esakia.oracle import all_p_morphisms, posets_up_to
from esakia.poset import (
    PosetMap,
    compose,
    identity_map,
    induced_subposet,
    is_order_isomorphism,
    is_p_morphism,
    make_poset,
)


def test_dual_of_two_element_boolean(Pt):
    B2 = upset_algebra(Pt)
    D = dual_poset(B2)
    assert D.n == 1
    assert D.labels[0] == 1 << B2.top  # the filter {top}


def test_dual_of_three_chain(C2):
    A = upset_algebra(C2)  # three-element chain
    D = dual_poset(A)
    assert D.n == 2 and D.covers == ((0, 1),)
    small, large = D.labels
    assert bin(small).count("1") == 1 and bin(large).count("1") == 2


def test_dual_of_four_element_boolean(A2):
    D = dual_poset(upset_algebra(A2))
    assert D.n == 2 and D.covers == ()


def test_dual_of_degenerate_algebra():
    A = upset_algebra(make_poset([], []))
    assert dual_poset(A).n == 0


def test_prime_filter_scan_matches_upset_scan():
    # oracle route: every upset of the lattice order, kept when it is a
    # prime filter; production route scans principal upsets only
    for X in posets_up_to(3):
        A = upset_algebra(X)
        if A.n > 64:
            continue
        brute = sorted(
            m for m in pure.upsets_of(A.up_masks, A.down_masks)
            if is_prime_filter(A, m)
        )
        assert brute == list(dual_poset(A).labels)


def test_prime_filters_biject_with_join_irreducibles():
    for X in posets_up_to(3):
        A = upset_algebra(X)
        filters = dual_poset(A).labels
        irr = join_irreducibles(A)
        assert sorted(A.up_masks[j] for j in irr) == list(filters)


def test_dual_of_pmorphism_examples(C2, Pt):
    assert dual_of_pmorphism(identity_map(C2)).assignment == (0, 1, 2)

    f = PosetMap.from_labels(C2, Pt, {"a": "pt", "b": "pt"})
    h = dual_of_pmorphism(f)
    A, B = h.domain, h.codomain
    assert h.assignment[A.bottom] == B.bottom
    assert h.assignment[A.top] == B.top
    assert is_homomorphism(h)

    # inclusion of the principal upset at b
    sub, _ = induced_subposet(C2, C2.up[C2.index("b")])
    incl = PosetMap.from_labels(sub, C2, {"b": "b"})
    hi = dual_of_pmorphism(incl)
    UA, UB = hi.domain, hi.codomain
    want = {(): (), ("b",): ("b",), ("a", "b"): ("b",)}
    got = {UA.labels[i]: UB.labels[v] for i, v in enumerate(hi.assignment)}
    assert got == want


def test_dual_of_pmorphism_rejects_non_pmorphism(C2):
    down = PosetMap.from_labels(C2, C2, {"a": "a", "b": "a"})
    with pytest.raises(NotAPMorphism):
        dual_of_pmorphism(down)


def test_dual_of_homomorphism_examples(Pt, A2):
    B2, B4 = upset_algebra(Pt), upset_algebra(A2)
    hs = [
        HeytingHom(B2, B4, a)
        for a in [(B4.bottom, B4.top)]
        if is_homomorphism(HeytingHom(B2, B4, a))
    ]
    assert len(hs) == 1  # bottom and top are forced
    g = dual_of_homomorphism(hs[0])
    assert g.domain.n == 2 and g.codomain.n == 1
    assert g.assignment == (0, 0)
    with pytest.raises(NotAHomomorphism):
        dual_of_homomorphism(HeytingHom(B4, B4, tuple(B4.top for _ in range(B4.n))))


def test_double_dual_recovers_map():
    for X in posets_up_to(2):
        uX = unit_iso(X)
        for Y in posets_up_to(2):
            uY = unit_iso(Y)
            for f in all_p_morphisms(Y, X):
                g = dual_of_homomorphism(dual_of_pmorphism(f))
                assert compose(g, uY).assignment == compose(uX, f).assignment


def test_unit_iso_examples(Pt, C2):
    assert is_order_isomorphism(unit_iso(Pt))
    u = unit_iso(C2)
    assert is_order_isomorphism(u)
    D = u.codomain
    assert D.covers == ((0, 1),)


def test_counit_iso_examples(A2):
    A = upset_algebra(A2)
    h = counit_iso(A)
    assert is_homomorphism(h)
    assert sorted(h.assignment) == list(range(A.n))


def test_counit_rejects_non_distributive():
    # a bounded non-distributive lattice with junk implication tables
    import numpy as np

    labels = ["0", "a", "b", "c", "1"]
    P = make_poset(labels, [("0", "a"), ("0", "b"), ("0", "c"),
                            ("a", "1"), ("b", "1"), ("c", "1")])
    n = 5
    leq = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            leq[i, j] = P.leq(i, j)
    meet = np.zeros((n, n), dtype=int)
    join = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(n):
            lower = [k for k in range(n) if leq[k, i] and leq[k, j]]
            meet[i, j] = max(lower, key=lambda k: leq[:, k].sum())
            upper = [k for k in range(n) if leq[i, k] and leq[j, k]]
            join[i, j] = max(upper, key=lambda k: leq[k, :].sum())
    M3 = FiniteHeytingAlgebra(labels, leq, meet, join, np.zeros((n, n), int), 0, 4)
    with pytest.raises(NotDistributive):
        counit_iso(M3)


def test_contravariant_functoriality():
    for X in posets_up_to(2):
        for Y in posets_up_to(2):
            for Z in posets_up_to(2):
                for f in all_p_morphisms(X, Y):
                    for g in all_p_morphisms(Y, Z):
                        lhs = dual_of_pmorphism(compose(g, f))
                        rhs = compose_homs(dual_of_pmorphism(f), dual_of_pmorphism(g))
                        assert lhs.assignment == rhs.assignment


def test_duality_functorial_on_homs(Pt, C2):
    A = upset_algebra(C2)
    idd = dual_of_homomorphism(identity_hom(A))
    assert idd.assignment == tuple(range(idd.domain.n))
