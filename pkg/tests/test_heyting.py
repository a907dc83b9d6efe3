import numpy as np
import pytest

from esakia.errors import NotALattice, NotDistributive
from esakia.heyting import (
    FiniteHeytingAlgebra,
    HeytingHom,
    algebra_from_lattice_poset,
    biconditional,
    find_isomorphism,
    identity_hom,
    is_homomorphism,
    is_lattice_homomorphism,
    join_irreducibles,
    lattice_iso_from_generators,
    product_algebra,
    upset_algebra,
    verify_heyting,
)
from esakia.oracle import posets_up_to
from esakia.poset import antichain, chain, make_poset


def test_upset_algebra_point_is_two_element_boolean(Pt):
    A = upset_algebra(Pt)
    assert A.n == 2 and A.bottom == 0 and A.top == 1
    assert verify_heyting(A)


def test_upset_algebra_c2_is_three_chain(C2):
    A = upset_algebra(C2)
    assert A.n == 3
    b = A.index_of_upset(C2.subset(["b"]))
    bot, top = A.bottom, A.top
    assert [A.labels[i] for i in (bot, b, top)] == [(), ("b",), ("a", "b")]
    # {b} => {} is {}
    assert A.imp_l[b][bot] == bot


def test_upset_algebra_a2_implication(A2):
    A = upset_algebra(A2)
    assert A.n == 4
    ia, ib = A.index_of_upset(A2.subset(["a"])), A.index_of_upset(A2.subset(["b"]))
    assert A.imp_l[ia][ib] == ib


def test_verify_heyting_on_all_small_upset_algebras():
    for X in posets_up_to(4):
        assert verify_heyting(upset_algebra(X))


def test_verify_heyting_detects_corrupted_implication(C2):
    A = upset_algebra(C2)  # the 3-chain 0 < m < 1
    bad = A.imp.copy()
    bad[1, 0] = 1  # m => 0 must be 0; residuation now fails at a=m
    B = FiniteHeytingAlgebra(A.labels, A.leq, A.meet, A.join, bad, A.bottom, A.top)
    assert not verify_heyting(B)


def test_verify_heyting_degenerate():
    E = make_poset([], [])
    A = upset_algebra(E)
    assert A.n == 1 and A.is_degenerate and verify_heyting(A)


def test_biconditional_examples(C2):
    A = upset_algebra(C2)
    for a in range(A.n):
        assert biconditional(A, a, a) == A.top
    assert biconditional(A, A.bottom, A.top) == A.bottom
    b = A.index_of_upset(C2.subset(["b"]))
    assert biconditional(A, b, A.top) == b


def test_biconditional_top_iff_equal():
    for X in posets_up_to(3):
        A = upset_algebra(X)
        for a in range(A.n):
            for b in range(A.n):
                assert (biconditional(A, a, b) == A.top) == (a == b)


def test_homomorphism_examples(A2, Pt):
    A = upset_algebra(A2)
    assert is_homomorphism(identity_hom(A))
    const_top = HeytingHom(A, A, tuple(A.top for _ in range(A.n)))
    assert not is_homomorphism(const_top)
    # inverse image of the strict collapse A2 -> Pt
    from esakia.duality import dual_of_pmorphism
    from esakia.poset import PosetMap

    f = PosetMap.from_labels(A2, Pt, {"a": "pt", "b": "pt"})
    assert is_homomorphism(dual_of_pmorphism(f))


def brute_force_join_irreducibles(A):
    out = []
    for a in range(A.n):
        if a == A.bottom:
            continue
        decomposable = any(
            A.join_l[b][c] == a
            for b in range(A.n)
            for c in range(A.n)
            if b != a and c != a
        )
        if not decomposable:
            out.append(a)
    return out


def test_join_irreducibles_examples(A2, V):
    B4 = upset_algebra(A2)
    atoms = {B4.index_of_upset(A2.subset(["a"])), B4.index_of_upset(A2.subset(["b"]))}
    assert set(join_irreducibles(B4)) == atoms

    for n in range(1, 5):
        C = upset_algebra(chain(n))
        assert len(join_irreducibles(C)) == n

    UV = upset_algebra(V)
    expected = {
        UV.index_of_upset(V.subset(["s"])),
        UV.index_of_upset(V.subset(["t"])),
        UV.index_of_upset(V.subset(["r", "s", "t"])),
    }
    assert set(join_irreducibles(UV)) == expected
    assert join_irreducibles(UV) == brute_force_join_irreducibles(UV)


def test_join_irreducibles_paths_agree():
    for X in posets_up_to(3):
        A = upset_algebra(X)
        assert join_irreducibles(A) == brute_force_join_irreducibles(A)
        # generic path on a tables-backed clone
        B = FiniteHeytingAlgebra(A.labels, A.leq, A.meet, A.join, A.imp,
                                 A.bottom, A.top)
        assert join_irreducibles(B) == join_irreducibles(A)


def test_find_isomorphism_relabeled(V):
    A = upset_algebra(V)
    perm = [(i + 1) % A.n for i in range(A.n)]  # relabel carriers
    inv = [0] * A.n
    for i, p in enumerate(perm):
        inv[p] = i
    leq = A.leq[np.ix_(inv, inv)]
    remap = np.array(perm)
    meet = remap[A.meet[np.ix_(inv, inv)]]
    join = remap[A.join[np.ix_(inv, inv)]]
    imp = remap[A.imp[np.ix_(inv, inv)]]
    B = FiniteHeytingAlgebra([A.labels[i] for i in inv], leq, meet, join, imp,
                             perm[A.bottom], perm[A.top])
    phi = find_isomorphism(A, B)
    assert phi is not None
    h = HeytingHom(A, B, phi)
    assert is_homomorphism(h)
    assert find_isomorphism(A, upset_algebra(antichain(2))) is None


def test_lattice_iso_from_generators_roundtrip(V):
    A = upset_algebra(V)
    ident = lattice_iso_from_generators(A, A, [(i, i) for i in range(A.n)])
    assert ident == tuple(range(A.n))
    # partial generating set: join-irreducibles generate a distributive lattice
    pairs = [(j, j) for j in join_irreducibles(A)] + [(A.bottom, A.bottom)]
    assert lattice_iso_from_generators(A, A, pairs) == tuple(range(A.n))
    # inconsistent seed
    assert lattice_iso_from_generators(A, A, [(A.bottom, A.top)]) is None


def test_product_algebra():
    two = upset_algebra(make_poset(["pt"], []))
    P = product_algebra([two, two])
    assert P.n == 4 and verify_heyting(P)
    one = product_algebra([])
    assert one.n == 1 and one.is_degenerate


def test_algebra_from_lattice_poset_roundtrip(C2):
    # Hasse diagram of the 3-chain read back as an algebra
    L = make_poset(["0", "m", "1"], [("0", "m"), ("m", "1")])
    A = algebra_from_lattice_poset(L)
    assert verify_heyting(A)
    assert find_isomorphism(A, upset_algebra(C2)) is not None


def test_algebra_from_lattice_poset_rejects_m3_and_n5():
    M3 = make_poset(["0", "a", "b", "c", "1"],
                    [("0", "a"), ("0", "b"), ("0", "c"),
                     ("a", "1"), ("b", "1"), ("c", "1")])
    with pytest.raises(NotDistributive):
        algebra_from_lattice_poset(M3)
    N5 = make_poset(["0", "a", "c", "b", "1"],
                    [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")])
    with pytest.raises(NotDistributive):
        algebra_from_lattice_poset(N5)
    with pytest.raises(NotALattice):
        algebra_from_lattice_poset(antichain(2))


def test_meet_equality_bound_lemma():
    # y & x == y & z forces y <= (x <=> z)
    for X in posets_up_to(3):
        A = upset_algebra(X)
        for x in range(A.n):
            for y in range(A.n):
                for z in range(A.n):
                    if A.meet_l[y][x] == A.meet_l[y][z]:
                        assert A.leq_(y, biconditional(A, x, z))


def test_lattice_homomorphism_weaker_than_heyting(C2, Pt):
    # inverse image along a monotone non-p-morphism: lattice hom only
    from esakia.duality import upset_hom_of_monotone
    from esakia.poset import PosetMap

    down = PosetMap.from_labels(C2, C2, {"a": "a", "b": "a"})
    h = upset_hom_of_monotone(down)
    assert is_lattice_homomorphism(h)
    assert not is_homomorphism(h)
