import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from esakia.errors import AntisymmetryViolation, DuplicateElement, UnknownElement
from esakia.poset import (
    PosetMap,
    all_upsets,
    antichain,
    bits_of,
    chain,
    compose,
    direct_image,
    identity_map,
    induced_subposet,
    inverse_image,
    is_monotone,
    is_order_isomorphism,
    is_p_morphism,
    is_strict_p_morphism,
    is_upset,
    make_poset,
    principal_downset,
    principal_upset,
)


# -- construction ------------------------------------------------------------


def test_make_poset_closure():
    P = make_poset(["a", "b"], [("a", "b")])
    assert P.up == (0b11, 0b10)  # leq = {(a,a),(b,b),(a,b)}


def test_make_poset_two_cycle_rejected():
    with pytest.raises(AntisymmetryViolation):
        make_poset(["a", "b"], [("a", "b"), ("b", "a")])


def test_make_poset_duplicate_and_unknown():
    with pytest.raises(DuplicateElement):
        make_poset(["a", "a"], [])
    with pytest.raises(UnknownElement):
        make_poset(["a"], [("a", "z")])


def test_v_poset_strict_pairs(V):
    strict = [(i, j) for i in range(3) for j in range(3)
              if i != j and V.leq(i, j)]
    assert strict == [(0, 1), (0, 2)]
    assert not V.leq(1, 2) and not V.leq(2, 1)


def test_transitive_closure_three_chain(C3):
    assert C3.leq_labels("a", "c")
    assert C3.covers == ((0, 1), (1, 2))


# -- principal up/down sets ---------------------------------------------------


def test_principal_upset_examples(C3, A2):
    assert C3.labels_of(principal_upset(C3, "b")) == ("b", "c")
    assert A2.labels_of(principal_upset(A2, "a")) == ("a",)
    assert C3.labels_of(principal_upset(C3, "c")) == ("c",)
    with pytest.raises(UnknownElement):
        principal_upset(C3, "zz")


def test_principal_downset_examples(C3, A2):
    assert C3.labels_of(principal_downset(C3, "b")) == ("a", "b")
    assert A2.labels_of(principal_downset(A2, "b")) == ("b",)
    assert C3.labels_of(principal_downset(C3, "a")) == ("a",)


def test_is_upset_examples(C2):
    assert is_upset(C2, C2.subset(["b"]))
    assert not is_upset(C2, C2.subset(["a"]))
    assert is_upset(C2, 0)


# -- upset enumeration ---------------------------------------------------------


def brute_force_upsets(P):
    return sorted(m for m in range(1 << P.n) if is_upset(P, m))


def test_all_upsets_chain_and_antichain():
    for n in range(6):
        assert len(all_upsets(chain(n))) == n + 1
        assert len(all_upsets(antichain(n))) == 2 ** n


def test_all_upsets_v_poset_against_brute_force(V):
    ups = all_upsets(V)
    assert ups == brute_force_upsets(V)
    assert len(ups) == 5
    as_labels = {V.labels_of(m) for m in ups}
    assert as_labels == {(), ("s",), ("t",), ("s", "t"), ("r", "s", "t")}


def test_all_upsets_empty_poset():
    E = make_poset([], [])
    assert all_upsets(E) == [0]


# -- images and map predicates --------------------------------------------------


def test_images_identity_and_constant(C2, Pt):
    f = identity_map(C2)
    u = C2.subset(["b"])
    assert direct_image(f, u) == u and inverse_image(f, u) == u
    g = PosetMap.from_labels(C2, Pt, {"a": "pt", "b": "pt"})
    assert Pt.labels_of(direct_image(g, C2.subset(["a"]))) == ("pt",)
    assert C2.labels_of(inverse_image(g, Pt.subset(["pt"]))) == ("a", "b")
    assert direct_image(g, 0) == 0 and inverse_image(g, 0) == 0


def test_monotone_examples(C2):
    assert is_monotone(identity_map(C2))
    swap = PosetMap.from_labels(C2, C2, {"a": "b", "b": "a"})
    assert not is_monotone(swap)
    const = PosetMap.from_labels(C2, C2, {"a": "b", "b": "b"})
    assert is_monotone(const)


def test_p_morphism_examples(C2, Pt):
    assert is_p_morphism(identity_map(C2))
    assert is_p_morphism(PosetMap.from_labels(C2, Pt, {"a": "pt", "b": "pt"}))
    down = PosetMap.from_labels(C2, C2, {"a": "a", "b": "a"})
    # b >= f(a)=a has no preimage above a
    assert is_monotone(down) and not is_p_morphism(down)


def test_strict_examples(C2, A2, Pt):
    assert is_strict_p_morphism(identity_map(C2))
    c2pt = PosetMap.from_labels(C2, Pt, {"a": "pt", "b": "pt"})
    assert is_p_morphism(c2pt) and not is_strict_p_morphism(c2pt)
    a2pt = PosetMap.from_labels(A2, Pt, {"a": "pt", "b": "pt"})
    assert is_strict_p_morphism(a2pt)


def test_map_must_be_total(C2, Pt):
    with pytest.raises(UnknownElement):
        PosetMap.from_labels(C2, Pt, {"a": "pt"})


def test_induced_subposet(C3):
    Q, members = induced_subposet(C3, C3.subset(["b", "c"]))
    assert Q.labels == ("b", "c") and Q.covers == ((0, 1),)
    assert members == [1, 2]


# -- property tests -------------------------------------------------------------


@st.composite
def posets(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    covers = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    return make_poset(list(range(n)), covers)


@st.composite
def maps(draw, max_n=5):
    P = draw(posets(max_n))
    Q = draw(posets(max_n))
    if Q.n == 0:
        Q = make_poset([0], [])
    assign = tuple(draw(st.integers(0, Q.n - 1)) for _ in range(P.n))
    return PosetMap(P, Q, assign)


@given(posets())
def test_principal_upset_properties(P):
    for x in P.labels:
        up = principal_upset(P, x)
        assert is_upset(P, up)
        assert (up >> P.index(x)) & 1
        for other in all_upsets(P):
            if (other >> P.index(x)) & 1:
                assert up & ~other == 0  # smallest upset containing x


@given(posets(max_n=5))
def test_upsets_closed_under_union_intersection(P):
    ups = set(all_upsets(P))
    assert 0 in ups and P.full_mask in ups
    for u in ups:
        for v in ups:
            assert (u | v) in ups and (u & v) in ups


@given(maps(), st.data())
def test_adjunction(f, data):
    u = data.draw(st.integers(0, f.domain.full_mask))
    v = data.draw(st.integers(0, f.codomain.full_mask))
    assert (direct_image(f, u) & ~v == 0) == (u & ~inverse_image(f, v) == 0)


@given(maps())
def test_monotone_iff_principal_upset_images(f):
    lhs = is_monotone(f)
    rhs = all(
        direct_image(f, f.domain.up[x]) & ~f.codomain.up[f.assignment[x]] == 0
        for x in range(f.domain.n)
    )
    assert lhs == rhs


@given(maps())
def test_back_condition_iff_image_covers_upset(f):
    back = all(
        f.codomain.up[f.assignment[x]] & ~direct_image(f, f.domain.up[x]) == 0
        for x in range(f.domain.n)
    )
    assert is_p_morphism(f) == (is_monotone(f) and back)


@given(maps(max_n=4))
def test_preimage_characterizations(f):
    ups_cod = all_upsets(f.codomain)
    preimages_upsets = all(is_upset(f.domain, inverse_image(f, v)) for v in ups_cod)
    assert is_monotone(f) == preimages_upsets
    if is_monotone(f):
        images_upsets = all(
            is_upset(f.codomain, direct_image(f, u)) for u in all_upsets(f.domain)
        )
        assert is_p_morphism(f) == images_upsets


def test_strict_descent_through_composition():
    # f = f' o g with f, f' strict and g monotone forces g strict
    from esakia.oracle import all_monotone_maps, all_strict_p_morphisms, posets_up_to

    checked = 0
    for X in posets_up_to(2):
        for Y1 in posets_up_to(2):
            for Y2 in posets_up_to(2):
                for fp in all_strict_p_morphisms(Y2, X):
                    for g in all_monotone_maps(Y1, Y2):
                        f = compose(fp, g)
                        if is_strict_p_morphism(f):
                            checked += 1
                            assert is_strict_p_morphism(g)
    assert checked > 50


def test_order_isomorphism_predicate(C2, A2):
    assert is_order_isomorphism(identity_map(C2))
    assert not is_order_isomorphism(PosetMap.from_labels(C2, A2, {"a": "a", "b": "b"}))
