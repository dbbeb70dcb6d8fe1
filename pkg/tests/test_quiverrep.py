import itertools
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from hallforge import quiverrep as qr
from hallforge.ffq import CapExceeded, gl_order
from hallforge.quiverrep import PRESETS, Quiver, Rep

from oracles import aut_count, invariant_subspace_tuples, isomorphic

A1, A2 = PRESETS["A1"], PRESETS["A2"]


def test_euler_form_examples():
    assert qr.euler_form(A1, (1,), (1,)) == 1
    assert qr.euler_form(A2, (1, 0), (0, 1)) == -1
    assert qr.euler_form(A2, (0, 1), (1, 0)) == 0
    assert qr.euler_form(A2, (1, 1), (1, 1)) == 1


@given(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.tuples(st.integers(0, 3), st.integers(0, 3)),
       st.tuples(st.integers(0, 3), st.integers(0, 3)))
def test_euler_form_is_bilinear(a, b, c):
    ab = qr.dim_add(a, b)
    assert qr.euler_form(A2, ab, c) == qr.euler_form(A2, a, c) + qr.euler_form(A2, b, c)
    assert qr.euler_form(A2, c, ab) == qr.euler_form(A2, c, a) + qr.euler_form(A2, c, b)


@pytest.mark.parametrize("Q,dims,p", [(A2, (1, 1), 2), (A2, (2, 1), 2), (A2, (1, 2), 3), (A2, (2, 2), 2), (A1, (3,), 2)])
def test_orbit_sizes_partition_the_representation_space(Q, dims, p):
    cat = qr.catalog(Q, dims, p)
    assert sum(c.orbit_size for c in cat.classes) == p ** qr.rep_space_dim(Q, dims)
    for c in cat.classes:
        assert c.orbit_size * c.aut_order == cat.group_order


@pytest.mark.parametrize("dims,p", [((1, 1), 2), ((2, 1), 2), ((1, 2), 2), ((1, 1), 3)])
def test_classes_against_brute_isomorphism(dims, p):
    cat = qr.catalog(A2, dims, p)
    reps = [c.rep for c in cat.classes]
    for a, b in itertools.combinations(reps, 2):
        assert not isomorphic(A2, dims, p, a.maps, b.maps)
    for c in cat.classes:
        assert c.aut_order == aut_count(A2, dims, p, c.rep.maps)
        assert qr.aut_order_bruteforce(c.rep) == c.aut_order


def test_a2_class_counts_follow_gabriel():
    # indecomposables of A2 are S1, S2, P; classes are multisets of them
    for dims, expected in [((1, 1), 2), ((2, 1), 2), ((1, 2), 2), ((2, 2), 3), ((3, 1), 2)]:
        assert len(qr.catalog(A2, dims, 3).classes) == expected


def test_classify_and_labels_are_stable():
    cat = qr.catalog(A2, (1, 1), 2)
    assert [qr.class_name(c) for c in cat.classes] == ["S1⊕S2", "P"]
    assert all(c.label.startswith("A2[1,1]:") for c in cat.classes)
    r = Rep.from_point(A2, (1, 1), 2, (1,))
    assert qr.classify(r).label == cat.classes[1].label


def test_names_and_find_class():
    assert qr.class_name(qr.find_class(A2, 2, "P")) == "P"
    assert qr.find_class(A2, 3, "S1⊕S2").dims == (1, 1)
    assert qr.class_name(qr.find_class(A1, 2, "S1⊕S1")) == "S1⊕S1"
    assert qr.class_name(qr.find_class(A2, 2, "0")) == "0"
    C = qr.find_class(A2, 2, "S1⊕P")
    assert C.dims == (2, 1)
    assert qr.find_class(A2, 2, C.label) == C
    with pytest.raises(ValueError):
        qr.find_class(A2, 2, "Q7")


def test_decomposition_of_semisimple():
    C = qr.find_class(A2, 2, "S1⊕S1⊕S2")
    assert [qr.class_name(c) for c in qr.decompose(C)] == ["S1", "S1", "S2"]
    assert not qr.is_indecomposable(C)
    assert qr.is_indecomposable(qr.find_class(A2, 2, "P"))


def _brute_hall(Z, sub_dims):
    """(sub class label, quotient class label) -> count, from raw invariant subspaces."""
    Q, dims, p = Z.quiver, Z.dims, Z.p
    counts = Counter()
    for U in invariant_subspace_tuples(Q, dims, p, Z.rep.maps, sub_dims):
        S = qr.SubRep(tuple(qr.ffq.Subspace.span(sorted(u), d, p) for u, d in zip(U, dims)))
        counts[(qr.sub_class(Z.rep, S).label, qr.quotient_class(Z.rep, S).label)] += 1
    return counts


@pytest.mark.parametrize("dims,p", [((1, 1), 2), ((2, 1), 2), ((1, 2), 3), ((2, 2), 2)])
def test_hall_counts_against_raw_subspace_enumeration(dims, p):
    for Z in qr.catalog(A2, dims, p).classes:
        full = qr.hall_counts(Z)
        for a in qr.dims_below(dims):
            brute = _brute_hall(Z, a)
            mine = {k: v for k, v in full.items() if qr.find_class(A2, p, k[0]).dims == a}
            assert mine == dict(brute)


def test_hall_numbers_from_the_definition():
    S1, S2, P = (qr.find_class(A2, 2, s) for s in ("S1", "S2", "P"))
    SS = qr.find_class(A2, 2, "S1⊕S2")
    assert qr.hall_number(S2, S1, P) == 1
    assert qr.hall_number(S1, S2, P) == 0
    assert qr.hall_number(S1, S2, SS) == 1 and qr.hall_number(S2, S1, SS) == 1
    S = qr.find_class(A1, 2, "S1")
    assert qr.hall_number(S, S, qr.find_class(A1, 2, "S1⊕S1")) == 3


@pytest.mark.parametrize("p", [2, 3])
def test_riedtmann_formula(p):
    # g^Z_{XY} |Aut X| |Aut Y| / |Aut Z| = |Ext^1(Y, X)_Z| / |Hom(Y, X)|, summed over Z:
    # sum_Z g^Z_XY |Aut X||Aut Y|/|Aut Z| = q^{-<Y, X>} for every X, Y
    from fractions import Fraction

    for a, b in [((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (1, 1)), ((1, 1), (0, 1))]:
        for X in qr.catalog(A2, a, p).classes:
            for Y in qr.catalog(A2, b, p).classes:
                total = Fraction(0)
                for Z in qr.catalog(A2, qr.dim_add(a, b), p).classes:
                    g = qr.hall_number(X, Y, Z)
                    total += Fraction(g * X.aut_order * Y.aut_order, Z.aut_order)
                assert total == Fraction(p) ** (-qr.euler_form(A2, b, a))


def test_endomorphism_dimension_matches_aut_count():
    P = qr.find_class(A2, 3, "P")
    assert len(qr.endomorphism_basis(P.rep)) == 1
    SS = qr.find_class(A2, 3, "S1⊕S2")
    assert len(qr.endomorphism_basis(SS.rep)) == 2
    assert qr.aut_order(SS.rep) == gl_order(1, 3) ** 2


def test_subquotient_coordinates():
    p = 2
    lower = ((), ())
    upper = (((1, 0),), ((1,),))
    sq = qr.Subquotient((2, 1), p, lower, upper)
    assert sq.dims == (1, 1)
    assert sq.coords(0, (1, 0)) == (1,)


def test_enumerate_flags_counts_complete_flags():
    Z = Rep.zero(A1, (3,), 2)
    flags = qr.enumerate_flags(Z, [(1,), (1,), (1,)])
    # complete flags in F_2^3: 7 lines, 3 planes through each
    assert len(flags) == 21
    assert len(qr.enumerate_flags(Z, [(1,), (2,)])) == 7
    with pytest.raises(ValueError):
        qr.enumerate_flags(Z, [(1,)])


def test_direct_sum_is_classified():
    S1 = qr.find_class(A2, 2, "S1")
    S2 = qr.find_class(A2, 2, "S2")
    C = qr.classify(qr.direct_sum(S1.rep, S2.rep))
    assert qr.class_name(C) == "S1⊕S2"


def test_quiver_loading(tmp_path):
    path = tmp_path / "q.json"
    path.write_text('{"name": "K", "vertices": ["a", "b"], "arrows": [{"src": "a", "tgt": "b"}]}')
    Q = qr.load_quiver(str(path))
    assert Q.name == "K" and Q.arrows == ((0, 1),)
    assert qr.load_quiver("A2") is A2
    with pytest.raises(ValueError):
        Quiver("bad", ("1",), ((0, 0),))
    with pytest.raises(ValueError):
        Quiver.from_dict({"vertices": ["a"], "arrows": [{"src": "a", "tgt": "z"}]})


def test_caps_are_enforced():
    with pytest.raises(CapExceeded):
        qr.catalog(A2, (4, 3), 2)
    with pytest.raises(ValueError):
        qr.catalog(A2, (1,), 2)


def _exact_pairs(Q, X, Z, Y, p):
    from oracles import homomorphisms, is_injective, is_surjective, mm

    injs = [j for j in homomorphisms(Q, X.rep, Z.rep, p)
            if all(is_injective(m, d, p) for m, d in zip(j, X.dims) if d)]
    surjs = [s for s in homomorphisms(Q, Z.rep, Y.rep, p)
             if all(is_surjective(m, dz, dy, p) for m, dz, dy in zip(s, Z.dims, Y.dims) if dy)]
    count = 0
    for j in injs:
        for s in surjs:
            # pi after j vanishes; dimensions then force im j = ker pi
            if all(not any(map(any, mm(b, a, dy, dz, dx, p)))
                   for a, b, dx, dz, dy in zip(j, s, X.dims, Z.dims, Y.dims)):
                count += 1
    return count


@pytest.mark.parametrize("Q,cap", [(A1, (3,)), (A2, (2, 1)), (A2, (1, 2))])
def test_riedtmann_pair_count(Q, cap):
    p = 2
    for gamma in qr.dims_below(cap):
        if sum(gamma) > 3:
            continue
        for Z in qr.catalog(Q, gamma, p).classes:
            for a in qr.dims_below(gamma):
                b = qr.dim_sub(gamma, a)
                for X in qr.catalog(Q, a, p).classes:
                    for Y in qr.catalog(Q, b, p).classes:
                        expected = qr.hall_number(X, Y, Z) * X.aut_order * Y.aut_order
                        assert _exact_pairs(Q, X, Z, Y, p) == expected, (X.label, Z.label, Y.label)
