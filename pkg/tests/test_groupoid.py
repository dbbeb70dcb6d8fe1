from fractions import Fraction
import itertools

import pytest
from hypothesis import given, strategies as st

from hallforge.groupoid import (
    ActionGroupoid,
    Correspondence,
    DisjointUnion,
    FiniteGroup,
    FnSpace,
    Functor,
    FullSubgroupoid,
    PointGroupoid,
    ProductGroupoid,
    compose_correspondences,
    compose_functors,
    groupoid_cardinality,
    groupoid_to_json,
    homotopy_fiber,
    identity_functor,
    is_equivalence,
    pseudo_pullback,
    transfer_apply,
)


def coset_set(n, divisors):
    """A Z_n-set: one copy of Z_d for each listed d (d divides n)."""
    objs = [(i, d, k) for i, d in enumerate(divisors) for k in range(d)]
    return objs, lambda g, x: (x[0], x[1], (x[2] + g) % x[1])


def zn_groupoid(n, divisors, name="X"):
    objs, act = coset_set(n, divisors)
    return ActionGroupoid(objs, FiniteGroup.cyclic(n), act, name=name)


def to_point(X, B):
    """The canonical functor X -> pt//Z_n."""
    return Functor(X, B, lambda x: 0, lambda x, m: m, name="q")


def BZ(n):
    return PointGroupoid(FiniteGroup.cyclic(n), name="BZ")


def divisor_lists(n):
    divs = [d for d in range(1, n + 1) if n % d == 0]
    return st.lists(st.sampled_from(divs), min_size=1, max_size=3)


group_and_sets = st.sampled_from([2, 3, 4, 6]).flatmap(
    lambda n: st.tuples(st.just(n), divisor_lists(n), divisor_lists(n))
)


def test_cyclic_and_gl_groups():
    Z4 = FiniteGroup.cyclic(4)
    assert Z4.order == 4 and Z4.inv(1) == 3
    G = FiniteGroup.gl_product((2, 1), 3)
    assert G.order == 48 * 2
    assert FiniteGroup.trivial().order == 1


@given(group_and_sets)
def test_cardinality_is_objects_over_group_order(data):
    n, divs, _ = data
    X = zn_groupoid(n, divs)
    assert groupoid_cardinality(X) == Fraction(len(X.objects()), n)
    assert X.cardinality() == groupoid_cardinality(X)
    assert sum(X.orbit_size(r) for r in X.classes()) == len(X.objects())


def test_point_groupoid_cardinality():
    assert PointGroupoid(FiniteGroup.gl_product((2,), 2)).cardinality() == Fraction(1, 6)
    assert PointGroupoid().cardinality() == 1


@given(group_and_sets)
def test_pseudo_pullback_over_classifying_groupoid(data):
    # X x_{BG} Y is the action groupoid of the product set: |S||T|/|G|
    n, d1, d2 = data
    X, Y = zn_groupoid(n, d1, "X"), zn_groupoid(n, d2, "Y")
    B = BZ(n)
    P, p1, p2 = pseudo_pullback(to_point(X, B), to_point(Y, B))
    assert P.cardinality() == Fraction(len(X.objects()) * len(Y.objects()), n)


@given(group_and_sets)
def test_pseudo_pullback_of_identity_is_equivalent_to_source(data):
    n, divs, _ = data
    X = zn_groupoid(n, divs)
    P, p1, p2 = pseudo_pullback(identity_functor(X), identity_functor(X))
    assert P.cardinality() == X.cardinality()
    assert is_equivalence(p1).ok and is_equivalence(p2).ok


@given(group_and_sets)
def test_homotopy_fiber_of_quotient_map_is_the_set(data):
    n, divs, _ = data
    X = zn_groupoid(n, divs)
    fib = homotopy_fiber(to_point(X, BZ(n)), 0)
    assert fib.cardinality() == len(X.objects())


def test_products_and_unions():
    X, Y = zn_groupoid(2, [1, 2]), zn_groupoid(3, [3])
    assert ProductGroupoid(X, Y).cardinality() == X.cardinality() * Y.cardinality()
    U = DisjointUnion({"a": X, "b": Y})
    assert U.cardinality() == X.cardinality() + Y.cardinality()
    F = FullSubgroupoid(X, lambda x: x[1] == 2)
    assert F.cardinality() == 1


def test_equivalence_detects_automorphism_mismatch():
    pt, Z2 = PointGroupoid(), PointGroupoid(FiniteGroup.cyclic(2))
    F = Functor(pt, Z2, lambda x: 0, lambda x, m: 0)
    cert = is_equivalence(F)
    assert not cert.ok and "automorphism orders differ" in cert.witness


def test_equivalence_detects_missed_classes():
    X = zn_groupoid(2, [1, 1])
    Y = zn_groupoid(2, [1])
    F = Functor(Y, X, lambda x: (0, 1, 0), lambda x, m: m)
    cert = is_equivalence(F)
    assert not cert.ok and "not hit" in cert.witness


def test_equivalence_between_different_presentations():
    # Z_4 acting on Z_2 is equivalent to a point with automorphism group Z_2
    X = zn_groupoid(4, [2])
    B = PointGroupoid(FiniteGroup.cyclic(2))
    F = Functor(X, B, lambda x: 0, lambda x, m: m % 2)
    assert not is_equivalence(F).ok  # Z_4 stabilizer of a point is {0, 2}, image is trivial
    G = Functor(X, B, lambda x: 0, lambda x, m: (m // 2) % 2 if m % 2 == 0 else 0)
    cert = is_equivalence(G)
    assert cert.ok, cert.witness


def test_functor_cocycle_check():
    X = zn_groupoid(4, [4])
    bad = Functor(X, X, lambda x: x, lambda x, m: (m + 1) % 4)
    with pytest.raises(ValueError):
        bad.check()
    identity_functor(X).check()


@given(group_and_sets)
def test_transfer_methods_agree(data):
    n, d1, _ = data
    X = zn_groupoid(n, d1)
    c = Correspondence(identity_functor(X), to_point(X, BZ(n)))
    f = FnSpace(X, {x: i + 1 for i, x in enumerate(X.classes())})
    assert transfer_apply(c, f, "fibers") == transfer_apply(c, f, "orbits")


def test_transfer_of_delta_is_weighted_by_automorphisms():
    pt, Z2 = PointGroupoid(), PointGroupoid(FiniteGroup.cyclic(2))
    c = Correspondence(Functor(Z2, pt, lambda x: 0, lambda x, m: 0), Functor(Z2, pt, lambda x: 0, lambda x, m: 0))
    assert transfer_apply(c, FnSpace.delta(pt, 0)).values == {0: Fraction(1, 2)}
    with pytest.raises(ValueError):
        transfer_apply(c, FnSpace.delta(pt, 0), "magic")


@given(group_and_sets)
def test_transfer_is_functorial_under_composition(data):
    n, d1, d2 = data
    X, Y = zn_groupoid(n, d1, "X"), zn_groupoid(n, d2, "Y")
    B = PointGroupoid(FiniteGroup.cyclic(n), name="BZ")
    qX = Functor(X, B, lambda x: 0, lambda x, m: m)
    qY = Functor(Y, B, lambda x: 0, lambda x, m: m)
    c1 = Correspondence(identity_functor(X), qX)  # X <- X -> B
    c2 = Correspondence(qY, identity_functor(Y))  # B <- Y -> Y
    f = FnSpace(X, {x: i + 2 for i, x in enumerate(X.classes())})
    direct = transfer_apply(compose_correspondences(c2, c1), f)
    stepwise = transfer_apply(c2, transfer_apply(c1, f))
    assert direct.values == stepwise.values


def test_compose_functors_requires_matching_ends():
    X, Y = zn_groupoid(2, [2]), zn_groupoid(2, [2])
    with pytest.raises(ValueError):
        compose_functors(identity_functor(X), identity_functor(Y))


def test_json_export():
    data = groupoid_to_json(zn_groupoid(2, [1, 2]))
    assert data["cardinality"] == "3/2"
