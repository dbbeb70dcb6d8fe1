import itertools

import pytest
from hypothesis import given, strategies as st

from hallforge.simpcomb import (
    MonotoneMap,
    OrdObj,
    SimplicialSubset,
    aug,
    all_monotone_maps,
    fiber_blocks,
    glue_disjoint,
    hcomb_cell,
    hcomb_map,
    hcomb_object,
    simplex_spine,
)


def monotone(m, n):
    return st.lists(st.integers(0, n - 1), min_size=m, max_size=m).map(lambda v: MonotoneMap(m, n, tuple(sorted(v))))


maps = st.tuples(st.integers(0, 4), st.integers(1, 4)).flatmap(lambda mn: monotone(*mn))


def test_hcomb_fixtures():
    assert hcomb_object(0).maximal_faces() == [(0,)]
    assert hcomb_object(1) == SimplicialSubset.full(1)
    horn = hcomb_object(2)
    assert horn.maximal_faces() == [(0, 1), (1, 2)]
    assert (0, 2) not in horn.faces
    assert hcomb_map(MonotoneMap.onto_point(2)).apex == SimplicialSubset.full(2)


def test_ordinals_and_augmentation():
    assert aug(OrdObj(3)) == 4 and aug(0) == 1
    with pytest.raises(ValueError):
        OrdObj(-1)
    with pytest.raises(ValueError):
        MonotoneMap(2, 2, (1, 0))
    with pytest.raises(ValueError):
        MonotoneMap(1, 2, (2,))


@pytest.mark.parametrize("m,n", [(0, 1), (2, 2), (3, 2), (4, 3)])
def test_all_monotone_maps_counts(m, n):
    # monotone maps [m] -> [n] are multisets of size m from n values
    brute = sum(1 for v in itertools.product(range(n), repeat=m) if list(v) == sorted(v))
    assert len(list(all_monotone_maps(m, n))) == brute


@given(maps, st.data())
def test_composition_is_associative_and_unital(f, data):
    g = data.draw(monotone(f.target, data.draw(st.integers(1, 3))))
    h = data.draw(monotone(g.target, data.draw(st.integers(1, 3))))
    assert f.then(g).then(h) == f.then(g.then(h))
    assert MonotoneMap.identity(f.source).then(f) == f == f.then(MonotoneMap.identity(f.target))


@given(maps)
def test_boundaries_are_contravariant_and_bracket_the_fibers(f):
    b = f.boundaries()
    assert b[0] == 0 and b[-1] == f.source
    assert list(b) == sorted(b)
    for y in range(f.target):
        a, k = f.fiber(y)
        assert (a, a + k) == (b[y], b[y + 1])


@given(maps, st.data())
def test_boundaries_compose(f, data):
    g = data.draw(monotone(f.target, data.draw(st.integers(1, 3))))
    bf, bg = f.boundaries(), g.boundaries()
    assert f.then(g).boundaries() == tuple(bf[v] for v in bg)


@given(maps)
def test_fiber_blocks_tile_the_vertex_range(f):
    blocks = fiber_blocks(f)
    assert len(blocks) == f.target
    assert blocks[0][0] == 0 and blocks[-1][-1] == f.source
    for left, right in zip(blocks, blocks[1:]):
        assert left[-1] == right[0]


@given(maps)
def test_hcomb_map_legs_land_in_the_apex(f):
    c = hcomb_map(f)
    assert c.left_source.issubset(c.apex)
    assert c.right_source.image(c.right_vertex_map, f.source).issubset(c.apex)
    # every maximal face of the apex is a fiber block or an isolated vertex
    blocks = set(fiber_blocks(f))
    for face in c.apex.maximal_faces():
        assert face in blocks or len(face) == 1


def test_identity_correspondence_is_the_spine():
    for n in range(5):
        assert hcomb_map(MonotoneMap.identity(n)).apex == simplex_spine(n)


@given(maps, st.data())
def test_cells_have_inclusion_arrows(f, data):
    g = data.draw(monotone(f.target, data.draw(st.integers(1, 3))))
    cell = hcomb_cell([f, g])
    assert cell.shape == 2
    for a, b in cell.arrows:
        assert cell.entries[a].issubset(cell.entries[b])
    assert cell.apex == hcomb_map(f.then(g)).apex


def test_cell_rejects_bad_chains():
    with pytest.raises(ValueError):
        hcomb_cell([])
    with pytest.raises(ValueError):
        hcomb_cell([MonotoneMap.identity(2), MonotoneMap.identity(3)])


def test_disjoint_union_of_maps_and_glueing():
    f, g = MonotoneMap.onto_point(2), MonotoneMap.identity(1)
    s = f + g
    assert s.values == (0, 0, 1)
    glued = glue_disjoint([hcomb_map(f).apex, hcomb_map(g).apex])
    assert glued == hcomb_map(s).apex
    cells = glue_disjoint([hcomb_cell([f]), hcomb_cell([g])])
    assert cells.apex == hcomb_cell([s]).apex


def test_simplicial_subset_validation():
    with pytest.raises(ValueError):
        SimplicialSubset(2, frozenset({(0, 1)}))
    with pytest.raises(ValueError):
        SimplicialSubset.generated(1, [(0, 2)])
    tri = SimplicialSubset.full(2)
    assert tri.dimension() == 2 and len(tri.faces) == 7
    assert simplex_spine(3).vertices == (0, 1, 2, 3)
    assert tri.to_json()["faces"][0] == [0]
