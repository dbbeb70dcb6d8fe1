"""
The augmented simplex category and the combinatorial correspondence functor
H_comb.

An object <n> is an n-element chain {0, ..., n-1}; its augmentation has the
n + 1 vertices 0..n, vertex k being the map that sends the first k elements
to 0.  Vertex 0 is the entry point and vertex n the exit point.

Simplicial subsets of a standard simplex are stored as downward closed
families of vertex tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field


@dataclass(frozen=True, order=True)
class OrdObj:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError("an ordinal has a nonnegative number of elements")


def aug(X: OrdObj | int) -> int:
    """Number of elements of the augmentation Hom(X, {0 -> 1})."""
    n = X.n if isinstance(X, OrdObj) else X
    if n < 0:
        raise ValueError("negative ordinal")
    return n + 1


@dataclass(frozen=True)
class MonotoneMap:
    source: int
    target: int
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.source:
            raise ValueError("need one value per source element")
        if any(not 0 <= v < self.target for v in self.values):
            raise ValueError("value outside the target")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("map is not monotone")

    @classmethod
    def identity(cls, n: int) -> "MonotoneMap":
        return cls(n, n, tuple(range(n)))

    @classmethod
    def onto_point(cls, n: int) -> "MonotoneMap":
        return cls(n, 1, (0,) * n)

    def then(self, g: "MonotoneMap") -> "MonotoneMap":
        """``g`` after ``self``."""
        if g.source != self.target:
            raise ValueError("maps are not composable")
        return MonotoneMap(self.source, g.target, tuple(g.values[v] for v in self.values))

    def fiber(self, y: int) -> tuple[int, int]:
        """(a, k): the fiber over y is {a, ..., a+k-1}."""
        a = sum(1 for v in self.values if v < y)
        k = sum(1 for v in self.values if v == y)
        return a, k

    def boundaries(self) -> tuple[int, ...]:
        """b_v = #{x : f(x) < v} for v = 0..target; the augmentation map aug(target) -> aug(source)."""
        return tuple(sum(1 for x in self.values if x < v) for v in range(self.target + 1))

    def is_onto(self) -> bool:
        return set(self.values) == set(range(self.target))

    def __add__(self, other: "MonotoneMap") -> "MonotoneMap":
        """Disjoint union (ordinal sum) in the augmented simplex category."""
        return MonotoneMap(
            self.source + other.source,
            self.target + other.target,
            self.values + tuple(v + self.target for v in other.values),
        )


def all_monotone_maps(m: int, n: int):
    for vals in itertools.combinations_with_replacement(range(n), m):
        yield MonotoneMap(m, n, vals)


# ---------- simplicial subsets


def _close(faces) -> frozenset:
    out = set()
    for f in faces:
        f = tuple(sorted(set(f)))
        for r in range(1, len(f) + 1):
            out.update(itertools.combinations(f, r))
    return frozenset(out)


@dataclass(frozen=True)
class SimplicialSubset:
    """A downward closed family of nonempty vertex sets inside Delta^ambient_n."""

    ambient_n: int
    faces: frozenset

    def __post_init__(self):
        faces = frozenset(tuple(sorted(f)) for f in self.faces)
        object.__setattr__(self, "faces", faces)
        for f in faces:
            if not f or len(set(f)) != len(f):
                raise ValueError(f"bad face {f}")
            if any(not 0 <= v <= self.ambient_n for v in f):
                raise ValueError(f"face {f} leaves Delta^{self.ambient_n}")
            for r in range(1, len(f)):
                for sub in itertools.combinations(f, r):
                    if sub not in faces:
                        raise ValueError(f"not downward closed: {sub} missing below {f}")

    @classmethod
    def generated(cls, ambient_n: int, faces) -> "SimplicialSubset":
        return cls(ambient_n, _close(faces))

    @classmethod
    def full(cls, n: int) -> "SimplicialSubset":
        return cls.generated(n, [tuple(range(n + 1))])

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(f[0] for f in self.faces if len(f) == 1))

    def maximal_faces(self) -> list[tuple[int, ...]]:
        fs = sorted(self.faces, key=lambda f: (-len(f), f))
        out = []
        for f in fs:
            if not any(set(f) < set(g) for g in out):
                out.append(f)
        return sorted(out)

    def dimension(self) -> int:
        return max((len(f) - 1 for f in self.faces), default=-1)

    def issubset(self, other: "SimplicialSubset") -> bool:
        return self.ambient_n == other.ambient_n and self.faces <= other.faces

    def union(self, other: "SimplicialSubset") -> "SimplicialSubset":
        if self.ambient_n != other.ambient_n:
            raise ValueError("different ambient simplices")
        return SimplicialSubset(self.ambient_n, self.faces | other.faces)

    def image(self, vertex_map, ambient_n: int) -> "SimplicialSubset":
        """Image under a monotone vertex map into Delta^ambient_n."""
        return SimplicialSubset.generated(ambient_n, [tuple(vertex_map[v] for v in f) for f in self.faces])

    def shifted(self, by: int, ambient_n: int) -> "SimplicialSubset":
        return SimplicialSubset(ambient_n, frozenset(tuple(v + by for v in f) for f in self.faces))

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient_n,
            "faces": [list(f) for f in sorted(self.faces, key=lambda f: (len(f), f))],
        }


def simplex_spine(n: int) -> SimplicialSubset:
    return SimplicialSubset.generated(n, [(0,)] + [(i - 1, i) for i in range(1, n + 1)])


def hcomb_object(n: int | OrdObj) -> SimplicialSubset:
    """H_comb(<n>): the spine of Delta^n (consecutive edges {i-1, i})."""
    n = n.n if isinstance(n, OrdObj) else n
    if n < 0:
        raise ValueError("negative ordinal")
    return simplex_spine(n)


def fiber_blocks(f: MonotoneMap) -> list[tuple[int, ...]]:
    """Vertex blocks {a, ..., a+k} of the fibers; an empty fiber gives the single vertex {a}."""
    blocks = []
    for y in range(f.target):
        a, k = f.fiber(y)
        blocks.append(tuple(range(a, a + k + 1)))
    return blocks


@dataclass(frozen=True)
class HcombCorrespondence:
    """H_comb(<m>) -> H_comb(f) <- H_comb(<n>).

    ``left`` is the inclusion of the spine of Delta^m (the identity on
    vertices); ``right`` sends vertex v of Delta^n to b_v.
    """

    apex: SimplicialSubset
    left_source: SimplicialSubset
    right_source: SimplicialSubset
    right_vertex_map: tuple[int, ...]

    @property
    def left_vertex_map(self) -> tuple[int, ...]:
        return tuple(range(self.apex.ambient_n + 1))


def hcomb_map(f: MonotoneMap) -> HcombCorrespondence:
    m = f.source
    blocks = fiber_blocks(f)
    faces = list(blocks) + [(v,) for v in range(m + 1)]
    apex = SimplicialSubset.generated(m, faces)
    left = hcomb_object(m)
    right = hcomb_object(f.target)
    bmap = f.boundaries()
    if not left.issubset(apex) or not right.image(bmap, m).issubset(apex):
        raise AssertionError("legs do not land in the apex")
    return HcombCorrespondence(apex, left, right, bmap)


# ---------- cells


@dataclass
class CorrGrid:
    """A triangular grid of simplicial subsets for a chain X_0 -> ... -> X_k.

    ``local[(i, j)]`` (i <= j) is H_comb of the composite X_i -> X_j inside
    Delta^{|X_i|}; ``vertex_maps[i]`` sends the vertices of Delta^{|X_i|} to
    Delta^{|X_0|}; ``entries[(i, j)]`` is the image of ``local[(i, j)]`` in
    Delta^{|X_0|}.  Arrows (i, j) -> (i, j+1) and (i+1, j) -> (i, j) are
    inclusions of entries.
    """

    shape: int
    sizes: tuple[int, ...]
    local: dict
    vertex_maps: tuple
    entries: dict = field(default_factory=dict)
    arrows: list = field(default_factory=list)

    def __post_init__(self):
        N = self.sizes[0]
        if not self.entries:
            self.entries = {
                pos: s.image(self.vertex_maps[pos[0]], N) for pos, s in self.local.items()
            }
        if not self.arrows:
            k = self.shape
            for i in range(k + 1):
                for j in range(i, k + 1):
                    if j < k:
                        self.arrows.append(((i, j), (i, j + 1)))
                    if i < j:
                        self.arrows.append(((i + 1, j), (i, j)))
        for a, b in self.arrows:
            if not self.entries[a].issubset(self.entries[b]):
                raise AssertionError(f"arrow {a} -> {b} is not an inclusion")

    @property
    def apex(self) -> SimplicialSubset:
        return self.entries[(0, self.shape)]

    def to_json(self) -> dict:
        return {
            "shape": self.shape,
            "sizes": list(self.sizes),
            "ambient": self.sizes[0],
            "entries": [
                {"pos": list(pos), "local": self.local[pos].to_json(), "faces": self.entries[pos].to_json()["faces"]}
                for pos in sorted(self.entries)
            ],
            "arrows": [[list(a), list(b)] for a, b in sorted(self.arrows)],
        }


def hcomb_cell(chain) -> CorrGrid:
    chain = list(chain)
    if not chain:
        raise ValueError("a cell needs at least one map")
    for f, g in zip(chain, chain[1:]):
        if f.target != g.source:
            raise ValueError("chain is not composable")
    sizes = (chain[0].source,) + tuple(f.target for f in chain)
    k = len(chain)
    local = {}
    for i in range(k + 1):
        comp = MonotoneMap.identity(sizes[i])
        local[(i, i)] = hcomb_map(comp).apex
        for j in range(i + 1, k + 1):
            comp = comp.then(chain[j - 1])
            local[(i, j)] = hcomb_map(comp).apex
    vmaps = [tuple(range(sizes[0] + 1))]
    for f in chain:
        b = f.boundaries()
        vmaps.append(tuple(vmaps[-1][v] for v in b))
    return CorrGrid(k, sizes, local, tuple(vmaps))


def glue_disjoint(cells):
    """Wedge: the exit vertex of each piece is identified with the entry vertex of the next."""
    cells = list(cells)
    if not cells:
        raise ValueError("nothing to glue")
    if all(isinstance(c, SimplicialSubset) for c in cells):
        total = sum(c.ambient_n for c in cells)
        out, off = SimplicialSubset(total, frozenset()), 0
        for c in cells:
            out = out.union(c.shifted(off, total))
            off += c.ambient_n
        return out
    if not all(isinstance(c, CorrGrid) for c in cells):
        raise ValueError("cannot mix simplicial subsets and grids")
    shape = cells[0].shape
    if any(c.shape != shape for c in cells):
        raise ValueError("cells have different shapes")
    sizes = tuple(sum(c.sizes[i] for c in cells) for i in range(shape + 1))
    local = {pos: glue_disjoint([c.local[pos] for c in cells]) for pos in cells[0].local}
    vmaps = []
    for i in range(shape + 1):
        vm, off_src, off_tgt = [], 0, 0
        for c in cells:
            part = c.vertex_maps[i]
            start = 1 if vm else 0
            vm.extend(off_tgt + v for v in part[start:])
            off_src += c.sizes[i]
            off_tgt += c.sizes[0]
        vmaps.append(tuple(vm))
    return CorrGrid(shape, sizes, local, tuple(vmaps))
