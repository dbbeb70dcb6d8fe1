"""
Quivers and their representations over F_p.

A representation of dimension vector ``dims`` is a tuple of matrices, one per
arrow ``h``, of shape ``dims[t(h)] x dims[s(h)]``.  The set E of all such
tuples carries the action of G = prod GL(dims[i]) by
``g . x_h = g_{t(h)} x_h g_{s(h)}^{-1}``; isomorphism classes are the G-orbits.

Internally a representation is flattened to a *point*: the row-major entries
of all arrow matrices concatenated in arrow order.  Points are compared
lexicographically and the smallest point of an orbit is its canonical form.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import prod
from pathlib import Path

from . import ffq
from .ffq import DEFAULT_CAPS, Caps, FqMatrix, Rows, Subspace


@dataclass(frozen=True)
class Quiver:
    name: str
    vertices: tuple[str, ...]
    arrows: tuple[tuple[int, int], ...]  # (source index, target index)
    # display names for indecomposables that are unique in their dimension vector
    aliases: tuple[tuple[tuple[int, ...], str], ...] = ()

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        for s, t in self.arrows:
            if not (0 <= s < len(self.vertices) and 0 <= t < len(self.vertices)):
                raise ValueError(f"arrow ({s}, {t}) refers to a missing vertex")
            if s == t:
                raise ValueError("loop arrows are not allowed")

    @property
    def n(self) -> int:
        return len(self.vertices)

    @classmethod
    def from_dict(cls, data: dict, name: str = "Q") -> "Quiver":
        vertices = tuple(str(v) for v in data["vertices"])
        index = {v: i for i, v in enumerate(vertices)}
        try:
            arrows = tuple((index[str(a["src"])], index[str(a["tgt"])]) for a in data.get("arrows", []))
        except KeyError as exc:
            raise ValueError(f"arrow endpoint {exc} is not a vertex") from None
        return cls(str(data.get("name", name)), vertices, arrows)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"src": self.vertices[s], "tgt": self.vertices[t]} for s, t in self.arrows],
        }

    def zero_dims(self) -> tuple[int, ...]:
        return (0,) * self.n

    def simple_dims(self, i: int) -> tuple[int, ...]:
        return tuple(int(j == i) for j in range(self.n))


PRESETS = {
    "A1": Quiver("A1", ("1",), ()),
    "A2": Quiver("A2", ("1", "2"), ((0, 1),), aliases=(((1, 1), "P"),)),
    "A3": Quiver("A3", ("1", "2", "3"), ((0, 1), (1, 2))),
}


def load_quiver(source: str) -> Quiver:
    """A preset name (A1, A2, A3) or the path of a quiver JSON file."""
    if source in PRESETS:
        return PRESETS[source]
    path = Path(source)
    if not path.exists():
        raise ValueError(f"unknown quiver preset or file: {source}")
    return Quiver.from_dict(json.loads(path.read_text()), name=path.stem)


# ---------- dimension vectors (plain tuples)


def dim_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def dim_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def dim_le(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def dims_below(cap) -> list[tuple[int, ...]]:
    """All dimension vectors componentwise <= cap, in lexicographic order."""
    return list(itertools.product(*(range(c + 1) for c in cap)))


def _check_dims(Q: Quiver, a) -> tuple[int, ...]:
    a = tuple(int(x) for x in a)
    if len(a) != Q.n:
        raise ValueError(f"dimension vector {a} does not match the {Q.n} vertices of {Q.name}")
    if any(x < 0 for x in a):
        raise ValueError("dimension vectors are nonnegative")
    return a


def euler_form(Q: Quiver, a, b) -> int:
    """<a, b> = sum_i a_i b_i - sum_h a_{s(h)} b_{t(h)}."""
    a, b = _check_dims(Q, a), _check_dims(Q, b)
    return sum(x * y for x, y in zip(a, b)) - sum(a[s] * b[t] for s, t in Q.arrows)


def group_order(dims, p: int) -> int:
    return prod(ffq.gl_order(d, p) for d in dims)


def group_dim(dims) -> int:
    return sum(d * d for d in dims)


def rep_space_dim(Q: Quiver, dims) -> int:
    return sum(dims[s] * dims[t] for s, t in Q.arrows)


# ---------- representations


@dataclass(frozen=True)
class Rep:
    quiver: Quiver
    dims: tuple[int, ...]
    p: int
    maps: tuple[Rows, ...]

    def __post_init__(self):
        for (s, t), m in zip(self.quiver.arrows, self.maps, strict=True):
            if len(m) != self.dims[t] or any(len(r) != self.dims[s] for r in m):
                raise ValueError("arrow matrix shape does not match the dimension vector")

    @classmethod
    def from_point(cls, Q: Quiver, dims, p: int, point) -> "Rep":
        return cls(Q, tuple(dims), p, unflatten(Q, dims, point))

    @classmethod
    def zero(cls, Q: Quiver, dims, p: int) -> "Rep":
        return cls(Q, tuple(dims), p, tuple(ffq.zeros(dims[t], dims[s]) for s, t in Q.arrows))

    @cached_property
    def point(self) -> tuple[int, ...]:
        return tuple(x for m in self.maps for r in m for x in r)

    def matrix(self, h: int) -> FqMatrix:
        s, t = self.quiver.arrows[h]
        return FqMatrix(self.dims[t], self.dims[s], self.p, self.maps[h])


def unflatten(Q: Quiver, dims, point) -> tuple[Rows, ...]:
    out, k = [], 0
    for s, t in Q.arrows:
        r, c = dims[t], dims[s]
        out.append(tuple(tuple(point[k + i * c:k + (i + 1) * c]) for i in range(r)))
        k += r * c
    return tuple(out)


def act_maps(Q: Quiver, dims, p: int, g, maps):
    """g . x with g a tuple of invertible matrices (and their inverses) per vertex."""
    mats, invs = g
    return tuple(
        ffq.mat_mul(ffq.mat_mul(mats[t], m, dims[s], p), invs[s], dims[s], p)
        for (s, t), m in zip(Q.arrows, maps)
    )


@dataclass(frozen=True)
class RepClass:
    rep: Rep
    aut_order: int
    orbit_size: int
    label: str

    @property
    def dims(self) -> tuple[int, ...]:
        return self.rep.dims

    @property
    def quiver(self) -> Quiver:
        return self.rep.quiver

    @property
    def p(self) -> int:
        return self.rep.p

    def __repr__(self):
        return f"RepClass({self.label})"


class Catalog:
    """Isomorphism classes of representations of one dimension vector.

    Orbits are found by breadth-first search under generators of G, starting
    from each unvisited point of E in lexicographic order, so the seed of every
    orbit is its lexicographically minimal element.
    """

    def __init__(self, Q: Quiver, dims, p: int):
        self.quiver, self.dims, self.p = Q, tuple(dims), p
        ffq.check_prime(p)
        n_entries = rep_space_dim(Q, self.dims)
        self.group_order = group_order(self.dims, p)
        gens = []
        for i, d in enumerate(self.dims):
            for g in ffq.gl_generators(d, p):
                gi = ffq.mat_inv(g, p)
                for m in (g, gi):
                    mats = tuple(m if j == i else ffq.identity(e) for j, e in enumerate(self.dims))
                    invs = tuple(ffq.mat_inv(x, p) for x in mats)
                    gens.append((mats, invs))
        self._gens = gens
        self.class_of_point: dict[tuple, int] = {}
        seeds, sizes = [], []
        for point in itertools.product(range(p), repeat=n_entries):
            if point in self.class_of_point:
                continue
            idx = len(seeds)
            self.class_of_point[point] = idx
            frontier, size = [point], 1
            while frontier:
                nxt = []
                for pt in frontier:
                    maps = unflatten(Q, self.dims, pt)
                    for g in gens:
                        img = tuple(x for m in act_maps(Q, self.dims, p, g, maps) for r in m for x in r)
                        if img not in self.class_of_point:
                            self.class_of_point[img] = idx
                            nxt.append(img)
                            size += 1
                frontier = nxt
            seeds.append(point)
            sizes.append(size)
        dim_tag = ",".join(map(str, self.dims))
        self.classes = [
            RepClass(
                Rep.from_point(Q, self.dims, p, seed),
                self.group_order // size,
                size,
                f"{Q.name}[{dim_tag}]:{bytes(seed).hex() or '-'}",
            )
            for seed, size in zip(seeds, sizes)
        ]
        self.by_label = {c.label: c for c in self.classes}

    def classify_point(self, point) -> RepClass:
        return self.classes[self.class_of_point[tuple(point)]]

    def classify(self, rep: Rep) -> RepClass:
        return self.classify_point(rep.point)


@lru_cache(maxsize=None)
def _catalog(Q: Quiver, dims, p: int) -> Catalog:
    return Catalog(Q, dims, p)


def catalog(Q: Quiver, dims, p: int, caps: Caps = DEFAULT_CAPS) -> Catalog:
    dims = _check_dims(Q, dims)
    caps.check(sum(dims), p, f"representations of {Q.name} at {dims}", p ** rep_space_dim(Q, dims))
    return _catalog(Q, dims, p)


def enumerate_rep_classes(Q: Quiver, a, p: int, caps: Caps = DEFAULT_CAPS) -> list[RepClass]:
    return list(catalog(Q, a, p, caps).classes)


def classify(rep: Rep) -> RepClass:
    return catalog(rep.quiver, rep.dims, rep.p).classify(rep)


def aut_order(M: Rep) -> int:
    """|Aut(M)|, from orbit-stabilizer on the class catalog."""
    return classify(M).aut_order


def endomorphism_basis(M: Rep) -> list[tuple[Rows, ...]]:
    """Basis of End(M): tuples (phi_i) with phi_t x_h = x_h phi_s for every arrow."""
    Q, dims, p = M.quiver, M.dims, M.p
    offsets, k = [], 0
    for d in dims:
        offsets.append(k)
        k += d * d
    nvars = k
    eqs = []
    for (s, t), x in zip(Q.arrows, M.maps):
        for r in range(dims[t]):
            for c in range(dims[s]):
                row = [0] * nvars
                # (phi_t x)[r][c] = sum_j phi_t[r][j] x[j][c]
                for j in range(dims[t]):
                    row[offsets[t] + r * dims[t] + j] += x[j][c]
                # (x phi_s)[r][c] = sum_j x[r][j] phi_s[j][c]
                for j in range(dims[s]):
                    row[offsets[s] + j * dims[s] + c] -= x[r][j]
                eqs.append(tuple(v % p for v in row))
    basis = ffq.nullspace(tuple(eqs), nvars, p)
    out = []
    for v in basis:
        out.append(tuple(
            tuple(tuple(v[offsets[i] + r * d + c] for c in range(d)) for r in range(d))
            for i, d in enumerate(dims)
        ))
    return out


def aut_order_bruteforce(M: Rep) -> int:
    """|Aut(M)| by enumerating End(M) and keeping the invertible elements."""
    basis = endomorphism_basis(M)
    p, dims = M.p, M.dims
    count = 0
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        ok = True
        for i, d in enumerate(dims):
            m = tuple(
                tuple(sum(a * b[i][r][c] for a, b in zip(coeffs, basis)) % p for c in range(d))
                for r in range(d)
            )
            if ffq.rank_rows(m, p) != d:
                ok = False
                break
        count += ok
    return count


# ---------- subrepresentations and subquotients


@dataclass(frozen=True, order=True)
class SubRep:
    spaces: tuple[Subspace, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.spaces)

    @property
    def bases(self) -> tuple[Rows, ...]:
        return tuple(s.basis for s in self.spaces)


def is_invariant(Q: Quiver, maps, bases, p: int) -> bool:
    for (s, t), x in zip(Q.arrows, maps):
        tb = bases[t]
        tp = ffq.pivots(tb)
        for u in bases[s]:
            if any(ffq.reduce_mod(ffq.mat_vec(x, u, p), tb, tp, p)):
                return False
    return True


def invariant_bases(Q: Quiver, dims, p: int, maps, a) -> list[tuple[Rows, ...]]:
    """Raw echelon bases of all x-invariant subspace tuples of dimension a."""
    choices = [ffq.subspace_bases(d, k, p) for d, k in zip(dims, a)]
    return [b for b in itertools.product(*choices) if is_invariant(Q, maps, b, p)]


def subreps(Z: Rep, a) -> list[SubRep]:
    a = _check_dims(Z.quiver, a)
    if not dim_le(a, Z.dims):
        return []
    return [
        SubRep(tuple(Subspace(d, Z.p, b) for d, b in zip(Z.dims, bases)))
        for bases in invariant_bases(Z.quiver, Z.dims, Z.p, Z.maps, a)
    ]


class Subquotient:
    """Coordinates on B/A for nested invariant subspace tuples A <= B.

    The basis of B_i/A_i is the set of rows of the echelon basis of B_i whose
    positions (in B-coordinates) are not pivots of A_i; a vector of B_i has
    coordinates obtained by restricting to the pivot columns of B_i, reducing
    modulo A_i and reading the non-pivot positions.  This choice composes
    strictly: a subquotient of a subquotient has literally the same
    coordinates as the direct subquotient.
    """

    def __init__(self, dims, p: int, lower, upper):
        self.p = p
        self.parts = []
        new_dims = []
        for d, a, b in zip(dims, lower, upper):
            bpiv = ffq.pivots(b)
            a_in_b = tuple(tuple(r[c] for c in bpiv) for r in a)
            apiv = ffq.pivots(a_in_b)
            keep = tuple(j for j in range(len(b)) if j not in apiv)
            self.parts.append((b, bpiv, a_in_b, apiv, keep))
            new_dims.append(len(keep))
        self.dims = tuple(new_dims)

    def basis_vectors(self, i: int) -> Rows:
        b, _, _, _, keep = self.parts[i]
        return tuple(b[j] for j in keep)

    def coords(self, i: int, v) -> tuple[int, ...]:
        _, bpiv, a_in_b, apiv, keep = self.parts[i]
        w = ffq.reduce_mod(tuple(v[c] for c in bpiv), a_in_b, apiv, self.p)
        return tuple(w[j] for j in keep)

    def induced_map(self, i_src: int, i_tgt: int, x: Rows) -> Rows:
        cols = [self.coords(i_tgt, ffq.mat_vec(x, bv, self.p)) for bv in self.basis_vectors(i_src)]
        return ffq.transpose(tuple(cols), self.dims[i_tgt]) if cols else ffq.zeros(self.dims[i_tgt], 0)

    def maps(self, Q: Quiver, maps) -> tuple[Rows, ...]:
        return tuple(self.induced_map(s, t, x) for (s, t), x in zip(Q.arrows, maps))

    def subspace(self, i: int, basis: Rows) -> Rows:
        return ffq.rref([self.coords(i, v) for v in basis], self.p)


def _full_bases(dims) -> tuple[Rows, ...]:
    return tuple(ffq.identity(d) for d in dims)


def _zero_bases(dims) -> tuple[Rows, ...]:
    return tuple(() for _ in dims)


def sub_rep(Z: Rep, U: SubRep) -> Rep:
    sq = Subquotient(Z.dims, Z.p, _zero_bases(Z.dims), U.bases)
    return Rep(Z.quiver, sq.dims, Z.p, sq.maps(Z.quiver, Z.maps))


def quotient_rep(Z: Rep, U: SubRep) -> Rep:
    sq = Subquotient(Z.dims, Z.p, U.bases, _full_bases(Z.dims))
    return Rep(Z.quiver, sq.dims, Z.p, sq.maps(Z.quiver, Z.maps))


def _require_invariant(Z: Rep, U: SubRep):
    if len(U.spaces) != Z.quiver.n or any(s.ambient_dim != d for s, d in zip(U.spaces, Z.dims)):
        raise ValueError("subspace tuple does not live in the representation")
    if not is_invariant(Z.quiver, Z.maps, U.bases, Z.p):
        raise ValueError("subspace tuple is not invariant under the arrow maps")


def quotient_class(Z: Rep, U: SubRep) -> RepClass:
    _require_invariant(Z, U)
    return classify(quotient_rep(Z, U))


def sub_class(Z: Rep, U: SubRep) -> RepClass:
    _require_invariant(Z, U)
    return classify(sub_rep(Z, U))


@lru_cache(maxsize=None)
def _hall_counts(Q: Quiver, dims, p: int, point) -> dict:
    """Counter of (sub class label, quotient class label) over all subreps of one rep."""
    maps = unflatten(Q, dims, point)
    counts: Counter = Counter()
    full = _full_bases(dims)
    zero = _zero_bases(dims)
    for a in dims_below(dims):
        for bases in invariant_bases(Q, dims, p, maps, a):
            lo = Subquotient(dims, p, zero, bases)
            hi = Subquotient(dims, p, bases, full)
            x = _catalog(Q, lo.dims, p).classify_point(
                tuple(v for m in lo.maps(Q, maps) for r in m for v in r)
            )
            y = _catalog(Q, hi.dims, p).classify_point(
                tuple(v for m in hi.maps(Q, maps) for r in m for v in r)
            )
            counts[(x.label, y.label)] += 1
    return dict(counts)


def hall_counts(Z: RepClass) -> dict:
    return _hall_counts(Z.quiver, Z.dims, Z.p, Z.rep.point)


def hall_number(X: RepClass, Y: RepClass, Z: RepClass) -> int:
    """g^Z_{XY}: subrepresentations U of Z with U ~ X and Z/U ~ Y."""
    if not (X.quiver == Y.quiver == Z.quiver and X.p == Y.p == Z.p):
        raise ValueError("classes belong to different quivers or fields")
    if dim_add(X.dims, Y.dims) != Z.dims:
        return 0
    return hall_counts(Z).get((X.label, Y.label), 0)


def enumerate_flags(Z: Rep, steps) -> list[tuple[SubRep, ...]]:
    """Chains 0 = U_0 <= U_1 <= ... <= U_k = Z of invariant subspaces whose
    successive quotients have the given dimension vectors."""
    steps = [_check_dims(Z.quiver, s) for s in steps]
    total = Z.quiver.zero_dims()
    for s in steps:
        total = dim_add(total, s)
    if total != Z.dims:
        raise ValueError(f"steps sum to {total}, not to dims {Z.dims}")
    Q, p = Z.quiver, Z.p
    levels = []
    acc = Q.zero_dims()
    for s in steps:
        acc = dim_add(acc, s)
        levels.append(invariant_bases(Q, Z.dims, p, Z.maps, acc))
    chains = [(_zero_bases(Z.dims),)]
    for options in levels:
        nxt = []
        for chain in chains:
            last = chain[-1]
            for cand in options:
                if all(Subspace(d, p, c).contains(v) for d, c, lb in zip(Z.dims, cand, last) for v in lb):
                    nxt.append(chain + (cand,))
        chains = nxt
    return [
        tuple(SubRep(tuple(Subspace(d, p, b) for d, b in zip(Z.dims, bases))) for bases in chain)
        for chain in chains
    ]


# ---------- direct sums and names


def direct_sum(M: Rep, N: Rep) -> Rep:
    if M.quiver != N.quiver or M.p != N.p:
        raise ValueError("direct sum of representations of different quivers or fields")
    dims = dim_add(M.dims, N.dims)
    maps = []
    for (s, t), a, b in zip(M.quiver.arrows, M.maps, N.maps):
        rows = [tuple(r) + (0,) * N.dims[s] for r in a]
        rows += [(0,) * M.dims[s] + tuple(r) for r in b]
        maps.append(tuple(rows))
    return Rep(M.quiver, dims, M.p, tuple(maps))


@lru_cache(maxsize=None)
def _decomposable_labels(Q: Quiver, dims, p: int) -> dict:
    """label -> (summand A, summand B) witnessing A (+) B, for decomposable classes."""
    out = {}
    for d1 in dims_below(dims):
        d2 = dim_sub(dims, d1)
        if not any(d1) or not any(d2) or d1 > d2:
            continue
        for A in _catalog(Q, d1, p).classes:
            for B in _catalog(Q, d2, p).classes:
                C = _catalog(Q, dims, p).classify(direct_sum(A.rep, B.rep))
                out.setdefault(C.label, (A, B))
    return out


def is_indecomposable(C: RepClass) -> bool:
    return any(C.dims) and C.label not in _decomposable_labels(C.quiver, C.dims, C.p)


def decompose(C: RepClass) -> tuple[RepClass, ...]:
    """Indecomposable summands (Krull-Schmidt), sorted by dimension vector and label."""
    if not any(C.dims):
        return ()
    split = _decomposable_labels(C.quiver, C.dims, C.p).get(C.label)
    if split is None:
        return (C,)
    parts = decompose(split[0]) + decompose(split[1])
    # simples in vertex order, then larger summands
    return tuple(sorted(parts, key=lambda c: (sum(c.dims), tuple(-d for d in c.dims), c.label)))


def indecomposable_name(C: RepClass) -> str:
    Q = C.quiver
    if sum(C.dims) == 1:
        return f"S{Q.vertices[C.dims.index(1)]}"
    same = [c for c in _catalog(Q, C.dims, C.p).classes if is_indecomposable(c)]
    alias = dict(Q.aliases).get(C.dims)
    if alias and len(same) == 1:
        return alias
    name = "M(" + ",".join(map(str, C.dims)) + ")"
    if len(same) > 1:
        name += f"#{[c.label for c in same].index(C.label)}"
    return name


def class_name(C: RepClass) -> str:
    """Readable name: simples S<i>, other indecomposables M(dims), sums joined by '⊕'."""
    parts = decompose(C)
    if not parts:
        return "0"
    return "⊕".join(indecomposable_name(c) for c in parts)


def find_class(Q: Quiver, p: int, selector: str, max_total: int | None = None) -> RepClass:
    """Resolve a class by label or by readable name (searching dims up to max_total)."""
    if ":" in selector and "[" in selector:
        dims = tuple(int(x) for x in selector.split("[", 1)[1].split("]", 1)[0].split(",") if x != "")
        cat = catalog(Q, dims, p)
        if selector in cat.by_label:
            return cat.by_label[selector]
        raise ValueError(f"no class with label {selector}")
    if selector == "0":
        return catalog(Q, Q.zero_dims(), p).classes[0]
    if max_total is None:
        max_total = 0
        for part in selector.split("⊕"):
            if part.startswith("M("):
                max_total += sum(int(x) for x in part[2:].split(")")[0].split(","))
            elif part in {a for _, a in Q.aliases}:
                max_total += sum(next(d for d, a in Q.aliases if a == part))
            else:
                max_total += 1
    total = max_total
    for n in range(total + 1):
        for dims in dims_below((n,) * Q.n):
            if sum(dims) != n:
                continue
            for c in catalog(Q, dims, p).classes:
                if class_name(c) == selector:
                    return c
    raise ValueError(f"no class named {selector!r} for {Q.name} over F_{p}")
