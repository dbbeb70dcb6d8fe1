"""
The truncated Waldhausen construction on representations of a quiver over F_p.

S_n(gamma) is the action groupoid of pairs (x, U) where x is a representation
on V = F_p^gamma and U is a flag 0 = U_0 <= U_1 <= ... <= U_n = V of
x-invariant subspace tuples, acted on by prod_i GL(gamma_i).  An object is
stored as ``(point, levels)`` with ``levels = (U_1, ..., U_{n-1})``, each a
tuple of echelon bases, one per vertex.

A monotone map theta: [m] -> [n] acts by passing to the subquotient
U_{theta(m)} / U_{theta(0)} with the induced flag; coordinates on
subquotients compose strictly, so the simplicial identities hold on the nose.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from . import ffq
from .ffq import DEFAULT_CAPS, Caps
from .groupoid import (
    ActionGroupoid,
    DisjointUnion,
    FiniteGroup,
    FiniteGroupoid,
    Functor,
    PseudoPullback,
    groupoid_cardinality,
)
from .quiverrep import Quiver, Subquotient, act_maps, dim_add, dim_le, dims_below, is_invariant, unflatten
from .simpcomb import MonotoneMap, SimplicialSubset


def _theta(theta) -> tuple[int, ...]:
    """Accept a tuple of values or a MonotoneMap of ordinals <m+1> -> <n+1>."""
    vals = tuple(theta.values) if isinstance(theta, MonotoneMap) else tuple(theta)
    if not vals or any(a > b for a, b in zip(vals, vals[1:])) or vals[0] < 0:
        raise ValueError(f"malformed simplicial operator {theta!r}")
    return vals


class FlagGroupoid(ActionGroupoid):
    """S_n(gamma) as an action groupoid; see the module docstring."""

    def __init__(self, Q: Quiver, p: int, n: int, gamma, drop_class: int | None = None):
        self.quiver, self.p, self.n, self.gamma = Q, p, n, tuple(gamma)
        objects = list(_flag_objects(Q, p, n, self.gamma))
        group = _group(self.gamma, p)
        super().__init__(objects, group, self._act, name=f"S{n}{list(self.gamma)}", verify=False)
        if drop_class is not None and self._reps:
            bad = self._reps[drop_class % len(self._reps)]
            keep = [o for o in self._objects if self._canon[o][0] != bad]
            self.dropped = bad
            ActionGroupoid.__init__(self, keep, group, self._act, name=self.name + "*", verify=False)

    def _act(self, g, obj):
        point, levels = obj
        Q, dims, p = self.quiver, self.gamma, self.p
        G = self.group
        maps = act_maps(Q, dims, p, (g, G.inv(g)), unflatten(Q, dims, point))
        new_point = tuple(v for m in maps for r in m for v in r)
        new_levels = tuple(
            tuple(ffq.rref([ffq.mat_vec(gi, u, p) for u in b], p) for gi, b in zip(g, lvl))
            for lvl in levels
        )
        return (new_point, new_levels)

    def level(self, obj, j: int):
        """Echelon bases of U_j."""
        if j == 0:
            return tuple(() for _ in self.gamma)
        if j == self.n:
            return tuple(ffq.identity(d) for d in self.gamma)
        return obj[1][j - 1]

    def step_dims(self, obj) -> list[tuple[int, ...]]:
        """Dimension vectors of U_j / U_{j-1} for j = 1..n."""
        dims = [tuple(len(b) for b in self.level(obj, j)) for j in range(self.n + 1)]
        return [tuple(b - a for a, b in zip(lo, hi)) for lo, hi in zip(dims, dims[1:])]


@lru_cache(maxsize=None)
def _group(gamma, p):
    return FiniteGroup.gl_product(gamma, p)


def _flag_objects(Q, p, n, gamma):
    if n == 0:
        if any(gamma):
            return
        yield ((), ())
        return
    npts = sum(gamma[s] * gamma[t] for s, t in Q.arrows)
    subspace_lists = [
        [ffq.subspace_bases(d, k, p) for k in range(d + 1)] for d in gamma
    ]
    for point in itertools.product(range(p), repeat=npts):
        maps = unflatten(Q, gamma, point)
        inv = []
        for a in dims_below(gamma):
            for bases in itertools.product(*(subspace_lists[i][k] for i, k in enumerate(a))):
                if is_invariant(Q, maps, bases, p):
                    inv.append(bases)
        inv.sort()
        below = {}
        for i, u in enumerate(inv):
            below[i] = [j for j, w in enumerate(inv) if _contained(w, u, p)]
        # weakly increasing chains of length n-1, built from the top down
        chains = [()] if n == 1 else [(i,) for i in range(len(inv))]
        for _ in range(n - 2):
            chains = [(j,) + c for c in chains for j in below[c[0]]]
        for c in chains:
            yield (point, tuple(inv[i] for i in c))


def _contained(small, big, p) -> bool:
    for s, b in zip(small, big):
        if len(s) > len(b):
            return False
        piv = ffq.pivots(b)
        if any(any(ffq.reduce_mod(v, b, piv, p)) for v in s):
            return False
    return True


class Waldhausen:
    """Provider of the groupoids S_n(gamma) and their structure maps.

    ``corrupt=(n, gamma, class_index)`` removes one isomorphism class (a whole
    orbit of flag objects) from S_n(gamma); it is the negative control for the
    2-Segal checks.
    """

    def __init__(self, Q: Quiver, p: int, caps: Caps = DEFAULT_CAPS, corrupt=None):
        ffq.check_prime(p)
        self.quiver, self.p, self.caps = Q, p, caps
        self.corrupt = None if corrupt is None else (corrupt[0], tuple(corrupt[1]), corrupt[2])
        self._levels: dict = {}
        self._unions: dict = {}
        self._sq: dict = {}

    def level(self, n: int, gamma) -> FlagGroupoid:
        gamma = tuple(gamma)
        key = (n, gamma)
        if key not in self._levels:
            if n < 0:
                raise ValueError("simplicial level must be nonnegative")
            if len(gamma) != self.quiver.n:
                raise ValueError("dimension vector does not match the quiver")
            self.caps.check(sum(gamma), self.p, f"S_{n} at {gamma}")
            drop = None
            if self.corrupt is not None and self.corrupt[:2] == key:
                drop = self.corrupt[2]
            self._levels[key] = FlagGroupoid(self.quiver, self.p, n, gamma, drop_class=drop)
        return self._levels[key]

    def union(self, n: int, cap) -> DisjointUnion:
        """The disjoint union of S_n(gamma') over gamma' <= cap, keyed by gamma'."""
        cap = tuple(cap)
        key = (n, cap)
        if key not in self._unions:
            parts = {g: self.level(n, g) for g in dims_below(cap)}
            self._unions[key] = DisjointUnion(parts, name=f"S{n}[<={list(cap)}]")
        return self._unions[key]

    # ----- structure maps

    def _subquotient(self, S: FlagGroupoid, obj, lo: int, hi: int) -> Subquotient:
        key = (S.n, S.gamma, obj, lo, hi)
        sq = self._sq.get(key)
        if sq is None:
            sq = Subquotient(S.gamma, self.p, S.level(obj, lo), S.level(obj, hi))
            if len(self._sq) > 200000:
                self._sq.clear()
            self._sq[key] = sq
        return sq

    def face_obj(self, S: FlagGroupoid, theta, obj):
        """(gamma', object of S_m(gamma')) for the operator theta applied to obj."""
        th = theta
        sq = self._subquotient(S, obj, th[0], th[-1])
        Q = self.quiver
        maps = sq.maps(Q, unflatten(Q, S.gamma, obj[0]))
        point = tuple(v for m in maps for r in m for v in r)
        levels = tuple(
            tuple(sq.subspace(i, b) for i, b in enumerate(S.level(obj, j)))
            for j in th[1:-1]
        )
        return sq.dims, (point, levels)

    def face_arr(self, S: FlagGroupoid, theta, obj, g):
        """Matrices of the map induced by g between the subquotients at obj and g.obj."""
        th = theta
        src = self._subquotient(S, obj, th[0], th[-1])
        tgt = self._subquotient(S, S.act(g, obj), th[0], th[-1])
        p = self.p
        out = []
        for i, gi in enumerate(g):
            cols = [tgt.coords(i, ffq.mat_vec(gi, b, p)) for b in src.basis_vectors(i)]
            d = src.dims[i]
            out.append(ffq.transpose(tuple(cols), d) if cols else ())
        return tuple(out)

    def simplicial_map(self, theta, n: int, gamma) -> Functor:
        """S(theta): S_n(gamma) -> union of S_m(gamma') over gamma' <= gamma."""
        th = _theta(theta)
        if th[-1] > n:
            raise ValueError(f"operator {th} does not land in [{n}]")
        S = self.level(n, gamma)
        T = self.union(len(th) - 1, gamma)
        return Functor(
            S, T,
            lambda o: self.face_obj(S, th, o),
            lambda o, g: (self.face_obj(S, th, o)[0], self.face_arr(S, th, o, g)),
            name=f"S{th}",
        )

    def union_map(self, theta, n: int, cap) -> Functor:
        """S(theta) on unions: S_n[<= cap] -> S_m[<= cap]."""
        th = _theta(theta)
        if th[-1] > n:
            raise ValueError(f"operator {th} does not land in [{n}]")
        src = self.union(n, cap)
        tgt = self.union(len(th) - 1, cap)

        def obj(o):
            return self.face_obj(src.parts[o[0]], th, o[1])

        def arr(o, m):
            S = src.parts[o[0]]
            return (self.face_obj(S, th, o[1])[0], self.face_arr(S, th, o[1], m[1]))

        return Functor(src, tgt, obj, arr, name=f"S{th}")

    def s_extended(self, K: SimplicialSubset, gamma) -> "LimitGroupoid":
        return LimitGroupoid(self, K, gamma)


# ---------- module-level conveniences


@lru_cache(maxsize=None)
def provider(Q: Quiver, p: int) -> Waldhausen:
    return Waldhausen(Q, p)


def s_level(Q: Quiver, p: int, n: int, gamma) -> FlagGroupoid:
    return provider(Q, p).level(n, gamma)


def simplicial_map(theta, src: FlagGroupoid) -> Functor:
    return provider(src.quiver, src.p).simplicial_map(theta, src.n, src.gamma)


def s_extended(K: SimplicialSubset, Q: Quiver, p: int, gamma) -> "LimitGroupoid":
    return provider(Q, p).s_extended(K, gamma)


# ---------- limits over simplicial subsets


def attach_order(K: SimplicialSubset) -> list[tuple[tuple[int, ...], tuple[int, ...] | None, int | None]]:
    """Order the maximal faces so each one meets the earlier ones in a single simplex.

    Returns (face, shared simplex, index of an earlier face containing it).
    Raises ValueError when K cannot be assembled this way.
    """
    faces = K.maximal_faces()
    if not faces:
        raise ValueError("empty simplicial subset")
    order = [(faces[0], None, None)]
    rest = faces[1:]
    seen = set(_subsets(faces[0]))
    while rest:
        best = None
        for f in rest:
            common = tuple(v for v in f if (v,) in seen)
            if not common:
                continue
            shared = {s for s in _subsets(f) if s in seen}
            if shared != set(_subsets(common)):
                continue
            host = next((i for i, (g, _, _) in enumerate(order) if set(common) <= set(g)), None)
            if host is None:
                continue
            # attach along the largest shared simplex first
            if best is None or len(common) > len(best[1]):
                best = (f, common, host)
        if best is None:
            raise ValueError("simplicial subset is not tree-like (faces cannot be attached along single simplices)")
        order.append(best)
        seen.update(_subsets(best[0]))
        rest.remove(best[0])
    return order


def _subsets(f):
    return [c for r in range(1, len(f) + 1) for c in itertools.combinations(f, r)]


def _sub_theta(small, big) -> tuple[int, ...]:
    return tuple(big.index(v) for v in small)


class LimitGroupoid(FiniteGroupoid):
    """S(K) for a tree-like simplicial subset K containing the spine, at total gamma.

    Built as an iterated pseudo-pullback of S_{dim sigma} over the maximal
    faces sigma of K, glued along the shared simplices; restricted to objects
    whose spine steps add up to gamma.
    """

    def __init__(self, W: Waldhausen, K: SimplicialSubset, gamma):
        self.W, self.K, self.gamma = W, K, tuple(gamma)
        N = K.ambient_n
        for i in range(N):
            if (i, i + 1) not in K.faces:
                raise ValueError("K must contain every edge {i, i+1} of the spine")
        self.order = attach_order(K)
        self.faces = [f for f, _, _ in self.order]
        self.name = f"S({K.maximal_faces()})[{list(self.gamma)}]"
        # spine edge -> (face index, position in face)
        self._edge_home = {}
        for i in range(N):
            k = next(k for k, f in enumerate(self.faces) if i in f and i + 1 in f)
            self._edge_home[i] = (k, self.faces[k].index(i))
        stages = []
        X = None
        for k, (f, common, host) in enumerate(self.order):
            Sf = W.union(len(f) - 1, self.gamma)
            if X is None:
                X = Sf
            else:
                theta_host = _sub_theta(common, self.faces[host])
                theta_new = _sub_theta(common, f)
                d_host = len(self.faces[host]) - 1
                left = _compose_component(X, k - 1, host, W.union_map(theta_host, d_host, self.gamma))
                right = W.union_map(theta_new, len(f) - 1, self.gamma)
                covered = k + 1
                P = PseudoPullback(left, right)
                P.keep = self._partial_ok(covered)
                X = P
            stages.append(X)
        self.stages = stages
        self.inner = X

    # partial sums of spine steps over the first `covered` faces stay below gamma
    def _partial_ok(self, covered):
        def ok(obj):
            tot = tuple(0 for _ in self.gamma)
            comps = self._components(obj, covered)
            for i, (k, pos) in self._edge_home.items():
                if k < covered:
                    key, o = comps[k]
                    S = self.W.level(len(self.faces[k]) - 1, key)
                    tot = dim_add(tot, S.step_dims(o)[pos])
            return dim_le(tot, self.gamma)
        return ok

    def _components(self, obj, count=None):
        count = len(self.faces) if count is None else count
        out = [None] * count
        for k in range(count - 1, 0, -1):
            obj, out[k] = obj[0], obj[1]
        out[0] = obj
        return out

    def components(self, obj) -> dict:
        """Maximal face -> (gamma', flag object)."""
        return dict(zip(self.faces, self._components(obj)))

    def edge_dims(self, obj) -> list[tuple[int, ...]]:
        comps = self._components(obj)
        out = []
        for i in sorted(self._edge_home):
            k, pos = self._edge_home[i]
            key, o = comps[k]
            out.append(self.W.level(len(self.faces[k]) - 1, key).step_dims(o)[pos])
        return out

    def total(self, obj) -> tuple[int, ...]:
        tot = tuple(0 for _ in self.gamma)
        for d in self.edge_dims(obj):
            tot = dim_add(tot, d)
        return tot

    def assemble(self, comps) -> tuple:
        """Nested pseudo-pullback object from literally compatible components (identity comparisons)."""
        comps = [comps[f] for f in self.faces] if isinstance(comps, dict) else list(comps)
        obj = comps[0]
        for k in range(1, len(comps)):
            Z = self.stages[k].Z
            obj = (obj, comps[k], Z.identity(self.stages[k].G.obj(comps[k])))
        return obj

    def assemble_arr(self, morphs) -> tuple:
        morphs = [morphs[f] for f in self.faces] if isinstance(morphs, dict) else list(morphs)
        m = morphs[0]
        for k in range(1, len(morphs)):
            m = (m, morphs[k])
        return m

    # delegate to the inner groupoid, keeping only total gamma
    def _in(self, obj) -> bool:
        return self.total(obj) == self.gamma

    def objects(self):
        return [o for o in self.inner.objects() if self._in(o)]

    def classes(self):
        if not hasattr(self, "_classes"):
            self._classes = [r for r in self.inner.classes() if self._in(r)]
        return list(self._classes)

    def canon(self, obj):
        return self.inner.canon(obj)

    def aut_rep(self, r):
        return self.inner.aut_rep(r)

    def aut_order(self, x):
        return self.inner.aut_order(x)

    def act(self, m, x):
        return self.inner.act(m, x)

    def compose(self, m2, m1):
        return self.inner.compose(m2, m1)

    def inverse(self, m):
        return self.inner.inverse(m)

    def identity(self, x):
        return self.inner.identity(x)


def _compose_component(X, last: int, k: int, restrict: Functor) -> Functor:
    """Functor X -> S(tau): extract component k of a nested object with `last + 1` components, then restrict."""

    def pick(obj):
        for _ in range(last - k):
            obj = obj[0]
        return obj[1] if k > 0 else obj

    def pick_m(m):
        for _ in range(last - k):
            m = m[0]
        return m[1] if k > 0 else m

    return Functor(
        X, restrict.target,
        lambda o: restrict.obj(pick(o)),
        lambda o, m: restrict.arr(pick(o), pick_m(m)),
        name=f"c{k}",
    )


def strict_limit_cardinality(W: Waldhausen, K: SimplicialSubset, gamma):
    """Groupoid cardinality of the strict limit of S over K at total gamma, by brute force.

    Objects are families of flag objects agreeing literally on shared faces;
    an automorphism is a tuple of group elements whose induced maps agree on
    shared faces.  Only feasible for tiny inputs; used as a regression oracle.
    """
    from fractions import Fraction

    order = attach_order(K)
    faces = [f for f, _, _ in order]
    unions = [W.union(len(f) - 1, gamma) for f in faces]
    restr = []
    for k, (f, common, host) in enumerate(order):
        if k == 0:
            restr.append(None)
            continue
        restr.append((
            host,
            W.union_map(_sub_theta(common, faces[host]), len(faces[host]) - 1, gamma),
            W.union_map(_sub_theta(common, f), len(f) - 1, gamma),
        ))
    families = [[o] for o in unions[0].objects()]
    for k in range(1, len(faces)):
        host, rh, rn = restr[k]
        by_img = {}
        for o in unions[k].objects():
            by_img.setdefault(rn.obj(o), []).append(o)
        families = [fam + [o] for fam in families for o in by_img.get(rh.obj(fam[host]), [])]
    lim = LimitGroupoid(W, K, gamma)
    families = [fam for fam in families if lim.total(lim.assemble(fam)) == tuple(gamma)]

    # orbits of the strict groupoid: act with tuples of group elements that stay compatible
    seen, total = set(), Fraction(0)
    for fam in families:
        key = tuple(fam)
        if key in seen:
            continue
        orbit, auts = set(), 0
        for gs in itertools.product(*(unions[k].parts[fam[k][0]].group.elements for k in range(len(faces)))):
            ok = True
            for k in range(1, len(faces)):
                host, rh, rn = restr[k]
                if rh.arr(fam[host], (fam[host][0], gs[host]))[1] != rn.arr(fam[k], (fam[k][0], gs[k]))[1]:
                    ok = False
                    break
            if not ok:
                continue
            img = tuple(unions[k].act((fam[k][0], gs[k]), fam[k]) for k in range(len(faces)))
            orbit.add(img)
            if img == key:
                auts += 1
        seen |= orbit
        total += Fraction(1, auts)
    return total


def splittings(gamma, parts: int) -> list[tuple[tuple[int, ...], ...]]:
    """Ordered decompositions gamma = gamma_1 + ... + gamma_parts into dimension vectors."""
    gamma = tuple(gamma)
    if parts == 0:
        return [()] if not any(gamma) else []
    if parts == 1:
        return [(gamma,)]
    out = []
    for first in dims_below(gamma):
        rest = tuple(g - f for g, f in zip(gamma, first))
        out.extend((first,) + tail for tail in splittings(rest, parts - 1))
    return out


def spine_comparison(n: int, Q: Quiver, p: int, gamma, W: Waldhausen | None = None) -> Functor:
    """S(spine of Delta^n) at total gamma -> disjoint union over splittings of prod_i S_1(gamma_i).

    Each spine edge {i, i+1} contributes its S_1 component; the functor reads
    them off the iterated pseudo-pullback.
    """
    from .groupoid import ProductGroupoid
    from .simpcomb import simplex_spine

    W = W or provider(Q, p)
    gamma = tuple(gamma)
    L = W.s_extended(simplex_spine(n), gamma)
    parts = {
        split: ProductGroupoid(*(W.level(1, g) for g in split), name="x".join(f"S1{list(g)}" for g in split))
        for split in splittings(gamma, n)
    }
    T = DisjointUnion(parts, name=f"prod S1 over splittings of {list(gamma)}")
    if n == 0:
        return Functor(L, T, lambda o: ((), ()), lambda o, m: ((), ()), name="spine")

    def obj(o):
        comps = L._components(o)
        return tuple(key for key, _ in comps), tuple(x for _, x in comps)

    def arr(o, m):
        comps = L._components(o)
        ms = L._components(m)
        return tuple(key for key, _ in comps), tuple(mat for _, mat in ms)

    return Functor(L, T, obj, arr, name=f"spine{n}")
