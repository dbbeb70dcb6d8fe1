"""
Finite groupoids presented by group actions, and the operations on them that
the Hall constructions need: cardinality, pseudo-pullbacks, equivalence
certificates and pull-push transfer of functions along correspondences.

Every groupoid here has morphisms that are "group-like" elements acting on
objects: ``act(m, x)`` is the target of the morphism ``m`` out of ``x``.
Isomorphism classes are represented by canonical objects; ``canon(x)``
returns the canonical object of the class together with a transporter
``x -> canon``.

Functors are given by an object map and a *cocycle* ``arr(x, m)``, the image
of the morphism ``m: x -> m.x``.  This is more general than a group
homomorphism between acting groups, and it is what sub- and quotient maps of
flags require.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import ffq


# ---------- finite groups


class FiniteGroup:
    """A finite group given by its elements, product, inverse and identity.

    ``generators`` (defaulting to all elements) are used for orbit searches.
    """

    def __init__(self, elements, mul, identity, inv=None, generators=None, name="G"):
        self.elements = tuple(elements)
        self.mul = mul
        self.identity = identity
        self._inv = inv
        self.generators = tuple(generators) if generators is not None else self.elements
        self.name = name
        self._inv_cache = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    def inv(self, g):
        if g not in self._inv_cache:
            if self._inv is not None:
                self._inv_cache[g] = self._inv(g)
            else:
                self._inv_cache[g] = next(h for h in self.elements if self.mul(g, h) == self.identity)
        return self._inv_cache[g]

    @classmethod
    def from_table(cls, elements, table, name="G") -> "FiniteGroup":
        """Group from a multiplication table ``table[i][j] = index of e_i e_j``."""
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        mul = lambda a, b: elements[table[index[a]][index[b]]]
        ident = next(e for e in elements if all(mul(e, x) == x for x in elements))
        return cls(elements, mul, ident, name=name)

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls((0,), lambda a, b: 0, 0, inv=lambda a: 0, generators=(), name="1")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls(
            range(n), lambda a, b: (a + b) % n, 0, inv=lambda a: (-a) % n,
            generators=(1,) if n > 1 else (), name=f"Z/{n}",
        )

    @classmethod
    def gl_product(cls, dims, p: int) -> "FiniteGroup":
        """prod_i GL(dims[i], F_p); elements are tuples of matrices."""
        dims = tuple(dims)
        ident = tuple(ffq.identity(d) for d in dims)
        elems = tuple(itertools.product(*(ffq.gl_elements(d, p) for d in dims)))
        gens = []
        for i, d in enumerate(dims):
            for g in ffq.gl_generators(d, p):
                gens.append(tuple(g if j == i else ffq.identity(e) for j, e in enumerate(dims)))
        return cls(
            elems,
            lambda a, b: tuple(ffq.mat_mul(x, y, d, p) for x, y, d in zip(a, b, dims)),
            ident,
            inv=lambda a: tuple(ffq.mat_inv(x, p) for x in a),
            generators=gens,
            name=f"GL{list(dims)}(F{p})",
        )


# ---------- groupoids


class FiniteGroupoid:
    """Abstract finite groupoid; subclasses implement the primitive methods."""

    name = "X"

    # primitives
    def objects(self):
        raise NotImplementedError

    def classes(self) -> list:
        raise NotImplementedError

    def canon(self, x):
        raise NotImplementedError

    def aut_rep(self, r) -> list:
        """Automorphisms of a canonical object, sorted."""
        raise NotImplementedError

    def act(self, m, x):
        raise NotImplementedError

    def compose(self, m2, m1):
        """``m2`` after ``m1``."""
        raise NotImplementedError

    def inverse(self, m):
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    # derived
    def aut(self, x) -> list:
        r, t = self.canon(x)
        auts = self.aut_rep(r)
        if r == x:
            return auts
        ti = self.inverse(t)
        return sorted(self.compose(ti, self.compose(s, t)) for s in auts)

    def aut_order(self, x) -> int:
        return len(self.aut_rep(self.canon(x)[0]))

    def hom(self, x, y) -> list:
        """All morphisms x -> y."""
        rx, tx = self.canon(x)
        ry, ty = self.canon(y)
        if rx != ry:
            return []
        tyi = self.inverse(ty)
        return sorted(self.compose(tyi, self.compose(s, tx)) for s in self.aut_rep(rx))

    def isomorphic(self, x, y) -> bool:
        return self.canon(x)[0] == self.canon(y)[0]

    def class_count(self) -> int:
        return len(self.classes())

    def cardinality(self) -> Fraction:
        return groupoid_cardinality(self)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class ActionGroupoid(FiniteGroupoid):
    """The action groupoid S // G of a finite group acting on a finite set.

    ``action(g, x)`` must be a left action.  Orbits are found by breadth-first
    search under the group generators starting from the objects in sorted
    order, so each orbit's canonical object is its minimum.
    """

    def __init__(self, objects, group: FiniteGroup, action, name="X", verify=True):
        self._objects = sorted(set(objects))
        self.group = group
        self._action = action
        self.name = name
        self._canon: dict = {}
        self._reps: list = []
        self._orbit_size: dict = {}
        self._stab: dict = {}
        self._build()
        if verify:
            self.verify()

    def _build(self):
        G, act = self.group, self._action
        gens = [(s, G.inv(s)) for s in G.generators]
        for seed in self._objects:
            if seed in self._canon:
                continue
            self._canon[seed] = (seed, G.identity)
            frontier, size = [seed], 1
            while frontier:
                nxt = []
                for x in frontier:
                    tx = self._canon[x][1]
                    for s, si in gens:
                        y = act(s, x)
                        if y not in self._canon:
                            # t_y : y -> seed is t_x after s^{-1}
                            self._canon[y] = (seed, G.mul(tx, si))
                            nxt.append(y)
                            size += 1
                frontier = nxt
            self._reps.append(seed)
            self._orbit_size[seed] = size
        if len(self._canon) != len(self._objects):
            raise ValueError("the action does not preserve the object set")

    def verify(self):
        """Check the identity law everywhere and compatibility on generator pairs."""
        G, act = self.group, self._action
        for x in self._objects:
            if act(G.identity, x) != x:
                raise ValueError(f"identity does not act trivially on {x!r}")
        for g, h in itertools.product(G.generators, repeat=2):
            gh = G.mul(g, h)
            for x in self._objects:
                if act(g, act(h, x)) != act(gh, x):
                    raise ValueError("action is not compatible with the group product")

    def objects(self):
        return list(self._objects)

    def classes(self):
        return list(self._reps)

    def canon(self, x):
        try:
            return self._canon[x]
        except KeyError:
            raise KeyError(f"{x!r} is not an object of {self.name}") from None

    def aut_rep(self, r):
        if r not in self._stab:
            self._stab[r] = sorted(g for g in self.group.elements if self._action(g, r) == r)
            assert len(self._stab[r]) * self._orbit_size[r] == self.group.order
        return self._stab[r]

    def aut_order(self, x):
        return self.group.order // self._orbit_size[self.canon(x)[0]]

    def orbit_size(self, x) -> int:
        return self._orbit_size[self.canon(x)[0]]

    def act(self, m, x):
        return self._action(m, x)

    def compose(self, m2, m1):
        return self.group.mul(m2, m1)

    def inverse(self, m):
        return self.group.inv(m)

    def identity(self, x):
        return self.group.identity


def PointGroupoid(group: FiniteGroup | None = None, obj=0, name="pt") -> ActionGroupoid:
    """A single object with automorphism group ``group`` (trivial by default)."""
    group = group or FiniteGroup.trivial()
    return ActionGroupoid([obj], group, lambda g, x: x, name=name)


class DisjointUnion(FiniteGroupoid):
    """Coproduct of groupoids indexed by sortable keys; objects are (key, x)."""

    def __init__(self, parts: dict, name="X"):
        self.parts = dict(sorted(parts.items()))
        self.name = name

    def objects(self):
        return [(k, x) for k, X in self.parts.items() for x in X.objects()]

    def classes(self):
        return [(k, r) for k, X in self.parts.items() for r in X.classes()]

    def canon(self, obj):
        k, x = obj
        r, t = self.parts[k].canon(x)
        return (k, r), (k, t)

    def aut_rep(self, obj):
        k, r = obj
        return [(k, m) for m in self.parts[k].aut_rep(r)]

    def aut_order(self, obj):
        return self.parts[obj[0]].aut_order(obj[1])

    def act(self, m, obj):
        if m[0] != obj[0]:
            raise ValueError("morphism and object lie in different components")
        return (obj[0], self.parts[obj[0]].act(m[1], obj[1]))

    def compose(self, m2, m1):
        if m2[0] != m1[0]:
            raise ValueError("cannot compose across components")
        return (m1[0], self.parts[m1[0]].compose(m2[1], m1[1]))

    def inverse(self, m):
        return (m[0], self.parts[m[0]].inverse(m[1]))

    def identity(self, obj):
        return (obj[0], self.parts[obj[0]].identity(obj[1]))


class ProductGroupoid(FiniteGroupoid):
    """Finite product; objects and morphisms are tuples."""

    def __init__(self, *factors, name=None):
        self.factors = tuple(factors)
        self.name = name or " x ".join(f.name for f in factors)

    def objects(self):
        return list(itertools.product(*(f.objects() for f in self.factors)))

    def classes(self):
        return list(itertools.product(*(f.classes() for f in self.factors)))

    def canon(self, obj):
        pairs = [f.canon(x) for f, x in zip(self.factors, obj)]
        return tuple(r for r, _ in pairs), tuple(t for _, t in pairs)

    def aut_rep(self, obj):
        return list(itertools.product(*(f.aut_rep(x) for f, x in zip(self.factors, obj))))

    def aut_order(self, obj):
        n = 1
        for f, x in zip(self.factors, obj):
            n *= f.aut_order(x)
        return n

    def act(self, m, obj):
        return tuple(f.act(a, x) for f, a, x in zip(self.factors, m, obj))

    def compose(self, m2, m1):
        return tuple(f.compose(a, b) for f, a, b in zip(self.factors, m2, m1))

    def inverse(self, m):
        return tuple(f.inverse(a) for f, a in zip(self.factors, m))

    def identity(self, obj):
        return tuple(f.identity(x) for f, x in zip(self.factors, obj))


class FullSubgroupoid(FiniteGroupoid):
    """Full subgroupoid on the objects satisfying an isomorphism-invariant predicate."""

    def __init__(self, ambient: FiniteGroupoid, predicate, name=None):
        self.ambient = ambient
        self.predicate = predicate
        self.name = name or f"{ambient.name}|sub"

    def objects(self):
        return [x for x in self.ambient.objects() if self.predicate(x)]

    @cached_property
    def _classes(self):
        return [r for r in self.ambient.classes() if self.predicate(r)]

    def classes(self):
        return list(self._classes)

    def canon(self, x):
        if not self.predicate(x):
            raise KeyError(f"{x!r} is not an object of {self.name}")
        return self.ambient.canon(x)

    def aut_rep(self, r):
        return self.ambient.aut_rep(r)

    def aut_order(self, x):
        return self.ambient.aut_order(x)

    def act(self, m, x):
        return self.ambient.act(m, x)

    def compose(self, m2, m1):
        return self.ambient.compose(m2, m1)

    def inverse(self, m):
        return self.ambient.inverse(m)

    def identity(self, x):
        return self.ambient.identity(x)


# ---------- functors


class Functor:
    """A functor given by ``obj(x)`` and the cocycle ``arr(x, m)``.

    ``arr(x, m)`` is the image of the morphism ``m: x -> act(m, x)``; the
    cocycle law ``arr(x, m2 m1) = arr(m1 x, m2) arr(x, m1)`` is what makes it
    a functor.
    """

    def __init__(self, source: FiniteGroupoid, target: FiniteGroupoid, obj, arr, name="F"):
        self.source, self.target = source, target
        self._obj, self._arr = obj, arr
        self.name = name

    def obj(self, x):
        return self._obj(x)

    def arr(self, x, m):
        return self._arr(x, m)

    def check(self, objects=None, morphisms_per_object=None) -> None:
        """Verify source/target compatibility and the cocycle law on a sample."""
        S, T = self.source, self.target
        objs = objects if objects is not None else S.classes()
        for x in objs:
            auts = S.aut(x)
            if morphisms_per_object is not None:
                auts = auts[:morphisms_per_object]
            fx = self.obj(x)
            for m in auts:
                fm = self.arr(x, m)
                if T.act(fm, fx) != self.obj(S.act(m, x)):
                    raise ValueError(f"{self.name}: arr(x, m) does not end at F(m.x)")
            for m1, m2 in itertools.product(auts[:4], repeat=2):
                lhs = self.arr(x, S.compose(m2, m1))
                rhs = T.compose(self.arr(S.act(m1, x), m2), self.arr(x, m1))
                if lhs != rhs:
                    raise ValueError(f"{self.name}: cocycle law fails")

    def __repr__(self):
        return f"<Functor {self.name}: {self.source.name} -> {self.target.name}>"


def GroupoidFunctor(source: ActionGroupoid, target: ActionGroupoid, object_map, group_map, name="F") -> Functor:
    """Functor between action groupoids from an equivariant map and a group homomorphism."""
    F = Functor(source, target, object_map, lambda x, g: group_map(g), name=name)
    G, H = source.group, target.group
    for g, h in itertools.product(G.generators, repeat=2):
        if group_map(G.mul(g, h)) != H.mul(group_map(g), group_map(h)):
            raise ValueError("group_map is not multiplicative")
    for x in source.objects():
        for g in G.generators:
            if object_map(source.act(g, x)) != target.act(group_map(g), object_map(x)):
                raise ValueError("object_map is not equivariant")
    return F


def identity_functor(X: FiniteGroupoid) -> Functor:
    return Functor(X, X, lambda x: x, lambda x, m: m, name=f"id_{X.name}")


def compose_functors(G: Functor, F: Functor) -> Functor:
    """``G`` after ``F``."""
    if F.target is not G.source:
        raise ValueError("functors are not composable")
    return Functor(
        F.source, G.target,
        lambda x: G.obj(F.obj(x)),
        lambda x, m: G.arr(F.obj(x), F.arr(x, m)),
        name=f"{G.name}.{F.name}",
    )


def projection(P: ProductGroupoid, i: int) -> Functor:
    return Functor(P, P.factors[i], lambda x: x[i], lambda x, m: m[i], name=f"pr{i}")


def class_inclusion(B: FiniteGroupoid, b) -> Functor:
    """The functor from the trivial point groupoid picking out the object ``b``."""
    pt = PointGroupoid(name=f"pt[{b!r}]")
    return Functor(pt, B, lambda x: b, lambda x, m: B.identity(b), name="incl")


# ---------- pseudo-pullbacks


class PseudoPullback(FiniteGroupoid):
    """Objects (x, y, k) with k: F(x) -> G(y) in Z; morphisms are pairs (g, h)
    acting by k |-> G(h) k F(g)^{-1}.

    Classes are computed skeletally: the canonical object of a class has
    canonical x and y and the smallest comparison arrow k in its double coset
    under Aut(x) x Aut(y).
    """

    def __init__(self, F: Functor, G: Functor, name=None):
        if F.target is not G.target:
            raise ValueError("pseudo-pullback needs functors with a common target")
        self.F, self.G = F, G
        self.X, self.Y, self.Z = F.source, G.source, F.target
        self.name = name or f"{self.X.name} x_{self.Z.name} {self.Y.name}"
        self._dc_cache: dict = {}
        self._img_cache: dict = {}
        self._aut_cache: dict = {}
        # optional isomorphism-invariant filter on objects (pruning during limit assembly)
        self.keep = None

    def objects(self):
        out = []
        for x in self.X.objects():
            fx = self.F.obj(x)
            for y in self.Y.objects():
                for k in self.Z.hom(fx, self.G.obj(y)):
                    out.append((x, y, k))
        if self.keep is not None:
            out = [o for o in out if self.keep(o)]
        return out

    def act(self, m, obj):
        g, h = m
        x, y, k = obj
        Z = self.Z
        k2 = Z.compose(self.G.arr(y, h), Z.compose(k, Z.inverse(self.F.arr(x, g))))
        return (self.X.act(g, x), self.Y.act(h, y), k2)

    def compose(self, m2, m1):
        return (self.X.compose(m2[0], m1[0]), self.Y.compose(m2[1], m1[1]))

    def inverse(self, m):
        return (self.X.inverse(m[0]), self.Y.inverse(m[1]))

    def identity(self, obj):
        return (self.X.identity(obj[0]), self.Y.identity(obj[1]))

    def _images(self, which, r):
        """Dedup map: image automorphism in Z -> one preimage, for a canonical r."""
        key = (which, r)
        if key not in self._img_cache:
            S, Fun = (self.X, self.F) if which == 0 else (self.Y, self.G)
            imgs: dict = {}
            for g in S.aut_rep(r):
                imgs.setdefault(Fun.arr(r, g), g)
            self._img_cache[key] = sorted(imgs.items())
        return self._img_cache[key]

    def _partition(self, rx, ry) -> dict:
        """Split Hom_Z(F rx, G ry) into Aut(rx) x Aut(ry) double cosets.

        Maps every comparison arrow k to (minimum of its double coset, g, h)
        where (g, h) carries k to that minimum.
        """
        key = (rx, ry)
        part = self._dc_cache.get(key)
        if part is not None:
            return part
        X, Y, Z = self.X, self.Y, self.Z
        part = {}
        H1 = [(Z.inverse(fi), g) for fi, g in self._images(0, rx)]
        H2 = self._images(1, ry)
        for k in Z.hom(self.F.obj(rx), self.G.obj(ry)):
            if k in part:
                continue
            orbit = {}
            for hi, h in H2:
                hk = Z.compose(hi, k)
                for fi_inv, g in H1:
                    orbit.setdefault(Z.compose(hk, fi_inv), (g, h))
            m = min(orbit)
            gm, hm = orbit[m]
            for c, (gc, hc) in orbit.items():
                part[c] = (m, X.compose(gm, X.inverse(gc)), Y.compose(hm, Y.inverse(hc)))
        self._dc_cache[key] = part
        return part

    def canon(self, obj):
        x, y, k = obj
        rx, tx = self.X.canon(x)
        ry, ty = self.Y.canon(y)
        Z = self.Z
        k1 = Z.compose(self.G.arr(y, ty), Z.compose(k, Z.inverse(self.F.arr(x, tx))))
        best, g, h = self._partition(rx, ry)[k1]
        return (rx, ry, best), (self.X.compose(g, tx), self.Y.compose(h, ty))

    @cached_property
    def _classes(self):
        Z = self.Z
        out = set()
        by_zclass = {}
        for ry in self.Y.classes():
            by_zclass.setdefault(Z.canon(self.G.obj(ry))[0], []).append(ry)
        for rx in self.X.classes():
            rz = Z.canon(self.F.obj(rx))[0]
            for ry in by_zclass.get(rz, []):
                out.update((rx, ry, m) for m, _, _ in self._partition(rx, ry).values())
        if self.keep is not None:
            out = {r for r in out if self.keep(r)}
        return sorted(out)

    def classes(self):
        return list(self._classes)

    def aut_rep(self, r):
        if r not in self._aut_cache:
            rx, ry, k = r
            Z = self.Z
            by_image = defaultdict(list)
            for h in self.Y.aut_rep(ry):
                by_image[self.G.arr(ry, h)].append(h)
            ki = Z.inverse(k)
            out = []
            for g in self.X.aut_rep(rx):
                want = Z.compose(k, Z.compose(self.F.arr(rx, g), ki))
                out.extend((g, h) for h in by_image.get(want, ()))
            self._aut_cache[r] = sorted(out)
        return self._aut_cache[r]


def pseudo_pullback(F: Functor, G: Functor):
    """The pseudo-pullback together with its two projections."""
    P = PseudoPullback(F, G)
    p1 = Functor(P, P.X, lambda o: o[0], lambda o, m: m[0], name="p1")
    p2 = Functor(P, P.Y, lambda o: o[1], lambda o, m: m[1], name="p2")
    return P, p1, p2


def groupoid_cardinality(X: FiniteGroupoid) -> Fraction:
    """Sum over isomorphism classes of 1/|Aut|."""
    return sum((Fraction(1, X.aut_order(r)) for r in X.classes()), Fraction(0))


# ---------- equivalences


@dataclass
class EquivalenceCertificate:
    ok: bool
    class_map: list = field(default_factory=list)  # (source class, target class)
    stabilizer_orders: list = field(default_factory=list)  # (|Aut x|, |Aut F x|)
    witness: str = ""
    scope: str = "at F_q-points"

    def __bool__(self):
        return self.ok


def is_equivalence(F: Functor, check_hom: bool = True) -> EquivalenceCertificate:
    """Bijection on classes plus an isomorphism Aut(x) -> Aut(F x) for every class.

    The induced map on automorphism groups is tested for injectivity between
    groups of equal order (hence bijectivity); with ``check_hom`` the
    homomorphism law is also checked on all pairs when the group is small.
    """
    S, T = F.source, F.target
    cert = EquivalenceCertificate(ok=False)
    hit = {}
    for x in S.classes():
        fx = F.obj(x)
        try:
            r, t = T.canon(fx)
        except KeyError:
            cert.witness = f"F({x!r}) is not an object of the target"
            return cert
        if r in hit:
            cert.witness = f"classes {hit[r]!r} and {x!r} have isomorphic images"
            return cert
        hit[r] = x
        cert.class_map.append((x, r))
        auts = S.aut_rep(x)
        n_src, n_tgt = len(auts), T.aut_order(r)
        cert.stabilizer_orders.append((n_src, n_tgt))
        if n_src != n_tgt:
            cert.witness = f"automorphism orders differ at {x!r}: {n_src} vs {n_tgt}"
            return cert
        ti = T.inverse(t)
        image = {}
        for g in auts:
            im = T.compose(t, T.compose(F.arr(x, g), ti))
            if im in image:
                cert.witness = f"automorphism map is not injective at {x!r}"
                return cert
            image[im] = g
        if check_hom and n_src <= 64:
            conj = {g: im for im, g in image.items()}
            for a, b in itertools.product(auts, repeat=2):
                if conj[S.compose(a, b)] != T.compose(conj[a], conj[b]):
                    cert.witness = f"automorphism map is not a homomorphism at {x!r}"
                    return cert
    missing = [r for r in T.classes() if r not in hit]
    if missing:
        cert.witness = f"{len(missing)} target classes are not hit, e.g. {missing[0]!r}"
        return cert
    cert.ok = True
    return cert


# ---------- functions and transfer


class FnSpace:
    """A finitely supported rational function on the classes of a groupoid."""

    def __init__(self, base: FiniteGroupoid, values=None):
        self.base = base
        vals = defaultdict(Fraction)
        for x, v in (values or {}).items():
            vals[base.canon(x)[0]] += Fraction(v)
        self.values = {x: v for x, v in sorted(vals.items()) if v}

    def __call__(self, x) -> Fraction:
        return self.values.get(self.base.canon(x)[0], Fraction(0))

    def __eq__(self, other):
        return isinstance(other, FnSpace) and self.base is other.base and self.values == other.values

    def __repr__(self):
        return f"FnSpace({self.values!r})"

    @classmethod
    def delta(cls, base: FiniteGroupoid, x) -> "FnSpace":
        return cls(base, {x: 1})


@dataclass
class Correspondence:
    """A <- C -> B given by the two legs out of the apex C."""

    left: Functor
    right: Functor

    def __post_init__(self):
        if self.left.source is not self.right.source:
            raise ValueError("correspondence legs must share their apex")

    @property
    def apex(self):
        return self.left.source


def identity_correspondence(X: FiniteGroupoid) -> Correspondence:
    return Correspondence(identity_functor(X), identity_functor(X))


def compose_correspondences(c2: Correspondence, c1: Correspondence) -> Correspondence:
    """``c2`` after ``c1``: A <- C1 x_B C2 -> D."""
    P, p1, p2 = pseudo_pullback(c1.right, c2.left)
    return Correspondence(compose_functors(c1.left, p1), compose_functors(c2.right, p2))


def homotopy_fiber(F: Functor, b):
    """Pseudo-pullback of F against the inclusion of the object b."""
    return PseudoPullback(F, class_inclusion(F.target, b))


def transfer_apply(c: Correspondence, f: FnSpace, method: str = "fibers") -> FnSpace:
    """Pull back along the left leg, push forward along the right leg.

    The pushforward sums over the classes of the homotopy fiber, each weighted
    by the inverse order of its automorphism group.  ``method="orbits"`` uses
    the equivalent closed form |Aut b| / |Aut c| per apex class c over b.
    """
    A, C, B = c.left.target, c.apex, c.right.target
    if f.base is not A:
        raise ValueError("function is not defined on the source of the correspondence")
    pulled = {rc: f(c.left.obj(rc)) for rc in C.classes()}
    out = defaultdict(Fraction)
    if method == "orbits":
        for rc, v in pulled.items():
            if v:
                rb = B.canon(c.right.obj(rc))[0]
                out[rb] += v * Fraction(B.aut_order(rb), C.aut_order(rc))
    elif method == "fibers":
        hit = {B.canon(c.right.obj(rc))[0] for rc, v in pulled.items() if v}
        for rb in sorted(hit):
            fib = homotopy_fiber(c.right, rb)
            for r in fib.classes():
                v = pulled[r[0]]
                if v:
                    out[rb] += v / fib.aut_order(r)
    else:
        raise ValueError(f"unknown method {method!r}")
    return FnSpace(B, out)


# ---------- serialization


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    if isinstance(x, ffq.Subspace):
        return _jsonable(x.basis)
    if isinstance(x, (int, str)) or x is None:
        return x
    return repr(x)


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def groupoid_to_json(X: FiniteGroupoid, with_group: bool = True) -> dict:
    """Objects, classes with automorphism orders and the cardinality.

    For an action groupoid with ``with_group`` the group elements are listed
    as permutations of the object indices (the action table).
    """
    objs = X.objects()
    index = {o: i for i, o in enumerate(objs)}
    data = {
        "name": X.name,
        "objects": [_jsonable(o) for o in objs],
        "classes": [
            {"object": index.get(r), "aut_order": X.aut_order(r)} for r in X.classes()
        ],
        "cardinality": fraction_str(groupoid_cardinality(X)),
    }
    if with_group and isinstance(X, ActionGroupoid):
        data["group"] = [[index[X.act(g, o)] for o in objs] for g in X.group.elements]
    return data
