"""
Polygonal decompositions and the 2-Segal checks for the Waldhausen groupoids.

For a decomposition P of the n-gon with vertices 0..n-1, S_P is the limit of
S over the simplicial subset of Delta^{n-1} spanned by the polygons, and
alpha_P: S_{n-1} -> S_P restricts a flag to each polygon.  The 2-Segal
condition asks every alpha_P to be an equivalence.  All certificates refer to
the action groupoids of F_p-points, one total dimension vector at a time.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .ffq import DEFAULT_CAPS
from .groupoid import Functor, PseudoPullback, groupoid_cardinality, is_equivalence
from .quiverrep import Quiver, dims_below
from .simpcomb import MonotoneMap, SimplicialSubset, hcomb_map, hcomb_object
from .waldhausen import LimitGroupoid, Waldhausen, provider


@dataclass(frozen=True, order=True)
class PolygonalDecomposition:
    n: int
    polygons: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        polys = tuple(sorted(tuple(sorted(p)) for p in self.polygons))
        object.__setattr__(self, "polygons", polys)
        n = self.n
        if n < 3:
            raise ValueError("a polygon has at least 3 vertices")
        edges = {}
        for poly in polys:
            if len(poly) < 3 or len(set(poly)) != len(poly):
                raise ValueError(f"bad polygon {poly}")
            if any(not 0 <= v < n for v in poly):
                raise ValueError(f"polygon {poly} leaves the {n}-gon")
            for a, b in zip(poly, poly[1:] + poly[:1]):
                e = (min(a, b), max(a, b))
                edges[e] = edges.get(e, 0) + 1
        boundary = {(i, i + 1) for i in range(n - 1)} | {(0, n - 1)}
        for e in boundary:
            if edges.get(e) != 1:
                raise ValueError(f"boundary edge {e} is not covered exactly once")
        for e, c in edges.items():
            if e not in boundary and c != 2:
                raise ValueError(f"chord {e} does not separate exactly two polygons")
        if sum(len(p) - 2 for p in polys) != n - 2:
            raise ValueError("polygons do not tile the n-gon")

    @property
    def chords(self) -> list[tuple[int, int]]:
        boundary = {(i, i + 1) for i in range(self.n - 1)} | {(0, self.n - 1)}
        out = set()
        for poly in self.polygons:
            for a, b in zip(poly, poly[1:] + poly[:1]):
                e = (min(a, b), max(a, b))
                if e not in boundary:
                    out.add(e)
        return sorted(out)

    def is_trivial(self) -> bool:
        return len(self.polygons) == 1

    def complex(self) -> SimplicialSubset:
        """The simplicial subset of Delta^{n-1} spanned by the polygons."""
        return SimplicialSubset.generated(self.n - 1, self.polygons)

    def __str__(self):
        return "|".join("".join(map(str, p)) if self.n <= 10 else ",".join(map(str, p)) for p in self.polygons)


def _crossing(c, d) -> bool:
    (a, b), (x, y) = c, d
    return a < x < b < y or x < a < y < b


def _split(polys, chord):
    i, j = chord
    out = []
    for poly in polys:
        if i in poly and j in poly:
            inner = tuple(v for v in poly if i <= v <= j)
            outer = tuple(v for v in poly if v <= i or v >= j)
            out.extend([inner, outer])
        else:
            out.append(poly)
    return out


def enumerate_decompositions(n: int) -> list[PolygonalDecomposition]:
    """Every polygonal decomposition of the n-gon (sets of non-crossing chords)."""
    if not 3 <= n <= 8:
        raise ValueError("n must lie between 3 and 8")
    chords = [(i, j) for i in range(n) for j in range(i + 2, n) if not (i == 0 and j == n - 1)]
    out = set()
    for r in range(len(chords) + 1):
        for cs in itertools.combinations(chords, r):
            if any(_crossing(c, d) for c, d in itertools.combinations(cs, 2)):
                continue
            polys = [tuple(range(n))]
            for c in cs:
                polys = _split(polys, c)
            out.add(PolygonalDecomposition(n, tuple(polys)))
    return sorted(out, key=lambda d: (len(d.polygons), d.polygons))


# ---------- S_P and alpha_P


def s_p(P: PolygonalDecomposition, Q: Quiver, p: int, gamma, W: Waldhausen | None = None):
    """(S_P at total gamma, alpha_P: S_{n-1}(gamma) -> S_P)."""
    W = W or provider(Q, p)
    gamma = tuple(gamma)
    S = W.level(P.n - 1, gamma)
    L = W.s_extended(P.complex(), gamma)

    def obj(o):
        return L.assemble([W.face_obj(S, f, o) for f in L.faces])

    def arr(o, g):
        return L.assemble_arr([
            (W.face_obj(S, f, o)[0], W.face_arr(S, f, o, g)) for f in L.faces
        ])

    return L, Functor(S, L, obj, arr, name=f"alpha[{P}]")


def _digest(cert) -> str:
    payload = json.dumps(
        {"classes": [repr(a) + "->" + repr(b) for a, b in cert.class_map], "stab": cert.stabilizer_orders},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class GammaVerdict:
    gamma: tuple[int, ...]
    ok: bool
    classes: int
    cardinality: Fraction
    digest: str = ""
    witness: str = ""


@dataclass
class SegalReport:
    decomposition: PolygonalDecomposition
    verdicts: list = field(default_factory=list)
    scope: str = "at F_q-points"

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def witness(self) -> str:
        bad = next((v for v in self.verdicts if not v.ok), None)
        return "" if bad is None else f"gamma={list(bad.gamma)}: {bad.witness}"

    def to_json(self) -> dict:
        return {
            "n": self.decomposition.n,
            "decomposition": [list(p) for p in self.decomposition.polygons],
            "verdict": "pass" if self.ok else "fail",
            "scope": self.scope,
            "gammas": [
                {
                    "gamma": list(v.gamma), "ok": v.ok, "classes": v.classes,
                    "cardinality": f"{v.cardinality.numerator}/{v.cardinality.denominator}",
                    "digest": v.digest, "witness": v.witness,
                }
                for v in self.verdicts
            ],
        }


def check_equivalence(F: Functor) -> tuple[bool, str, str]:
    """Cardinality filter first, then a full certificate: (ok, digest, witness)."""
    cs, ct = groupoid_cardinality(F.source), groupoid_cardinality(F.target)
    if cs != ct:
        return False, "", f"cardinalities differ: {cs} vs {ct}"
    cert = is_equivalence(F)
    return cert.ok, (_digest(cert) if cert.ok else ""), cert.witness


def check_decomposition(P: PolygonalDecomposition, Q: Quiver, p: int, gamma, W=None) -> GammaVerdict:
    S_P, alpha = s_p(P, Q, p, gamma, W)
    ok, digest, witness = check_equivalence(alpha)
    return GammaVerdict(tuple(gamma), ok, len(alpha.source.classes()), groupoid_cardinality(alpha.source), digest, witness)


def two_segal_report(Q: Quiver, p: int, n_max: int, gamma_cap, W: Waldhausen | None = None,
                     n_min: int = 3) -> list[SegalReport]:
    W = W or provider(Q, p)
    reports = []
    for n in range(n_min, n_max + 1):
        for P in enumerate_decompositions(n):
            rep = SegalReport(P)
            for gamma in dims_below(tuple(gamma_cap)):
                rep.verdicts.append(check_decomposition(P, Q, p, gamma, W))
            reports.append(rep)
    return reports


# ---------- the H_comb squares


def matching_decomposition(f: MonotoneMap) -> PolygonalDecomposition:
    """The decomposition of the (m+1)-gon obtained by inscribing the (n+1)-gon
    on the fiber boundaries of an onto map f: <m> -> <n>."""
    if not f.is_onto():
        raise ValueError("only onto maps are considered")
    m = f.source
    b = f.boundaries()
    polys = []
    if len(b) >= 3:
        polys.append(tuple(b))
    for y in range(f.target):
        a, k = f.fiber(y)
        if k + 1 >= 3:
            polys.append(tuple(range(a, a + k + 1)))
    if not polys:
        raise ValueError("the map does not determine a polygon (need m >= 2)")
    return PolygonalDecomposition(m + 1, tuple(polys))


@dataclass
class SquareVerdict:
    f: MonotoneMap
    gamma: tuple[int, ...]
    square_ok: bool
    polygon_ok: bool
    decomposition: PolygonalDecomposition
    witness: str = ""

    @property
    def agree(self) -> bool:
        return self.square_ok == self.polygon_ok


def hgeo_square(f: MonotoneMap, Q: Quiver, p: int, gamma, W: Waldhausen | None = None):
    """The comparison functor S_m(gamma) -> S(H_comb f) x_{S(spine n)} S_n(gamma).

    The square is the image under S of
        H_comb(<n>) -> H_comb(<n> -> <1>) = Delta^n
             |                  |
        H_comb(f)   -> H_comb(<m> -> <1>) = Delta^m
    """
    if not f.is_onto():
        raise ValueError("only onto maps are considered")
    W = W or provider(Q, p)
    gamma = tuple(gamma)
    m, n = f.source, f.target
    corr = hcomb_map(f)
    b = corr.right_vertex_map
    Sm = W.level(m, gamma)
    Sn = W.level(n, gamma)
    L_f = W.s_extended(corr.apex, gamma)
    L_sp = W.s_extended(hcomb_object(n), gamma)
    # spine edge v-1 -> v of Delta^n lies in the fiber block of v-1
    block_of = []
    for v in range(1, n + 1):
        block_of.append(next(k for k, fc in enumerate(L_f.faces) if b[v - 1] in fc and b[v] in fc))

    def r1_obj(x):
        comps = L_f._components(x)
        parts = []
        for v in range(1, n + 1):
            k = block_of[v - 1]
            fc = L_f.faces[k]
            key, o = comps[k]
            S = W.level(len(fc) - 1, key)
            parts.append(W.face_obj(S, (fc.index(b[v - 1]), fc.index(b[v])), o))
        return L_sp.assemble(parts)

    def r1_arr(x, mor):
        comps, ms = L_f._components(x), L_f._components(mor)
        parts = []
        for v in range(1, n + 1):
            k = block_of[v - 1]
            fc = L_f.faces[k]
            key, o = comps[k]
            S = W.level(len(fc) - 1, key)
            th = (fc.index(b[v - 1]), fc.index(b[v]))
            parts.append((W.face_obj(S, th, o)[0], W.face_arr(S, th, o, ms[k][1])))
        return L_sp.assemble_arr(parts)

    def r2_obj(y):
        return L_sp.assemble([W.face_obj(Sn, (v - 1, v), y) for v in range(1, n + 1)])

    def r2_arr(y, g):
        return L_sp.assemble_arr([
            (W.face_obj(Sn, (v - 1, v), y)[0], W.face_arr(Sn, (v - 1, v), y, g)) for v in range(1, n + 1)
        ])

    R1 = Functor(L_f, L_sp, r1_obj, r1_arr, name="res_f")
    R2 = Functor(Sn, L_sp, r2_obj, r2_arr, name="res_spine")
    P = PseudoPullback(R1, R2)

    def c_obj(o):
        x = L_f.assemble([W.face_obj(Sm, fc, o) for fc in L_f.faces])
        y = W.face_obj(Sm, b, o)[1]
        return (x, y, L_sp.identity(r2_obj(y)))

    def c_arr(o, g):
        x = L_f.assemble_arr([(W.face_obj(Sm, fc, o)[0], W.face_arr(Sm, fc, o, g)) for fc in L_f.faces])
        return (x, W.face_arr(Sm, b, o, g))

    return P, Functor(Sm, P, c_obj, c_arr, name=f"cmp[{f.values}]")


def hgeo_square_check(f: MonotoneMap, Q: Quiver, p: int, gamma_cap, W: Waldhausen | None = None) -> list[SquareVerdict]:
    """Square verdict and matching 2-Segal verdict for every gamma <= gamma_cap."""
    W = W or provider(Q, p)
    D = matching_decomposition(f)
    out = []
    for gamma in dims_below(tuple(gamma_cap)):
        _, C = hgeo_square(f, Q, p, gamma, W)
        ok, _, witness = check_equivalence(C)
        poly = check_decomposition(D, Q, p, gamma, W)
        out.append(SquareVerdict(f, tuple(gamma), ok, poly.ok, D, witness or poly.witness))
    return out


def onto_maps(m: int, n: int) -> list[MonotoneMap]:
    from .simpcomb import all_monotone_maps

    return [f for f in all_monotone_maps(m, n) if f.is_onto()]
