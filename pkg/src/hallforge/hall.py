"""
Hall algebras of quivers over F_p with exact Laurent-polynomial coefficients.

Basis elements are isomorphism classes, addressed by catalog labels.  The
product is [X].[Y] = sum_Z g^Z_{XY} [Z] where g^Z_{XY} counts subrepresentations
of Z isomorphic to X with quotient isomorphic to Y.  Coefficients live in
Q[v, 1/v]; evaluating at a prime q means v^2 -> q.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from . import ffq
from .ffq import DEFAULT_CAPS
from .quiverrep import (
    PRESETS,
    Quiver,
    RepClass,
    catalog,
    class_name,
    dim_add,
    dim_sub,
    dims_below,
    euler_form,
    find_class,
    group_dim,
    group_order,
    hall_counts,
    invariant_bases,
    rep_space_dim,
)


# ---------- Laurent polynomials


class LaurentPoly:
    """Finitely supported map exponent -> Fraction, in the variable v."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        c = {}
        for e, x in (coeffs or {}).items():
            x = Fraction(x)
            if x:
                c[int(e)] = x
        self.c = c

    @classmethod
    def const(cls, x) -> "LaurentPoly":
        return cls({0: x})

    @classmethod
    def monomial(cls, e: int, x=1) -> "LaurentPoly":
        return cls({e: x})

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        out = dict(self.c)
        for e, x in other.c.items():
            out[e] = out.get(e, 0) + x
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -x for e, x in self.c.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentPoly) else LaurentPoly.const(-Fraction(other)))

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            other = Fraction(other)
            return LaurentPoly({e: x * other for e, x in self.c.items()})
        out: dict = defaultdict(Fraction)
        for e1, x1 in self.c.items():
            for e2, x2 in other.c.items():
                out[e1 + e2] += x1 * x2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, e: int) -> "LaurentPoly":
        """Multiply by v^e."""
        return LaurentPoly({k + e: x for k, x in self.c.items()}) if e else self

    def specialize(self, q: int) -> "LaurentPoly":
        """Reduce with v^2 = q, leaving a + b v."""
        a, b = Fraction(0), Fraction(0)
        for e, x in self.c.items():
            k, r = divmod(e, 2)
            if r:
                b += x * Fraction(q) ** k
            else:
                a += x * Fraction(q) ** k
        return LaurentPoly({0: a, 1: b})

    def to_json(self) -> dict:
        return {str(e): f"{x.numerator}/{x.denominator}" for e, x in sorted(self.c.items())}

    @classmethod
    def from_json(cls, data: dict) -> "LaurentPoly":
        return cls({int(e): Fraction(x) for e, x in data.items()})

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for e, x in sorted(self.c.items()):
            parts.append(f"{x}" if e == 0 else f"{x}*v^{e}")
        return " + ".join(parts)


ONE = LaurentPoly.const(1)
V = LaurentPoly.monomial(1)


# ---------- labels and the content-addressed cache


def label_dims(label: str) -> tuple[int, ...]:
    inside = label.split("[", 1)[1].split("]", 1)[0]
    return tuple(int(x) for x in inside.split(",") if x != "")


def class_of(Q: Quiver, p: int, label: str) -> RepClass:
    return catalog(Q, label_dims(label), p).by_label[label]


_CACHE = {"dir": os.environ.get("HALLFORGE_CACHE") or None, "enabled": True}


def set_cache(directory=None, enabled: bool = True):
    """Configure the on-disk store for structure constants (None disables it)."""
    _CACHE["dir"] = str(directory) if directory else None
    _CACHE["enabled"] = enabled


def _cache_path(key: dict):
    if not (_CACHE["enabled"] and _CACHE["dir"]):
        return None
    digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
    return Path(_CACHE["dir"]) / f"{digest}.json"


def _structure_table(Q: Quiver, p: int, alpha, beta) -> dict:
    """(X label, Y label) -> {Z label: g} for deg X = alpha, deg Y = beta."""
    key = {"module": "hall", "op": "structure", "quiver": Q.to_dict(), "name": Q.name,
           "p": p, "alpha": list(alpha), "beta": list(beta)}
    path = _cache_path(key)
    if path is not None and path.exists():
        raw = json.loads(path.read_text())
        return {(a, b): dict(zs) for a, b, zs in raw}
    table: dict = defaultdict(dict)
    for Z in catalog(Q, dim_add(alpha, beta), p).classes:
        for (xl, yl), g in hall_counts(Z).items():
            if label_dims(xl) == tuple(alpha):
                table[(xl, yl)][Z.label] = g
    table = {k: dict(sorted(v.items())) for k, v in sorted(table.items())}
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps([[a, b, sorted(zs.items())] for (a, b), zs in table.items()]))
        tmp.replace(path)
    return table


@lru_cache(maxsize=None)
def structure_table(Q: Quiver, p: int, alpha, beta) -> dict:
    return _structure_table(Q, p, tuple(alpha), tuple(beta))


# ---------- Hall elements


@dataclass
class HallElement:
    quiver: Quiver
    p: int
    terms: dict = field(default_factory=dict)  # label -> LaurentPoly

    def __post_init__(self):
        self.terms = {k: v for k, v in sorted(self.terms.items()) if v}

    @classmethod
    def basis(cls, C: RepClass, coeff=ONE) -> "HallElement":
        return cls(C.quiver, C.p, {C.label: coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.const(coeff)})

    @classmethod
    def of(cls, Q: Quiver, p: int, selector: str) -> "HallElement":
        return cls.basis(find_class(Q, p, selector))

    @classmethod
    def unit(cls, Q: Quiver, p: int) -> "HallElement":
        return cls.basis(catalog(Q, Q.zero_dims(), p).classes[0])

    @classmethod
    def zero(cls, Q: Quiver, p: int) -> "HallElement":
        return cls(Q, p, {})

    def _check(self, other):
        if self.quiver != other.quiver or self.p != other.p:
            raise ValueError("Hall elements over different quivers or fields")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, LaurentPoly()) + v
        return HallElement(self.quiver, self.p, out)

    def __neg__(self):
        return HallElement(self.quiver, self.p, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HallElement":
        c = c if isinstance(c, LaurentPoly) else LaurentPoly.const(c)
        return HallElement(self.quiver, self.p, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, HallElement)
            and self.quiver == other.quiver and self.p == other.p and self.terms == other.terms
        )

    def degrees(self) -> list[tuple[int, ...]]:
        return sorted({label_dims(k) for k in self.terms})

    def homogeneous_parts(self) -> dict:
        parts: dict = defaultdict(dict)
        for k, v in self.terms.items():
            parts[label_dims(k)][k] = v
        return {d: HallElement(self.quiver, self.p, t) for d, t in sorted(parts.items())}

    def specialize(self) -> "HallElement":
        return HallElement(self.quiver, self.p, {k: v.specialize(self.p) for k, v in self.terms.items()})

    def is_zero_at_q(self) -> bool:
        return not self.specialize().terms

    def named_terms(self) -> list[tuple[str, LaurentPoly]]:
        return [(class_name(class_of(self.quiver, self.p, k)), v) for k, v in self.terms.items()]

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.name,
            "p": self.p,
            "terms": [
                {"label": k, "name": class_name(class_of(self.quiver, self.p, k)), "coeff": v.to_json()}
                for k, v in self.terms.items()
            ],
        }

    def __repr__(self):
        inner = " + ".join(f"({v})[{n}]" for n, v in self.named_terms()) or "0"
        return f"HallElement({inner})"


# twist conventions: exponent of v multiplying the product of parts of degrees (alpha, beta)
TWISTS = {
    "none": lambda Q, a, b: 0,
    "left": lambda Q, a, b: euler_form(Q, a, b),
    "right": lambda Q, a, b: euler_form(Q, b, a),
}
# the convention under which the quantum Serre relations hold for sub-first products
DEFAULT_TWIST = "right"


def _mul(a: HallElement, b: HallElement, twist) -> HallElement:
    a._check(b)
    Q, p = a.quiver, a.p
    out: dict = defaultdict(LaurentPoly)
    for xl, cx in a.terms.items():
        alpha = label_dims(xl)
        for yl, cy in b.terms.items():
            beta = label_dims(yl)
            row = structure_table(Q, p, alpha, beta).get((xl, yl))
            if not row:
                continue
            coeff = (cx * cy).shift(twist(Q, alpha, beta))
            for zl, g in row.items():
                out[zl] = out[zl] + coeff * g
    return HallElement(Q, p, dict(out))


def hall_mul(a: HallElement, b: HallElement) -> HallElement:
    """Untwisted Hall product."""
    return _mul(a, b, TWISTS["none"])


def twisted_mul(a: HallElement, b: HallElement, convention: str = DEFAULT_TWIST) -> HallElement:
    """Hall product with the parts of degrees alpha, beta scaled by v^(Euler pairing)."""
    return _mul(a, b, TWISTS[convention])


def product(*elems, convention: str | None = None) -> HallElement:
    out = elems[0]
    for e in elems[1:]:
        out = hall_mul(out, e) if convention is None else twisted_mul(out, e, convention)
    return out


# ---------- coproduct


@dataclass
class HallTensor:
    """Element of the tensor power; keys are tuples of labels."""

    quiver: Quiver
    p: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {k: v for k, v in sorted(self.terms.items()) if v}

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, LaurentPoly()) + v
        return HallTensor(self.quiver, self.p, out)

    def __eq__(self, other):
        return isinstance(other, HallTensor) and self.terms == other.terms

    def specialize(self) -> "HallTensor":
        return HallTensor(self.quiver, self.p, {k: v.specialize(self.p) for k, v in self.terms.items()})

    def named_terms(self):
        return [
            (tuple(class_name(class_of(self.quiver, self.p, l)) for l in k), v) for k, v in self.terms.items()
        ]

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.name,
            "p": self.p,
            "terms": [
                {
                    "labels": list(k),
                    "names": [class_name(class_of(self.quiver, self.p, l)) for l in k],
                    "coeff": v.to_json(),
                }
                for k, v in self.terms.items()
            ],
        }


def _comul_class(Z: RepClass) -> dict:
    out = {}
    for (xl, yl), g in hall_counts(Z).items():
        X, Y = class_of(Z.quiver, Z.p, xl), class_of(Z.quiver, Z.p, yl)
        out[(xl, yl)] = LaurentPoly.const(Fraction(g * X.aut_order * Y.aut_order, Z.aut_order))
    return out


def comul(z: HallElement) -> HallTensor:
    """Delta[Z] = sum g^Z_{XY} |Aut X| |Aut Y| / |Aut Z| [X] (x) [Y]."""
    out: dict = defaultdict(LaurentPoly)
    for zl, c in z.terms.items():
        for k, v in _comul_class(class_of(z.quiver, z.p, zl)).items():
            out[k] = out[k] + v * c
    return HallTensor(z.quiver, z.p, dict(out))


def comul_left(t: HallTensor) -> HallTensor:
    """(Delta (x) 1) applied to a tensor of rank >= 1, acting on the first factor."""
    out: dict = defaultdict(LaurentPoly)
    for key, c in t.terms.items():
        for (a, b), v in _comul_class(class_of(t.quiver, t.p, key[0])).items():
            out[(a, b) + key[1:]] = out[(a, b) + key[1:]] + v * c
    return HallTensor(t.quiver, t.p, dict(out))


def comul_right(t: HallTensor) -> HallTensor:
    """(1 (x) Delta) on the last factor."""
    out: dict = defaultdict(LaurentPoly)
    for key, c in t.terms.items():
        for (a, b), v in _comul_class(class_of(t.quiver, t.p, key[-1])).items():
            out[key[:-1] + (a, b)] = out[key[:-1] + (a, b)] + v * c
    return HallTensor(t.quiver, t.p, dict(out))


# ---------- exhaustive structural checks


def classes_up_to(Q: Quiver, p: int, cap) -> list[RepClass]:
    return [C for d in dims_below(tuple(cap)) for C in catalog(Q, d, p).classes]


def associativity_check(Q: Quiver, p: int, cap, convention: str | None = None) -> tuple[bool, str]:
    """(ab)c = a(bc) for all basis triples of total degree <= cap."""
    cls = classes_up_to(Q, p, cap)
    mul = hall_mul if convention is None else (lambda a, b: twisted_mul(a, b, convention))
    for X, Y, W in itertools.product(cls, repeat=3):
        if any(t > c for t, c in zip(dim_add(dim_add(X.dims, Y.dims), W.dims), cap)):
            continue
        a, b, c = (HallElement.basis(C) for C in (X, Y, W))
        if mul(mul(a, b), c) != mul(a, mul(b, c)):
            return False, f"({X.label}, {Y.label}, {W.label})"
    return True, ""


def coassociativity_check(Q: Quiver, p: int, cap) -> tuple[bool, str]:
    for Z in classes_up_to(Q, p, cap):
        d = comul(HallElement.basis(Z))
        if comul_left(d) != comul_right(d):
            return False, Z.label
    return True, ""


# ---------- Green's compatibility


CONVENTIONS = tuple(itertools.product(range(-2, 3), repeat=2))


def twisted_comul(z: HallElement, convention: str = DEFAULT_TWIST) -> HallTensor:
    """comul with the (X, Y) term scaled by the same twist as the product of X and Y."""
    tw = TWISTS[convention]
    d = comul(z)
    return HallTensor(
        z.quiver, z.p,
        {(x, y): c.shift(tw(z.quiver, label_dims(x), label_dims(y))) for (x, y), c in d.terms.items()},
    )


def _operations(product: str):
    if product == "hall":
        return hall_mul, comul
    return (lambda x, y: twisted_mul(x, y, product)), (lambda z: twisted_comul(z, product))


def green_check(a: HallElement, b: HallElement, product: str = DEFAULT_TWIST,
                factors: str = "inner", family=CONVENTIONS) -> set:
    """Conventions (c1, c2) with Delta(a b) = Delta(a) * Delta(b).

    On the tensor square (x1 (x) x2)(y1 (x) y2) = v^e (x1 y1) (x) (x2 y2) with
    e = c1 <beta, gamma> + c2 <gamma, beta>.  For ``factors="inner"`` the
    pair is (beta, gamma) = (deg x2, deg y1); for "outer" it is (deg y2, deg x1).
    ``product`` is "hall" (untwisted product and coproduct) or a twist name,
    in which case the product and coproduct carry that twist.
    """
    a._check(b)
    Q, p = a.quiver, a.p
    mul, delta = _operations(product)
    # coproduct coefficients are rational in q, so compare after v^2 -> q
    lhs = delta(mul(a, b)).specialize()
    da, db = delta(a), delta(b)
    pieces: dict = defaultdict(lambda: defaultdict(LaurentPoly))
    cache = {}
    for (x1, x2), ca in da.terms.items():
        for (y1, y2), cb in db.terms.items():
            beta, gamma = (label_dims(x2), label_dims(y1)) if factors == "inner" else (label_dims(y2), label_dims(x1))
            key = (euler_form(Q, beta, gamma), euler_form(Q, gamma, beta))
            for l1, l2 in ((x1, y1), (x2, y2)):
                if (l1, l2) not in cache:
                    cache[(l1, l2)] = mul(HallElement.basis(class_of(Q, p, l1)),
                                         HallElement.basis(class_of(Q, p, l2))).terms
            coeff = ca * cb
            for zl, u in cache[(x1, y1)].items():
                for wl, w in cache[(x2, y2)].items():
                    pieces[key][(zl, wl)] = pieces[key][(zl, wl)] + coeff * u * w
    survivors = set()
    for c1, c2 in family:
        rhs: dict = defaultdict(LaurentPoly)
        for (e1, e2), terms in pieces.items():
            for k, v in terms.items():
                rhs[k] = rhs[k] + v.shift(c1 * e1 + c2 * e2)
        if HallTensor(Q, p, dict(rhs)).specialize() == lhs:
            survivors.add((c1, c2))
    return survivors


def green_conventions(Q: Quiver, p: int, cap, product: str = DEFAULT_TWIST, factors: str = "inner") -> set:
    """Intersection of green_check survivors over all basis pairs of total degree <= cap."""
    cls = classes_up_to(Q, p, cap)
    surv = set(CONVENTIONS)
    for X, Y in itertools.product(cls, repeat=2):
        if any(t > c for t, c in zip(dim_add(X.dims, Y.dims), cap)):
            continue
        surv &= green_check(HallElement.basis(X), HallElement.basis(Y), product, factors)
        if not surv:
            break
    return surv


def implied_green_power(Q: Quiver, convention, a, b, c, d, product: str = DEFAULT_TWIST) -> int:
    """Power of v attached to the grid with corners (a, b, c, d) once the twists are removed.

    The grid has U cap W of degree a, W/(U cap W) of degree b, U/(U cap W) of
    degree c and Z/(U + W) of degree d, where U is the subobject of the product
    and W the one split off by the coproduct; so x1, x2, y1, y2 have degrees
    a, c, b, d.  Product and coproduct twists are subtracted from the
    convention's inner exponent e(c, b).
    """
    c1, c2 = convention
    e = c1 * euler_form(Q, c, b) + c2 * euler_form(Q, b, c)
    if product == "hall":
        return e
    tw = TWISTS[product]
    return e - tw(Q, a, d) - tw(Q, a, d) - tw(Q, c, b) - tw(Q, b, c)


# ---------- point counts and stack dimensions


@dataclass(frozen=True)
class StackSpec:
    """One of ("Ob", alpha), ("Exact", sub, quot), ("Grid", a, b, c, d) or ("Prod", specs)."""

    kind: str
    args: tuple

    @classmethod
    def ob(cls, alpha):
        return cls("Ob", (tuple(alpha),))

    @classmethod
    def exact(cls, sub, quot):
        return cls("Exact", (tuple(sub), tuple(quot)))

    @classmethod
    def grid(cls, a, b, c, d):
        return cls("Grid", (tuple(a), tuple(b), tuple(c), tuple(d)))

    @classmethod
    def prod(cls, *specs):
        return cls("Prod", tuple(specs))

    def total(self):
        if self.kind == "Ob":
            return self.args[0]
        if self.kind == "Prod":
            raise ValueError("a product has no single total degree")
        tot = self.args[0]
        for a in self.args[1:]:
            tot = dim_add(tot, a)
        return tot


def _pair_count(Q, dims, p, maps, a, ab, ac) -> int:
    """Pairs (U, W) of invariant subspace tuples with dim U = ac, dim W = ab, dim U cap W = a."""
    Us = invariant_bases(Q, dims, p, maps, ac)
    Ws = invariant_bases(Q, dims, p, maps, ab)
    want = [x + y - z for x, y, z in zip(ac, ab, a)]  # dim (U + W)
    n = 0
    for U in Us:
        for W in Ws:
            if all(ffq.rank_rows(u + w, p) == t if (u or w) else t == 0 for u, w, t in zip(U, W, want)):
                n += 1
    return n


def variety_count(Q: Quiver, spec: StackSpec, p: int, caps=DEFAULT_CAPS) -> tuple[int, int]:
    """(R, dim G) with |spec(F_p)| = R / |G(F_p)|; R counts points of the presenting variety."""
    if spec.kind == "Prod":
        R, d = 1, 0
        for s in spec.args:
            r, e = variety_count(Q, s, p, caps)
            R, d = R * r, d + e
        return R, d
    total = spec.total()
    cat = catalog(Q, total, p, caps)
    G = group_order(total, p)
    if spec.kind == "Ob":
        return p ** rep_space_dim(Q, total), group_dim(total)
    R = 0
    for C in cat.classes:
        maps = C.rep.maps
        if spec.kind == "Exact":
            n = len(invariant_bases(Q, total, p, maps, spec.args[0]))
        elif spec.kind == "Grid":
            a, b, c, d = spec.args
            n = _pair_count(Q, total, p, maps, a, dim_add(a, b), dim_add(a, c))
        else:
            raise ValueError(f"unknown stack kind {spec.kind}")
        R += n * C.orbit_size
    return R, group_dim(total)


def stack_cardinality(Q: Quiver, spec: StackSpec, p: int) -> Fraction:
    R, _ = variety_count(Q, spec, p)
    return Fraction(R, _group_order_spec(Q, spec, p))


def _group_order_spec(Q, spec, p):
    if spec.kind == "Prod":
        n = 1
        for s in spec.args:
            n *= _group_order_spec(Q, s, p)
        return n
    return group_order(spec.total(), p)


class FitFailure(ValueError):
    """No unique point-count polynomial fits the data."""


def fit_nonneg_poly(values: dict, max_solutions: int = 64) -> list[tuple[int, ...]]:
    """All polynomials with nonnegative integer coefficients taking the given values.

    values: prime -> count.  Coefficients are peeled off from the constant
    term: c0 = R(p) mod p for every p, c0 <= min R, then recurse on (R - c0)/p.
    """
    primes = sorted(values)
    M = 1
    for p in primes:
        M *= p
    sols: list = []

    def rec(vals, prefix):
        if len(sols) >= max_solutions:
            return
        if all(v == 0 for v in vals):
            sols.append(tuple(prefix))
            return
        lo = min(vals)
        # residue of c0 modulo prod(primes) by CRT
        r = 0
        for p, v in zip(primes, vals):
            Mp = M // p
            r += (v % p) * Mp * pow(Mp, -1, p)
        r %= M
        c0 = r
        while c0 <= lo:
            rest = [(v - c0) // p for p, v in zip(primes, vals)]
            rec(rest, prefix + [c0])
            c0 += M

    rec([values[p] for p in primes], [])
    return sols


def stack_dim(Q: Quiver, spec: StackSpec, primes=(2, 3, 5)) -> int:
    """Dimension from point counts: deg R - dim G, R fitted over the given primes."""
    counts, gdim = {}, None
    for p in primes:
        counts[p], gdim = variety_count(Q, spec, p)
    sols = fit_nonneg_poly(counts)
    degs = {len(s) - 1 for s in sols}
    if len(degs) != 1:
        raise FitFailure(f"point counts {counts} do not determine a unique degree (fits: {sols[:4]})")
    return degs.pop() - gdim


def green_exponent(Q: Quiver, a, b, c, d, primes=(2, 3, 5)) -> int:
    """2 d_q2 - 2 d_p2 for the square Grid -> Exact^2 -> Ob^4, from fitted dimensions.

    Corners as in implied_green_power.  q2 records the columns
    (a -> U -> c, b -> Z/U -> d) and p2 is the parallel side, sending the
    rows (a -> W -> b, c -> Z/W -> d) to their ends.
    """
    grid = stack_dim(Q, StackSpec.grid(a, b, c, d), primes)
    cols = stack_dim(Q, StackSpec.prod(StackSpec.exact(a, c), StackSpec.exact(b, d)), primes)
    rows = stack_dim(Q, StackSpec.prod(StackSpec.exact(a, b), StackSpec.exact(c, d)), primes)
    ob = stack_dim(Q, StackSpec.prod(*(StackSpec.ob(x) for x in (a, b, c, d))), primes)
    return 2 * (grid - cols) - 2 * (rows - ob)


# ---------- Serre relations


def serre_element(Q: Quiver, p: int, i: int, j: int, convention: str | None = DEFAULT_TWIST) -> HallElement:
    """u_i u_i u_j - (v + 1/v) u_i u_j u_i + u_j u_i u_i in the (twisted) Hall algebra."""
    ui = HallElement.basis(catalog(Q, Q.simple_dims(i), p).classes[0])
    uj = HallElement.basis(catalog(Q, Q.simple_dims(j), p).classes[0])
    t1 = product(ui, ui, uj, convention=convention)
    t2 = product(ui, uj, ui, convention=convention).scale(V + LaurentPoly.monomial(-1))
    t3 = product(uj, ui, ui, convention=convention)
    return t1 - t2 + t3


def serre_check(p: int, Q: Quiver | None = None, convention: str | None = DEFAULT_TWIST) -> tuple[bool, dict]:
    """Both quantum Serre relations of A2 vanish after v^2 -> p."""
    Q = Q or PRESETS["A2"]
    out = {}
    for i, j in ((0, 1), (1, 0)):
        out[(i, j)] = serre_element(Q, p, i, j, convention).specialize()
    return all(not e.terms for e in out.values()), out


# ---------- Hall polynomials


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def lagrange(points: dict) -> list[Fraction]:
    """Coefficients (constant first) of the interpolating polynomial."""
    xs = sorted(points)
    coeffs = [Fraction(0)] * len(xs)
    for xi in xs:
        basis = [Fraction(1)]
        denom = Fraction(1)
        for xj in xs:
            if xj != xi:
                basis = _poly_mul(basis, [Fraction(-xj), Fraction(1)])
                denom *= xi - xj
        for k, c in enumerate(basis):
            coeffs[k] += c * points[xi] / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def poly_eval(coeffs, x) -> Fraction:
    return sum((c * Fraction(x) ** k for k, c in enumerate(coeffs)), Fraction(0))


def poly_str(coeffs) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
        cs = str(c)
        terms.append(cs if not mono else (mono if c == 1 else f"{cs}*{mono}"))
    return " + ".join(terms) or "0"


@dataclass
class PolyFit:
    coeffs: list
    values: dict
    holdout: int | None
    predicted: Fraction | None
    actual: int | None

    @property
    def ok(self) -> bool:
        return self.holdout is None or self.predicted == self.actual

    def __str__(self):
        return poly_str(self.coeffs)


def hall_number_by_name(Q: Quiver, p: int, x: str, y: str, z: str) -> int:
    X, Y, Z = (find_class(Q, p, s) for s in (x, y, z))
    if dim_add(X.dims, Y.dims) != Z.dims:
        return 0
    return hall_counts(Z).get((X.label, Y.label), 0)


def hall_poly_fit(Q: Quiver, x: str, y: str, z: str, primes=(2, 3, 5), holdout: int | None = 7) -> PolyFit:
    """Fit g^Z_{XY}(q) through the given primes, classes matched by readable name."""
    values = {p: Fraction(hall_number_by_name(Q, p, x, y, z)) for p in primes}
    coeffs = lagrange(values)
    predicted = actual = None
    if holdout is not None:
        predicted = poly_eval(coeffs, holdout)
        actual = hall_number_by_name(Q, holdout, x, y, z)
    return PolyFit(coeffs, values, holdout, predicted, actual)


# ---------- transfer comparison


RESCALINGS = ("1", "aut", "1/aut")


def _rescale(kind: str, aut: int) -> Fraction:
    return {"1": Fraction(1), "aut": Fraction(aut), "1/aut": Fraction(1, aut)}[kind]


@dataclass
class TransferReport:
    rescalings: list
    checked: int
    mismatches: dict

    @property
    def ok(self) -> bool:
        return bool(self.rescalings)


def multiplication_correspondence(Q: Quiver, p: int, alpha, beta, W=None):
    """S1(alpha) x S1(beta) <- S2 (sub of degree alpha) -> S1(alpha + beta)."""
    from .groupoid import Correspondence, FullSubgroupoid, Functor, ProductGroupoid
    from .waldhausen import provider

    W = W or provider(Q, p)
    gamma = dim_add(alpha, beta)
    S2 = W.level(2, gamma)
    C = FullSubgroupoid(S2, lambda o: tuple(len(b) for b in o[1][0]) == tuple(alpha), name="S2[alpha,beta]")
    A = ProductGroupoid(W.level(1, alpha), W.level(1, beta))
    B = W.level(1, gamma)
    left = Functor(
        C, A,
        lambda o: (W.face_obj(S2, (0, 1), o)[1], W.face_obj(S2, (1, 2), o)[1]),
        lambda o, g: (W.face_arr(S2, (0, 1), o, g), W.face_arr(S2, (1, 2), o, g)),
        name="end",
    )
    right = Functor(C, B, lambda o: W.face_obj(S2, (0, 2), o)[1], lambda o, g: W.face_arr(S2, (0, 2), o, g), name="mid")
    return Correspondence(left, right)


def transfer_table(Q: Quiver, p: int, alpha, beta, W=None) -> dict:
    """(X label, Y label) -> {Z label: transfer coefficient} from pull-push of delta functions."""
    from .groupoid import FnSpace, transfer_apply

    corr = multiplication_correspondence(Q, p, alpha, beta, W)
    A = corr.left.target
    cat_g = catalog(Q, dim_add(alpha, beta), p)
    out = {}
    for X in catalog(Q, alpha, p).classes:
        for Y in catalog(Q, beta, p).classes:
            f = FnSpace.delta(A, ((X.rep.point, ()), (Y.rep.point, ())))
            h = transfer_apply(corr, f)
            out[(X.label, Y.label)] = {cat_g.classify_point(z[0]).label: v for z, v in h.values.items()}
    return out


def transfer_mul_compare(Q: Quiver, p: int, gamma_cap) -> TransferReport:
    """Which diagonal rescalings [X] = c_X delta_X turn the transfer product into hall_mul."""
    survivors = list(RESCALINGS)
    mismatches: dict = {}
    checked = 0
    cap = tuple(gamma_cap)
    for alpha in dims_below(cap):
        for beta in dims_below(dim_sub(cap, alpha)):
            if any(x < 0 for x in dim_sub(cap, alpha)):
                continue
            tt = transfer_table(Q, p, alpha, beta)
            st = structure_table(Q, p, alpha, beta)
            for (xl, yl), row in tt.items():
                X, Y = class_of(Q, p, xl), class_of(Q, p, yl)
                g_row = st.get((xl, yl), {})
                for zl in sorted(set(row) | set(g_row)):
                    Z = class_of(Q, p, zl)
                    checked += 1
                    for kind in list(survivors):
                        lhs = _rescale(kind, X.aut_order) * _rescale(kind, Y.aut_order) / _rescale(kind, Z.aut_order)
                        if lhs * row.get(zl, 0) != g_row.get(zl, 0):
                            survivors.remove(kind)
                            mismatches[kind] = (xl, yl, zl)
    return TransferReport(survivors, checked, mismatches)


def hall_table(Q: Quiver, p: int, cap, convention: str = DEFAULT_TWIST) -> list[tuple[str, str, str, int, int]]:
    """Rows (X, Y, Z, g, twist exponent) over basis pairs of total degree <= cap."""
    rows = []
    cap = tuple(cap)
    for alpha in dims_below(cap):
        rest = dim_sub(cap, alpha)
        for beta in dims_below(rest):
            e = TWISTS[convention](Q, alpha, beta)
            for (xl, yl), zs in structure_table(Q, p, alpha, beta).items():
                for zl, g in zs.items():
                    rows.append((xl, yl, zl, g, e))
    return sorted(rows)
