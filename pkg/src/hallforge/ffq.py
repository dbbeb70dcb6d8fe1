"""
Exact linear algebra over prime fields F_p.

Matrices are kept as tuples of row tuples of residues in ``range(p)``; the
:class:`FqMatrix` wrapper carries the shape and modulus for public use, while
the module-level helpers work on bare tuples so that the enumeration-heavy
callers (orbit searches, flag enumeration) do not pay for object creation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import prod

Row = tuple[int, ...]
Rows = tuple[Row, ...]

SUPPORTED_PRIMES = (2, 3, 5, 7)


class CapExceeded(ValueError):
    """An enumeration would exceed the configured dimension cap."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"modulus must be a prime, got {p!r}")
    return p


@dataclass(frozen=True)
class Caps:
    """Maximum total dimension of an ambient representation, per prime."""

    total_dim: dict = field(default_factory=lambda: {2: 6, 3: 4, 5: 4, 7: 3})

    def limit(self, p: int) -> int:
        return self.total_dim.get(p, 2)

    def check(self, total: int, p: int, what: str = "enumeration", size_estimate=None):
        if total > self.limit(p):
            est = f" (estimated size {size_estimate})" if size_estimate is not None else ""
            raise CapExceeded(
                f"{what}: total dimension {total} exceeds cap {self.limit(p)} over F_{p}{est}"
            )


DEFAULT_CAPS = Caps()


def gl_order(n: int, p: int) -> int:
    """Order of GL_n(F_p): the product of (p^n - p^i) for i < n."""
    check_prime(p)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return prod(p**n - p**i for i in range(n))


def gaussian_binomial(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    num = prod(p ** (n - i) - 1 for i in range(k))
    den = prod(p ** (k - i) - 1 for i in range(k))
    return num // den


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    for g in range(1, p):
        if len({pow(g, e, p) for e in range(1, p)}) == p - 1:
            return g
    raise ValueError(p)


# ---------- bare-tuple helpers


def identity(n: int) -> Rows:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Rows:
    return tuple((0,) * cols for _ in range(rows))


def mat_mul(a: Rows, b: Rows, cols: int, p: int) -> Rows:
    """Product of ``a`` (r x k) and ``b`` (k x cols); ``cols`` is explicit so k = 0 works."""
    if not b:
        return zeros(len(a), cols)
    bt = tuple(zip(*b)) if cols else ()
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt) if cols else ()
        for row in a
    )


def mat_vec(a: Rows, v: Row, p: int) -> Row:
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in a)


def transpose(a: Rows, cols: int) -> Rows:
    if not a:
        return tuple(() for _ in range(cols))
    return tuple(zip(*a))


def rref(rows, p: int) -> Rows:
    """Reduced row-echelon form with zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    out_row = 0
    for col in range(ncols):
        piv = next((r for r in range(out_row, len(m)) if m[r][col] % p), None)
        if piv is None:
            continue
        m[out_row], m[piv] = m[piv], m[out_row]
        inv = pow(m[out_row][col], p - 2, p)
        m[out_row] = [(x * inv) % p for x in m[out_row]]
        for r in range(len(m)):
            if r != out_row and m[r][col] % p:
                f = m[r][col]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[out_row])]
        out_row += 1
        if out_row == len(m):
            break
    return tuple(tuple(r) for r in m[:out_row])


def pivots(echelon: Rows) -> tuple[int, ...]:
    return tuple(next(i for i, x in enumerate(r) if x) for r in echelon)


def rank_rows(rows, p: int) -> int:
    return len(rref(rows, p))


def mat_inv(a: Rows, p: int) -> Rows:
    n = len(a)
    aug = [list(r) + list(e) for r, e in zip(a, identity(n))]
    red = rref(aug, p)
    if len(red) < n or any(red[i][i] != 1 for i in range(n)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(r[n:]) for r in red)


def reduce_mod(v: Row, echelon: Rows, piv: tuple[int, ...], p: int) -> Row:
    """Reduce ``v`` modulo the span of ``echelon``; the result vanishes on ``piv``."""
    v = list(v)
    for row, c in zip(echelon, piv):
        f = v[c]
        if f:
            v = [(x - f * y) % p for x, y in zip(v, row)]
    return tuple(v)


def coords_in(v: Row, echelon: Rows, piv: tuple[int, ...]) -> Row:
    """Coordinates of ``v`` (assumed inside the span) in the echelon basis."""
    return tuple(v[c] for c in piv)


def nullspace(a: Rows, cols: int, p: int) -> Rows:
    """Basis (as rows, echelon) of {x : a x = 0}."""
    red = rref(a, p) if a else ()
    piv = pivots(red)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for fcol in free:
        v = [0] * cols
        v[fcol] = 1
        for row, c in zip(red, piv):
            v[c] = (-row[fcol]) % p
        basis.append(tuple(v))
    return rref(basis, p)


def all_vectors(n: int, p: int):
    return itertools.product(range(p), repeat=n)


def all_matrices(rows: int, cols: int, p: int):
    for flat in itertools.product(range(p), repeat=rows * cols):
        yield tuple(tuple(flat[i * cols:(i + 1) * cols]) for i in range(rows))


@lru_cache(maxsize=None)
def gl_elements(n: int, p: int) -> tuple[Rows, ...]:
    """All of GL_n(F_p), sorted. Only sensible for tiny n and p."""
    return tuple(sorted(m for m in all_matrices(n, n, p) if rank_rows(m, p) == n))


@lru_cache(maxsize=None)
def gl_generators(n: int, p: int) -> tuple[Rows, ...]:
    """Generators of GL_n(F_p): elementary transvections and one diagonal matrix."""
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                m = [list(r) for r in identity(n)]
                m[i][j] = 1
                gens.append(tuple(tuple(r) for r in m))
    if n and p > 2:
        m = [list(r) for r in identity(n)]
        m[0][0] = primitive_root(p)
        gens.append(tuple(tuple(r) for r in m))
    return tuple(gens)


# ---------- public wrappers


@dataclass(frozen=True)
class FqMatrix:
    rows: int
    cols: int
    p: int
    entries: Rows

    def __post_init__(self):
        check_prime(self.p)
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")
        if any(not 0 <= x < self.p for r in self.entries for x in r):
            raise ValueError("entries must be residues in range(p)")

    @classmethod
    def from_rows(cls, rows, p: int, cols: int | None = None) -> "FqMatrix":
        entries = tuple(tuple(int(x) % p for x in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, p, entries)

    @classmethod
    def identity(cls, n: int, p: int) -> "FqMatrix":
        return cls(n, n, p, identity(n))

    @classmethod
    def zero(cls, rows: int, cols: int, p: int) -> "FqMatrix":
        return cls(rows, cols, p, zeros(rows, cols))

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        if self.cols != other.rows or self.p != other.p:
            raise ValueError("shape or modulus mismatch")
        return FqMatrix(self.rows, other.cols, self.p, mat_mul(self.entries, other.entries, other.cols, self.p))

    def inverse(self) -> "FqMatrix":
        return FqMatrix(self.rows, self.cols, self.p, mat_inv(self.entries, self.p))


def rank(m: FqMatrix) -> int:
    return rank_rows(m.entries, m.p)


@dataclass(frozen=True, order=True)
class Subspace:
    """A subspace of F_p^ambient_dim, stored by its reduced row-echelon basis."""

    ambient_dim: int
    p: int
    basis: Rows

    @classmethod
    def span(cls, vectors, ambient_dim: int, p: int) -> "Subspace":
        vecs = [tuple(int(x) % p for x in v) for v in vectors]
        if any(len(v) != ambient_dim for v in vecs):
            raise ValueError("vector length differs from the ambient dimension")
        return cls(ambient_dim, p, rref(vecs, p))

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(ambient_dim, p, ())

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(ambient_dim, p, identity(ambient_dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return pivots(self.basis)

    def as_matrix(self) -> FqMatrix:
        return FqMatrix(self.dim, self.ambient_dim, self.p, self.basis)

    def contains(self, v: Row) -> bool:
        return not any(reduce_mod(v, self.basis, self.pivots, self.p))

    def within(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)


@lru_cache(maxsize=None)
def _subspace_bases(ambient: int, k: int, p: int) -> tuple[Rows, ...]:
    out = []
    for piv in itertools.combinations(range(ambient), k):
        # free entries: row r, columns after piv[r] that are not pivots
        slots = [(r, c) for r in range(k) for c in range(piv[r] + 1, ambient) if c not in piv]
        for vals in itertools.product(range(p), repeat=len(slots)):
            m = [[0] * ambient for _ in range(k)]
            for r, c in enumerate(piv):
                m[r][c] = 1
            for (r, c), x in zip(slots, vals):
                m[r][c] = x
            out.append(tuple(tuple(r) for r in m))
    return tuple(sorted(out))


def enumerate_subspaces(ambient: int, k: int, p: int) -> list[Subspace]:
    """Every k-dimensional subspace of F_p^ambient exactly once, in sorted echelon order."""
    check_prime(p)
    if k < 0 or k > ambient:
        return []
    return [Subspace(ambient, p, b) for b in _subspace_bases(ambient, k, p)]


def subspace_bases(ambient: int, k: int, p: int) -> tuple[Rows, ...]:
    if k < 0 or k > ambient:
        return ()
    return _subspace_bases(ambient, k, p)
