"""Small finite fields GF(p^r) and affine subspaces of their vector spaces.

Elements of GF(p^r) are the integers 0 .. p**r - 1, read as base-p digit
vectors with the least significant digit first.  Digit vector (c0, .., c_{r-1})
stands for the residue c0 + c1*t + ... + c_{r-1}*t**(r-1) modulo a fixed monic
irreducible polynomial of degree r.  The reduction polynomial is the monic
irreducible whose digit encoding is smallest, so tables are reproducible.

Fields are this small on purpose: every arithmetic table is built eagerly and
the field axioms are checked exhaustively at construction time, which keeps
the rest of the package free of trust assumptions about the arithmetic.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

DEFAULT_ORDER_CAP = 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> tuple[int, ...]:
    """Remainder of a modulo a monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        lead = a[-1]
        if lead:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * mi) % p
        a.pop()
    return _poly_trim(a)


def _monic_polys(degree: int, p: int) -> Iterable[tuple[int, ...]]:
    for low in itertools.product(range(p), repeat=degree):
        yield tuple(low) + (1,)


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    degree = len(poly) - 1
    if degree == 1:
        return True
    for d in range(1, degree // 2 + 1):
        for divisor in _monic_polys(d, p):
            if not _poly_mod(poly, divisor, p):
                return False
    return True


class FiniteField:
    """GF(p**r) with fully tabulated arithmetic.

    Elements are the integers range(order).  0 and 1 are the additive and
    multiplicative identities.  Construction raises ValueError if p is not
    prime or the order exceeds order_cap, and AssertionError if the generated
    tables fail any field axiom (which would indicate a bug, not bad input).
    """

    def __init__(self, p: int, r: int = 1, order_cap: int = DEFAULT_ORDER_CAP):
        if not _is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        if r < 1:
            raise ValueError(f"extension degree must be >= 1, got {r}")
        order = p**r
        if order > order_cap:
            raise ValueError(f"field order {order} exceeds cap {order_cap}")
        self.p = p
        self.r = r
        self.order = order
        self.reduction = self._find_reduction()
        self._add = [[(self._digit_add(a, b)) for b in range(order)] for a in range(order)]
        self._mul = [[self._poly_elem_mul(a, b) for b in range(order)] for a in range(order)]
        self._neg = [self._find_neg(a) for a in range(order)]
        self._inv = [None] + [self._find_inv(a) for a in range(1, order)]
        self._verify_axioms()
        self._verify_generators()

    # -- construction helpers -------------------------------------------------

    def _find_reduction(self) -> tuple[int, ...]:
        for poly in _monic_polys(self.r, self.p):
            if _is_irreducible(poly, self.p):
                return poly
        raise AssertionError("no irreducible polynomial found")

    def _digits(self, a: int) -> tuple[int, ...]:
        return tuple((a // self.p**i) % self.p for i in range(self.r))

    def _from_digits(self, digits: Sequence[int]) -> int:
        return sum(int(d) % self.p * self.p**i for i, d in enumerate(digits))

    def _digit_add(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        return self._from_digits((x + y) % self.p for x, y in zip(da, db))

    def _poly_elem_mul(self, a: int, b: int) -> int:
        prod = _poly_mul(_poly_trim(self._digits(a)), _poly_trim(self._digits(b)), self.p)
        return self._from_digits(_poly_mod(prod, self.reduction, self.p) + (0,) * self.r)

    def _find_neg(self, a: int) -> int:
        for b in range(self.order):
            if self._add[a][b] == 0:
                return b
        raise AssertionError(f"no additive inverse for {a}")

    def _find_inv(self, a: int) -> int:
        for b in range(1, self.order):
            if self._mul[a][b] == 1:
                return b
        raise AssertionError(f"no multiplicative inverse for {a}")

    def _verify_axioms(self) -> None:
        n = self.order
        rng = range(n)
        for a in rng:
            assert self._add[a][0] == a and self._mul[a][1] == a
            assert self._mul[a][0] == 0
            for b in rng:
                assert self._add[a][b] == self._add[b][a]
                assert self._mul[a][b] == self._mul[b][a]
                for c in rng:
                    assert self._add[self._add[a][b]][c] == self._add[a][self._add[b][c]]
                    assert self._mul[self._mul[a][b]][c] == self._mul[a][self._mul[b][c]]
                    assert self._mul[a][self._add[b][c]] == self._add[self._mul[a][b]][self._mul[a][c]]

    def _verify_generators(self) -> None:
        # every element must be the field-sum of digit-many copies of each p**i
        for a in range(self.order):
            acc = 0
            for i, d in enumerate(self._digits(a)):
                g = self.p**i
                for _ in range(d):
                    acc = self._add[acc][g]
            assert acc == a, f"additive generators do not span element {a}"

    # -- public arithmetic -----------------------------------------------------

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._inv[a]

    def additive_generators(self) -> tuple[int, ...]:
        """Generators 1, t, t**2, ... of the additive group; every element is
        a unique digit combination of these."""
        return tuple(self.p**i for i in range(self.r))

    # -- vectors over the field --------------------------------------------------

    def vectors(self, length: int) -> list[tuple[int, ...]]:
        """All vectors of the given length, ordered so that coordinate 0 is the
        least significant digit of the position index."""
        out = []
        for code in range(self.order**length):
            out.append(tuple((code // self.order**i) % self.order for i in range(length)))
        return out

    def vector_code(self, vec: Sequence[int]) -> int:
        return sum(v * self.order**i for i, v in enumerate(vec))

    def vec_add(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        return tuple(self._add[a][b] for a, b in zip(u, v, strict=True))

    def vec_sub(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        return tuple(self._add[a][self._neg[b]] for a, b in zip(u, v, strict=True))

    def vec_scale(self, c: int, u: Sequence[int]) -> tuple[int, ...]:
        return tuple(self._mul[c][a] for a in u)

    # -- identity ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.r) == (other.p, other.r)

    def __hash__(self) -> int:
        return hash((self.p, self.r))

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, r={self.r})"


def _rank(field: FiniteField, rows: list[list[int]]) -> int:
    """Rank of a matrix over the field, by Gaussian elimination."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(inv, v) for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [field.sub(v, field.mul(factor, w)) for v, w in zip(rows[i], rows[rank])]
        rank += 1
    return rank


class AffineSubspace:
    """An affine subspace offset + span(basis) of F**ambient_dim.

    The basis must be linearly independent; construction raises ValueError
    otherwise.  points() enumerates offset + sum(c_j * basis_j) with the
    coefficient tuples (c_1, .., c_k) in lexicographic order, first
    coefficient slowest.
    """

    def __init__(self, field: FiniteField, basis: Sequence[Sequence[int]],
                 offset: Sequence[int]):
        self.field = field
        self.basis = tuple(tuple(int(v) for v in b) for b in basis)
        self.offset = tuple(int(v) for v in offset)
        ambient = len(self.offset)
        if any(len(b) != ambient for b in self.basis):
            raise ValueError("basis vectors and offset must share a length")
        for vec in self.basis + (self.offset,):
            if any(not 0 <= v < field.order for v in vec):
                raise ValueError("vector entries must be field elements")
        if not self.basis:
            raise ValueError("basis must be non-empty")
        if _rank(field, [list(b) for b in self.basis]) != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")
        self.ambient_dim = ambient
        self.dimension = len(self.basis)

    def point_at(self, coeffs: Sequence[int]) -> tuple[int, ...]:
        """The point offset + sum(c_j * basis_j)."""
        if len(coeffs) != self.dimension:
            raise ValueError("coefficient count must match the dimension")
        acc = self.offset
        for c, b in zip(coeffs, self.basis):
            acc = self.field.vec_add(acc, self.field.vec_scale(c, b))
        return acc

    def points(self) -> list[tuple[int, ...]]:
        return [self.point_at(c)
                for c in itertools.product(self.field.elements, repeat=self.dimension)]

    def __len__(self) -> int:
        return self.field.order**self.dimension

    def __repr__(self) -> str:
        return (f"AffineSubspace(field={self.field!r}, dim={self.dimension}, "
                f"ambient={self.ambient_dim})")
