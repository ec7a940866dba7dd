"""Extremal structure families and their forbidden-configuration bijections.

Four families of point configurations, each with an exact maximum density of
a configuration-free set:

  lines(q, n)        combinatorial lines in range(q)**n; a line is a template
                     with at least one active coordinate, instantiated by
                     running the active coordinates through 0..q-1 together.
  squares(n)         {x, x+d} x {y, y+d} in pairs of F_2**n vectors, d != 0.
  corners(n)         {(x,y), (x+d,y), (x,y+d)} in the same universe, d != 0.
  grids(field, k, n) {(x_1 + a_1 d, .., x_k + a_k d) : a in F**k} in k-tuples
                     of F**n vectors, d != 0; squares are exactly the grids
                     of GF(2) with k = 2.

Vector universes index points little-endian: a k-tuple of vectors has index
sum(code(v_j) * (order**n)**j) with player 0 least significant, and vector
codes put coordinate 0 in the least significant digit.

The bijections at the bottom translate configurations of each family into
forbidden configurations of a matching repeated question support and back,
which is what ties the densities r_line, r_square, r_grid to exact values of
repeated games.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .errors import BudgetExceededError
from .fields import AffineSubspace, FiniteField
from .forbidden import ForbiddenWitness, witness_is_valid
from .games import unit_tuples
from .records import DensityRecord
from .search import (DEFAULT_POINT_BUDGET, ForbiddenHypergraph, max_free,
                     verify_free)

WITNESS_MATERIALISE_LIMIT = 4096


@dataclass
class StructureFamily:
    """A finite universe together with a re-enumerable configuration family.

    configurations() returns a fresh iterator of sorted point-index tuples on
    every call, so verification can re-walk the family independently of any
    solver state.  generators are index permutations preserving the family,
    available for the solver's symmetry reduction.
    """

    name: str
    params: dict
    universe: tuple
    arity: int
    _enumerate: Callable[[], Iterator[tuple[int, ...]]]
    generators: tuple = ()
    _index: dict = dataclass_field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {p: i for i, p in enumerate(self.universe)}

    def configurations(self) -> Iterator[tuple[int, ...]]:
        return self._enumerate()

    def index(self, point) -> int:
        return self._index[point]

    def to_hypergraph(self, with_generators: bool = True) -> ForbiddenHypergraph:
        gens = self.generators if with_generators else ()
        return ForbiddenHypergraph(len(self.universe), list(self.configurations()), gens)

    def __len__(self) -> int:
        return len(self.universe)


# -- combinatorial lines -------------------------------------------------------


_STAR = object()


def _digit_tuples(q: int, n: int) -> list[tuple[int, ...]]:
    return [tuple((c // q**m) % q for m in range(n)) for c in range(q**n)]


def _digit_code(w: Sequence[int], q: int) -> int:
    return sum(v * q**m for m, v in enumerate(w))


def lines(q: int, n: int, point_budget: int = DEFAULT_POINT_BUDGET * 32) -> StructureFamily:
    """Combinatorial lines in range(q)**n."""
    if q < 1 or n < 1:
        raise ValueError("need q >= 1 and n >= 1")
    if q**n > point_budget:
        raise BudgetExceededError(f"{q}**{n} points exceed the budget {point_budget}")
    universe = tuple(_digit_tuples(q, n))

    def enumerate_lines() -> Iterator[tuple[int, ...]]:
        seen: set[tuple[int, ...]] = set()
        alphabet = list(range(q)) + [_STAR]
        for template in itertools.product(alphabet, repeat=n):
            if _STAR not in template:
                continue
            points = []
            for v in range(q):
                points.append(tuple(v if sym is _STAR else sym for sym in template))
            edge = tuple(sorted(_digit_code(p, q) for p in points))
            if edge not in seen:
                seen.add(edge)
                yield edge

    generators = []
    if q >= 2:
        cycle = {v: (v + 1) % q for v in range(q)}
        generators.append(tuple(
            _digit_code(tuple(cycle[v] for v in w), q) for w in universe))
    if n >= 2:
        generators.append(tuple(
            _digit_code(w[1:] + w[:1], q) for w in universe))
    return StructureFamily(
        name="line",
        params={"q": q, "n": n},
        universe=universe,
        arity=q,
        _enumerate=enumerate_lines,
        generators=tuple(generators),
    )


# -- vector universes (squares, corners, grids) --------------------------------


def _vector_universe(order: int, k: int, n: int) -> tuple[tuple, ...]:
    """All k-tuples of length-n vectors over range(order), player 0 least
    significant in the point index."""
    vectors = [tuple((c // order**m) % order for m in range(n)) for c in range(order**n)]
    out = []
    for code in range(order ** (k * n)):
        point = []
        for j in range(k):
            vcode = (code // (order**n) ** j) % order**n
            point.append(vectors[vcode])
        out.append(tuple(point))
    return tuple(out)


def _xor_vec(u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(a ^ b for a, b in zip(u, v, strict=True))


def _unit_translations(order: int, k: int, n: int, add_vec) -> tuple[tuple[int, ...], ...]:
    """Index permutations translating one player's vector by one unit vector;
    these generate the full translation group of the universe."""
    universe = _vector_universe(order, k, n)
    index = {p: i for i, p in enumerate(universe)}
    gens = []
    for j in range(k):
        for m in range(n):
            unit = tuple(1 if mm == m else 0 for mm in range(n))
            image = []
            for point in universe:
                moved = list(point)
                moved[j] = add_vec(point[j], unit)
                image.append(index[tuple(moved)])
            gens.append(tuple(image))
    return tuple(gens)


def squares(n: int, point_budget: int = DEFAULT_POINT_BUDGET * 32) -> StructureFamily:
    """Axis-aligned squares with a common side vector in F_2**n x F_2**n."""
    if n < 1:
        raise ValueError("need n >= 1")
    if 4**n > point_budget:
        raise BudgetExceededError(f"4**{n} points exceed the budget {point_budget}")
    universe = _vector_universe(2, 2, n)
    index = {p: i for i, p in enumerate(universe)}
    vectors = [tuple((c // 2**m) % 2 for m in range(n)) for c in range(2**n)]

    def enumerate_squares() -> Iterator[tuple[int, ...]]:
        for d in vectors[1:]:
            for x in vectors:
                if _digit_code(x, 2) > _digit_code(_xor_vec(x, d), 2):
                    continue
                for y in vectors:
                    if _digit_code(y, 2) > _digit_code(_xor_vec(y, d), 2):
                        continue
                    xs = (x, _xor_vec(x, d))
                    ys = (y, _xor_vec(y, d))
                    yield tuple(sorted(index[(a, b)] for a in xs for b in ys))

    return StructureFamily(
        name="square",
        params={"n": n},
        universe=universe,
        arity=4,
        _enumerate=enumerate_squares,
        generators=_unit_translations(2, 2, n, _xor_vec),
    )


def corners(n: int, point_budget: int = DEFAULT_POINT_BUDGET * 32) -> StructureFamily:
    """Corners {(x,y), (x+d,y), (x,y+d)} with d != 0 in F_2**n x F_2**n."""
    if n < 1:
        raise ValueError("need n >= 1")
    if 4**n > point_budget:
        raise BudgetExceededError(f"4**{n} points exceed the budget {point_budget}")
    universe = _vector_universe(2, 2, n)
    index = {p: i for i, p in enumerate(universe)}
    vectors = [tuple((c // 2**m) % 2 for m in range(n)) for c in range(2**n)]

    def enumerate_corners() -> Iterator[tuple[int, ...]]:
        # (x, y, d) -> corner is injective: the apex (x, y) is the unique
        # point sharing its first component with one point and its second
        # with the other, and d is the difference, so no deduplication needed
        for d in vectors[1:]:
            for x in vectors:
                for y in vectors:
                    yield tuple(sorted((
                        index[(x, y)],
                        index[(_xor_vec(x, d), y)],
                        index[(x, _xor_vec(y, d))],
                    )))

    return StructureFamily(
        name="corner",
        params={"n": n},
        universe=universe,
        arity=3,
        _enumerate=enumerate_corners,
        generators=_unit_translations(2, 2, n, _xor_vec),
    )


def grids(field: FiniteField, k: int, n: int,
          point_budget: int = DEFAULT_POINT_BUDGET * 32) -> StructureFamily:
    """Grids {(x_1 + a_1 d, .., x_k + a_k d) : a in F**k} with d != 0.

    Each grid is enumerated once: d is normalised monic (first non-zero
    coordinate equal to 1) and the base point is the minimum-index point of
    the grid.
    """
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    order = field.order
    if order ** (k * n) > point_budget:
        raise BudgetExceededError(
            f"{order}**{k * n} points exceed the budget {point_budget}")
    universe = _vector_universe(order, k, n)
    index = {p: i for i, p in enumerate(universe)}
    vectors = field.vectors(n)
    monic = []
    for d in vectors:
        lead = next((v for v in d if v != 0), None)
        if lead == 1:
            monic.append(d)

    def grid_indices(x, d) -> list[int]:
        out = []
        for alpha in itertools.product(field.elements, repeat=k):
            point = tuple(field.vec_add(x[j], field.vec_scale(alpha[j], d))
                          for j in range(k))
            out.append(index[point])
        return out

    def enumerate_grids() -> Iterator[tuple[int, ...]]:
        for d in monic:
            for i, x in enumerate(universe):
                cell = grid_indices(x, d)
                if min(cell) == i:
                    yield tuple(sorted(cell))

    return StructureFamily(
        name="grid",
        params={"p": field.p, "r": field.r, "k": k, "n": n},
        universe=universe,
        arity=order**k,
        _enumerate=enumerate_grids,
        generators=_unit_translations(order, k, n, field.vec_add),
    )


# -- exact densities -------------------------------------------------------------


def _density_record(family: StructureFamily, method: str,
                    solver_budget: int) -> DensityRecord:
    hyper = family.to_hypergraph(with_generators=False)
    size, chosen = max_free(hyper, budget=solver_budget)
    if not verify_free(chosen, family.configurations()):
        raise AssertionError("density witness failed independent re-enumeration check")
    return DensityRecord(
        family=family.name,
        params=dict(family.params),
        value=Fraction(size, len(family.universe)),
        witness_size=size,
        universe_size=len(family.universe),
        witness=[family.universe[i] for i in chosen],
        method=method,
    )


def r_line(q: int, n: int, method: str = "auto",
           solver_budget: int = DEFAULT_POINT_BUDGET) -> DensityRecord:
    """Maximum density of a line-free subset of range(q)**n.

    For q = 2 the density has a closed form: lines are pairs of distinct
    comparable 0/1 vectors plus their reverses, so line-free sets are
    antichains in the Boolean lattice and the maximum is the middle binomial
    layer, C(n, floor(n/2)) / 2**n.  method "closed-form" evaluates the
    formula directly (witness materialised only for small n); "search" runs
    the exact solver; "auto" searches within the solver budget and falls
    back to the closed form for larger q = 2 instances.
    """
    if method not in ("auto", "search", "closed-form"):
        raise ValueError(f"unknown method {method!r}")
    if method == "closed-form" or (method == "auto" and q == 2 and 2**n > solver_budget):
        if q != 2:
            raise ValueError("the closed form is only available for q = 2")
        size = math.comb(n, n // 2)
        witness = None
        if 2**n <= WITNESS_MATERIALISE_LIMIT:
            # the middle layer: no two points of equal weight are comparable,
            # so no line fits inside it
            witness = [w for w in _digit_tuples(2, n) if sum(w) == n // 2]
            assert len(witness) == size
        return DensityRecord(
            family="line",
            params={"q": q, "n": n},
            value=Fraction(size, 2**n),
            witness_size=size,
            universe_size=2**n,
            witness=witness,
            method="closed-form",
        )
    family = lines(q, n, point_budget=solver_budget)
    return _density_record(family, "exact-bb", solver_budget)


def r_square(n: int, solver_budget: int = DEFAULT_POINT_BUDGET) -> DensityRecord:
    """Maximum density of a square-free subset of F_2**n x F_2**n."""
    return _density_record(squares(n, point_budget=solver_budget), "exact-bb", solver_budget)


def r_corner(n: int, solver_budget: int = DEFAULT_POINT_BUDGET) -> DensityRecord:
    """Maximum density of a corner-free subset of F_2**n x F_2**n."""
    return _density_record(corners(n, point_budget=solver_budget), "exact-bb", solver_budget)


def r_grid(field: FiniteField, k: int, n: int,
           solver_budget: int = DEFAULT_POINT_BUDGET) -> DensityRecord:
    """Maximum density of a grid-free subset of (F**n)**k."""
    return _density_record(grids(field, k, n, point_budget=solver_budget),
                           "exact-bb", solver_budget)


# -- bijections with forbidden configurations -----------------------------------


def _line_template(q: int, points: Sequence[tuple[int, ...]]):
    """Recover (ordered points, active coordinates) of a line, or raise."""
    pts = [tuple(p) for p in points]
    if len(set(pts)) != q or not pts:
        raise ValueError(f"a line over {q} symbols has {q} distinct points")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("points must share a length")
    if q == 1:
        return pts, tuple(range(n))
    active = [m for m in range(n) if len({p[m] for p in pts}) > 1]
    if not active:
        raise ValueError("a line needs at least one active coordinate")
    order = sorted(pts, key=lambda p: p[active[0]])
    for m in range(n):
        column = [p[m] for p in order]
        if len(set(column)) == 1:
            continue
        if column != list(range(q)):
            raise ValueError(f"coordinate {m} is neither constant nor 0..{q - 1}")
    return order, tuple(active)


def line_to_witness(q: int, n: int, points: Sequence[tuple[int, ...]]) -> ForbiddenWitness:
    """A combinatorial line, read as a forbidden configuration of the unit
    question support over q players.

    Digit s names the support element whose player s holds a 1, so each line
    point doubles as an index vector; the pinned coordinate is the line's
    first active coordinate.  Valid for every q >= 1.
    """
    order, active = _line_template(q, points)
    witness = ForbiddenWitness(coordinate=active[0], edges=tuple(order))
    if not witness_is_valid(unit_tuples(q), n, witness):
        raise AssertionError("line did not map to a valid forbidden configuration")
    return witness


def witness_to_line(q: int, n: int, witness: ForbiddenWitness) -> tuple[tuple[int, ...], ...]:
    """Inverse of line_to_witness.  Only sound for q >= 3: with two symbols
    every pair of distinct points forms a forbidden configuration, so the
    map from lines is not onto."""
    if q < 3:
        raise ValueError("the inverse direction needs q >= 3")
    if not witness_is_valid(unit_tuples(q), n, witness):
        raise ValueError("not a forbidden configuration of the unit support")
    order, _ = _line_template(q, witness.edges)
    return tuple(order)


_GHZ_SUPPORT = tuple((x, y, x ^ y) for x in (0, 1) for y in (0, 1))


def ghz_support() -> tuple[tuple[int, int, int], ...]:
    """Even-parity bit triples, ordered (0,0,0), (0,1,1), (1,0,1), (1,1,0)."""
    return _GHZ_SUPPORT


def _square_sides(points) -> tuple[tuple, tuple, tuple[int, ...]]:
    pts = [tuple(p) for p in points]
    if len(set(pts)) != 4:
        raise ValueError("a square has 4 distinct points")
    xs = sorted({p[0] for p in pts}, key=lambda v: _digit_code(v, 2))
    ys = sorted({p[1] for p in pts}, key=lambda v: _digit_code(v, 2))
    if len(xs) != 2 or len(ys) != 2:
        raise ValueError("a square projects onto two columns and two rows")
    dx = _xor_vec(xs[0], xs[1])
    dy = _xor_vec(ys[0], ys[1])
    if dx != dy:
        raise ValueError("rows and columns must share one side vector")
    if set(pts) != {(a, b) for a in xs for b in ys}:
        raise ValueError("points do not fill the 2 x 2 grid")
    return tuple(xs), tuple(ys), dx


def square_to_witness(n: int, points) -> ForbiddenWitness:
    """A square, read as a forbidden configuration (a bow tie) of the
    even-parity support: the point (x, y) becomes the index vector whose
    round-m entry names the support element (x_m, y_m, x_m + y_m)."""
    xs, ys, d = _square_sides(points)
    support_pos = {t: s for s, t in enumerate(_GHZ_SUPPORT)}
    i = next(m for m in range(len(d)) if d[m] != 0)
    edges = []
    for x, y in itertools.product(xs, ys):
        edges.append(tuple(support_pos[(x[m], y[m], x[m] ^ y[m])] for m in range(n)))
    edges.sort(key=lambda e: e[i])
    witness = ForbiddenWitness(coordinate=i, edges=tuple(edges))
    if not witness_is_valid(_GHZ_SUPPORT, n, witness):
        raise AssertionError("square did not map to a valid forbidden configuration")
    return witness


def witness_to_square(n: int, witness: ForbiddenWitness):
    """Inverse of square_to_witness."""
    if not witness_is_valid(_GHZ_SUPPORT, n, witness):
        raise ValueError("not a forbidden configuration of the even-parity support")
    points = []
    for e in witness.edges:
        x = tuple(_GHZ_SUPPORT[v][0] for v in e)
        y = tuple(_GHZ_SUPPORT[v][1] for v in e)
        points.append((x, y))
    _square_sides(points)
    return tuple(points)


def grid_question_set(field: FiniteField, k: int) -> tuple[tuple[int, ...], ...]:
    """The question support tying grid density to repeated game values.

    k + r players over GF(p**r): the first k players receive arbitrary field
    elements x_1 .. x_k and the last r players receive g * x_1 + x_2 + ..
    + x_k, one per additive generator g.  For GF(2) with k = 2 this is the
    even-parity triple support.  Requires k >= 2, which makes the projected
    graph complete multipartite and in particular connected.
    """
    if k < 2:
        raise ValueError("the grid question set needs k >= 2")
    gens = field.additive_generators()
    support = []
    for x in itertools.product(field.elements, repeat=k):
        tail = []
        for g in gens:
            acc = field.mul(g, x[0])
            for v in x[1:]:
                acc = field.add(acc, v)
            tail.append(acc)
        support.append(tuple(x) + tuple(tail))
    return tuple(support)


def _grid_base_and_step(field: FiniteField, k: int, n: int, points):
    """Recover (indexer alpha -> point, monic step d) of a grid, or raise."""
    pts = [tuple(tuple(v) for v in p) for p in points]
    order = field.order
    if len(set(pts)) != order**k:
        raise ValueError(f"a grid over this field has {order**k} distinct points")
    base = min(pts, key=lambda p: sum(
        field.vector_code(p[j]) * (order**n) ** j for j in range(k)))
    diffs = set()
    for p in pts:
        for j in range(k):
            delta = field.vec_sub(p[j], base[j])
            if any(delta):
                diffs.add(delta)
    if not diffs:
        raise ValueError("grid points cannot all coincide")
    some = next(iter(sorted(diffs, key=lambda v: field.vector_code(v))))
    lead_pos = next(m for m in range(n) if some[m] != 0)
    d = field.vec_scale(field.inv(some[lead_pos]), some)
    lookup = {}
    for alpha in itertools.product(field.elements, repeat=k):
        point = tuple(field.vec_add(base[j], field.vec_scale(alpha[j], d))
                      for j in range(k))
        lookup[alpha] = point
    if set(lookup.values()) != set(pts):
        raise ValueError("points do not form a grid")
    return lookup, d


def grid_to_witness(field: FiniteField, k: int, n: int, points) -> ForbiddenWitness:
    """A grid, read as a forbidden configuration of the grid question set:
    the point (z_1, .., z_k) becomes the index vector whose round-m entry
    names the support element determined by (z_1[m], .., z_k[m])."""
    support = grid_question_set(field, k)
    support_pos = {x[:k]: s for s, x in enumerate(support)}
    lookup, d = _grid_base_and_step(field, k, n, points)
    i = next(m for m in range(n) if d[m] != 0)
    edges = []
    for point in lookup.values():
        edges.append(tuple(support_pos[tuple(point[j][m] for j in range(k))]
                           for m in range(n)))
    edges.sort(key=lambda e: e[i])
    witness = ForbiddenWitness(coordinate=i, edges=tuple(edges))
    if not witness_is_valid(support, n, witness):
        raise AssertionError("grid did not map to a valid forbidden configuration")
    return witness


def witness_to_grid(field: FiniteField, k: int, n: int, witness: ForbiddenWitness):
    """Inverse of grid_to_witness."""
    support = grid_question_set(field, k)
    if not witness_is_valid(support, n, witness):
        raise ValueError("not a forbidden configuration of the grid question set")
    points = []
    for e in witness.edges:
        points.append(tuple(tuple(support[v][j] for v in e) for j in range(k)))
    _grid_base_and_step(field, k, n, points)
    return tuple(points)


def affine_embed(subspace: AffineSubspace, n: int, points) -> ForbiddenWitness:
    """Read a grid over the subspace's coefficient space as a forbidden
    configuration of the subspace's point list.

    The subspace's points, enumerated in coefficient order, form a question
    support Q inside F**ambient_dim; a grid in (F**n)**dim maps to a
    forbidden configuration of Q**n by sending each grid point to the index
    vector of its per-round coefficient tuples.  Consequently every
    forbidden-free subset of Q**n pulls back to a grid-free set, so the
    density of Q**n is at most r_grid(F, dim, n)."""
    field = subspace.field
    k = subspace.dimension
    support = tuple(subspace.points())
    coeff_pos = {coeffs: s for s, coeffs in
                 enumerate(itertools.product(field.elements, repeat=k))}
    lookup, d = _grid_base_and_step(field, k, n, points)
    i = next(m for m in range(n) if d[m] != 0)
    edges = []
    for point in lookup.values():
        edges.append(tuple(coeff_pos[tuple(point[j][m] for j in range(k))]
                           for m in range(n)))
    edges.sort(key=lambda e: e[i])
    witness = ForbiddenWitness(coordinate=i, edges=tuple(edges))
    if not witness_is_valid(support, n, witness):
        raise AssertionError("grid did not embed to a valid forbidden configuration")
    return witness
