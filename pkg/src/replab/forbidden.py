"""Forbidden configurations in repeated question supports.

Fix a question support Q (an ordered list of distinct k-tuples) and a
repetition count n.  Points of the n-fold support are index vectors
w = (w_0, .., w_{n-1}) with w_m in range(len(Q)); index vectors are ordered
by the little-endian code sum(w_m * q**m), matching the round order of
repeated games.

A forbidden configuration at coordinate i is a list of q points e(0), ..,
e(q-1) such that e(s)_i = s for every s, and such that each player's view is
consistent: for every player j, the row vector (Q[e(s)_0][j], ..,
Q[e(s)_{n-1}][j]) depends only on the player's own coordinate-i symbol
Q[s][j].  If a product strategy for the n-fold repetition of a game with
support Q won on all q points of such a configuration, reading off
coordinate i would win the base game with probability one.  Consequently,
winning sets of product strategies are free of forbidden configurations
whenever the base game's value is below one, and the maximum density of a
configuration-free subset of the repeated support bounds every repeated
value from above.

The search below walks coordinates i ascending and assigns to each cell
(player j, symbol v) the shared row vector of the edges whose coordinate-i
symbol for player j is v.  Cells are visited player-major with symbols in
sorted order, and candidate rows are enumerated in little-endian code order
over the free coordinates, so enumeration order is deterministic.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceededError
from .games import Game, Strategy
from .records import DensityRecord
from .repetition import ProductTuples, RepeatedGame
from .search import DEFAULT_POINT_BUDGET, ForbiddenHypergraph, max_free

DEFAULT_CONFIG_BUDGET = 10**6


@dataclass(frozen=True)
class ForbiddenWitness:
    """A forbidden configuration: the pinned coordinate and its q points,
    listed so that edges[s][coordinate] == s."""

    coordinate: int
    edges: tuple[tuple[int, ...], ...]

    def point_set(self) -> frozenset:
        return frozenset(self.edges)


def all_points(q: int, n: int) -> list[tuple[int, ...]]:
    """Every index vector of the n-fold support, in code order."""
    return [point_from_code(c, q, n) for c in range(q**n)]


def point_code(w: Sequence[int], q: int) -> int:
    return sum(v * q**m for m, v in enumerate(w))


def point_from_code(c: int, q: int, n: int) -> tuple[int, ...]:
    return tuple((c // q**m) % q for m in range(n))


def player_symbols(support: Sequence[tuple]) -> list[list]:
    """Per player, the sorted distinct symbols occurring in the support."""
    k = len(support[0])
    return [sorted({x[j] for x in support}) for j in range(k)]


def _row(support: Sequence[tuple], w: Sequence[int], j: int) -> tuple:
    """Player j's view of the point w: their question in each round."""
    return tuple(support[v][j] for v in w)


def witness_is_valid(support: Sequence[tuple], n: int, witness: ForbiddenWitness,
                     points: Iterable[Sequence[int]] | None = None) -> bool:
    """Check the defining conditions of a forbidden configuration."""
    q = len(support)
    k = len(support[0])
    i = witness.coordinate
    if not 0 <= i < n:
        return False
    if len(witness.edges) != q:
        return False
    for s, e in enumerate(witness.edges):
        if len(e) != n or any(not 0 <= v < q for v in e):
            return False
        if e[i] != s:
            return False
    if points is not None:
        allowed = {tuple(p) for p in points}
        if any(tuple(e) not in allowed for e in witness.edges):
            return False
    for j in range(k):
        by_symbol: dict = {}
        for s, e in enumerate(witness.edges):
            row = _row(support, e, j)
            sym = support[s][j]
            if by_symbol.setdefault(sym, row) != row:
                return False
    return True


def _search_witnesses(support: Sequence[tuple], n: int,
                      points: Sequence[Sequence[int]]) -> Iterator[ForbiddenWitness]:
    """Yield forbidden configurations inside the given point set.

    Coordinates ascending; at each coordinate, a DFS over cell assignments.
    Duplicate point sets discovered at later coordinates are suppressed.
    """
    q = len(support)
    k = len(support[0])
    pts = [tuple(p) for p in points]
    if len(pts) < q:
        return
    symbols = player_symbols(support)
    # rowindex[j][row] = positions (into pts) of points whose player-j view is row
    rowindex: list[dict] = []
    for j in range(k):
        index: dict = defaultdict(set)
        for pos, w in enumerate(pts):
            index[_row(support, w, j)].add(pos)
        rowindex.append(dict(index))
    cells = [(j, v) for j in range(k) for v in symbols[j]]
    # edge slots touched by each cell: slot s needs cell (j, support[s][j])
    touched = {cell: [s for s in range(q) if support[s][cell[0]] == cell[1]] for cell in cells}
    seen: set[frozenset] = set()
    empty: set = set()

    for i in range(n):
        options = {}
        for j, v in cells:
            opts = []
            for combo in itertools.product(symbols[j], repeat=n - 1):
                free = combo[::-1]  # little-endian: first free coordinate fastest
                row = free[:i] + (v,) + free[i:]
                if row in rowindex[j]:
                    opts.append(row)
            options[(j, v)] = opts
        candidates: list[set] = [set(range(len(pts))) for _ in range(q)]

        def dfs(ci: int) -> Iterator[ForbiddenWitness]:
            if ci == len(cells):
                edges = []
                for s in range(q):
                    assert len(candidates[s]) == 1, "complete assignment must pin each edge"
                    edges.append(pts[next(iter(candidates[s]))])
                witness = ForbiddenWitness(coordinate=i, edges=tuple(edges))
                key = witness.point_set()
                if key not in seen:
                    seen.add(key)
                    assert witness_is_valid(support, n, witness, pts)
                    yield witness
                return
            j, v = cells[ci]
            slots = touched[(j, v)]
            for row in options[(j, v)]:
                matches = rowindex[j].get(row, empty)
                saved = []
                ok = True
                for s in slots:
                    new = candidates[s] & matches
                    if not new:
                        ok = False
                        break
                    saved.append((s, candidates[s]))
                    candidates[s] = new
                if ok:
                    yield from dfs(ci + 1)
                for s, old in saved:
                    candidates[s] = old

        yield from dfs(0)


def find_forbidden(support: Sequence[tuple], n: int,
                   points: Sequence[Sequence[int]]) -> ForbiddenWitness | None:
    """First forbidden configuration inside points, or None if free."""
    for witness in _search_witnesses(support, n, points):
        return witness
    return None


def enumerate_forbidden(support: Sequence[tuple], n: int,
                        points: Sequence[Sequence[int]] | None = None,
                        point_budget: int = DEFAULT_POINT_BUDGET) -> Iterator[ForbiddenWitness]:
    """All forbidden configurations with points drawn from the given set
    (default: the whole n-fold support), deduplicated as point sets."""
    q = len(support)
    if points is None:
        if q**n > point_budget:
            raise BudgetExceededError(
                f"{q}**{n} points exceed the budget {point_budget}")
        points = all_points(q, n)
    return _search_witnesses(support, n, points)


def forbidden_hypergraph(support: Sequence[tuple], n: int,
                         point_budget: int = DEFAULT_POINT_BUDGET,
                         config_budget: int = DEFAULT_CONFIG_BUDGET) -> ForbiddenHypergraph:
    """The hypergraph on the n-fold support whose edges are the forbidden
    configurations; free sets of this hypergraph are exactly the
    configuration-free subsets."""
    q = len(support)
    edges = []
    for witness in enumerate_forbidden(support, n, point_budget=point_budget):
        edges.append(tuple(sorted(point_code(e, q) for e in witness.edges)))
        if len(edges) > config_budget:
            raise BudgetExceededError(
                f"more than {config_budget} forbidden configurations")
    return ForbiddenHypergraph(q**n, edges)


def compute_eq(support: Sequence[tuple], n: int, *,
               point_budget: int = DEFAULT_POINT_BUDGET,
               config_budget: int = DEFAULT_CONFIG_BUDGET,
               method: str = "auto") -> DensityRecord:
    """Maximum density of a forbidden-configuration-free subset of the
    n-fold support, with an extremal witness.

    method "materialize" enumerates all configurations into a hypergraph and
    runs the exact solver; "incremental" branches over points directly,
    querying find_forbidden on each partial set, and never holds the
    configuration family in memory; "auto" materialises while the
    configuration count stays within config_budget and falls back to the
    incremental search beyond it.  Both paths return identical records.

    The witness is re-verified by an independent find_forbidden call before
    the record is returned.
    """
    q = len(support)
    n = int(n)
    if n < 1:
        raise ValueError("repetition count must be >= 1")
    if q**n > point_budget:
        raise BudgetExceededError(
            f"{q}**{n} points exceed the budget {point_budget}; "
            "export the instance with a WCNF dump instead")
    if q == 1:
        # the single point is itself a forbidden configuration, so only the
        # empty set is free
        return _eq_record(support, n, 0, [], "exact-bb")
    if method not in ("auto", "materialize", "incremental"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "materialize"):
        try:
            hyper = forbidden_hypergraph(support, n, point_budget, config_budget)
        except BudgetExceededError:
            if method == "materialize":
                raise
            hyper = None
        if hyper is not None:
            size, chosen = max_free(hyper, budget=point_budget)
            witness = [point_from_code(c, q, n) for c in chosen]
            return _eq_record(support, n, size, witness, "exact-bb")
    size, witness = _incremental_max_free(support, n)
    return _eq_record(support, n, size, witness, "exact-bb")


def _eq_record(support: Sequence[tuple], n: int, size: int,
               witness: list, method: str) -> DensityRecord:
    q = len(support)
    witness = sorted(tuple(w) for w in witness)
    if find_forbidden(support, n, witness) is not None:
        raise AssertionError("extremal witness failed the independent freeness check")
    return DensityRecord(
        family="forbidden-free",
        params={"q": q, "n": n},
        value=Fraction(size, q**n),
        witness_size=size,
        universe_size=q**n,
        witness=witness,
        method=method,
    )


def _incremental_max_free(support: Sequence[tuple], n: int) -> tuple[int, list]:
    """Include-first branch and bound over points in code order, feasibility
    checked by find_forbidden on the partial set.  The first set of maximum
    size found along the include-first walk is the lexicographically first
    maximum witness, matching the materialised path."""
    q = len(support)
    pts = all_points(q, n)
    best_size = 0
    best: list = []

    def bb(idx: int, chosen: list) -> None:
        nonlocal best_size, best
        if len(chosen) + (len(pts) - idx) <= best_size:
            return
        if idx == len(pts):
            if len(chosen) > best_size:
                best_size = len(chosen)
                best = list(chosen)
            return
        trial = chosen + [pts[idx]]
        if find_forbidden(support, n, trial) is None:
            bb(idx + 1, trial)
        bb(idx + 1, chosen)

    bb(0, [])
    return best_size, best


# -- projected graphs ---------------------------------------------------------


@dataclass(frozen=True)
class ProjectedGraph:
    """The k-partite graph on (player, symbol) vertices induced by a support:
    two vertices of different players are adjacent when some support tuple
    shows both symbols."""

    vertices: tuple[tuple[int, object], ...]
    adjacency: dict


def projected_graph(support: Sequence[tuple]) -> ProjectedGraph:
    symbols = player_symbols(support)
    vertices = tuple((j, v) for j in range(len(symbols)) for v in symbols[j])
    adjacency: dict = {v: set() for v in vertices}
    k = len(symbols)
    for x in support:
        for j1 in range(k):
            for j2 in range(j1 + 1, k):
                adjacency[(j1, x[j1])].add((j2, x[j2]))
                adjacency[(j2, x[j2])].add((j1, x[j1]))
    return ProjectedGraph(vertices=vertices, adjacency=adjacency)


def is_connected(graph: ProjectedGraph) -> bool:
    if not graph.vertices:
        return True
    seen = {graph.vertices[0]}
    frontier = [graph.vertices[0]]
    while frontier:
        v = frontier.pop()
        for w in graph.adjacency[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return len(seen) == len(graph.vertices)


# -- the answer game over a free set ------------------------------------------


def answer_game_predicate(support: Sequence[tuple], n: int,
                          free_points: Iterable[Sequence[int]]):
    """Predicate of the answer game: every player names the same coordinate
    i and a full question vector; the named vectors must assemble to a point
    of the free set whose coordinate-i column is the question actually
    asked."""
    support_pos = {tuple(x): s for s, x in enumerate(support)}
    k = len(support[0])
    wset = {tuple(int(v) for v in w) for w in free_points}

    def predicate(x, a):
        i0 = a[0][0]
        if any(aj[0] != i0 for aj in a):
            return False
        vec = []
        for m in range(n):
            column = tuple(a[j][1][m] for j in range(k))
            s = support_pos.get(column)
            if s is None:
                return False
            vec.append(s)
        if tuple(vec) not in wset:
            return False
        return tuple(a[j][1][i0] for j in range(k)) == tuple(x)

    return predicate


def build_answer_game(question_alphabets: Sequence[Sequence], support: Sequence[tuple],
                      n: int, free_points: Iterable[Sequence[int]]) -> Game:
    """The game whose n-fold repetition has value exactly
    |free_points| / q**n.

    Questions are the support tuples, uniformly weighted.  Player j's answers
    are pairs (i, y) of a coordinate i < n and a vector y over the player's
    question alphabet.  Requires the projected graph of the support to be
    connected (this keeps the single-shot value below one) and the point set
    to be forbidden-free.
    """
    free = sorted(tuple(int(v) for v in w) for w in free_points)
    q = len(support)
    if not is_connected(projected_graph(support)):
        raise ValueError("projected graph of the support is disconnected")
    bad = find_forbidden(support, n, free)
    if bad is not None:
        raise ValueError(f"point set contains a forbidden configuration at "
                         f"coordinate {bad.coordinate}")
    answer_alphabets = []
    for j, alphabet in enumerate(question_alphabets):
        pairs = tuple((i, y) for i in range(n) for y in ProductTuples(alphabet, n))
        answer_alphabets.append(pairs)
    return Game(
        question_alphabets=[tuple(a) for a in question_alphabets],
        answer_alphabets=answer_alphabets,
        support=support,
        weights=[Fraction(1, q)] * q,
        predicate=answer_game_predicate(support, n, free),
        predicate_spec={"type": "preset", "name": "answer-game",
                        "params": {"n": n, "witness": [list(w) for w in free]}},
    )


def strategy_from_witness(support: Sequence[tuple], n: int) -> Strategy:
    """The product strategy for the n-fold answer game that wins exactly on
    the free set: on question vector y, player j answers (i, y) in round i.

    Its winning probability on repeat(build_answer_game(..), n) is
    |free_points| / q**n, matching the density record of the free set."""
    symbols = player_symbols(support)
    tables = []
    for j in range(len(symbols)):
        table = {}
        for xs in itertools.product(symbols[j], repeat=n):
            table[xs] = tuple((i, xs) for i in range(n))
        tables.append(table)
    return Strategy(tuple(tables))


def winning_points(game: RepeatedGame, strategy: Strategy) -> list[tuple[int, ...]]:
    """Index vectors of the repeated support tuples on which the strategy
    wins."""
    out = []
    for c in range(len(game.support)):
        x = game.support[c]
        if game.predicate(x, strategy.answers(x)):
            out.append(game.round_index(c))
    return out


def check_winning_set_free(game: RepeatedGame, strategy: Strategy) -> bool:
    """Whether the strategy's winning set, read as index vectors of the base
    support, contains no forbidden configuration."""
    if not isinstance(game, RepeatedGame):
        raise TypeError("check_winning_set_free needs a repeated game")
    points = winning_points(game, strategy)
    return find_forbidden(list(game.base.support), game.n, points) is None
