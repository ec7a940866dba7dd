"""Forbidden-configuration search, extremal densities, and the answer game."""

import itertools
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st
import pytest

import oracles
from replab.errors import BudgetExceededError
from replab.forbidden import (ForbiddenWitness, all_points, build_answer_game,
                              check_winning_set_free, compute_eq,
                              enumerate_forbidden, find_forbidden,
                              forbidden_hypergraph, is_connected,
                              player_symbols, point_code, point_from_code,
                              projected_graph, strategy_from_witness,
                              winning_points, witness_is_valid)
from replab.games import Strategy, evaluate, exact_value, unit_tuples
from replab.repetition import ProductTuples, repeat
from replab.structures import ghz_support

UNIT3 = list(unit_tuples(3))
GHZ = list(ghz_support())


# -- codecs and helpers -----------------------------------------------------------


@given(st.integers(2, 4), st.integers(1, 4), st.integers(0, 10**6))
def test_point_code_round_trip(q, n, raw):
    c = raw % q**n
    assert point_code(point_from_code(c, q, n), q) == c


def test_all_points_in_code_order():
    pts = all_points(3, 2)
    assert pts[0] == (0, 0)
    assert pts[1] == (1, 0)
    assert pts[5] == (2, 1)
    assert len(pts) == 9


def test_player_symbols():
    assert player_symbols([(0, 5), (1, 3), (0, 3)]) == [[0, 1], [3, 5]]


# -- witness validation ------------------------------------------------------------


def _unit3_full_config(n, i):
    """The configuration using constant-elsewhere points at coordinate i."""
    edges = []
    for s in range(3):
        e = [0] * n
        e[i] = s
        edges.append(tuple(e))
    return ForbiddenWitness(coordinate=i, edges=tuple(edges))


def test_witness_is_valid_accepts_a_line():
    w = _unit3_full_config(2, 1)
    assert witness_is_valid(UNIT3, 2, w)
    assert w.point_set() == {(0, 0), (0, 1), (0, 2)}


def test_witness_is_valid_rejects_defects():
    good = _unit3_full_config(2, 0)
    assert witness_is_valid(UNIT3, 2, good)
    bad_coord = ForbiddenWitness(coordinate=5, edges=good.edges)
    assert not witness_is_valid(UNIT3, 2, bad_coord)
    bad_pin = ForbiddenWitness(coordinate=1, edges=good.edges)
    assert not witness_is_valid(UNIT3, 2, bad_pin)
    short = ForbiddenWitness(coordinate=0, edges=good.edges[:2])
    assert not witness_is_valid(UNIT3, 2, short)
    # restricting the allowed point set must be honoured
    assert not witness_is_valid(UNIT3, 2, good, points=[(0, 0), (1, 0)])
    # break the row-consistency condition: mix two different inactive digits
    mixed = ForbiddenWitness(coordinate=0, edges=((0, 0), (1, 1), (2, 0)))
    assert not witness_is_valid(UNIT3, 2, mixed)


# -- search against the naive oracle -----------------------------------------------


@pytest.mark.parametrize("support,n", [
    (UNIT3, 1), (UNIT3, 2), (GHZ, 1), (GHZ, 2),
    (list(unit_tuples(2)), 3),
])
def test_enumerate_matches_naive_on_full_support(support, n):
    engine = {w.point_set() for w in enumerate_forbidden(support, n)}
    naive = oracles.naive_forbidden(support, n, all_points(len(support), n))
    assert engine == naive


def test_enumerate_counts():
    assert len(list(enumerate_forbidden(UNIT3, 2))) == 7
    assert len(list(enumerate_forbidden(GHZ, 1))) == 1
    assert len(list(enumerate_forbidden(GHZ, 2))) == 12


@st.composite
def support_and_points(draw):
    k = draw(st.integers(2, 3))
    q = draw(st.integers(2, 3))
    alphabet = list(range(draw(st.integers(2, 3))))
    tuples = list(itertools.product(alphabet, repeat=k))
    support = draw(st.lists(st.sampled_from(tuples), unique=True,
                            min_size=q, max_size=q))
    n = draw(st.integers(1, 2))
    universe = all_points(q, n)
    points = draw(st.lists(st.sampled_from(universe), unique=True,
                           min_size=0, max_size=len(universe)))
    return support, n, points


@given(support_and_points())
def test_find_and_enumerate_match_naive_on_subsets(case):
    support, n, points = case
    naive = oracles.naive_forbidden(support, n, points)
    engine = {w.point_set() for w in enumerate_forbidden(support, n, points)}
    assert engine == naive
    first = find_forbidden(support, n, points)
    assert (first is not None) == bool(naive)
    if first is not None:
        assert witness_is_valid(support, n, first, points)
        assert first.point_set() in naive


def test_enumerate_point_budget():
    with pytest.raises(BudgetExceededError):
        list(enumerate_forbidden(UNIT3, 5))


# -- compute_eq ---------------------------------------------------------------------


def test_compute_eq_two_point_support():
    for support in (list(unit_tuples(2)), [(0, 0), (0, 1)]):
        for n in (1, 2, 3):
            rec = compute_eq(support, n)
            assert rec.value == Fraction(1, 2**n)
            assert rec.witness_size == 1


def test_compute_eq_unitvec3():
    rec1 = compute_eq(UNIT3, 1)
    assert rec1.value == Fraction(2, 3)
    rec2 = compute_eq(UNIT3, 2)
    assert rec2.value == Fraction(6, 9)
    assert rec2.witness_size == 6
    assert rec2.universe_size == 9
    assert rec2.witness == sorted(rec2.witness)
    assert find_forbidden(UNIT3, 2, rec2.witness) is None


def test_compute_eq_single_point_support():
    rec = compute_eq([(0, 0, 0)], 2)
    assert rec.value == 0
    assert rec.witness == []
    # consistent with the naive oracle: the lone point forms a configuration
    assert oracles.naive_forbidden([(0, 0, 0)], 2, all_points(1, 2))


def test_compute_eq_methods_agree():
    for support, n in ((UNIT3, 2), (GHZ, 2)):
        a = compute_eq(support, n, method="materialize")
        b = compute_eq(support, n, method="incremental")
        c = compute_eq(support, n, method="auto")
        assert a.value == b.value == c.value
        assert a.witness == b.witness == c.witness


def test_compute_eq_auto_falls_back_when_config_budget_is_tiny():
    full = compute_eq(UNIT3, 2)
    squeezed = compute_eq(UNIT3, 2, config_budget=1, method="auto")
    assert squeezed.value == full.value
    assert squeezed.witness == full.witness
    with pytest.raises(BudgetExceededError):
        compute_eq(UNIT3, 2, config_budget=1, method="materialize")


def test_compute_eq_validation():
    with pytest.raises(ValueError):
        compute_eq(UNIT3, 0)
    with pytest.raises(ValueError):
        compute_eq(UNIT3, 1, method="guess")
    with pytest.raises(BudgetExceededError):
        compute_eq(UNIT3, 2, point_budget=4)


def test_forbidden_hypergraph_edges():
    hyper = forbidden_hypergraph(UNIT3, 2)
    assert hyper.size == 9
    assert len(hyper.edges) == 7
    codes = {tuple(sorted(point_code(e, 3) for e in w.edges))
             for w in enumerate_forbidden(UNIT3, 2)}
    assert set(hyper.edges) == codes
    with pytest.raises(BudgetExceededError):
        forbidden_hypergraph(UNIT3, 2, config_budget=3)


# -- projected graphs ----------------------------------------------------------------


def test_projected_graph_connectivity():
    assert is_connected(projected_graph(UNIT3))
    assert is_connected(projected_graph(GHZ))
    assert not is_connected(projected_graph([(0, 0), (1, 1)]))


def test_projected_graph_adjacency():
    g = projected_graph([(0, 1), (1, 0)])
    assert set(g.vertices) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert g.adjacency[(0, 0)] == {(1, 1)}
    assert g.adjacency[(1, 0)] == {(0, 1)}


# -- the answer game ------------------------------------------------------------------


def test_build_answer_game_shape():
    rec = compute_eq(UNIT3, 1)
    game = build_answer_game(((0, 1),) * 3, UNIT3, 1, rec.witness)
    assert game.k == 3
    assert len(game.support) == 3
    for j in range(3):
        assert tuple(game.answer_alphabets[j]) == ((0, (0,)), (0, (1,)))


def test_build_answer_game_rejects_bad_input():
    with pytest.raises(ValueError):
        build_answer_game(((0, 1), (0, 1)), [(0, 0), (1, 1)], 1, [(0,)])
    with pytest.raises(ValueError):
        build_answer_game(((0, 1),) * 3, UNIT3, 1, [(0,), (1,), (2,)])


def test_witness_strategy_wins_exactly_on_the_witness():
    for support, alphabets in ((UNIT3, ((0, 1),) * 3), (GHZ, ((0, 1),) * 3)):
        for n in (1, 2):
            rec = compute_eq(support, n)
            game = build_answer_game(alphabets, support, n, rec.witness)
            rep = repeat(game, n)
            strat = strategy_from_witness(support, n)
            assert evaluate(rep, strat) == rec.value
            assert sorted(winning_points(rep, strat)) == rec.witness
            assert check_winning_set_free(rep, strat)


def test_single_shot_answer_game_value_below_one():
    rec = compute_eq(UNIT3, 1)
    game = build_answer_game(((0, 1),) * 3, UNIT3, 1, rec.witness)
    single = exact_value(game)
    assert single.value < 1
    rep1 = repeat(game, 1)
    assert exact_value(rep1).value == rec.value


def test_check_winning_set_free_requires_repeated_game():
    rec = compute_eq(UNIT3, 1)
    game = build_answer_game(((0, 1),) * 3, UNIT3, 1, rec.witness)
    strat = strategy_from_witness(UNIT3, 1)
    with pytest.raises(TypeError):
        check_winning_set_free(game, strat)


def test_all_product_strategies_win_on_free_sets_only():
    # every deterministic strategy of the repeated answer game (n = 1 here,
    # so the repetition is the game itself) has a forbidden-free winning set
    rec = compute_eq(UNIT3, 1)
    game = build_answer_game(((0, 1),) * 3, UNIT3, 1, rec.witness)
    rep = repeat(game, 1)
    domains = [rep.question_domain(j) for j in range(rep.k)]
    answers = [list(rep.answer_alphabets[j]) for j in range(rep.k)]
    count = 0
    for combo in itertools.product(*[
            itertools.product(range(len(answers[j])), repeat=len(domains[j]))
            for j in range(rep.k)]):
        tables = [
            {q: answers[j][combo[j][qi]] for qi, q in enumerate(domains[j])}
            for j in range(rep.k)]
        assert check_winning_set_free(rep, Strategy.from_tables(tables))
        count += 1
    assert count == 4**3
