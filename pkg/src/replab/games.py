"""Finite k-player cooperative games and their exact values.

A game consists of per-player question and answer alphabets, a rational
probability distribution over a support of question tuples, and a win
predicate.  Players answer through deterministic strategies (one table per
player, no communication); the value of the game is the maximum winning
probability over product strategies.  All probabilities are Fractions, so
every reported value is exact.

exact_value runs a two-phase branch and bound over the joint strategy space:
phase one finds the optimal winning probability, pruning a branch as soon as
the weight already lost makes the incumbent unbeatable; phase two re-walks
the space in canonical order (players ascending, questions in alphabet
order, answers in alphabet order) and returns the first strategy attaining
the optimum, which is therefore the lexicographically first maximiser.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import BudgetExceededError, IncompleteStrategyError, SchemaError

DEFAULT_STRATEGY_BUDGET = 10**8
_ACCEPT_TABLE_LIMIT = 1 << 16


@dataclass(frozen=True, eq=True)
class Strategy:
    """One answer table per player, mapping each question to an answer."""

    tables: tuple[Mapping, ...]

    def answer(self, player: int, question):
        try:
            return self.tables[player][question]
        except KeyError:
            raise IncompleteStrategyError(
                f"player {player} has no answer for question {question!r}") from None

    def answers(self, questions: Sequence) -> tuple:
        return tuple(self.answer(j, x) for j, x in enumerate(questions))

    @staticmethod
    def from_tables(tables: Sequence[Mapping]) -> "Strategy":
        return Strategy(tuple(dict(t) for t in tables))


class Game:
    """A finite k-player game.

    question_alphabets / answer_alphabets: one ordered alphabet per player.
    support: distinct question k-tuples with positive rational weights
    summing to one.  predicate(x, a) decides whether answer tuple a wins on
    question tuple x; it must be total on support x answer tuples.

    Alphabets, support and weights may be arbitrary sequences; repeated games
    pass lazy sequences so that nothing of size alphabet**n is materialised
    up front.  predicate_spec optionally carries a JSON-serialisable
    description of the predicate for round-tripping through game files.
    """

    def __init__(self, question_alphabets, answer_alphabets, support, weights,
                 predicate: Callable[[tuple, tuple], bool],
                 predicate_spec: dict | None = None, validate: bool = True):
        self.question_alphabets = tuple(
            tuple(a) if isinstance(a, (list, tuple)) else a for a in question_alphabets)
        self.answer_alphabets = tuple(
            tuple(a) if isinstance(a, (list, tuple)) else a for a in answer_alphabets)
        self.support = tuple(tuple(x) for x in support) if isinstance(support, (list, tuple)) else support
        self.weights = tuple(Fraction(w) for w in weights) if isinstance(weights, (list, tuple)) else weights
        self.predicate = predicate
        self.predicate_spec = predicate_spec
        self.k = len(self.question_alphabets)
        if validate:
            self._validate()

    def _validate(self) -> None:
        if len(self.answer_alphabets) != self.k:
            raise SchemaError("question and answer alphabets disagree on player count")
        if len(self.support) != len(self.weights):
            raise SchemaError("support and weights must have equal length")
        if not self.support:
            raise SchemaError("support must be non-empty")
        seen = set()
        for x in self.support:
            if len(x) != self.k:
                raise SchemaError(f"support tuple {x!r} is not a {self.k}-tuple")
            for j, sym in enumerate(x):
                if sym not in self.question_alphabets[j]:
                    raise SchemaError(f"symbol {sym!r} not in player {j} question alphabet")
            if x in seen:
                raise SchemaError(f"duplicate support tuple {x!r}")
            seen.add(x)
        for w in self.weights:
            if w <= 0:
                raise SchemaError("support weights must be positive")
        if sum(self.weights) != 1:
            raise SchemaError("support weights must sum to 1")

    def question_domain(self, player: int) -> list:
        """Questions player may receive, in alphabet order."""
        seen = {x[player] for x in self.support}
        return [s for s in self.question_alphabets[player] if s in seen]

    def __repr__(self) -> str:
        return f"Game(k={self.k}, support={len(self.support)})"


@dataclass(frozen=True)
class GameValue:
    value: Fraction
    strategy: Strategy


def evaluate(game: Game, strategy: Strategy) -> Fraction:
    """Exact winning probability of a product strategy."""
    total = Fraction(0)
    for x, w in zip(game.support, game.weights):
        if game.predicate(x, strategy.answers(x)):
            total += w
    return total


def winning_set(game: Game, strategy: Strategy) -> tuple:
    """Support tuples on which the strategy wins, in support order."""
    return tuple(x for x in game.support if game.predicate(x, strategy.answers(x)))


def mixture_value(game: Game, mixture: Sequence[tuple[Fraction, Strategy]]) -> Fraction:
    """Winning probability of a rational mixture of strategies.

    The mixture weights must be non-negative rationals summing to one.  By
    linearity this never exceeds exact_value(game).value, a fact the test
    suite exercises.
    """
    weights = [Fraction(w) for w, _ in mixture]
    if any(w < 0 for w in weights):
        raise ValueError("mixture weights must be non-negative")
    if sum(weights) != 1:
        raise ValueError("mixture weights must sum to 1")
    return sum((w * evaluate(game, s) for w, s in mixture), Fraction(0))


class _StrategySearch:
    """Shared machinery for the two exact_value phases.

    A cell is a pair (player, question); a joint strategy is an assignment of
    an answer index to every cell.  Support tuples are scored the moment
    their last cell is assigned, so losses accumulate as early as possible.
    """

    def __init__(self, game: Game, budget: int):
        support = list(game.support)
        if not support:
            raise ValueError("cannot solve a game with empty support")
        self.game = game
        self.k = game.k
        self.support = support
        self.weights = list(game.weights)
        self.total_weight = sum(self.weights, Fraction(0))
        self.domains = [game.question_domain(j) for j in range(self.k)]
        self.answers = [list(a) for a in game.answer_alphabets]
        self.sizes = [len(a) for a in self.answers]
        space = 1
        for j in range(self.k):
            if self.sizes[j] == 0:
                raise SchemaError(f"player {j} has an empty answer alphabet")
            space *= self.sizes[j] ** len(self.domains[j])
            if space > budget:
                raise BudgetExceededError(
                    f"strategy space exceeds budget {budget}; "
                    "raise the budget to force the search")
        self.space = space
        # acceptance tables: per support tuple, the set of accepted answer
        # index combinations, when the combination count is small enough
        combos = 1
        for s in self.sizes:
            combos *= s
        self._accept: list[set | None] = []
        if combos <= _ACCEPT_TABLE_LIMIT:
            index_ranges = [range(s) for s in self.sizes]
            for x in support:
                acc = set()
                for combo in itertools.product(*index_ranges):
                    a = tuple(self.answers[j][combo[j]] for j in range(self.k))
                    if game.predicate(x, a):
                        acc.add(combo)
                self._accept.append(acc)
        else:
            self._accept = [None] * len(support)

    def cells_lex(self) -> list[tuple[int, object]]:
        return [(j, q) for j in range(self.k) for q in self.domains[j]]

    def cells_by_first_use(self) -> list[tuple[int, object]]:
        out, seen = [], set()
        for x in self.support:
            for j in range(self.k):
                cell = (j, x[j])
                if cell not in seen:
                    seen.add(cell)
                    out.append(cell)
        return out

    def _accepts(self, t: int, combo: tuple[int, ...]) -> bool:
        acc = self._accept[t]
        if acc is not None:
            return combo in acc
        a = tuple(self.answers[j][combo[j]] for j in range(self.k))
        return self.game.predicate(self.support[t], a)

    def run(self, cells: list[tuple[int, object]], cutoff: Fraction,
            stop_at_cutoff: bool) -> tuple[Fraction, list[int] | None]:
        """Branch and bound over the given cell order.

        Prunes any branch whose lost weight exceeds total - cutoff.  With
        stop_at_cutoff the first surviving leaf is returned (its value is
        then exactly cutoff when cutoff is the optimum); otherwise the
        incumbent is raised as better leaves appear and the final best value
        is returned.
        """
        ncells = len(cells)
        cell_index = {c: i for i, c in enumerate(cells)}
        tuple_cells = [tuple(cell_index[(j, x[j])] for j in range(self.k)) for x in self.support]
        touching: list[list[int]] = [[] for _ in range(ncells)]
        for t, tc in enumerate(tuple_cells):
            for c in set(tc):
                touching[c].append(t)
        remaining = [len(set(tc)) for tc in tuple_cells]
        assign = [-1] * ncells
        sizes_at = [self.sizes[cells[c][0]] for c in range(ncells)]
        best = cutoff
        best_assign: list[int] | None = None
        done = False

        def dfs(ci: int, lost: Fraction) -> None:
            nonlocal best, best_assign, done
            if done or lost > self.total_weight - best:
                return
            if ci == ncells:
                value = self.total_weight - lost
                if stop_at_cutoff:
                    best_assign = assign.copy()
                    done = True
                elif value > best or best_assign is None:
                    best = max(best, value)
                    best_assign = assign.copy()
                return
            for pos in range(sizes_at[ci]):
                assign[ci] = pos
                extra = Fraction(0)
                completed = []
                for t in touching[ci]:
                    remaining[t] -= 1
                    completed.append(t)
                    if remaining[t] == 0:
                        combo = tuple(assign[c] for c in tuple_cells[t])
                        if not self._accepts(t, combo):
                            extra += self.weights[t]
                dfs(ci + 1, lost + extra)
                for t in completed:
                    remaining[t] += 1
                assign[ci] = -1
                if done:
                    return

        dfs(0, Fraction(0))
        return best, best_assign

    def strategy_from(self, cells: list[tuple[int, object]], assign: list[int]) -> Strategy:
        tables: list[dict] = [dict() for _ in range(self.k)]
        for (j, q), pos in zip(cells, assign):
            tables[j][q] = self.answers[j][pos]
        return Strategy.from_tables(tables)


def exact_value(game: Game, budget: int = DEFAULT_STRATEGY_BUDGET) -> GameValue:
    """Exact game value and the lexicographically first optimal strategy.

    The strategy order is: players ascending, each player's questions in
    alphabet order, answers compared by alphabet position.  Raises
    BudgetExceededError when the joint strategy space is larger than budget.
    """
    search = _StrategySearch(game, budget)
    # phase one: optimum value, over a cell order that completes support
    # tuples early so losses prune aggressively
    optimum, _ = search.run(search.cells_by_first_use(), Fraction(0), stop_at_cutoff=False)
    # phase two: first leaf in canonical order reaching the optimum
    cells = search.cells_lex()
    _, assign = search.run(cells, optimum, stop_at_cutoff=True)
    assert assign is not None, "phase two must rediscover the optimum"
    strategy = search.strategy_from(cells, assign)
    value = evaluate(game, strategy)
    assert value == optimum, "reconstructed strategy must attain the optimum"
    return GameValue(value=optimum, strategy=strategy)


# -- presets ---------------------------------------------------------------


def _anticorr_predicate(x: tuple, a: tuple) -> bool:
    hot = [a[j] for j in range(len(x)) if x[j] == 0]
    return len(set(hot)) == len(hot)


def _always_reject(x: tuple, a: tuple) -> bool:
    return False


def unit_tuples(q: int) -> tuple[tuple[int, ...], ...]:
    """The q question tuples (1,0,..,0), (0,1,0,..,0), .., (0,..,0,1)."""
    return tuple(tuple(1 if j == s else 0 for j in range(q)) for s in range(q))


def preset_game(name: str, **params) -> Game:
    """Built-in game families.

    anticorr(q): q players, uniform over the unit question tuples; the
        players receiving 0 must produce pairwise different answers in
        {0, 1}.  At q = 3 (two zero-receivers per question) the value is
        2/3; at q = 2 the condition is vacuous and the value is 1.
    unitvec(q): the same question support with a placeholder always-reject
        predicate; useful as a bare question set.
    ghz: 3 players, questions the even-parity bit triples, placeholder
        predicate.
    grid(p, r, k): k+r players with the grid question set over GF(p**r),
        placeholder predicate.
    """
    if name == "anticorr":
        q = int(params.pop("q", 3))
        _reject_unknown(params)
        if q < 2:
            raise ValueError("anticorr needs q >= 2")
        support = unit_tuples(q)
        return Game(
            question_alphabets=((0, 1),) * q,
            answer_alphabets=((0, 1),) * q,
            support=support,
            weights=(Fraction(1, q),) * q,
            predicate=_anticorr_predicate,
            predicate_spec={"type": "preset", "name": "anticorr", "params": {"q": q}},
        )
    if name == "unitvec":
        q = int(params.pop("q", 3))
        _reject_unknown(params)
        if q < 1:
            raise ValueError("unitvec needs q >= 1")
        support = unit_tuples(q)
        return Game(
            question_alphabets=((0, 1),) * q,
            answer_alphabets=((0,),) * q,
            support=support,
            weights=(Fraction(1, q),) * q,
            predicate=_always_reject,
            predicate_spec={"type": "preset", "name": "allreject"},
        )
    if name == "ghz":
        _reject_unknown(params)
        support = tuple((x, y, x ^ y) for x in (0, 1) for y in (0, 1))
        return Game(
            question_alphabets=((0, 1),) * 3,
            answer_alphabets=((0,),) * 3,
            support=support,
            weights=(Fraction(1, 4),) * 4,
            predicate=_always_reject,
            predicate_spec={"type": "preset", "name": "allreject"},
        )
    if name == "grid":
        from . import structures  # deferred: structures imports this module's types

        p = int(params.pop("p", 2))
        r = int(params.pop("r", 1))
        kdim = int(params.pop("k", 2))
        _reject_unknown(params)
        from .fields import FiniteField

        field = FiniteField(p, r)
        support = structures.grid_question_set(field, kdim)
        players = kdim + r
        return Game(
            question_alphabets=(tuple(field.elements),) * players,
            answer_alphabets=((0,),) * players,
            support=support,
            weights=(Fraction(1, len(support)),) * len(support),
            predicate=_always_reject,
            predicate_spec={"type": "preset", "name": "allreject"},
        )
    raise ValueError(f"unknown preset {name!r}")


def _reject_unknown(params: dict) -> None:
    if params:
        raise ValueError(f"unknown preset parameters: {sorted(params)}")


# -- JSON round-tripping -----------------------------------------------------


def _to_jsonable(obj):
    if isinstance(obj, tuple):
        return [_to_jsonable(v) for v in obj]
    return obj


def _from_jsonable(obj):
    if isinstance(obj, list):
        return tuple(_from_jsonable(v) for v in obj)
    return obj


def _fraction_to_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational literal {text!r}") from exc


def answer_index(game: Game, a: Sequence) -> int:
    """Mixed-radix index of an answer tuple, player 0 least significant."""
    idx, scale = 0, 1
    for j in range(game.k):
        alphabet = game.answer_alphabets[j]
        try:
            pos = alphabet.index(a[j])
        except ValueError:
            raise SchemaError(f"answer {a[j]!r} not in player {j} alphabet") from None
        idx += pos * scale
        scale *= len(alphabet)
    return idx


def answer_at(game: Game, idx: int) -> tuple:
    out = []
    for j in range(game.k):
        alphabet = game.answer_alphabets[j]
        out.append(alphabet[idx % len(alphabet)])
        idx //= len(alphabet)
    return tuple(out)


_TABLE_EXPORT_LIMIT = 1 << 24


def game_to_json(game: Game) -> dict:
    """JSON-serialisable description of a game.

    Predicates described by a predicate_spec are exported as-is; otherwise a
    dense accept table is enumerated, provided support x answers stays under
    the export limit.
    """
    doc = {
        "k": game.k,
        "question_alphabets": [_to_jsonable(tuple(a)) for a in game.question_alphabets],
        "answer_alphabets": [_to_jsonable(tuple(a)) for a in game.answer_alphabets],
        "support": [
            {"x": _to_jsonable(x), "weight": _fraction_to_str(w)}
            for x, w in zip(game.support, game.weights)
        ],
    }
    if game.predicate_spec is not None:
        doc["predicate"] = game.predicate_spec
    else:
        combos = 1
        for a in game.answer_alphabets:
            combos *= len(a)
        if combos * len(game.support) > _TABLE_EXPORT_LIMIT:
            raise SchemaError("predicate has no spec and is too large to tabulate")
        accepts = []
        for xi, x in enumerate(game.support):
            for ai in range(combos):
                if game.predicate(x, answer_at(game, ai)):
                    accepts.append([xi, ai])
        doc["predicate"] = {"type": "table", "accepts": accepts}
    return doc


def predicate_from_spec(spec: dict, question_alphabets, answer_alphabets,
                        support) -> Callable[[tuple, tuple], bool]:
    """Build a predicate callable from its JSON description."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise SchemaError("predicate spec must be an object with a 'type'")
    ptype = spec["type"]
    if ptype == "table":
        support_pos = {x: i for i, x in enumerate(support)}
        radices = [len(a) for a in answer_alphabets]
        positions = [{sym: p for p, sym in enumerate(a)} for a in answer_alphabets]
        accepts = set()
        for item in spec.get("accepts", []):
            if not (isinstance(item, (list, tuple)) and len(item) == 2):
                raise SchemaError("table accepts entries must be [x_index, answer_index]")
            accepts.add((int(item[0]), int(item[1])))

        def table_predicate(x, a):
            xi = support_pos.get(tuple(x))
            if xi is None:
                return False
            idx, scale = 0, 1
            for j, sym in enumerate(a):
                pos = positions[j].get(sym)
                if pos is None:
                    return False
                idx += pos * scale
                scale *= radices[j]
            return (xi, idx) in accepts

        return table_predicate
    if ptype == "preset":
        name = spec.get("name")
        params = spec.get("params", {})
        if name == "anticorr":
            return _anticorr_predicate
        if name == "allreject":
            return _always_reject
        if name == "allaccept":
            return lambda x, a: True
        if name == "answer-game":
            from . import forbidden  # deferred: forbidden imports this module

            witness = tuple(tuple(int(v) for v in w) for w in params.get("witness", []))
            return forbidden.answer_game_predicate(support, int(params["n"]), witness)
        raise SchemaError(f"unknown preset predicate {name!r}")
    raise SchemaError(f"unknown predicate type {ptype!r}")


def game_from_json(doc: dict) -> Game:
    """Inverse of game_to_json.  Raises SchemaError on malformed documents."""
    if not isinstance(doc, dict):
        raise SchemaError("game document must be a JSON object")
    for key in ("k", "question_alphabets", "answer_alphabets", "support", "predicate"):
        if key not in doc:
            raise SchemaError(f"game document missing field {key!r}")
    k = doc["k"]
    qalpha = [_from_jsonable(a) for a in doc["question_alphabets"]]
    aalpha = [_from_jsonable(a) for a in doc["answer_alphabets"]]
    if len(qalpha) != k or len(aalpha) != k:
        raise SchemaError("alphabet lists must have length k")
    support, weights = [], []
    for item in doc["support"]:
        if not isinstance(item, dict) or "x" not in item or "weight" not in item:
            raise SchemaError("support entries must be objects with 'x' and 'weight'")
        support.append(_from_jsonable(item["x"]))
        weights.append(parse_fraction(str(item["weight"])))
    predicate = predicate_from_spec(doc["predicate"], qalpha, aalpha, support)
    try:
        return Game(qalpha, aalpha, support, weights, predicate,
                    predicate_spec=doc["predicate"])
    except SchemaError:
        raise
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed game document: {exc}") from exc


def strategy_to_json(game: Game, strategy: Strategy) -> dict:
    """Per-player answer tables keyed by question, in alphabet order."""
    players = []
    for j in range(game.k):
        entries = []
        for q in game.question_domain(j):
            entries.append({"question": _to_jsonable(q),
                            "answer": _to_jsonable(strategy.tables[j][q])})
        players.append(entries)
    return {"players": players}


def strategy_from_json(doc: dict) -> Strategy:
    if not isinstance(doc, dict) or "players" not in doc:
        raise SchemaError("strategy document must contain 'players'")
    tables = []
    for entries in doc["players"]:
        table = {}
        for item in entries:
            table[_from_jsonable(item["question"])] = _from_jsonable(item["answer"])
        tables.append(table)
    return Strategy.from_tables(tables)
