"""Parallel repetition of games.

The n-fold repetition plays n independent rounds of the base game at once:
the referee draws n support tuples independently, each player sees their own
n questions as a single tuple and answers all rounds in one shot, and the
players win only if every round's predicate accepts.

Round tuples are indexed little-endian: the repeated support element with
index c plays base round c % q first (coordinate 0), then (c // q) % q, and
so on.  Per-player question and answer tuples use the same convention, so a
tuple's index is sum(position_i * radix**i).  Support, weights and alphabets
of the repeated game are lazy sequences; nothing of size alphabet**n is
materialised until something iterates it.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from fractions import Fraction

from .errors import BudgetExceededError
from .games import Game, Strategy

DEFAULT_REPEAT_BUDGET = 1 << 22


class TupleCodec:
    """Bijection between tuples over an alphabet and integers.

    Coordinate 0 is the least significant digit: encode((a, b)) with radix q
    is index(a) + q * index(b).
    """

    def __init__(self, alphabet: Sequence, n: int):
        self.alphabet = tuple(alphabet)
        self.n = n
        self._pos = {sym: i for i, sym in enumerate(self.alphabet)}
        self.size = len(self.alphabet) ** n

    def encode(self, items: Sequence) -> int:
        if len(items) != self.n:
            raise ValueError(f"expected a {self.n}-tuple")
        code, scale = 0, 1
        for sym in items:
            code += self._pos[sym] * scale
            scale *= len(self.alphabet)
        return code

    def decode(self, code: int) -> tuple:
        if not 0 <= code < self.size:
            raise ValueError(f"code {code} out of range")
        out = []
        radix = len(self.alphabet)
        for _ in range(self.n):
            out.append(self.alphabet[code % radix])
            code //= radix
        return tuple(out)


class ProductTuples(Sequence):
    """Lazy sequence of all n-tuples over an alphabet, in codec order."""

    def __init__(self, alphabet: Sequence, n: int):
        self.codec = TupleCodec(alphabet, n)

    def __len__(self) -> int:
        return self.codec.size

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return self.codec.decode(i)

    def __contains__(self, item) -> bool:
        try:
            self.codec.encode(item)
            return True
        except (KeyError, ValueError, TypeError):
            return False


class _RepeatedSupport(Sequence):
    """Support of the repeated game: element c is the per-player transpose of
    base support tuples (Q[c % q], Q[(c // q) % q], ..)."""

    def __init__(self, base_support: Sequence, k: int, n: int):
        self.base = base_support
        self.k = k
        self.n = n
        self.q = len(base_support)

    def __len__(self) -> int:
        return self.q**self.n

    def __getitem__(self, c):
        if isinstance(c, slice):
            return [self[j] for j in range(*c.indices(len(self)))]
        if c < 0:
            c += len(self)
        if not 0 <= c < len(self):
            raise IndexError(c)
        rounds = []
        for _ in range(self.n):
            rounds.append(self.base[c % self.q])
            c //= self.q
        return tuple(tuple(x[j] for x in rounds) for j in range(self.k))


class _RepeatedWeights(Sequence):
    def __init__(self, base_weights: Sequence, n: int):
        self.base = [Fraction(w) for w in base_weights]
        self.n = n
        self.q = len(self.base)

    def __len__(self) -> int:
        return self.q**self.n

    def __getitem__(self, c):
        if isinstance(c, slice):
            return [self[j] for j in range(*c.indices(len(self)))]
        if c < 0:
            c += len(self)
        if not 0 <= c < len(self):
            raise IndexError(c)
        w = Fraction(1)
        for _ in range(self.n):
            w *= self.base[c % self.q]
            c //= self.q
        return w


class RepeatedGame(Game):
    """The n-fold parallel repetition of a base game."""

    def __init__(self, base: Game, n: int):
        self.base = base
        self.n = n
        k = base.k
        predicate = self._build_predicate(base, n, k)
        super().__init__(
            question_alphabets=[ProductTuples(a, n) for a in base.question_alphabets],
            answer_alphabets=[ProductTuples(a, n) for a in base.answer_alphabets],
            support=_RepeatedSupport(base.support, k, n),
            weights=_RepeatedWeights(base.weights, n),
            predicate=predicate,
            predicate_spec=None,
            validate=False,
        )

    @staticmethod
    def _build_predicate(base: Game, n: int, k: int):
        def predicate(x, a):
            for i in range(n):
                xi = tuple(x[j][i] for j in range(k))
                ai = tuple(a[j][i] for j in range(k))
                if not base.predicate(xi, ai):
                    return False
            return True

        return predicate

    def round_index(self, c: int) -> tuple[int, ...]:
        """Base support indices of repeated support element c, round 0 first."""
        out = []
        q = len(self.base.support)
        for _ in range(self.n):
            out.append(c % q)
            c //= q
        return tuple(out)

    def __repr__(self) -> str:
        return f"RepeatedGame(base={self.base!r}, n={self.n})"


def repeat(game: Game, n: int, budget: int = DEFAULT_REPEAT_BUDGET) -> RepeatedGame:
    """The n-fold repetition of game.

    Construction is lazy, but refuses instances whose support or any single
    alphabet would exceed budget if enumerated, since every consumer of the
    result eventually walks those sequences.
    """
    if n < 1:
        raise ValueError("repetition count must be >= 1")
    if len(game.support) ** n > budget:
        raise BudgetExceededError(f"repeated support exceeds budget {budget}")
    for alphabet in (*game.question_alphabets, *game.answer_alphabets):
        if len(alphabet) ** n > budget:
            raise BudgetExceededError(f"repeated alphabet exceeds budget {budget}")
    return RepeatedGame(game, n)


def independent_strategy(strategy: Strategy, n: int) -> Strategy:
    """Play a base strategy independently in each of n rounds.

    The resulting tables are total on the n-fold product of each base table's
    domain, so the strategy is valid for repeat(g, n) whenever the base
    strategy is valid for g.  Its winning probability factorises across
    rounds; in particular it attains value(g)**n when the base strategy is
    optimal, the generic lower bound for repeated values.
    """
    tables = []
    for table in strategy.tables:
        domain = ProductTuples(list(table.keys()), n)
        new = {}
        for xs in domain:
            new[xs] = tuple(table[x] for x in xs)
        tables.append(new)
    return Strategy(tuple(tables))
