"""Exact tools for multiplayer game values, parallel repetition, and
forbidden-configuration densities.

The package computes, with exact rational arithmetic throughout:

  * values of finite k-player cooperative games and their n-fold parallel
    repetitions (games, repetition);
  * forbidden configurations of repeated question supports, the maximum
    density of configuration-free sets, and the answer-game construction
    whose repeated value equals that density (forbidden);
  * extremal densities of combinatorial lines, squares, corners and grids,
    and the bijections tying them to forbidden configurations (structures);
  * exact maximum free sets of small hypergraphs, with a WCNF export for
    instances beyond the built-in solver budget (search).
"""

from .errors import (BudgetExceededError, IncompleteStrategyError, ReplabError,
                     SchemaError)
from .fields import AffineSubspace, FiniteField
from .forbidden import (ForbiddenWitness, build_answer_game,
                        check_winning_set_free, compute_eq,
                        enumerate_forbidden, find_forbidden,
                        forbidden_hypergraph, is_connected, projected_graph,
                        strategy_from_witness, witness_is_valid)
from .games import (Game, GameValue, Strategy, evaluate, exact_value,
                    game_from_json, game_to_json, mixture_value, preset_game,
                    winning_set)
from .records import DensityRecord, ValueRecord
from .repetition import RepeatedGame, TupleCodec, independent_strategy, repeat
from .rng import SplitMix64
from .search import (ForbiddenHypergraph, export_wcnf, max_free,
                     symmetry_orbit_prune, verify_free)
from .structures import (affine_embed, corners, ghz_support, grid_question_set,
                         grid_to_witness, grids, line_to_witness, lines,
                         r_corner, r_grid, r_line, r_square, square_to_witness,
                         squares, witness_to_grid, witness_to_line,
                         witness_to_square)

__version__ = "0.1.0"
