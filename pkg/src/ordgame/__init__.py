"""Ordinal games: coarse-belief criteria, iterated procedures and epistemic model checking."""

from .game import (GameError, OrdinalGame, from_matrices, is_generic, load_game, loads_game,
                   make_game, ordinal_equivalent, validate_game)
from .solvers import (EliminationTrace, RelationReport, borgers_rationalizability, iesd_pure,
                      point_rationalizability, rationalizability, relations, solve,
                      verify_trace, wald_rationalizability, wishful_thinking)

__all__ = [
    "GameError", "OrdinalGame", "from_matrices", "is_generic", "load_game", "loads_game",
    "make_game", "ordinal_equivalent", "validate_game",
    "EliminationTrace", "RelationReport", "borgers_rationalizability", "iesd_pure",
    "point_rationalizability", "rationalizability", "relations", "solve",
    "verify_trace", "wald_rationalizability", "wishful_thinking",
]
