"""Reference games used throughout the docs and tests.

Where only the row player's payoffs are meaningful, the column player's
payoffs are all zero.
"""

from .game import OrdinalGame, from_matrices


def leading_game() -> OrdinalGame:
    """3x3 game with both players' payoffs."""
    return from_matrices(
        ["T", "M", "D"], ["L", "C", "R"],
        [[2, 3, 1], [4, 1, 4], [2, 2, 1]],
        [[3, 2, 1], [3, 1, 0], [0, 2, 1]],
    )


def battle_of_the_sexes() -> OrdinalGame:
    return from_matrices(
        ["T", "D"], ["L", "R"],
        [[2, 0], [0, 1]],
        [[1, 0], [0, 2]],
    )


def borgers_not_wald() -> OrdinalGame:
    """Row player keeps M under Börgers dominance but never as a max-min choice."""
    return from_matrices(
        ["T", "M", "D"], ["L", "R"],
        [[6, 1], [5, 2], [4, 3]],
        [[0, 0], [0, 0], [0, 0]],
    )


def wald_not_rationalizable() -> OrdinalGame:
    """M is a max-min choice but is strictly dominated by the 50/50 mix of T and D."""
    return from_matrices(
        ["T", "M", "D"], ["L", "R"],
        [[3, 0], [1, 1], [0, 3]],
        [[0, 0], [0, 0], [0, 0]],
    )


def one_cell() -> OrdinalGame:
    return from_matrices(["T"], ["L"], [[0]], [[0]])


EXAMPLE_GAMES = {
    "leading": leading_game,
    "bos": battle_of_the_sexes,
    "b_not_v": borgers_not_wald,
    "v_not_r": wald_not_rationalizable,
}
