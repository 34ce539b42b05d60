from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ordgame.game import from_matrices, ordinal_equivalent
from ordgame.library import borgers_not_wald, leading_game, one_cell
from ordgame.risk import (check_member, concave_transform, convergence_experiment, limiting_game,
                          link_is_concave)
from ordgame.solvers import SOLVERS, wald_rationalizability
from strategies import games


def rows(g, i, row_names, col_names):
    return [[g.payoff(i, (r, c)) for c in col_names] for r in row_names]


def test_affine_member():
    m = concave_transform(borgers_not_wald(), 1)
    assert rows(m.game, 0, "TMD", "LR") == [[1, 0], [F(4, 5), F(1, 5)], [F(3, 5), F(2, 5)]]
    assert m.degenerate == (False, True)
    assert set(m.game.payoffs[1].values()) == {0}


def test_quadratic_member():
    m = concave_transform(borgers_not_wald(), 2)
    assert rows(m.game, 0, "TMD", "LR") == [[1, 0], [F(32, 35), F(11, 35)], [F(27, 35), F(20, 35)]]


def test_bad_index():
    with pytest.raises(ValueError):
        concave_transform(one_cell(), 0)


def test_limiting_games():
    lim = limiting_game(borgers_not_wald()).game
    assert rows(lim, 0, "TMD", "LR") == [[1, 0], [1, 1], [1, 1]]
    assert wald_rationalizability(lim).rounds[1][0] == {"T", "M", "D"}
    lim = limiting_game(leading_game()).game
    assert rows(lim, 1, "TMD", "LCR") == [[1, 1, 1], [1, 1, 0], [0, 1, 1]]
    assert wald_rationalizability(lim).rounds[1][1] == {"L", "C", "R"}
    flat = limiting_game(borgers_not_wald())
    assert flat.degenerate[1] and set(flat.game.payoffs[1].values()) == {0}


def test_leading_convergence():
    rep = convergence_experiment(leading_game(), [1, 2, 4, 8])
    assert not rep.violations
    assert all("R" not in t[1] for t in rep.tr)
    assert "R" in rep.wr_limit[1]


def test_borgers_not_wald_convergence():
    rep = convergence_experiment(borgers_not_wald(), [1, 2, 4])
    g = borgers_not_wald()
    assert all(t == g.full_family() for t in rep.tr)


def test_one_cell_convergence():
    rep = convergence_experiment(one_cell(), [1])
    assert rep.tr == [one_cell().full_family()] and rep.br == one_cell().full_family()


def test_r_list_must_increase():
    with pytest.raises(ValueError):
        convergence_experiment(one_cell(), [2, 1])


@given(games(max_actions=3), st.integers(1, 6), st.integers(1, 6))
def test_family_invariants(g, r, s):
    m = concave_transform(g, r)
    assert check_member(m) == []
    assert ordinal_equivalent(g, m.game)
    for c in ("PR", "WR", "BR", "IESD"):
        assert SOLVERS[c](g).rounds == SOLVERS[c](m.game).rounds
    assert limiting_game(m.game).game == limiting_game(g).game
    lo, hi = sorted((r, s))
    if lo < hi:
        assert link_is_concave(concave_transform(g, lo).game, concave_transform(g, hi).game)


def test_link_detects_convexity():
    g = from_matrices(["T", "D"], ["L", "R"], [[0, 1], [2, 3]], [[0, 0], [0, 0]])
    convex = g.with_payoffs([{p: v * v for p, v in g.payoffs[0].items()}, g.payoffs[1]])
    assert not link_is_concave(g, convex)
