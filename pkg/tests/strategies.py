from hypothesis import strategies as st

from ordgame.game import make_game

NAMES = "abc"


@st.composite
def games(draw, min_players=2, max_players=3, max_actions=3, values=(0, 9)):
    n = draw(st.integers(min_players, max_players))
    cap = max_actions if n == 2 else min(max_actions, 3)
    counts = [draw(st.integers(1, cap)) for _ in range(n)]
    players = list(NAMES[:n])
    actions = [[f"{p.upper()}{k}" for k in range(c)] for p, c in zip(players, counts)]
    lo, hi = values
    table = {}

    def payoff(i, prof):
        key = (i, prof)
        if key not in table:
            table[key] = draw(st.integers(lo, hi))
        return table[key]

    return make_game(players, actions, payoff)


def small_games(**kw):
    return games(values=(0, 3), **kw)
