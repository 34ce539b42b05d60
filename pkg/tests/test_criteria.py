import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from ordgame.criteria import (BORGERS, STRICT_MIXED, STRICT_PURE, WEAK, DominanceWitness, MixedAction,
                              admissible_set, borgers_dominated, obr, pbr, strictly_dominated_mixed,
                              strictly_dominated_pure, supporting_belief, weakly_dominated)
from ordgame.generate import random_monotone_transform
from ordgame.library import borgers_not_wald, leading_game, wald_not_rationalizable
from strategies import games, small_games

L, C, R = ("L",), ("C",), ("R",)


def test_obr_examples():
    g = leading_game()
    assert obr(g, "a", [L]) == {"M"}
    assert obr(g, "a", [L, C, R]) == {"M"}


def test_pbr_examples():
    assert pbr(leading_game(), "a", [L, C, R]) == {"T", "M", "D"}
    assert pbr(borgers_not_wald(), "a", [L, R]) == {"D"}
    assert pbr(wald_not_rationalizable(), "a", [L, R]) == {"M"}


def test_weak_dominance_examples():
    g = leading_game()
    assert weakly_dominated(g, "a", "D", [C]) == "T"
    assert weakly_dominated(g, "a", "D", [L]) == "M"
    assert weakly_dominated(g, "a", "M", [L]) is None


def test_admissible_examples():
    assert admissible_set(leading_game(), "a", [L, C, R]) == {"T", "M"}
    assert admissible_set(borgers_not_wald(), "a", [L, R]) == {"T", "M", "D"}


def test_borgers_examples():
    res = borgers_dominated(leading_game(), "a", "D", [L, C, R])
    assert res and len(res.witnesses) == 7
    w = DominanceWitness(BORGERS, 0, "D", None, frozenset([L, C, R]), res.witnesses)
    assert w.verify(leading_game())
    res = borgers_dominated(borgers_not_wald(), "a", "M", [L, R])
    assert not res and res.admissible_on == frozenset([L, R])


def test_strict_pure_examples():
    g = leading_game()
    assert strictly_dominated_pure(g, "b", "R", [("T",), ("M",), ("D",)]) == "C"
    assert strictly_dominated_pure(g, "a", "D", [L, C, R]) is None


def test_strict_mixed_examples():
    sigma = strictly_dominated_mixed(wald_not_rationalizable(), "a", "M", [L, R], ["T", "D"])
    assert sigma.weights == {"T": Fraction(1, 2), "D": Fraction(1, 2)}
    assert strictly_dominated_mixed(borgers_not_wald(), "a", "M", [L, R]) is None
    sigma = strictly_dominated_mixed(leading_game(), "a", "D", [L, C, R], ["T", "M"])
    assert Fraction(1, 2) < sigma.weights["T"] < 1
    assert sigma.weights == {"T": Fraction(3, 4), "M": Fraction(1, 4)}


def test_mixed_rejects_bad_support():
    with pytest.raises(ValueError):
        strictly_dominated_mixed(leading_game(), "a", "D", [L], ["D", "T"])
    with pytest.raises(ValueError):
        MixedAction(0, {"T": Fraction(1, 2)})
    with pytest.raises(ValueError):
        obr(leading_game(), "a", [])


def _player(data, g):
    return data.draw(st.integers(0, g.n_players - 1))


def _restriction(data, g, i):
    profs = g.opponent_profiles(i)
    return data.draw(st.lists(st.sampled_from(profs), min_size=1, unique=True))


@given(games(), st.data())
def test_singleton_coincidence(g, data):
    i = _player(data, g)
    opp = data.draw(st.sampled_from(g.opponent_profiles(i)))
    best = max(g.u(i, a, opp) for a in g.actions[i])
    argmax = {a for a in g.actions[i] if g.u(i, a, opp) == best}
    assert obr(g, i, [opp]) == pbr(g, i, [opp]) == admissible_set(g, i, [opp]) == argmax


@given(small_games(), st.data())
def test_criteria_match_oracle(g, data):
    i = _player(data, g)
    rest = _restriction(data, g, i)
    for a in g.actions[i]:
        assert (a in obr(g, i, rest)) == oracles.is_obr(g, i, a, rest)
        assert (a in pbr(g, i, rest)) == oracles.is_pbr(g, i, a, rest)
        assert (a in admissible_set(g, i, rest)) == oracles.is_admissible(g, i, a, rest)
        b = borgers_dominated(g, i, a, rest)
        assert bool(b) == (not any(oracles.is_admissible(g, i, a, s) for s in oracles.subsets(rest)))


@given(small_games(), st.data())
def test_dominance_chain(g, data):
    i = _player(data, g)
    rest = _restriction(data, g, i)
    adm = admissible_set(g, i, rest)
    assert adm
    for a in g.actions[i]:
        sp = strictly_dominated_pure(g, i, a, rest)
        wd = weakly_dominated(g, i, a, rest)
        if sp is not None:
            assert wd is not None
            assert DominanceWitness(STRICT_PURE, i, a, sp, frozenset(rest)).verify(g)
        if wd is not None:
            assert a not in adm
            assert DominanceWitness(WEAK, i, a, wd, frozenset(rest)).verify(g)
        if borgers_dominated(g, i, a, rest):
            assert a not in adm


@given(small_games(), st.data())
def test_ordinal_invariance_of_criteria(g, data):
    i = _player(data, g)
    rest = _restriction(data, g, i)
    g2 = random_monotone_transform(g, random.Random(data.draw(st.integers(0, 10 ** 6))))
    assert obr(g, i, rest) == obr(g2, i, rest)
    assert pbr(g, i, rest) == pbr(g2, i, rest)
    assert admissible_set(g, i, rest) == admissible_set(g2, i, rest)
    for a in g.actions[i]:
        assert weakly_dominated(g, i, a, rest) == weakly_dominated(g2, i, a, rest)
        assert strictly_dominated_pure(g, i, a, rest) == strictly_dominated_pure(g2, i, a, rest)
        assert bool(borgers_dominated(g, i, a, rest)) == bool(borgers_dominated(g2, i, a, rest))


@given(games(max_actions=3), st.data())
def test_mixed_matches_grid_oracle(g, data):
    i = _player(data, g)
    rest = _restriction(data, g, i)
    for a in g.actions[i]:
        others = [b for b in g.actions[i] if b != a]
        if not others:
            continue
        sigma = strictly_dominated_mixed(g, i, a, rest)
        grid = any(oracles.grid_dominated(g, i, a, rest, list(s)) for s in oracles.subsets(others))
        assert (sigma is not None) == grid
        if sigma is not None:
            assert DominanceWitness(STRICT_MIXED, i, a, sigma, frozenset(rest)).verify(g)
        # the belief LP is the exact complement
        assert (supporting_belief(g, i, a, rest, others) is None) == (sigma is not None)


@given(small_games(), st.data())
def test_singleton_support_is_pure_dominance(g, data):
    i = _player(data, g)
    rest = _restriction(data, g, i)
    for a in g.actions[i]:
        for b in g.actions[i]:
            if b != a:
                mixed = strictly_dominated_mixed(g, i, a, rest, [b])
                pure = all(g.u(i, b, p) > g.u(i, a, p) for p in rest)
                assert (mixed is not None) == pure


@given(games(max_actions=3), st.data())
def test_supporting_belief_certifies(g, data):
    i = _player(data, g)
    rest = _restriction(data, g, i)
    for a in g.actions[i]:
        mu = supporting_belief(g, i, a, rest, g.actions[i])
        if mu is None:
            continue
        assert sum(mu.values()) == 1 and all(w >= 0 for w in mu.values())
        val = {b: sum(w * g.u(i, b, p) for p, w in mu.items()) for b in g.actions[i]}
        assert val[a] == max(val.values())
