"""Seeded random games, possibility structures and knowledge structures."""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .epistemic import PossibilityStructure, StructureError, make_structure
from .game import OrdinalGame, make_game, monotone_transform
from .knowledge import KnowledgeStructure, make_knowledge, slice_partitions

PLAYER_NAMES = "abcdefgh"


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    n_players: int = 2
    actions: tuple = (3, 3)
    generic: bool = False
    value_range: tuple = (0, 9)

    def __post_init__(self):
        if self.n_players < 2 or self.n_players > len(PLAYER_NAMES):
            raise ValueError(f"player count must be in 2..{len(PLAYER_NAMES)}")
        if len(self.actions) != self.n_players or any(k < 1 for k in self.actions):
            raise ValueError("need an action count >= 1 for every player")
        lo, hi = self.value_range
        if lo > hi:
            raise ValueError("empty value range")
        if self.generic and max(self.actions) > hi - lo + 1:
            raise ValueError("value range too small for distinct payoffs in every column")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def action_names(player: str, k: int) -> list[str]:
    return [f"{player.upper()}{j + 1}" for j in range(k)]


def random_game(config: GeneratorConfig, rng: random.Random | None = None) -> OrdinalGame:
    """Integer payoffs drawn uniformly; with ``generic`` each column is sampled until distinct."""
    rng = rng or random.Random(config.seed)
    players = list(PLAYER_NAMES[:config.n_players])
    actions = [action_names(p, k) for p, k in zip(players, config.actions)]
    lo, hi = config.value_range
    table = {}
    for i in range(config.n_players):
        others = [actions[j] for j in range(config.n_players) if j != i]
        for opp in product(*others):
            while True:
                col = [rng.randint(lo, hi) for _ in actions[i]]
                if not config.generic or len(set(col)) == len(col):
                    break
            for a, v in zip(actions[i], col):
                table[(i, a, opp)] = v

    def payoff(i, prof):
        return table[(i, prof[i], prof[:i] + prof[i + 1:])]

    return make_game(players, actions, payoff)


def random_config(rng: random.Random, n_players: int, max_actions: int, generic=None,
                  value_range=(0, 9)) -> GeneratorConfig:
    acts = tuple(rng.randint(1, max_actions) for _ in range(n_players))
    if generic is None:
        generic = rng.random() < 0.5
    return GeneratorConfig(rng.getrandbits(63), n_players, acts, generic, value_range)


def random_monotone_transform(game: OrdinalGame, rng: random.Random) -> OrdinalGame:
    """Per player, send the sorted distinct payoffs to a random increasing rational sequence."""
    maps = []
    for i in range(game.n_players):
        vals = sorted(set(game.payoffs[i].values()))
        cur = Fraction(rng.randint(-20, 20), rng.randint(1, 5))
        m = {}
        for v in vals:
            m[v] = cur
            cur += Fraction(rng.randint(1, 30), rng.randint(1, 7))
        maps.append(m)
    return monotone_transform(game, maps)


def random_affine_transform(game: OrdinalGame, rng: random.Random) -> OrdinalGame:
    fns = []
    for _ in range(game.n_players):
        alpha = Fraction(rng.randint(1, 20), rng.randint(1, 7))
        beta = Fraction(rng.randint(-50, 50), rng.randint(1, 7))
        fns.append(lambda v, a=alpha, b=beta: a * v + b)
    return monotone_transform(game, fns)


def _type_names(k: int) -> list[str]:
    return [f"t{j}" for j in range(k)]


def random_structure(game: OrdinalGame, rng: random.Random, max_types: int = 3,
                     max_image: int = 4) -> PossibilityStructure:
    """Random possibility structure: 1..max_types types per player, nonempty images."""
    n = game.n_players
    types = [_type_names(rng.randint(1, max_types)) for _ in range(n)]
    pi = []
    for i in range(n):
        opps = [j for j in range(n) if j != i]
        space = list(product(*(list(product(game.actions[j], types[j])) for j in opps)))
        pmap = {}
        for t in types[i]:
            k = rng.randint(1, min(max_image, len(space)))
            chosen = rng.sample(space, k)
            pmap[t] = [(tuple(a for a, _ in e), tuple(s for _, s in e)) for e in chosen]
        pi.append(pmap)
    return make_structure(game, types, pi)


def random_knowledge(game: OrdinalGame, rng: random.Random, max_states: int = 6,
                     max_types: int = 2, attempts: int = 200) -> KnowledgeStructure:
    """Random valid knowledge structure with partitions induced by own (action, type) slices.

    Candidates failing the validator are discarded; half of the draws tie
    each type to one action, which makes Independence easy to meet.
    """
    n = game.n_players
    for _ in range(attempts):
        types = [_type_names(rng.randint(1, max_types)) for _ in range(n)]
        tied = rng.random() < 0.5
        fixed = [{t: rng.choice(game.actions[i]) for t in types[i]} for i in range(n)]
        space = []
        for combo in product(*(list(product(game.actions[i], types[i])) for i in range(n))):
            if tied and any(fixed[i][t] != a for i, (a, t) in enumerate(combo)):
                continue
            space.append(combo)
        k = rng.randint(1, min(max_states, len(space)))
        states = rng.sample(space, k)
        try:
            return make_knowledge(game, types, states, slice_partitions(game, states))
        except StructureError:
            continue
    # a single state is always a valid structure
    state = tuple((game.actions[i][0], "t0") for i in range(n))
    return make_knowledge(game, [["t0"]] * n, [state], [[[0]]] * n)
