"""Finite ordinal games with exact rational payoffs.

A game stores one representative utility per player; every comparison the
rest of the package makes is invariant under strictly increasing transforms
of that representative, except the mixed-dominance LP (affine only).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

Profile = tuple  # one action name per player (or per opponent), in player order


class GameError(ValueError):
    """Raised when a raw game description fails validation.

    ``violations`` lists every problem found, not only the first one.
    """

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InvariantViolation(RuntimeError):
    """A property that holds by construction was found broken: a library defect."""


def to_fraction(value) -> Fraction:
    """Parse an exact payoff literal: int, Fraction, Decimal or "p/q" string.

    Floats are accepted only through their shortest decimal repr, so that the
    JSON literal ``1.5`` means exactly 3/2.
    """
    if isinstance(value, bool):
        raise TypeError(f"boolean is not a payoff: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ValueError(f"non-finite payoff: {value!r}")
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite payoff: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"unsupported payoff literal: {value!r}")


def fraction_literal(value: Fraction):
    """JSON form of a payoff: plain int when integral, else "p/q"."""
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class OrdinalGame:
    """A finite game given by a representative utility for each player.

    ``payoffs[i]`` maps every full action profile to player ``i``'s exact
    rational payoff. Construct through :func:`make_game` or
    :func:`validate_game`; the constructor itself trusts its input.
    """

    players: tuple[str, ...]
    actions: tuple[tuple[str, ...], ...]
    payoffs: tuple[Mapping[Profile, Fraction], ...] = field(repr=False)

    def __post_init__(self):
        # (own action, opponent profile) -> payoff, per player
        split = []
        for i, table in enumerate(self.payoffs):
            split.append({(p[i], p[:i] + p[i + 1:]): v for p, v in table.items()})
        object.__setattr__(self, "_split", tuple(split))
        opp = tuple(
            tuple(itertools.product(*(self.actions[j] for j in range(len(self.players)) if j != i)))
            for i in range(len(self.players))
        )
        object.__setattr__(self, "_opp", opp)
        object.__setattr__(self, "_opp_rank", tuple({p: k for k, p in enumerate(o)} for o in opp))

    # -- indexing ---------------------------------------------------------

    @property
    def n_players(self) -> int:
        return len(self.players)

    def index(self, player) -> int:
        """Player index from a name or an index."""
        if isinstance(player, int) and not isinstance(player, bool):
            if 0 <= player < self.n_players:
                return player
            raise KeyError(f"no player with index {player}")
        try:
            return self.players.index(player)
        except ValueError:
            raise KeyError(f"unknown player {player!r}") from None

    def opponents(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.n_players) if j != i)

    def profiles(self, family: Sequence[Iterable[str]] | None = None) -> Iterator[Profile]:
        """Full profiles in canonical order, optionally restricted per player."""
        sets = self.actions if family is None else self.ordered(family)
        return itertools.product(*sets)

    def opponent_profiles(self, i: int, family: Sequence[Iterable[str]] | None = None) -> list[Profile]:
        """A_{-i} (or its restriction to ``family``) in canonical order."""
        if family is None:
            return list(self._opp[i])
        sets = self.ordered(family)
        return list(itertools.product(*(sets[j] for j in self.opponents(i))))

    def opponent_rank(self, i: int) -> dict:
        """Canonical position of each opponent profile of player ``i``."""
        return self._opp_rank[i]

    def ordered(self, family: Sequence[Iterable[str]]) -> tuple[tuple[str, ...], ...]:
        """Sort each player's action subset in declared order."""
        return tuple(
            tuple(a for a in self.actions[j] if a in set(sub))
            for j, sub in enumerate(family)
        )

    def full_family(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(acts) for acts in self.actions)

    @staticmethod
    def join(i: int, own: str, opp: Profile) -> Profile:
        """Insert player ``i``'s action into an opponent profile."""
        return opp[:i] + (own,) + opp[i:]

    @staticmethod
    def drop(i: int, profile: Profile) -> Profile:
        return profile[:i] + profile[i + 1:]

    # -- payoffs ----------------------------------------------------------

    def u(self, i: int, own: str, opp: Profile) -> Fraction:
        """Payoff to player ``i`` from action ``own`` against ``opp``."""
        return self._split[i][(own, opp)]

    def payoff(self, i: int, profile: Profile) -> Fraction:
        return self.payoffs[i][profile]

    def action_rank(self, i: int) -> dict[str, int]:
        return {a: k for k, a in enumerate(self.actions[i])}

    def with_payoffs(self, payoffs: Sequence[Mapping[Profile, Fraction]]) -> "OrdinalGame":
        """Same players and actions, new payoff tables."""
        return OrdinalGame(self.players, self.actions, tuple(dict(t) for t in payoffs))

    def restrict(self, family: Sequence[Iterable[str]]) -> "OrdinalGame":
        """Subgame on the given action subsets."""
        acts = self.ordered(family)
        profs = list(itertools.product(*acts))
        return OrdinalGame(
            self.players, acts,
            tuple({p: self.payoffs[i][p] for p in profs} for i in range(self.n_players)),
        )

    def __eq__(self, other):
        if not isinstance(other, OrdinalGame):
            return NotImplemented
        return (self.players == other.players and self.actions == other.actions
                and all(dict(a) == dict(b) for a, b in zip(self.payoffs, other.payoffs)))

    def __hash__(self):
        return hash((self.players, self.actions))


@dataclass(frozen=True)
class BeliefSet:
    """A nonempty set of opponent profiles held by ``owner`` (a player index)."""

    owner: int
    profiles: frozenset

    def __post_init__(self):
        if not self.profiles:
            raise ValueError("a belief set must be nonempty")

    def __iter__(self):
        return iter(self.profiles)

    def __len__(self):
        return len(self.profiles)


def make_game(players: Sequence[str], actions: Sequence[Sequence[str]],
              payoff_fn) -> OrdinalGame:
    """Build a game from a callable ``payoff_fn(i, profile)``."""
    raw_payoffs = {}
    acts = [list(a) for a in actions]
    for i, name in enumerate(players):
        raw_payoffs[name] = _nest(i, acts, lambda p, i=i: payoff_fn(i, p))
    return validate_game({"players": list(players),
                          "actions": dict(zip(players, acts)),
                          "payoffs": raw_payoffs})


def from_matrices(rows: Sequence[str], cols: Sequence[str], row_payoffs, col_payoffs,
                  players: Sequence[str] = ("a", "b")) -> OrdinalGame:
    """Two-player game from row/column payoff matrices (row player first)."""
    r = {a: k for k, a in enumerate(rows)}
    c = {a: k for k, a in enumerate(cols)}

    def fn(i, p):
        m = row_payoffs if i == 0 else col_payoffs
        return m[r[p[0]]][c[p[1]]]

    return make_game(players, [rows, cols], fn)


def _nest(i: int, acts: list[list[str]], fn) -> list:
    """Nested array for player ``i``: own action first, then the others in order."""
    order = [i] + [j for j in range(len(acts)) if j != i]

    def build(level: int, chosen: dict):
        if level == len(order):
            profile = tuple(chosen[j] for j in range(len(acts)))
            return fn(profile)
        j = order[level]
        return [build(level + 1, {**chosen, j: a}) for a in acts[j]]

    return build(0, {})


def validate_game(raw: Mapping) -> OrdinalGame:
    """Validate a raw (JSON-shaped) game description.

    Raises :class:`GameError` listing every violation found.
    """
    problems: list[str] = []
    if not isinstance(raw, Mapping):
        raise GameError(["game description must be an object"])
    players = raw.get("players")
    if not isinstance(players, list) or not all(isinstance(p, str) for p in players):
        raise GameError(["'players' must be an array of strings"])
    if len(players) < 2:
        problems.append(f"a game needs at least 2 players, got {len(players)}")
    if len(set(players)) != len(players):
        problems.append("duplicate player identifiers")
    actions_raw = raw.get("actions")
    if not isinstance(actions_raw, Mapping):
        raise GameError(problems + ["'actions' must be an object keyed by player"])
    actions: list[list[str]] = []
    for p in players:
        acts = actions_raw.get(p)
        if not isinstance(acts, list) or not all(isinstance(a, str) for a in acts):
            problems.append(f"actions of {p!r} must be an array of strings")
            acts = []
        if not acts:
            problems.append(f"player {p!r} has no actions")
        if len(set(acts)) != len(acts):
            problems.append(f"duplicate action identifiers for {p!r}")
        actions.append(list(acts))
    extra = set(actions_raw) - set(players)
    if extra:
        problems.append(f"actions given for undeclared players {sorted(extra)}")
    if problems:
        raise GameError(problems)

    payoffs_raw = raw.get("payoffs")
    if not isinstance(payoffs_raw, Mapping):
        raise GameError(["'payoffs' must be an object keyed by player"])
    tables = []
    for i, p in enumerate(players):
        nested = payoffs_raw.get(p)
        table: dict[Profile, Fraction] = {}
        if nested is None:
            problems.append(f"no payoffs for player {p!r}")
            tables.append(table)
            continue
        order = [i] + [j for j in range(len(players)) if j != i]
        for combo in itertools.product(*(actions[j] for j in order)):
            profile = [None] * len(players)
            for j, a in zip(order, combo):
                profile[j] = a
            profile = tuple(profile)
            node = nested
            missing = False
            for j, a in zip(order, combo):
                k = actions[j].index(a)
                if not isinstance(node, list) or k >= len(node):
                    missing = True
                    break
                node = node[k]
            if missing or isinstance(node, list) or node is None:
                problems.append(f"missing payoff for {p!r} at profile {profile}")
                continue
            try:
                table[profile] = to_fraction(node)
            except (TypeError, ValueError) as exc:
                problems.append(f"payoff for {p!r} at {profile}: {exc}")
        problems.extend(_shape_excess(nested, [len(actions[j]) for j in order], p))
        tables.append(table)
    if problems:
        raise GameError(problems)
    return OrdinalGame(tuple(players), tuple(tuple(a) for a in actions), tuple(tables))


def _shape_excess(nested, dims, player) -> list[str]:
    """Report arrays longer than the declared action counts."""
    out = []

    def walk(node, level, path):
        if level == len(dims) or not isinstance(node, list):
            return
        if len(node) > dims[level]:
            out.append(f"payoff array for {player!r} at {path or 'top level'} "
                       f"has {len(node)} entries, expected {dims[level]}")
        for k, child in enumerate(node[:dims[level]]):
            walk(child, level + 1, path + [k])

    walk(nested, 0, [])
    return out


def game_to_json(game: OrdinalGame) -> dict:
    acts = [list(a) for a in game.actions]
    return {
        "players": list(game.players),
        "actions": {p: list(a) for p, a in zip(game.players, game.actions)},
        "payoffs": {
            p: _nest(i, acts, lambda prof, i=i: fraction_literal(game.payoff(i, prof)))
            for i, p in enumerate(game.players)
        },
    }


def loads_game(text: str) -> OrdinalGame:
    try:
        raw = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise GameError([f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"]) from exc
    return validate_game(raw)


def load_game(path) -> OrdinalGame:
    with open(path, encoding="utf-8") as fh:
        return loads_game(fh.read())


def dumps_game(game: OrdinalGame) -> str:
    return json.dumps(game_to_json(game), indent=2)


def dump_game(game: OrdinalGame, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_game(game) + "\n")


# -- ordinal structure ----------------------------------------------------

def is_generic(game: OrdinalGame) -> tuple[tuple[bool, ...], bool]:
    """Per-player genericity flags and their conjunction.

    Player ``i`` is generic when distinct own actions never tie against a
    fixed opponent profile.
    """
    flags = []
    for i in range(game.n_players):
        ok = True
        for opp in game.opponent_profiles(i):
            column = [game.u(i, a, opp) for a in game.actions[i]]
            if len(set(column)) != len(column):
                ok = False
                break
        flags.append(ok)
    return tuple(flags), all(flags)


class ShapeMismatch(ValueError):
    """The two games differ in players or actions, so order cannot be compared."""


def ordinal_equivalent(g1: OrdinalGame, g2: OrdinalGame) -> bool:
    """True iff every player ranks every pair of profiles the same way in both.

    Raises :class:`ShapeMismatch` when players or action lists differ.
    """
    if g1.players != g2.players or g1.actions != g2.actions:
        raise ShapeMismatch("games differ in players or actions")
    profiles = list(g1.profiles())
    for i in range(g1.n_players):
        # Comparing sorted rank classes is equivalent to comparing all pair signs.
        if _rank_classes(g1, i, profiles) != _rank_classes(g2, i, profiles):
            return False
    return True


def _rank_classes(game: OrdinalGame, i: int, profiles) -> list[frozenset]:
    by_value: dict[Fraction, set] = {}
    for p in profiles:
        by_value.setdefault(game.payoff(i, p), set()).add(p)
    return [frozenset(by_value[v]) for v in sorted(by_value)]


def monotone_transform(game: OrdinalGame, fns) -> OrdinalGame:
    """Apply a per-player strictly increasing map to every payoff.

    ``fns`` is a sequence of callables, or mappings from value to new value.
    """
    tables = []
    for i, fn in enumerate(fns):
        f = fn.__getitem__ if isinstance(fn, Mapping) else fn
        tables.append({p: to_fraction(f(v)) for p, v in game.payoffs[i].items()})
    return game.with_payoffs(tables)


# -- belief sets ----------------------------------------------------------

def canonical_subsets(items: Sequence) -> Iterator[tuple]:
    """Nonempty subsets of ``items``: by size, then lexicographic in item order."""
    for k in range(1, len(items) + 1):
        yield from itertools.combinations(items, k)


def enumerate_belief_sets(game: OrdinalGame, player, restriction: Sequence[Iterable[str]] | None = None
                          ) -> Iterator[BeliefSet]:
    """Every nonempty subset of the restricted opponent-profile product, once each."""
    i = game.index(player)
    profiles = game.opponent_profiles(i, restriction)
    for sub in canonical_subsets(profiles):
        yield BeliefSet(i, frozenset(sub))


def check_family(game: OrdinalGame, family: Sequence[Iterable[str]]) -> tuple[frozenset, ...]:
    """Validate an action-set family (nonempty subsets of declared actions)."""
    if len(family) != game.n_players:
        raise ValueError("family must give one action set per player")
    out = []
    for j, sub in enumerate(family):
        sub = frozenset(sub)
        if not sub:
            raise ValueError(f"empty action set for {game.players[j]!r}")
        unknown = sub - set(game.actions[j])
        if unknown:
            raise ValueError(f"undeclared actions {sorted(unknown)} for {game.players[j]!r}")
        out.append(sub)
    return tuple(out)
