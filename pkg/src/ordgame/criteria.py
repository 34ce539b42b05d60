"""Single-agent choice criteria against a coarse belief.

A belief (or restriction) is any nonempty collection of opponent profiles,
i.e. tuples of opponent actions in player order. Candidate actions default
to the player's full action list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from . import lp
from .game import OrdinalGame, Profile, canonical_subsets


def _profiles(game: OrdinalGame, i: int, belief) -> list[Profile]:
    profs = list(belief.profiles if hasattr(belief, "profiles") else belief)
    if not profs:
        raise ValueError("belief/restriction must be nonempty")
    order = game.opponent_rank(i)
    try:
        return sorted(set(profs), key=order.__getitem__)
    except KeyError as exc:
        raise ValueError(f"not an opponent profile of {game.players[i]!r}: {exc.args[0]!r}") from None


def _candidates(game: OrdinalGame, i: int, candidates) -> tuple[str, ...]:
    if candidates is None:
        return game.actions[i]
    cand = set(candidates)
    return tuple(a for a in game.actions[i] if a in cand)


def _argmax(scores: Mapping[str, Fraction]) -> frozenset:
    best = max(scores.values())
    return frozenset(a for a, v in scores.items() if v == best)


def obr(game: OrdinalGame, player, belief, candidates=None) -> frozenset:
    """Optimistic best replies: maximize the best-case payoff over ``belief``."""
    i = game.index(player)
    profs = _profiles(game, i, belief)
    return _argmax({a: max(game.u(i, a, p) for p in profs) for a in _candidates(game, i, candidates)})


def pbr(game: OrdinalGame, player, belief, candidates=None) -> frozenset:
    """Pessimistic (Wald) best replies: maximize the worst-case payoff."""
    i = game.index(player)
    profs = _profiles(game, i, belief)
    return _argmax({a: min(game.u(i, a, p) for p in profs) for a in _candidates(game, i, candidates)})


def point_best_replies(game: OrdinalGame, player, opp: Profile) -> frozenset:
    """argmax of u_i(., opp) over all own actions."""
    return obr(game, player, [opp])


def _weakly_beats(game, i, b, a, profs) -> bool:
    strict = False
    for p in profs:
        ub, ua = game.u(i, b, p), game.u(i, a, p)
        if ub < ua:
            return False
        if ub > ua:
            strict = True
    return strict


def _strictly_beats(game, i, b, a, profs) -> bool:
    return all(game.u(i, b, p) > game.u(i, a, p) for p in profs)


def weakly_dominated(game: OrdinalGame, player, action: str, restriction,
                     candidates=None) -> Optional[str]:
    """First action (canonical order) weakly dominating ``action`` on ``restriction``."""
    i = game.index(player)
    profs = _profiles(game, i, restriction)
    for b in _candidates(game, i, candidates):
        if b != action and _weakly_beats(game, i, b, action, profs):
            return b
    return None


def admissible_set(game: OrdinalGame, player, restriction, candidates=None) -> frozenset:
    """Actions not weakly dominated relative to ``restriction``."""
    i = game.index(player)
    profs = _profiles(game, i, restriction)
    cands = _candidates(game, i, candidates)
    return frozenset(
        a for a in cands
        if not any(b != a and _weakly_beats(game, i, b, a, profs) for b in cands)
    )


def strictly_dominated_pure(game: OrdinalGame, player, action: str, restriction,
                            candidates=None) -> Optional[str]:
    """First action strictly better than ``action`` against every profile in ``restriction``."""
    i = game.index(player)
    profs = _profiles(game, i, restriction)
    for b in _candidates(game, i, candidates):
        if b != action and _strictly_beats(game, i, b, action, profs):
            return b
    return None


@dataclass(frozen=True)
class BorgersResult:
    dominated: bool
    # subset -> weak dominator; filled only when dominated
    witnesses: dict = field(default_factory=dict)
    # a subset where the action is admissible; set only when not dominated
    admissible_on: Optional[frozenset] = None

    def __bool__(self):
        return self.dominated


def borgers_dominated(game: OrdinalGame, player, action: str, restriction,
                      candidates=None) -> BorgersResult:
    """Is ``action`` inadmissible relative to every nonempty subset of ``restriction``?

    Subsets are scanned smallest first; the scan stops at the first subset
    where the action is admissible.
    """
    i = game.index(player)
    profs = _profiles(game, i, restriction)
    witnesses = {}
    for sub in canonical_subsets(profs):
        dom = weakly_dominated(game, i, action, sub, candidates)
        if dom is None:
            return BorgersResult(False, {}, frozenset(sub))
        witnesses[frozenset(sub)] = dom
    return BorgersResult(True, witnesses, None)


# -- mixed strategies ------------------------------------------------------

@dataclass(frozen=True)
class MixedAction:
    """A probability distribution over some of ``owner``'s actions."""

    owner: int
    weights: Mapping[str, Fraction]

    def __post_init__(self):
        w = {a: Fraction(v) for a, v in self.weights.items() if v != 0}
        if not w:
            raise ValueError("mixed action needs a nonempty support")
        if any(v < 0 for v in w.values()):
            raise ValueError("mixed action weights must be nonnegative")
        if sum(w.values()) != 1:
            raise ValueError(f"mixed action weights sum to {sum(w.values())}, not 1")
        object.__setattr__(self, "weights", w)

    @property
    def support(self) -> frozenset:
        return frozenset(self.weights)

    def payoff(self, game: OrdinalGame, opp: Profile) -> Fraction:
        return sum((w * game.u(self.owner, a, opp) for a, w in self.weights.items()), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, MixedAction):
            return NotImplemented
        return self.owner == other.owner and dict(self.weights) == dict(other.weights)

    def __hash__(self):
        return hash((self.owner, frozenset(self.weights.items())))


def mixed_dominance_margin(game: OrdinalGame, player, action: str, restriction,
                           support: Iterable[str]) -> tuple[Fraction, dict]:
    """Solve max eps s.t. sum_j s_j u(j,p) - u(action,p) >= eps on every p.

    Returns the optimal eps and the optimal weights over ``support``.
    """
    i = game.index(player)
    profs = _profiles(game, i, restriction)
    sup = _candidates(game, i, support)
    if not sup:
        raise ValueError("support must be nonempty")
    if action in sup:
        raise ValueError("support must exclude the tested action")
    k = len(sup)
    # variables: s_1..s_k, eps (free)
    c = [0] * k + [1]
    A_ub = [[-game.u(i, b, p) for b in sup] + [1] for p in profs]
    b_ub = [-game.u(i, action, p) for p in profs]
    A_eq = [[1] * k + [0]]
    res = lp.maximize(c, A_ub, b_ub, A_eq, [1], free=[k])
    if res.status != "optimal":
        raise lp.LPDefect(f"dominance LP ended {res.status}; it is feasible and bounded by construction")
    return res.value, dict(zip(sup, res.x[:k]))


def strictly_dominated_mixed(game: OrdinalGame, player, action: str, restriction,
                             support: Iterable[str] | None = None) -> Optional[MixedAction]:
    """A mixture over ``support`` strictly better than ``action`` on every profile, if any.

    ``support`` defaults to all other actions of the player. The verdict is
    an exact comparison of the LP optimum with zero.
    """
    i = game.index(player)
    if support is None:
        support = [a for a in game.actions[i] if a != action]
    eps, weights = mixed_dominance_margin(game, i, action, restriction, support)
    if eps > 0:
        return MixedAction(i, weights)
    return None


def supporting_belief(game: OrdinalGame, player, action: str, restriction,
                      support: Iterable[str]) -> Optional[dict]:
    """A distribution over ``restriction`` making ``action`` a best reply within ``support``.

    This is the dual side of the mixed-dominance LP: it exists exactly when
    ``action`` is not strictly dominated by a mixture over ``support``.
    """
    i = game.index(player)
    profs = _profiles(game, i, restriction)
    rivals = [b for b in _candidates(game, i, support) if b != action]
    n = len(profs)
    if not rivals:
        return {profs[0]: Fraction(1)}
    # variables: mu_1..mu_n, delta (free); maximize delta
    c = [0] * n + [1]
    A_ub = [[-(game.u(i, action, p) - game.u(i, b, p)) for p in profs] + [1] for b in rivals]
    b_ub = [0] * len(rivals)
    res = lp.maximize(c, A_ub, b_ub, [[1] * n + [0]], [1], free=[n])
    if res.status != "optimal":
        raise lp.LPDefect(f"belief LP ended {res.status}")
    if res.value < 0:
        return None
    return {p: w for p, w in zip(profs, res.x[:n]) if w != 0}


# -- witnesses -------------------------------------------------------------

WEAK, STRICT_PURE, STRICT_MIXED, BORGERS = "weak-pure", "strict-pure", "strict-mixed", "borgers"


@dataclass(frozen=True)
class DominanceWitness:
    """Evidence that ``action`` is dominated relative to ``reference``.

    ``dominator`` is a pure action or a :class:`MixedAction`; for Börgers
    dominance it is None and ``per_subset`` maps each subset to a weak
    dominator.
    """

    kind: str
    player: int
    action: str
    dominator: object
    reference: frozenset
    per_subset: Optional[Mapping] = None

    def verify(self, game: OrdinalGame) -> bool:
        i, a = self.player, self.action
        profs = list(self.reference)
        if not profs:
            return False
        if self.kind == WEAK:
            return _weakly_beats(game, i, self.dominator, a, profs)
        if self.kind == STRICT_PURE:
            return _strictly_beats(game, i, self.dominator, a, profs)
        if self.kind == STRICT_MIXED:
            sigma = self.dominator
            return (a not in sigma.support
                    and all(sigma.payoff(game, p) > game.u(i, a, p) for p in profs))
        if self.kind == BORGERS:
            subs = {frozenset(s) for s in canonical_subsets(profs)}
            if set(self.per_subset or {}) != subs:
                return False
            return all(_weakly_beats(game, i, b, a, list(s)) for s, b in self.per_subset.items())
        raise ValueError(f"unknown witness kind {self.kind!r}")
