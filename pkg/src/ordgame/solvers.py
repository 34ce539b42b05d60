"""Iterated procedures with per-round traces.

Every procedure computes round m+1 from round m for all players at once and
stops at the first round equal to its predecessor. Survivors carry a
certificate (the belief or profile that supports them); eliminated items
carry a dominance witness or a "no supporting belief" record.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from . import criteria
from .criteria import (BORGERS, STRICT_MIXED, STRICT_PURE, DominanceWitness, MixedAction)
from .game import OrdinalGame, Profile, canonical_subsets, fraction_literal, is_generic

PR, WR, BR, YR, TR, IESD = "PR", "WR", "BR", "YR", "TR", "IESD"
ACTION_CONCEPTS = (PR, WR, BR, TR, IESD)
NO_BELIEF = "no supporting belief"


@dataclass(frozen=True)
class Justification:
    """Why ``item`` was kept or dropped when computing round ``round``.

    ``player`` is None for profile-level procedures.
    """

    round: int
    player: Optional[int]
    item: object
    kept: bool
    evidence: object


@dataclass
class EliminationTrace:
    concept: str
    rounds: list
    justifications: list = field(default_factory=list)
    fixed_point_round: int = 0

    @property
    def profile_level(self) -> bool:
        return self.concept == YR

    @property
    def fixed_point(self):
        return self.rounds[-1]

    def at(self, m: int):
        """Round ``m``, extended past the fixed point."""
        return self.rounds[min(m, len(self.rounds) - 1)]

    def profiles_at(self, game: OrdinalGame, m: int) -> frozenset:
        r = self.at(m)
        if self.profile_level:
            return r
        return frozenset(game.profiles(r))

    def certificate(self, m: int, player, item):
        for j in self.justifications:
            if j.round == m and j.player == player and j.item == item:
                return j
        return None


def _full(game):
    return game.full_family()


def _run(game: OrdinalGame, concept: str, decide) -> EliminationTrace:
    """Drive an action-level procedure; ``decide(i, a, family)`` -> (kept, evidence)."""
    rounds = [_full(game)]
    justs = []
    while True:
        fam = rounds[-1]
        m = len(rounds)
        new = []
        for i in range(game.n_players):
            keep = set()
            for a, (kept, ev) in decide(i, fam).items():
                justs.append(Justification(m, i, a, kept, ev))
                if kept:
                    keep.add(a)
            new.append(frozenset(keep))
        new = tuple(new)
        rounds.append(new)
        if new == fam:
            return EliminationTrace(concept, rounds, justs, len(rounds) - 2)


def _ordered(game, i, fam):
    return [a for a in game.actions[i] if a in fam[i]]


def point_rationalizability(game: OrdinalGame) -> EliminationTrace:
    """Keep actions that are point best replies to some surviving opponent profile."""

    def decide(i, fam):
        out = {}
        own = _ordered(game, i, fam)
        for opp in game.opponent_profiles(i, fam):
            for a in criteria.point_best_replies(game, i, opp):
                if a in fam[i] and a not in out:
                    out[a] = (True, (opp,))
            if len(out) == len(own):
                break
        return {a: out.get(a, (False, NO_BELIEF)) for a in own}

    return _run(game, PR, decide)


def _subset_search(game, i, fam, choose):
    """Map each surviving action to the first subset of opponent profiles it is chosen on."""
    own = _ordered(game, i, fam)
    out = {}
    for sub in canonical_subsets(game.opponent_profiles(i, fam)):
        for a in choose(sub):
            if a in fam[i] and a not in out:
                out[a] = sub
        if len(out) == len(own):
            break
    return own, out


def wald_rationalizability(game: OrdinalGame) -> EliminationTrace:
    """Keep actions that are max-min replies to some set of surviving opponent profiles."""

    def decide(i, fam):
        own, out = _subset_search(game, i, fam, lambda sub: criteria.pbr(game, i, sub))
        return {a: (True, out[a]) if a in out else (False, NO_BELIEF) for a in own}

    return _run(game, WR, decide)


def borgers_rationalizability(game: OrdinalGame, surviving_dominators: bool = False) -> EliminationTrace:
    """Keep actions admissible relative to some set of surviving opponent profiles.

    Dominators range over the full action set, or over the player's own
    survivors when ``surviving_dominators`` is set; both give the same rounds.
    """

    def decide(i, fam):
        cands = fam[i] if surviving_dominators else None
        own, out = _subset_search(game, i, fam, lambda sub: criteria.admissible_set(game, i, sub, cands))
        res = {}
        restriction = game.opponent_profiles(i, fam)
        for a in own:
            if a in out:
                res[a] = (True, out[a])
            else:
                b = criteria.borgers_dominated(game, i, a, restriction, cands)
                res[a] = (False, DominanceWitness(BORGERS, i, a, None, frozenset(restriction),
                                                  b.witnesses))
        return res

    return _run(game, BR, decide)


def rationalizability(game: OrdinalGame) -> EliminationTrace:
    """Iterated removal of actions strictly dominated by mixtures of own survivors."""

    def decide(i, fam):
        own = _ordered(game, i, fam)
        restriction = game.opponent_profiles(i, fam)
        res = {}
        for a in own:
            support = [b for b in own if b != a]
            if not support:
                res[a] = (True, {restriction[0]: Fraction(1)})
                continue
            sigma = criteria.strictly_dominated_mixed(game, i, a, restriction, support)
            if sigma is not None:
                res[a] = (False, DominanceWitness(STRICT_MIXED, i, a, sigma, frozenset(restriction)))
            else:
                mu = criteria.supporting_belief(game, i, a, restriction, support)
                if mu is None:
                    raise criteria.lp.LPDefect(
                        f"primal and dual dominance LPs disagree for {game.players[i]}:{a}")
                res[a] = (True, mu)
        return res

    return _run(game, TR, decide)


def iesd_pure(game: OrdinalGame) -> EliminationTrace:
    """Iterated removal of actions strictly dominated by a surviving pure action."""

    def decide(i, fam):
        own = _ordered(game, i, fam)
        restriction = game.opponent_profiles(i, fam)
        res = {}
        for a in own:
            b = criteria.strictly_dominated_pure(game, i, a, restriction, fam[i])
            if b is not None:
                res[a] = (False, DominanceWitness(STRICT_PURE, i, a, b, frozenset(restriction)))
            else:
                # for every rival, a profile where it does not beat a
                resist = {}
                for c in own:
                    if c != a:
                        resist[c] = next(p for p in restriction if game.u(i, c, p) <= game.u(i, a, p))
                res[a] = (True, resist)
        return res

    return _run(game, IESD, decide)


def _yr_witness(game, i, prof, alive):
    own = prof[i]
    opp_star = game.drop(i, prof)
    floor = max(game.u(i, b, opp_star) for b in game.actions[i])
    for opp in game.opponent_profiles(i):
        if game.join(i, own, opp) not in alive:
            continue
        v = game.u(i, own, opp)
        if v < floor:
            continue
        if all(v >= game.u(i, b, opp) for b in game.actions[i]):
            return opp
    return None


def wishful_thinking(game: OrdinalGame) -> EliminationTrace:
    """Profile-level procedure: a profile survives when every player has a witnessing
    opponent profile that (1) keeps the player's action alive, (2) makes it a point best
    reply and (3) pays at least the best payoff attainable against the profile itself."""
    rounds = [frozenset(game.profiles())]
    justs = []
    order = {p: k for k, p in enumerate(game.profiles())}
    while True:
        alive = rounds[-1]
        m = len(rounds)
        keep = set()
        for prof in sorted(alive, key=order.__getitem__):
            wit = {}
            for i in range(game.n_players):
                opp = _yr_witness(game, i, prof, alive)
                if opp is None:
                    justs.append(Justification(m, None, prof, False, {"player": i, "reason": "no witness"}))
                    break
                wit[i] = opp
            else:
                keep.add(prof)
                justs.append(Justification(m, None, prof, True, wit))
        new = frozenset(keep)
        rounds.append(new)
        if new == alive:
            return EliminationTrace(YR, rounds, justs, len(rounds) - 2)


SOLVERS = {
    PR: point_rationalizability,
    WR: wald_rationalizability,
    BR: borgers_rationalizability,
    YR: wishful_thinking,
    TR: rationalizability,
    IESD: iesd_pure,
}


def solve(game: OrdinalGame, concept: str) -> EliminationTrace:
    try:
        fn = SOLVERS[concept.upper()]
    except KeyError:
        raise ValueError(f"unknown concept {concept!r}; choose from {sorted(SOLVERS)}") from None
    return fn(game)


# -- independent re-verification -------------------------------------------

def verify_trace(game: OrdinalGame, trace: EliminationTrace) -> list[str]:
    """Re-check every certificate and witness in ``trace`` from the payoffs alone.

    Returns a list of problems; empty when the trace is sound.
    """
    problems = []
    rs = trace.rounds
    if len(rs) < 2 or rs[-1] != rs[-2]:
        problems.append("last two rounds differ")
    if trace.fixed_point_round != len(rs) - 2:
        problems.append("fixed_point_round does not index the first repeated round")
    for m in range(1, len(rs)):
        if trace.profile_level:
            if not rs[m] <= rs[m - 1]:
                problems.append(f"round {m} not contained in round {m - 1}")
        elif not all(rs[m][i] <= rs[m - 1][i] for i in range(game.n_players)):
            problems.append(f"round {m} not contained in round {m - 1}")
    if not trace.profile_level and any(not s for s in rs[-1]):
        problems.append("empty fixed point")
    if rs[0] != (frozenset(game.profiles()) if trace.profile_level else _full(game)):
        problems.append("round 0 is not the full game")

    for j in trace.justifications:
        prev = rs[j.round - 1]
        kept_in_next = (j.item in rs[j.round]) if trace.profile_level else (j.item in rs[j.round][j.player])
        if kept_in_next != j.kept:
            problems.append(f"round {j.round}: {j.item} kept flag disagrees with the round")
        ok = _check_justification(game, trace.concept, j, prev)
        if not ok:
            problems.append(f"round {j.round}: certificate for {j.item} (player {j.player}) fails")
    return problems


def _u(game, i, a, opp):
    return game.u(i, a, opp)


def _opp_product(game, i, fam):
    return [tuple(x) for x in product(*(sorted(fam[j]) for j in game.opponents(i)))]


def _check_justification(game, concept, j, prev) -> bool:
    i, a, ev = j.player, j.item, j.evidence
    if concept == YR:
        return _check_yr(game, j, prev)
    opps = set(_opp_product(game, i, prev))
    acts = game.actions[i]

    def best_vs(opp):
        top = max(_u(game, i, b, opp) for b in acts)
        return _u(game, i, a, opp) == top

    def maxmin_ok(belief):
        worst = {b: min(_u(game, i, b, p) for p in belief) for b in acts}
        return worst[a] == max(worst.values())

    def admissible_ok(belief):
        for b in acts:
            ge = all(_u(game, i, b, p) >= _u(game, i, a, p) for p in belief)
            gt = any(_u(game, i, b, p) > _u(game, i, a, p) for p in belief)
            if b != a and ge and gt:
                return False
        return True

    if concept == PR:
        if j.kept:
            return len(ev) == 1 and ev[0] in opps and best_vs(ev[0])
        return ev == NO_BELIEF and not any(best_vs(p) for p in opps)
    if concept in (WR, BR):
        test = maxmin_ok if concept == WR else admissible_ok
        if j.kept:
            return bool(ev) and set(ev) <= opps and test(list(ev))
        if concept == WR:
            return ev == NO_BELIEF and not any(test(list(s)) for s in canonical_subsets(sorted(opps)))
        return (isinstance(ev, DominanceWitness) and ev.reference == frozenset(opps)
                and ev.verify(game))
    if concept == TR:
        if j.kept:
            support = prev[i]
            if not ev or set(ev) - opps or sum(ev.values()) != 1 or any(w < 0 for w in ev.values()):
                return False
            val = {b: sum(w * _u(game, i, b, p) for p, w in ev.items()) for b in support}
            return val[a] == max(val.values())
        return (isinstance(ev, DominanceWitness) and ev.reference == frozenset(opps)
                and ev.dominator.support <= prev[i] and ev.verify(game))
    if concept == IESD:
        if j.kept:
            return (set(ev) == set(prev[i]) - {a}
                    and all(ev[c] in opps and _u(game, i, c, ev[c]) <= _u(game, i, a, ev[c]) for c in ev))
        return (isinstance(ev, DominanceWitness) and ev.dominator in prev[i]
                and ev.reference == frozenset(opps) and ev.verify(game))
    return False


def _check_yr(game, j, prev) -> bool:
    prof = j.item

    def ok(i, opp):
        own = prof[i]
        if game.join(i, own, opp) not in prev:
            return False
        v = _u(game, i, own, opp)
        if any(_u(game, i, b, opp) > v for b in game.actions[i]):
            return False
        return v >= max(_u(game, i, b, game.drop(i, prof)) for b in game.actions[i])

    if j.kept:
        return set(j.evidence) == set(range(game.n_players)) and all(ok(i, o) for i, o in j.evidence.items())
    i = j.evidence["player"]
    return not any(ok(i, opp) for opp in game.opponent_profiles(i))


# -- relations between procedures ------------------------------------------

CLAIMED = ((PR, WR), (PR, BR), (TR, BR))


@dataclass
class RelationReport:
    generic: bool
    n_rounds: int
    # per round: {(X, Y): X^m ⊆ Y^m}
    matrices: list
    yr_in_pr: list
    violations: list
    non_inclusions: list
    traces: dict = field(repr=False, default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def relations(game: OrdinalGame, traces: dict | None = None) -> RelationReport:
    """Run every procedure and check the known inclusions round by round."""
    traces = dict(traces or {})
    for c in SOLVERS:
        if c not in traces:
            traces[c] = SOLVERS[c](game)
    _, generic = is_generic(game)
    claimed = list(CLAIMED) + ([(WR, BR)] if generic else [])
    n = max(len(t.rounds) for t in traces.values())
    matrices, yr_in_pr, violations, non_inc = [], [], [], []
    for m in range(n):
        mat = {}
        for x in ACTION_CONCEPTS:
            for y in ACTION_CONCEPTS:
                if x == y:
                    continue
                fx, fy = traces[x].at(m), traces[y].at(m)
                inc = True
                for i in range(game.n_players):
                    for a in _ordered(game, i, fx):
                        if a not in fy[i]:
                            inc = False
                            non_inc.append({"round": m, "sub": x, "sup": y,
                                            "player": game.players[i], "action": a})
                mat[(x, y)] = inc
                if not inc and (x, y) in claimed:
                    violations.append(f"{x}^{m} not contained in {y}^{m}")
        matrices.append(mat)
        pr = traces[PR].at(m)
        bad = [p for p in traces[YR].at(m) if any(p[i] not in pr[i] for i in range(game.n_players))]
        yr_in_pr.append(not bad)
        if bad:
            violations.append(f"YR^{m} not contained in PR^{m}: {bad[0]}")
    return RelationReport(generic, n, matrices, yr_in_pr, violations, non_inc, traces)


# -- serialization -----------------------------------------------------------

def _jsonable(game, obj):
    if isinstance(obj, Fraction):
        return fraction_literal(obj)
    if isinstance(obj, MixedAction):
        return {"mixture": {a: fraction_literal(w) for a, w in obj.weights.items()}}
    if isinstance(obj, DominanceWitness):
        out = {"kind": obj.kind, "action": obj.action,
               "reference": sorted(list(p) for p in obj.reference)}
        if obj.dominator is not None:
            out["dominator"] = _jsonable(game, obj.dominator)
        if obj.per_subset:
            out["per_subset"] = [{"subset": sorted(list(p) for p in s), "dominator": b}
                                 for s, b in obj.per_subset.items()]
        return out
    if isinstance(obj, dict):
        if all(isinstance(k, tuple) for k in obj):
            return [{"profile": list(k), "value": _jsonable(game, v)} for k, v in obj.items()]
        return {str(k if not isinstance(k, int) else game.players[k]): _jsonable(game, v)
                for k, v in obj.items()}
    if isinstance(obj, (tuple, list, frozenset, set)):
        items = [_jsonable(game, x) for x in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    return obj


def trace_to_json(game: OrdinalGame, trace: EliminationTrace) -> dict:
    if trace.profile_level:
        order = {p: k for k, p in enumerate(game.profiles())}
        rounds = [[list(p) for p in sorted(r, key=order.__getitem__)] for r in trace.rounds]
    else:
        rounds = [{game.players[i]: _ordered(game, i, r) for i in range(game.n_players)}
                  for r in trace.rounds]
    justs = []
    for j in trace.justifications:
        rec = {"round": j.round}
        if j.player is not None:
            rec["player"] = game.players[j.player]
        rec["item"] = list(j.item) if isinstance(j.item, tuple) else j.item
        rec["kept"] = j.kept
        rec["evidence"] = _jsonable(game, j.evidence)
        justs.append(rec)
    return {"concept": trace.concept, "rounds": rounds,
            "fixed_point_round": trace.fixed_point_round, "justifications": justs}


def relations_to_json(game: OrdinalGame, rep: RelationReport) -> dict:
    return {
        "generic": rep.generic,
        "rounds": [
            {"round": m,
             "inclusions": {f"{x}<={y}": v for (x, y), v in mat.items()},
             "YR<=PR": rep.yr_in_pr[m]}
            for m, mat in enumerate(rep.matrices)
        ],
        "violations": rep.violations,
        "non_inclusions": rep.non_inclusions,
    }
