"""Possibility structures, attitude events and common-belief chains.

A state of player i is a pair (action, type). Events are stored per player;
the joint event is the product of the parts, so one empty part makes the
whole event empty.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Optional, Sequence

from . import criteria
from .game import (GameError, InvariantViolation, OrdinalGame, Profile, game_to_json,
                   load_game, validate_game)
from .solvers import BR, PR, WR, EliminationTrace, SOLVERS

OPT, PES, ADM, OPT_DEG = "opt", "pes", "adm", "opt&deg"
ATTITUDE_PROCEDURE = {OPT: PR, PES: WR, ADM: BR, OPT_DEG: PR}

# joint-state cross-check of the chain is skipped above this many states
JOINT_CHECK_LIMIT = 60_000


class StructureError(GameError):
    """A raw structure failed validation; ``violations`` names each failed clause."""


@dataclass(frozen=True)
class Event:
    parts: tuple  # per player: frozenset of (action, type)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(frozenset(p) for p in self.parts))

    @property
    def is_empty(self) -> bool:
        return any(not p for p in self.parts)

    def normalized(self) -> "Event":
        """Same joint event, with every part emptied if any part is empty."""
        if self.is_empty:
            return Event(tuple(frozenset() for _ in self.parts))
        return self

    def __and__(self, other: "Event") -> "Event":
        return Event(tuple(a & b for a, b in zip(self.parts, other.parts)))

    def __le__(self, other: "Event") -> bool:
        return self.is_empty or all(a <= b for a, b in zip(self.parts, other.parts))

    def same_joint(self, other: "Event") -> bool:
        return self.normalized() == other.normalized()

    def states(self):
        return product(*(sorted(p) for p in self.parts))

    def project_actions(self) -> frozenset:
        return project_actions(self)


def project_actions(event: Event) -> frozenset:
    """Action profiles of the joint event: product of per-player action projections."""
    if event.is_empty:
        return frozenset()
    return frozenset(product(*({a for a, _ in part} for part in event.parts)))


@dataclass(frozen=True, eq=False)
class PossibilityStructure:
    """Types and possibility maps over a game.

    ``pi[i][t]`` is a frozenset of (opponent action profile, opponent type
    profile) pairs, both in player order with ``i`` left out.
    """

    game: OrdinalGame
    types: tuple
    pi: tuple

    def omega(self, i: int) -> list:
        return [(a, t) for a in self.game.actions[i] for t in self.types[i]]

    def full_event(self) -> Event:
        return Event(tuple(self.omega(i) for i in range(self.game.n_players)))

    def fob(self, i: int, t: str) -> frozenset:
        return frozenset(acts for acts, _ in self.pi[i][t])

    def n_states(self) -> int:
        n = 1
        for i in range(self.game.n_players):
            n *= len(self.omega(i))
        return n

    def __eq__(self, other):
        if not isinstance(other, PossibilityStructure):
            return NotImplemented
        return (self.game == other.game and self.types == other.types
                and all(dict(a) == dict(b) for a, b in zip(self.pi, other.pi)))

    def __hash__(self):
        return hash((self.game, self.types))


def make_structure(game: OrdinalGame, types: Sequence[Sequence[str]], pi) -> PossibilityStructure:
    """Build and validate a possibility structure.

    ``pi[i]`` maps each type of player ``i`` to an iterable of
    (opponent actions, opponent types) pairs.
    """
    problems = []
    n = game.n_players
    types = tuple(tuple(ts) for ts in types)
    if len(types) != n or len(pi) != n:
        raise StructureError(["need one type list and one possibility map per player"])
    for i, ts in enumerate(types):
        name = game.players[i]
        if not ts:
            problems.append(f"player {name!r} has no types")
        if len(set(ts)) != len(ts):
            problems.append(f"player {name!r} has duplicate types")
    out = []
    for i in range(n):
        name = game.players[i]
        opps = game.opponents(i)
        pmap = {}
        extra = set(pi[i]) - set(types[i])
        for t in sorted(extra):
            problems.append(f"pi_{name} defined for unknown type {t!r}")
        for t in types[i]:
            image = pi[i].get(t)
            if not image:
                problems.append(f"pi_{name}({t}) is empty or missing")
                pmap[t] = frozenset()
                continue
            clean = set()
            for acts, tys in image:
                acts, tys = tuple(acts), tuple(tys)
                if len(acts) != len(opps) or len(tys) != len(opps):
                    problems.append(f"pi_{name}({t}) entry {acts + tys} has the wrong length")
                    continue
                for j, a, s in zip(opps, acts, tys):
                    if a not in game.actions[j]:
                        problems.append(f"pi_{name}({t}) names unknown action {a!r} of {game.players[j]!r}")
                    if s not in types[j]:
                        problems.append(f"pi_{name}({t}) names unknown type {s!r} of {game.players[j]!r}")
                clean.add((acts, tys))
            pmap[t] = frozenset(clean)
        out.append(pmap)
    if problems:
        raise StructureError(problems)
    return PossibilityStructure(game, types, tuple(out))


# -- attitude events ---------------------------------------------------------

def _per_type(structure: PossibilityStructure, choose) -> Event:
    parts = []
    for i in range(structure.game.n_players):
        part = set()
        for t in structure.types[i]:
            for a in choose(i, t):
                part.add((a, t))
        parts.append(part)
    return Event(tuple(parts))


def event_opt(structure: PossibilityStructure) -> Event:
    g = structure.game
    return _per_type(structure, lambda i, t: criteria.obr(g, i, structure.fob(i, t)))


def event_pes(structure: PossibilityStructure) -> Event:
    g = structure.game
    return _per_type(structure, lambda i, t: criteria.pbr(g, i, structure.fob(i, t)))


def event_adm(structure: PossibilityStructure) -> Event:
    g = structure.game
    return _per_type(structure, lambda i, t: criteria.admissible_set(g, i, structure.fob(i, t)))


def event_deg(structure: PossibilityStructure) -> Event:
    g = structure.game
    return _per_type(structure, lambda i, t: g.actions[i] if len(structure.pi[i][t]) == 1 else ())


def point_optimal_profiles(game: OrdinalGame, i: int, action: str) -> frozenset:
    """Opponent profiles against which ``action`` is a point best reply."""
    return frozenset(p for p in game.opponent_profiles(i)
                     if action in criteria.point_best_replies(game, i, p))


def event_mar(structure: PossibilityStructure) -> Event:
    g = structure.game
    table = [{a: point_optimal_profiles(g, i, a) for a in g.actions[i]} for i in range(g.n_players)]

    def choose(i, t):
        fob = structure.fob(i, t)
        return [a for a in g.actions[i] if table[i][a] and fob <= table[i][a]]

    return _per_type(structure, choose)


def attitude_event(structure: PossibilityStructure, attitude: str) -> Event:
    if attitude == OPT:
        return event_opt(structure)
    if attitude == PES:
        return event_pes(structure)
    if attitude == ADM:
        return event_adm(structure)
    if attitude == OPT_DEG:
        return event_opt(structure) & event_deg(structure)
    raise ValueError(f"unknown attitude {attitude!r}; choose from opt, pes, adm, opt&deg")


# -- belief operator and chains ---------------------------------------------

def belief_operator(structure: PossibilityStructure, player, opp_parts: Sequence) -> frozenset:
    """B_i(E_{-i}): own states whose possibility set lies inside the product of ``opp_parts``.

    ``opp_parts`` lists one set of (action, type) pairs per opponent, in player order.
    """
    g = structure.game
    i = g.index(player)
    parts = [frozenset(p) for p in opp_parts]
    if len(parts) != g.n_players - 1:
        raise ValueError("need one event part per opponent")
    good = [t for t in structure.types[i]
            if all(all((a, s) in part for a, s, part in zip(acts, tys, parts))
                   for acts, tys in structure.pi[i][t])]
    return frozenset((a, t) for a in g.actions[i] for t in good)


def _opp(parts, i):
    return [p for j, p in enumerate(parts) if j != i]


def _step_per_player(structure, att: Event, prev: Event) -> Event:
    n = structure.game.n_players
    return Event(tuple(att.parts[i] & belief_operator(structure, i, _opp(prev.parts, i))
                       for i in range(n))).normalized()


def _step_joint(structure, att_states: frozenset, prev_states: frozenset) -> frozenset:
    """One chain step on explicit joint states: Att ∩ ⋂_i {ω : π_i(t_i) ⊆ proj_{-i} prev}."""
    g = structure.game
    n = g.n_players
    ok_types = []
    for i in range(n):
        proj = {tuple(w[j] for j in range(n) if j != i) for w in prev_states}
        ok = set()
        for t in structure.types[i]:
            if all(tuple(zip(acts, tys)) in proj for acts, tys in structure.pi[i][t]):
                ok.add(t)
        ok_types.append(ok)
    return frozenset(w for w in att_states if all(w[i][1] in ok_types[i] for i in range(n)))


@dataclass
class CBChain:
    levels: list          # CB^0, CB^1, ... up to the first repeat
    infinity: Event
    fixed_index: int      # first m with CB^m == CB^{m+1}
    cross_checked: bool

    def at(self, m: int) -> Event:
        return self.levels[min(m, len(self.levels) - 1)]


def cb_chain(structure: PossibilityStructure, att: Event, depth: Optional[int] = None,
             cross_check: bool = True) -> CBChain:
    """CB^0 = Att, CB^m = Att ∩ B(CB^{m-1}), run until it repeats (or to ``depth``).

    The per-player recursion is checked against the literal joint-state
    computation whenever the joint space is small enough.
    """
    att = att.normalized()
    levels = [att]
    while True:
        nxt = _step_per_player(structure, att, levels[-1])
        if nxt == levels[-1]:
            break
        levels.append(nxt)
        if depth is not None and len(levels) > depth:
            break
    fixed = len(levels) - 1
    checked = cross_check and structure.n_states() <= JOINT_CHECK_LIMIT
    if checked:
        att_states = frozenset(att.states())
        cur = att_states
        for m, ev in enumerate(levels):
            if m:
                cur = _step_joint(structure, att_states, cur)
            if cur != frozenset(ev.states()):
                raise InvariantViolation(f"CB^{m}: per-player recursion disagrees with joint computation")
    return CBChain(levels, levels[-1], fixed, checked)


# -- theorem checks ----------------------------------------------------------

def _family_profiles(game: OrdinalGame, family) -> frozenset:
    return frozenset(game.profiles(family))


@dataclass
class InclusionReport:
    attitude: str
    procedure: str
    # per n: (n, proj_A CB^n, AR^{n+1}, "equal" | "strict" | "violation")
    levels: list
    at_infinity: str
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def all_equal(self) -> bool:
        return self.ok and self.at_infinity == "equal" and all(l[3] == "equal" for l in self.levels)


def _relation(sub: frozenset, sup: frozenset) -> str:
    if sub == sup:
        return "equal"
    return "strict" if sub <= sup else "violation"


def check_inclusion_theorem(structure: PossibilityStructure, attitude: str,
                            trace: Optional[EliminationTrace] = None) -> InclusionReport:
    """Check proj_A CB^n(Att) ⊆ AR^{n+1} for every n up to both fixed points, and at infinity."""
    game = structure.game
    proc = ATTITUDE_PROCEDURE[attitude]
    trace = trace or SOLVERS[proc](game)
    chain = cb_chain(structure, attitude_event(structure, attitude))
    top = max(chain.fixed_index, trace.fixed_point_round) + 1
    levels, bad = [], []
    for n in range(top + 1):
        proj = project_actions(chain.at(n))
        ar = _family_profiles(game, trace.at(n + 1))
        rel = _relation(proj, ar)
        levels.append((n, proj, ar, rel))
        if rel == "violation":
            bad.append(f"proj_A CB^{n}({attitude}) not contained in {proc}^{n + 1}: "
                       f"{sorted(proj - ar)[0]}")
    inf_rel = _relation(project_actions(chain.infinity), _family_profiles(game, trace.fixed_point))
    if inf_rel == "violation":
        bad.append(f"proj_A CB^inf({attitude}) not contained in {proc}^inf")
    return InclusionReport(attitude, proc, levels, inf_rel, bad)


# -- witness structures --------------------------------------------------------

SINK = "sink"


def _level_type(a: str, m) -> str:
    return f"{a}@{m}"


def build_witness_structure(game: OrdinalGame, attitude: str,
                            trace: Optional[EliminationTrace] = None,
                            verify: bool = True) -> PossibilityStructure:
    """A finite structure whose chain projects exactly onto the procedure's rounds.

    Loop types ``a@inf`` (one per a in AR^inf) believe a surviving certificate
    and point back at loop types. Level types ``a@m`` exist only while the
    rounds still shrink (AR^{m+1} differs from AR^inf); they point at level
    m-1 types, and level 0 points at one sink type per player.
    """
    if attitude not in (OPT, PES, ADM):
        raise ValueError(f"no witness construction for attitude {attitude!r}")
    proc = ATTITUDE_PROCEDURE[attitude]
    trace = trace or SOLVERS[proc](game)
    nbar = trace.fixed_point_round
    top = nbar - 2  # highest level needing its own types
    certs = {(j.round, j.player, j.item): j.evidence for j in trace.justifications if j.kept}
    n = game.n_players
    types = [[] for _ in range(n)]
    pi = [dict() for _ in range(n)]

    def target(j, b, level):
        if level == "inf" or level > top:
            return _level_type(b, "inf")
        if level < 0:
            return SINK
        return _level_type(b, level)

    def image(i, kappa, level):
        opps = game.opponents(i)
        return {(tuple(prof), tuple(target(j, b, level) for j, b in zip(opps, prof))) for prof in kappa}

    if top >= 0:
        for i in range(n):
            types[i].append(SINK)
            first = tuple(game.actions[j][0] for j in game.opponents(i))
            pi[i][SINK] = {(first, tuple(SINK for _ in first))}
        for m in range(top + 1):
            for i in range(n):
                for a in game.actions[i]:
                    if a in trace.at(m + 1)[i]:
                        t = _level_type(a, m)
                        types[i].append(t)
                        pi[i][t] = image(i, certs[(m + 1, i, a)], m - 1)
    for i in range(n):
        for a in game.actions[i]:
            if a in trace.fixed_point[i]:
                t = _level_type(a, "inf")
                types[i].append(t)
                pi[i][t] = image(i, certs[(nbar + 1, i, a)], "inf")
    structure = make_structure(game, types, pi)
    if verify:
        rep = check_inclusion_theorem(structure, attitude, trace)
        if not rep.all_equal:
            raise InvariantViolation(f"witness structure for {attitude} does not reach equality: "
                                     f"{[l[3] for l in rep.levels]} / {rep.at_infinity}")
    return structure


# -- JSON -------------------------------------------------------------------

def structure_to_json(structure: PossibilityStructure) -> dict:
    g = structure.game
    pi = {}
    for i, name in enumerate(g.players):
        pi[name] = {t: [list(acts) + list(tys) for acts, tys in sorted(structure.pi[i][t])]
                    for t in structure.types[i]}
    return {"game": game_to_json(g),
            "types": {name: list(structure.types[i]) for i, name in enumerate(g.players)},
            "pi": pi}


def resolve_game(ref, base_dir: Optional[str] = None) -> OrdinalGame:
    """An inline game object or a path (relative to ``base_dir``)."""
    if isinstance(ref, OrdinalGame):
        return ref
    if isinstance(ref, str):
        path = ref if os.path.isabs(ref) or base_dir is None else os.path.join(base_dir, ref)
        return load_game(path)
    if isinstance(ref, Mapping):
        return validate_game(ref)
    raise StructureError(["'game' must be an inline game object or a path"])


def _types_from_json(raw, game):
    types = raw.get("types")
    if not isinstance(types, Mapping) or set(types) != set(game.players):
        raise StructureError(["'types' must map every player to a list of type names"])
    for p, ts in types.items():
        if not isinstance(ts, list) or not all(isinstance(t, str) for t in ts):
            raise StructureError([f"types of {p!r} must be a list of strings"])
    return [types[p] for p in game.players]


def structure_from_json(raw: Mapping, base_dir: Optional[str] = None) -> PossibilityStructure:
    if not isinstance(raw, Mapping):
        raise StructureError(["structure description must be an object"])
    game = resolve_game(raw.get("game"), base_dir)
    types = _types_from_json(raw, game)
    pi_raw = raw.get("pi")
    if not isinstance(pi_raw, Mapping) or set(pi_raw) != set(game.players):
        raise StructureError(["'pi' must map every player to a type -> entries object"])
    k = game.n_players - 1
    pi = []
    for p in game.players:
        pmap = {}
        if not isinstance(pi_raw[p], Mapping):
            raise StructureError([f"pi of {p!r} must be an object"])
        for t, entries in pi_raw[p].items():
            if not isinstance(entries, list):
                raise StructureError([f"pi_{p}({t}) must be a list"])
            rows = []
            for e in entries:
                if not isinstance(e, list) or len(e) != 2 * k or not all(isinstance(x, str) for x in e):
                    raise StructureError([f"pi_{p}({t}) entry {e!r} must list {k} actions then {k} types"])
                rows.append((tuple(e[:k]), tuple(e[k:])))
            pmap[t] = rows
        pi.append(pmap)
    return make_structure(game, types, pi)


def validate_structure(raw: Mapping, base_dir: Optional[str] = None):
    """Validate a raw possibility or knowledge structure (the latter has 'states')."""
    if isinstance(raw, Mapping) and "states" in raw:
        from .knowledge import knowledge_from_json
        return knowledge_from_json(raw, base_dir)
    return structure_from_json(raw, base_dir)


def load_structure(path):
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StructureError([f"invalid JSON at line {exc.lineno}: {exc.msg}"]) from exc
    return validate_structure(raw, os.path.dirname(os.path.abspath(path)))
