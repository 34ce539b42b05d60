"""Partition-based knowledge structures over a (possibly non-product) state space.

A state is a tuple of (action, type) pairs, one per player. Partitions may
be given as a list of cells or, to allow describing broken inputs, as a map
from each state index to the cell it is assigned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Optional, Sequence

from . import criteria
from .epistemic import (PossibilityStructure, StructureError, make_structure, resolve_game,
                        _types_from_json)
from .game import InvariantViolation, OrdinalGame, canonical_subsets, game_to_json
from .solvers import YR, EliminationTrace, wishful_thinking

# product_triviality_check samples instead of enumerating above this many events
ENUMERATION_LIMIT = 2 ** 16


@dataclass(frozen=True, eq=False)
class KnowledgeStructure:
    game: OrdinalGame
    types: tuple
    states: tuple   # each state: tuple of (action, type) per player
    cells: tuple    # per player: tuple, state index -> frozenset of state indices

    def cell(self, i: int, w: int) -> frozenset:
        return self.cells[i][w]

    def partition(self, i: int) -> list:
        seen, out = set(), []
        for c in self.cells[i]:
            if c not in seen:
                seen.add(c)
                out.append(c)
        return out

    def actions_of(self, w: int) -> tuple:
        return tuple(a for a, _ in self.states[w])

    def all_states(self) -> frozenset:
        return frozenset(range(len(self.states)))


def _opp_section(state, i):
    return tuple(x for j, x in enumerate(state) if j != i)


def player_violations(game: OrdinalGame, states: Sequence, i: int, assign: Sequence,
                      only=None) -> list:
    """Clause failures of player ``i``'s partition, given as state -> cell assignments.

    ``only`` restricts the check to a set of states closed under the cells.
    """
    name = game.players[i]
    out = []
    idx = range(len(states)) if only is None else sorted(only)
    for w in idx:
        c = assign[w]
        if w not in c:
            out.append(f"Pi_{name}: state {w} is not in its own cell")
        for v in c:
            if assign[v] != c:
                out.append(f"Pi_{name}: cells of states {w} and {v} overlap without being equal")
                break
        if any(states[v][i] != states[w][i] for v in c):
            out.append(f"Pi_{name}: Introspection fails at state {w}")
    sections = {}
    for w in idx:
        t = states[w][i][1]
        sec = frozenset(_opp_section(states[v], i) for v in assign[w])
        if sections.setdefault(t, sec) != sec:
            out.append(f"Pi_{name}: Independence fails for type {t!r}")
            sections[t] = sec  # report once per differing cell
    return out


def make_knowledge(game: OrdinalGame, types, states, partitions) -> KnowledgeStructure:
    """Validate and build. ``partitions[i]`` is a list of cells or a map index -> cell."""
    n = game.n_players
    types = tuple(tuple(ts) for ts in types)
    problems = []
    if not states:
        raise StructureError(["state space is empty"])
    clean = []
    for k, s in enumerate(states):
        s = tuple((a, t) for a, t in s)
        if len(s) != n:
            problems.append(f"state {k} does not give one (action, type) per player")
            continue
        for j, (a, t) in enumerate(s):
            if a not in game.actions[j]:
                problems.append(f"state {k}: unknown action {a!r} for {game.players[j]!r}")
            if t not in types[j]:
                problems.append(f"state {k}: unknown type {t!r} for {game.players[j]!r}")
        clean.append(s)
    if len(set(clean)) != len(clean):
        problems.append("duplicate states")
    if problems:
        raise StructureError(problems)
    m = len(clean)
    cells = []
    for i in range(n):
        name = game.players[i]
        raw = partitions[i]
        assign = [None] * m
        if isinstance(raw, Mapping):
            for key, cell in raw.items():
                w = int(key)
                if not 0 <= w < m:
                    problems.append(f"Pi_{name}: unknown state index {key}")
                    continue
                assign[w] = frozenset(int(v) for v in cell)
        else:
            for cell in raw:
                c = frozenset(int(v) for v in cell)
                if not c:
                    problems.append(f"Pi_{name}: empty cell")
                for w in c:
                    if not 0 <= w < m:
                        problems.append(f"Pi_{name}: unknown state index {w}")
                    elif assign[w] is not None:
                        problems.append(f"Pi_{name}: state {w} lies in two cells")
                    else:
                        assign[w] = c
        missing = [w for w in range(m) if assign[w] is None]
        if missing:
            problems.append(f"Pi_{name}: states {missing} are not covered")
            cells.append(None)
            continue
        if any(v >= m or v < 0 for c in assign for v in c):
            cells.append(None)
            continue
        problems.extend(player_violations(game, clean, i, assign))
        cells.append(tuple(assign))
    if problems:
        raise StructureError(problems)
    return KnowledgeStructure(game, types, tuple(clean), tuple(cells))


def slice_partitions(game: OrdinalGame, states: Sequence) -> list:
    """Per player, the cells grouping states by the player's own (action, type)."""
    out = []
    for i in range(game.n_players):
        groups = {}
        for w, s in enumerate(states):
            groups.setdefault(s[i], []).append(w)
        out.append(list(groups.values()))
    return out


# -- operators ----------------------------------------------------------------

def knowledge_operator(ks: KnowledgeStructure, player, event) -> frozenset:
    """K_i(E) = {ω : Π_i(ω) ⊆ E}; the Truth axiom K_i(E) ⊆ E is asserted."""
    i = ks.game.index(player)
    e = frozenset(event)
    out = frozenset(w for w in range(len(ks.states)) if ks.cells[i][w] <= e)
    if not out <= e:
        raise InvariantViolation(f"Truth axiom fails for player {ks.game.players[i]!r}")
    return out


def mutual_knowledge(ks: KnowledgeStructure, event) -> frozenset:
    out = frozenset(range(len(ks.states)))
    for i in range(ks.game.n_players):
        out &= knowledge_operator(ks, i, event)
    return out


@dataclass
class CKChain:
    levels: list
    infinity: frozenset
    fixed_index: int

    def at(self, m: int) -> frozenset:
        return self.levels[min(m, len(self.levels) - 1)]


def ck_chain(ks: KnowledgeStructure, event, depth: Optional[int] = None) -> CKChain:
    """K^0 = E and K^m = K(K^{m-1}), until a repeat (or ``depth`` steps)."""
    levels = [frozenset(event)]
    while True:
        nxt = mutual_knowledge(ks, levels[-1])
        if nxt == levels[-1]:
            break
        levels.append(nxt)
        if depth is not None and len(levels) > depth:
            break
    return CKChain(levels, levels[-1], len(levels) - 1)


def event_opt_knowledge(ks: KnowledgeStructure) -> frozenset:
    """States where every player's action maximizes the best case over what the player's cell allows."""
    g = ks.game
    out = set()
    for w, s in enumerate(ks.states):
        ok = True
        for i in range(g.n_players):
            seen = {_opp_section(ks.actions_of(v), i) for v in ks.cells[i][w]}
            if s[i][0] not in criteria.obr(g, i, seen):
                ok = False
                break
        if ok:
            out.add(w)
    return frozenset(out)


def project_states(ks: KnowledgeStructure, event) -> frozenset:
    return frozenset(ks.actions_of(w) for w in event)


@dataclass
class WTReport:
    # per n: (n, proj_A K^n(Opt), YR^{n+1}, "equal" | "strict" | "violation")
    levels: list
    at_infinity: str
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _relation(sub, sup):
    if sub == sup:
        return "equal"
    return "strict" if sub <= sup else "violation"


def check_wt_theorem(ks: KnowledgeStructure, trace: Optional[EliminationTrace] = None) -> WTReport:
    """Check proj_A K^n(Opt) ⊆ YR^{n+1} for every n up to both fixed points, and at infinity."""
    trace = trace or wishful_thinking(ks.game)
    if trace.concept != YR:
        raise ValueError("need a wishful-thinking trace")
    chain = ck_chain(ks, event_opt_knowledge(ks))
    top = max(chain.fixed_index, trace.fixed_point_round) + 1
    levels, bad = [], []
    for n in range(top + 1):
        proj = project_states(ks, chain.at(n))
        yr = trace.at(n + 1)
        rel = _relation(proj, yr)
        levels.append((n, proj, yr, rel))
        if rel == "violation":
            bad.append(f"proj_A K^{n}(Opt) not contained in YR^{n + 1}: {sorted(proj - yr)[0]}")
    inf = _relation(project_states(ks, chain.infinity), trace.fixed_point)
    if inf == "violation":
        bad.append("proj_A K^inf(Opt) not contained in YR^inf")
    return WTReport(levels, inf, bad)


def possibility_from_knowledge(ks: KnowledgeStructure) -> PossibilityStructure:
    """π_i(t_i) = opponent section of the cell of any state where i has type t_i.

    Types that occur in no state carry no possibility set and are dropped.
    """
    g = ks.game
    n = g.n_players
    types, pi = [], []
    for i in range(n):
        pmap = {}
        for w, s in enumerate(ks.states):
            t = s[i][1]
            image = frozenset(
                (tuple(a for a, _ in sec), tuple(t2 for _, t2 in sec))
                for sec in (_opp_section(ks.states[v], i) for v in ks.cells[i][w]))
            if pmap.setdefault(t, image) != image:
                raise InvariantViolation(f"Independence broken for type {t!r} of {g.players[i]!r}")
        types.append([t for t in ks.types[i] if t in pmap])
        pi.append(pmap)
    return make_structure(g, types, pi)


# -- product state spaces -------------------------------------------------------

def full_product_states(game: OrdinalGame, types) -> list:
    own = [[(a, t) for a in game.actions[i] for t in types[i]] for i in range(game.n_players)]
    return [tuple(s) for s in product(*own)]


@dataclass
class TrivialityReport:
    events_checked: int
    sampled: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def product_triviality_check(ks: KnowledgeStructure, rng=None) -> TrivialityReport:
    """On a full product space, K_i of an interactive event is nonempty iff the event is everything."""
    g = ks.game
    full = full_product_states(g, ks.types)
    if set(full) != set(ks.states) or len(full) != len(ks.states):
        raise ValueError("state space is not the full product of action-type pairs")
    index = {s: w for w, s in enumerate(ks.states)}
    checked, sampled, bad = 0, False, []
    for i in range(g.n_players):
        opp_space = sorted({_opp_section(s, i) for s in ks.states})
        total = 2 ** len(opp_space) - 1
        if total > ENUMERATION_LIMIT:
            import random
            r = rng or random.Random(0)
            sampled = True
            subsets = [tuple(x for x in opp_space if r.random() < 0.5) or (opp_space[0],)
                       for _ in range(ENUMERATION_LIMIT)]
            subsets.append(tuple(opp_space))
        else:
            subsets = canonical_subsets(opp_space)
        for sub in subsets:
            sub = frozenset(sub)
            event = frozenset(w for s, w in index.items() if _opp_section(s, i) in sub)
            known = knowledge_operator(ks, i, event)
            checked += 1
            if bool(known) != (len(sub) == len(opp_space)):
                bad.append(f"player {g.players[i]!r}: K_i nonempty={bool(known)} for an event "
                           f"covering {len(sub)}/{len(opp_space)} opponent states")
    return TrivialityReport(checked, sampled, bad)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
        yield [[first]] + part


def enumerate_product_structures(game: OrdinalGame, types):
    """Every valid knowledge structure on the full product space.

    Introspection confines each cell to one own (action, type) slice, so the
    candidates are all combinations of set partitions of the slices; each
    player's candidates are filtered with the validator's clauses.
    """
    states = full_product_states(game, types)
    per_player = []
    for i in range(game.n_players):
        slices = {}
        for w, s in enumerate(states):
            slices.setdefault(s[i], []).append(w)
        options = [list(_set_partitions(ws)) for ws in slices.values()]
        valid = []
        assign = [None] * len(states)

        def extend(k, covered, cells):
            # prune as soon as the slices chosen so far already break a clause
            if player_violations(game, states, i, assign, covered):
                return
            if k == len(options):
                valid.append(list(cells))
                return
            for part in options[k]:
                for c in part:
                    fc = frozenset(c)
                    for w in c:
                        assign[w] = fc
                extend(k + 1, covered | {w for c in part for w in c}, cells + part)

        extend(0, set(), [])
        per_player.append(valid)
    for combo in product(*per_player):
        yield make_knowledge(game, types, states, list(combo))


# -- JSON ---------------------------------------------------------------------------

def knowledge_to_json(ks: KnowledgeStructure) -> dict:
    g = ks.game
    return {
        "game": game_to_json(g),
        "types": {p: list(ks.types[i]) for i, p in enumerate(g.players)},
        "states": [[a for a, _ in s] + [t for _, t in s] for s in ks.states],
        "partitions": {p: [sorted(c) for c in ks.partition(i)] for i, p in enumerate(g.players)},
    }


def knowledge_from_json(raw: Mapping, base_dir: Optional[str] = None) -> KnowledgeStructure:
    game = resolve_game(raw.get("game"), base_dir)
    types = _types_from_json(raw, game)
    n = game.n_players
    states_raw = raw.get("states")
    if not isinstance(states_raw, list):
        raise StructureError(["'states' must be a list"])
    states = []
    for k, s in enumerate(states_raw):
        if not isinstance(s, list) or len(s) != 2 * n or not all(isinstance(x, str) for x in s):
            raise StructureError([f"state {k} must list {n} actions then {n} types"])
        states.append(tuple(zip(s[:n], s[n:])))
    parts = raw.get("partitions")
    if not isinstance(parts, Mapping) or set(parts) != set(game.players):
        raise StructureError(["'partitions' must give a partition for every player"])
    for p in game.players:
        if not isinstance(parts[p], (list, Mapping)):
            raise StructureError([f"partition of {p!r} must be a list of cells or an index map"])
    return make_knowledge(game, types, states, [parts[p] for p in game.players])
