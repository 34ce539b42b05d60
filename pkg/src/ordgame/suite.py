"""Randomized regression battery over games and small epistemic structures.

Each failing game is shrunk greedily (dropping actions while the same check
still fails) and written out as a reproducer file.
"""

from __future__ import annotations

import json
import os
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import criteria
from .epistemic import (ADM, OPT, OPT_DEG, PES, attitude_event, cb_chain, check_inclusion_theorem,
                        project_actions)
from .game import OrdinalGame, game_to_json, validate_game
from .generate import (random_affine_transform, random_config, random_game,
                       random_monotone_transform, random_structure)
from .solvers import (ACTION_CONCEPTS, IESD, SOLVERS, TR, YR, relations, verify_trace)

ORDINAL_CONCEPTS = ("PR", "WR", "BR", YR, IESD)


def _rounds_equal(t1, t2) -> bool:
    return t1.rounds == t2.rounds


def game_checks(game: OrdinalGame, seed: int, n_transforms: int = 3,
                n_structures: int = 1) -> dict[str, list[str]]:
    """Run the invariant battery on one game; maps check name to its failure messages."""
    rng = random.Random(seed)
    fails: dict[str, list[str]] = {}

    def fail(name, msg):
        fails.setdefault(name, []).append(msg)

    rep = relations(game)
    for v in rep.violations:
        fail("relations", v)
    bound = sum(len(a) - 1 for a in game.actions) + 1
    n_profiles = len(list(game.profiles()))
    for c, tr in rep.traces.items():
        for p in verify_trace(game, tr):
            fail("certificates", f"{c}: {p}")
        limit = n_profiles if c == YR else bound
        if tr.fixed_point_round > limit:
            fail("round-bound", f"{c} stabilized at {tr.fixed_point_round} > {limit}")

    for i in range(game.n_players):
        for opp in game.opponent_profiles(i):
            o = criteria.obr(game, i, [opp])
            p = criteria.pbr(game, i, [opp])
            a = criteria.admissible_set(game, i, [opp])
            if not o == p == a:
                fail("singleton", f"player {game.players[i]} vs {opp}: obr={sorted(o)} pbr={sorted(p)} adm={sorted(a)}")

    for k in range(n_transforms):
        g2 = random_monotone_transform(game, rng)
        for c in ORDINAL_CONCEPTS:
            if not _rounds_equal(rep.traces[c], SOLVERS[c](g2)):
                fail("ordinal-invariance", f"{c} changed under monotone transform #{k}")
    g3 = random_affine_transform(game, rng)
    if not _rounds_equal(rep.traces[TR], SOLVERS[TR](g3)):
        fail("affine-invariance", "TR changed under a positive affine transform")

    for k in range(n_structures):
        s = random_structure(game, rng)
        for att in (OPT, PES, ADM, OPT_DEG):
            ir = check_inclusion_theorem(s, att, rep.traces[{OPT: "PR", PES: "WR", ADM: "BR",
                                                           OPT_DEG: "PR"}[att]])
            for v in ir.violations:
                fail("inclusion-theorem", f"structure #{k}: {v}")
        opt = cb_chain(s, attitude_event(s, OPT))
        deg = cb_chain(s, attitude_event(s, OPT_DEG))
        for m in range(max(opt.fixed_index, deg.fixed_index) + 1):
            if not project_actions(deg.at(m)) <= project_actions(opt.at(m)):
                fail("deg-inside-opt", f"structure #{k}, level {m}")
    return fails


def _shrink(game: OrdinalGame, still_fails: Callable[[OrdinalGame], bool]) -> OrdinalGame:
    changed = True
    while changed:
        changed = False
        for i in range(game.n_players):
            if len(game.actions[i]) == 1:
                continue
            for a in game.actions[i]:
                fam = [set(x) for x in game.actions]
                fam[i].discard(a)
                smaller = game.restrict(fam)
                if still_fails(smaller):
                    game, changed = smaller, True
                    break
            if changed:
                break
    return game


@dataclass
class SuiteReport:
    count: int
    checks_run: int = 0
    failures: list = field(default_factory=list)   # dicts: index, check, messages, reproducer
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


def property_suite(count: int, n_players: int = 2, max_actions: int = 4, seed: int = 0,
                   out_dir: Optional[str] = None, n_transforms: int = 3, n_structures: int = 1,
                   extra_checks: Optional[dict] = None) -> SuiteReport:
    """Run :func:`game_checks` on ``count`` random games.

    ``extra_checks`` maps a name to ``fn(game) -> list of messages``; it lets
    callers add checks (and exercise the reproducer path).
    """
    t0 = time.perf_counter()
    master = random.Random(seed)
    report = SuiteReport(count)
    extra_checks = extra_checks or {}
    for idx in range(count):
        cfg = random_config(master, n_players, max_actions)
        game = random_game(cfg)
        gseed = master.getrandbits(63)

        def run(g, gseed=gseed):
            res = game_checks(g, gseed, n_transforms, n_structures)
            for name, fn in extra_checks.items():
                msgs = fn(g)
                if msgs:
                    res[name] = list(msgs)
            return res

        res = run(game)
        report.checks_run += 1
        for name, msgs in sorted(res.items()):
            small = _shrink(game, lambda g, name=name: name in run(g))
            path = None
            if out_dir:
                os.makedirs(out_dir, exist_ok=True)
                path = os.path.join(out_dir, f"reproducer_{idx}_{name}.json")
                with open(path, "w", encoding="utf-8") as fh:
                    json.dump({"check": name, "seed": gseed, "game": game_to_json(small)}, fh, indent=2)
            report.failures.append({"index": idx, "check": name, "messages": msgs,
                                    "reproducer": path, "game": small})
    report.seconds = time.perf_counter() - t0
    return report


def reproduce(path: str, extra_checks: Optional[dict] = None) -> list[str]:
    """Re-run the recorded check on a reproducer file; returns its failure messages."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    game = validate_game(raw["game"])
    name = raw["check"]
    if extra_checks and name in extra_checks:
        return list(extra_checks[name](game))
    return game_checks(game, raw["seed"]).get(name, [])


def suite_to_json(rep: SuiteReport) -> dict:
    return {
        "count": rep.count,
        "checks_run": rep.checks_run,
        "ok": rep.ok,
        "seconds": round(rep.seconds, 3),
        "failures": [{k: v for k, v in f.items() if k != "game"} for f in rep.failures],
    }
