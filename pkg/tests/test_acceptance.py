"""Acceptance criteria 1-7.

Each test prints one ``[PASS]``/``[FAIL]`` line with its wall time and limit,
and fails if either the check or the time budget fails.  Run with
``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import os
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import product

import pytest

sys.path.insert(0, os.path.dirname(__file__))

import oracles  # noqa: E402
from ordgame.criteria import STRICT_MIXED, strictly_dominated_mixed  # noqa: E402
from ordgame.epistemic import (ADM, OPT, OPT_DEG, PES, build_witness_structure, cb_chain,  # noqa: E402
                               check_inclusion_theorem, event_opt, event_pes, make_structure,
                               project_actions)
from ordgame.game import is_generic  # noqa: E402
from ordgame.generate import GeneratorConfig, random_config, random_game, random_knowledge, random_structure  # noqa: E402
from ordgame.knowledge import (check_wt_theorem, enumerate_product_structures, make_knowledge,  # noqa: E402
                               product_triviality_check)
from ordgame.library import (EXAMPLE_GAMES, battle_of_the_sexes, borgers_not_wald, leading_game,  # noqa: E402
                             wald_not_rationalizable)
from ordgame.risk import concave_transform, convergence_experiment, limiting_game  # noqa: E402
from ordgame.solvers import (borgers_rationalizability, point_rationalizability,  # noqa: E402
                             rationalizability, wald_rationalizability, wishful_thinking)
from ordgame.suite import property_suite  # noqa: E402

ATTITUDE_PROCEDURE = {OPT: "PR", PES: "WR", ADM: "BR"}


def _emit(line):
    reporter = _REPORTER[0]
    if reporter is not None:
        reporter.ensure_newline()
        reporter.write_line(line)
    else:
        print(line, flush=True)


_REPORTER = [None]


@pytest.fixture(autouse=True)
def _terminal(pytestconfig):
    _REPORTER[0] = pytestconfig.pluginmanager.get_plugin("terminalreporter")
    yield
    _REPORTER[0] = None


@contextmanager
def criterion(number, title, limit):
    """Collect failure messages; print one result line; assert at the end."""
    failures = []
    t0 = time.perf_counter()
    yield failures
    dt = time.perf_counter() - t0
    if dt >= limit:
        failures.append(f"took {dt:.2f}s, limit {limit}s")
    status = "PASS" if not failures else "FAIL"
    line = f"[{status}] criterion {number}: {title} ({dt:.2f}s / limit {limit}s)"
    if failures:
        line += "\n    " + "\n    ".join(str(f) for f in failures[:10])
    _emit(line)
    assert not failures, line


def fam(a, b):
    return (frozenset(a), frozenset(b))


def expect(failures, label, got, want):
    if got != want:
        failures.append(f"{label}: got {got!r}, want {want!r}")


def rows(g, i, row_names, col_names):
    return [tuple(g.payoff(i, (r, c)) for c in col_names) for r in row_names]


def test_criterion_1_golden_examples():
    with criterion(1, "golden examples", 1.0) as bad:
        g = leading_game()
        pr = point_rationalizability(g)
        expect(bad, "PR rounds", pr.rounds[1:4], [fam("TM", "LC"), fam("TM", "L"), fam("M", "L")])
        expect(bad, "PR fixed point", pr.fixed_point, fam("M", "L"))
        expect(bad, "WR fixed point", wald_rationalizability(g).fixed_point, fam("TMD", "LC"))
        expect(bad, "D in BR^1_a", "D" in borgers_rationalizability(g).rounds[1][0], False)
        s = make_structure(g, [["ta", "ta'", "ta''"], ["tb"]], [
            {"ta": [(("L",), ("tb",))], "ta'": [(("C",), ("tb",))],
             "ta''": [((x,), ("tb",)) for x in "LCR"]},
            {"tb": [(("T",), ("ta",))]},
        ])
        expect(bad, "Opt_a", event_opt(s).parts[0], {("M", "ta"), ("T", "ta'"), ("M", "ta''")})
        expect(bad, "Pes_a", event_pes(s).parts[0],
               {("M", "ta"), ("T", "ta'"), ("T", "ta''"), ("M", "ta''"), ("D", "ta''")})

        bos = battle_of_the_sexes()
        expect(bad, "BoS PR fixed point", point_rationalizability(bos).fixed_point, fam("TD", "LR"))
        yr = wishful_thinking(bos)
        expect(bad, "BoS YR^1 drops (D,L)", ("D", "L") in yr.rounds[1], False)
        expect(bad, "BoS YR^1 size", len(yr.rounds[1]), 3)
        s = make_structure(bos, [["ta", "ta'"], ["tb", "tb'"]], [
            {"ta": [(("L",), ("tb",)), (("R",), ("tb'",))], "ta'": [(("R",), ("tb'",))]},
            {"tb": [(("T",), ("ta",))], "tb'": [(("T",), ("ta",)), (("D",), ("ta'",))]},
        ])
        opt = event_opt(s)
        inf = cb_chain(s, opt).infinity
        expect(bad, "BoS CB^inf(Opt)", inf, opt)
        expect(bad, "BoS CB^inf projection", project_actions(inf), frozenset(product("TD", "LR")))

        g = borgers_not_wald()
        expect(bad, "BR^1_a", borgers_rationalizability(g).rounds[1][0], frozenset("TMD"))
        expect(bad, "WR^1_a", wald_rationalizability(g).rounds[1][0], frozenset("TD"))
        expect(bad, "TR^1_a", rationalizability(g).rounds[1][0], frozenset("TMD"))
        lim = limiting_game(g).game
        expect(bad, "limiting Ann rows", rows(lim, 0, "TMD", "LR"), [(1, 0), (1, 1), (1, 1)])
        expect(bad, "limiting WR^1_a", wald_rationalizability(lim).rounds[1][0], frozenset("TMD"))

        g = wald_not_rationalizable()
        tr = rationalizability(g)
        expect(bad, "TR^1_a", tr.rounds[1][0], frozenset("TD"))
        j = tr.certificate(1, 0, "M")
        expect(bad, "M witness kind", j.evidence.kind, STRICT_MIXED)
        expect(bad, "M witness weights", j.evidence.dominator.weights,
               {"T": Fraction(1, 2), "D": Fraction(1, 2)})
        expect(bad, "M in WR^1_a", "M" in wald_rationalizability(g).rounds[1][0], True)

        g = leading_game()
        lim = limiting_game(g).game
        expect(bad, "limiting Bob rows", rows(lim, 1, "TMD", "LCR"), [(1, 1, 1), (1, 1, 0), (0, 1, 1)])
        expect(bad, "limiting WR^1_b", wald_rationalizability(lim).rounds[1][1], frozenset("LCR"))
        for r in (1, 2, 4, 8):
            tr_r = rationalizability(concave_transform(g, r).game).fixed_point
            expect(bad, f"R in TR^inf(r={r})_b", "R" in tr_r[1], False)


def test_criterion_2_inclusion_theorems():
    with criterion(2, "inclusion theorems on 200 random possibility structures", 30.0) as bad:
        rng = random.Random(2002)
        for k in range(200):
            g = random_game(random_config(rng, rng.choice((2, 3)), 3))
            s = random_structure(g, rng, max_types=3)
            for att in (OPT, PES, ADM, OPT_DEG):
                rep = check_inclusion_theorem(s, att)
                if not rep.ok:
                    bad.append(f"structure {k}, {att}: {rep.violations}")


def _check_witness(bad, label, g):
    for att, proc in ATTITUDE_PROCEDURE.items():
        rep = check_inclusion_theorem(build_witness_structure(g, att), att)
        if not rep.all_equal:
            bad.append(f"{label}, {att}/{proc}: levels {[lv[3] for lv in rep.levels]}, "
                       f"infinity {rep.at_infinity}")


def test_criterion_3_witness_equality():
    with criterion(3, "witness structures reach equality", 60.0) as bad:
        for name, make in sorted(EXAMPLE_GAMES.items()):
            _check_witness(bad, name, make())
        rng = random.Random(3003)
        for k in range(50):
            n = 2 if k < 35 else 3
            g = random_game(random_config(rng, n, 4 if n == 2 else 3))
            _check_witness(bad, f"random game {k}", g)


def test_criterion_4_proposition_suite():
    with criterion(4, "proposition suite on 500 two-player and 100 three-player games", 120.0) as bad:
        two = property_suite(500, n_players=2, max_actions=4, seed=4004, n_transforms=3)
        three = property_suite(100, n_players=3, max_actions=3, seed=4005, n_transforms=3)
        expect(bad, "games checked", (two.checks_run, three.checks_run), (500, 100))
        for f in two.failures + three.failures:
            bad.append(f"game {f['index']}: {f['check']}: {f['messages'][:2]}")


def test_criterion_5_risk_monotonicity():
    with criterion(5, "risk-limit monotonicity", 120.0) as bad:
        rs = [1, 2, 4, 8, 16]
        cases = [(name, make()) for name, make in sorted(EXAMPLE_GAMES.items())]
        rng = random.Random(5005)
        while len(cases) < len(EXAMPLE_GAMES) + 50:
            g = random_game(random_config(rng, 2, 4, generic=True))
            if is_generic(g)[1]:
                cases.append((f"random game {len(cases) - len(EXAMPLE_GAMES)}", g))
            else:
                bad.append("generator produced a non-generic game")
        for label, g in cases:
            rep = convergence_experiment(g, rs)
            if not (rep.monotone and rep.inside_br) or rep.violations:
                bad.append(f"{label}: {rep.violations}")


def test_criterion_6_mixed_dominance_oracle():
    with criterion(6, "mixed dominance LP agrees with grid oracle", 60.0) as bad:
        rng = random.Random(6006)
        disagreements = 0
        for k in range(200):
            acts = (rng.randint(1, 3), rng.randint(1, 3))
            g = random_game(GeneratorConfig(rng.getrandbits(63), 2, acts, False, (0, 9)))
            for i in range(2):
                profs = g.opponent_profiles(i)
                for rest in oracles.subsets(profs):
                    for a in g.actions[i]:
                        others = [b for b in g.actions[i] if b != a]
                        if not others:
                            continue
                        lp = strictly_dominated_mixed(g, i, a, list(rest)) is not None
                        grid = any(oracles.grid_dominated(g, i, a, rest, list(s))
                                   for s in oracles.subsets(others))
                        if lp != grid:
                            disagreements += 1
                            bad.append(f"game {k}, player {i}, action {a}: lp={lp} grid={grid}")
        expect(bad, "disagreements", disagreements, 0)


def _hand_built_knowledge():
    g = battle_of_the_sexes()
    one = make_knowledge(g, [["ta"], ["tb"]], [(("T", "ta"), ("L", "tb"))], [[[0]], [[0]]])
    states = [(("T", "t"), ("L", "s")), (("T", "t"), ("R", "s")),
              (("D", "t"), ("L", "s")), (("D", "t"), ("R", "s"))]
    coarse = make_knowledge(g, [["t"], ["s"]], states, [[[0, 1], [2, 3]], [[0, 2], [1, 3]]])
    tied = [(("T", "t1"), ("L", "s1")), (("D", "t2"), ("R", "s2"))]
    fine = make_knowledge(g, [["t1", "t2"], ["s1", "s2"]], tied, [[[0], [1]], [[0], [1]]])
    return [one, coarse, fine]


def test_criterion_7_knowledge_structures():
    with criterion(7, "knowledge-structure checks", 30.0) as bad:
        structures = 0
        for acts in product((1, 2), repeat=2):
            g = random_game(GeneratorConfig(7, 2, acts, False, (0, 3)))
            for n_types in product((1, 2), repeat=2):
                types = [[f"t{j}" for j in range(k)] for k in n_types]
                for ks in enumerate_product_structures(g, types):
                    structures += 1
                    rep = product_triviality_check(ks)
                    if not rep.ok or rep.sampled:
                        bad.append(f"product {acts} types {n_types}: {rep.violations}")
                    wt = check_wt_theorem(ks)
                    if not wt.ok:
                        bad.append(f"WT on product {acts} types {n_types}: {wt.violations}")
        if structures == 0:
            bad.append("no product structures enumerated")
        for k, ks in enumerate(_hand_built_knowledge()):
            if not check_wt_theorem(ks).ok:
                bad.append(f"hand-built structure {k}")
        rng = random.Random(7007)
        for k in range(300):
            g = random_game(random_config(rng, rng.choice((2, 3)), 3))
            ks = random_knowledge(g, rng, max_states=6)
            if len(ks.states) > 6:
                bad.append(f"random structure {k} has {len(ks.states)} states")
            wt = check_wt_theorem(ks)
            if not wt.ok:
                bad.append(f"random structure {k}: {wt.violations}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
