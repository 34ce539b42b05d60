import json

import pytest

from ordgame.game import dumps_game, is_generic
from ordgame.generate import GeneratorConfig, random_game
from ordgame.suite import property_suite, reproduce


def test_seeded_generic_game():
    g = random_game(GeneratorConfig(42, 2, (3, 3), True))
    assert is_generic(g)[1]


def test_determinism():
    cfg = GeneratorConfig(42, 3, (2, 3, 2), False)
    assert dumps_game(random_game(cfg)) == dumps_game(random_game(cfg))


def test_ties_allowed():
    g = random_game(GeneratorConfig(7, 2, (3, 3), False, (0, 2)))
    assert set().union(*(set(p.values()) for p in g.payoffs)) <= {0, 1, 2}


def test_config_validation():
    with pytest.raises(ValueError):
        GeneratorConfig(0, 2, (0, 3))
    with pytest.raises(ValueError):
        GeneratorConfig(0, 2, (4, 3), True, (0, 2))
    with pytest.raises(ValueError):
        GeneratorConfig(-1, 2, (2, 2))


def test_empty_suite():
    rep = property_suite(0)
    assert rep.ok and rep.checks_run == 0


def test_small_suite_passes():
    rep = property_suite(15, 2, 3, seed=3)
    assert rep.ok, rep.failures
    rep = property_suite(5, 3, 2, seed=4)
    assert rep.ok, rep.failures


def test_failure_is_minimized_and_reproduced(tmp_path):
    # an artificial check failing whenever Ann has two or more actions
    extra = {"ann-has-choice": lambda g: ["more than one action"] if len(g.actions[0]) > 1 else []}
    rep = property_suite(6, 2, 3, seed=11, out_dir=str(tmp_path), n_transforms=0,
                         n_structures=0, extra_checks=extra)
    assert rep.failures
    for f in rep.failures:
        assert f["check"] == "ann-has-choice"
        small = f["game"]
        assert len(small.actions[0]) == 2 and all(len(a) == 1 for a in small.actions[1:])
        assert reproduce(f["reproducer"], extra) == ["more than one action"]
        assert json.load(open(f["reproducer"]))["check"] == "ann-has-choice"
