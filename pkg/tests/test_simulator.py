import json

import numpy as np
import pytest

import oracles
from zoneloc.errors import DomainError, ParseError, ValidationError
from zoneloc.simulator import Scenario, draw_trials, evaluate, generate_db, generate_observation
from zoneloc.statfit import fit_observation_model


def scenario(n_zones=2, n_aps=1, spc=3, seed=0, sep=15.0, sd=4.0):
    means = [[-40.0 - sep * ((k + n) % n_zones) for n in range(n_aps)] for k in range(n_zones)]
    return Scenario(means=means, stdevs=[[sd] * n_aps] * n_zones, samples_per_cell=spc, seed=seed)


def test_generate_db_counts():
    db = generate_db(scenario())
    assert len(db) == 6
    assert db.zones == ("Z1", "Z2") and db.aps == ("AP1",)


def test_generate_db_deterministic():
    assert generate_db(scenario(seed=3)) == generate_db(scenario(seed=3))
    assert generate_db(scenario(seed=3)) != generate_db(scenario(seed=4))


def test_invalid_scenarios():
    with pytest.raises(ValidationError):
        Scenario(means=[[-50.0], [-60.0]], stdevs=[[0.0], [1.0]], samples_per_cell=3, seed=0)
    with pytest.raises(ValidationError):
        Scenario(means=[[-50.0], [-60.0]], stdevs=[[1.0], [1.0]], samples_per_cell=0, seed=0)
    with pytest.raises(ValidationError):
        Scenario(means=[[-50.0]], stdevs=[[1.0]], samples_per_cell=3, seed=0)


def test_observation_draws():
    sc = scenario(n_zones=3, n_aps=4)
    a = generate_observation(sc, 2, seed=11)
    assert list(a.readings) == ["AP1", "AP2", "AP3", "AP4"]
    assert a == generate_observation(sc, 2, seed=11)
    with pytest.raises(DomainError):
        generate_observation(sc, 3, seed=0)


def test_scenario_json_round_trip(tmp_path):
    sc = scenario(n_zones=3, n_aps=2)
    path = tmp_path / "s.json"
    sc.save(path)
    assert Scenario.load(path) == sc
    data = json.loads(path.read_text())
    assert list(data) == ["n_zones", "n_aps", "cells", "samples_per_cell", "seed"]
    del data["cells"][0]
    path.write_text(json.dumps(data))
    with pytest.raises(ValidationError, match="missing"):
        Scenario.load(path)
    path.write_text("{}")
    with pytest.raises(ParseError):
        Scenario.load(path)


def test_zero_trials():
    sc = scenario(spc=20)
    report = evaluate(fit_observation_model(generate_db(sc)), sc, 0, seed=1)
    assert report.accuracy is None and report.mean_true_zone_confidence is None
    assert report.trials == 0
    assert json.loads(report.to_json())["accuracy"] is None


def test_identifier_mismatch():
    model = fit_observation_model(generate_db(scenario(n_zones=2, spc=20)))
    with pytest.raises(DomainError):
        evaluate(model, scenario(n_zones=3, spc=20), 10, seed=0)


def test_confusion_rows_and_reproducibility():
    sc = scenario(n_zones=3, n_aps=2, spc=50, sep=6.0)
    model = fit_observation_model(generate_db(sc))
    report = evaluate(model, sc, 300, seed=5)
    truth = np.bincount([z for z, _ in draw_trials(sc, 300, 5)], minlength=3)
    assert [sum(r) for r in report.confusion] == truth.tolist()
    assert sum(map(sum, report.confusion)) == 300
    assert evaluate(model, sc, 300, seed=5).to_json() == report.to_json()


def _binomial_3sigma(p, n):
    return 3 * np.sqrt(p * (1 - p) / n)


def test_accuracy_monotone_in_separation():
    trials = 400
    previous = None
    for sep in (2.0, 5.0, 10.0, 20.0):
        sc = scenario(n_zones=3, n_aps=2, spc=100, seed=2, sep=sep)
        acc = evaluate(fit_observation_model(generate_db(sc)), sc, trials, seed=9).accuracy
        if previous is not None:
            assert acc >= previous - _binomial_3sigma(previous, trials)
        previous = acc
    assert previous > 0.95


def test_bayes_oracle_sanity():
    sc = scenario(n_zones=3, n_aps=2, spc=10, sep=30.0, sd=1.0)
    hits = [oracles.bayes_decide(sc, obs.readings) == z for z, obs in draw_trials(sc, 100, 0)]
    assert all(hits)
