import json
import math
import os
import pathlib

import pytest

import wassest

DATA = pathlib.Path(os.environ.get("WASSEST_TEST_DATA", pathlib.Path(__file__).parents[2] / "tests" / "data"))


def two_point_line():
    return wassest.Instance([([-1.0], [1.0], 0.5)], [[-1.0], [1.0]])


def test_estimate_two_point_line():
    r = wassest.estimate(two_point_line(), epsilon=0.05, seed=3)
    assert abs(r["sigma_hat"] - 1.5) <= 0.05
    assert abs(r["mu_hat"][0]) <= 0.05
    assert r["guarantee_holds"]
    assert abs(sum(r["weights"])) < 1e-12


def test_energy_matches_1d_oracle():
    inst = two_point_line()
    weights, energy, _ = wassest.solve_dual(inst)
    assert energy == pytest.approx(wassest.transport_cost_1d(inst), abs=1e-9)
    assert wassest.energy(inst, weights) == pytest.approx(energy)
    assert wassest.gradient(inst, [0.5, -0.5]) == pytest.approx([-0.125, 0.125])
    assert wassest.smoothness_constant(inst) == pytest.approx(1.0)


def test_json_round_trip():
    inst = wassest.load_instance(str(DATA / "square_two_point.json"))
    text = wassest.dump_instance(inst, name="square")
    back = wassest.parse_instance(text)
    assert back.samples == inst.samples
    assert json.loads(text)["dimension"] == 2


def test_invalid_input_is_value_error():
    with pytest.raises(ValueError):
        wassest.Instance([([0.0], [1.0], 0.5)], [[0.0]])
    with pytest.raises(wassest.InvalidInput):
        wassest.load_instance(str(DATA / "overlapping_boxes.json"))


def test_reduction():
    inst, gamma = wassest.reduce_3sat("p cnf 3 1\n1 -2 3 0\n")
    assert inst.num_boxes == 7
    assert gamma == pytest.approx(64000 / 7)
    assert math.isclose(sum(w * math.prod(h - l for l, h in zip(lo, hi)) for lo, hi, w in inst.boxes), 1.0)
    unsat = (DATA / "unsat8.cnf").read_text()
    assert not wassest.decide_positive_likelihood(unsat)
    assert not wassest.brute_force_sat(unsat)
