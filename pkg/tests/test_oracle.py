import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ptsp_ts.alns import AlnsConfig, run
from ptsp_ts.feasibility import Schedule, insert, validate
from ptsp_ts.instance import generate_instance
from ptsp_ts.objective import CONTROL, SETTINGS, evaluate
from ptsp_ts.oracle import (
    Limits, build_model, expected_counts, export_lp, read_lp, schedule_vector, solve_exact,
    violated_rows,
)

from conftest import avail, make, one_shift, operator, task


def test_single_task():
    res = solve_exact(one_shift([task(0, 0, 6, priority=10)]))
    assert res.optimal_value == 10 and res.proven


def test_two_overlapping():
    inst = one_shift([task(0, 0, 6, priority=10), task(1, 3, 9, priority=7)])
    # all four assignment vectors, checked by the validator
    values = []
    for bits in itertools.product((0, 1), repeat=2):
        s = Schedule(inst)
        if all(insert(s, t, 0) for t, b in enumerate(bits) if b) and validate(s).ok:
            values.append(evaluate(s).weighted_total)
    assert max(values) == 10
    assert solve_exact(inst).optimal_value == 10


def test_empty_instance():
    res = solve_exact(make([], [operator(0, [avail(0)])]))
    assert res.optimal_value == 0 and res.proven and not res.optimal_schedule.assignment


def test_node_limit_reported():
    inst = generate_instance("tiny", 11)
    res = solve_exact(inst, limits=Limits(max_nodes=2))
    assert not res.proven
    assert validate(res.optimal_schedule).ok


def test_mandatory_forced():
    inst = one_shift([task(0, 0, 6, priority=1, mandatory=True), task(1, 0, 6, priority=50)])
    res = solve_exact(inst)
    assert res.optimal_value == 1 and set(res.optimal_schedule.assignment) == {0}


def test_lp_single_pair():
    inst = make([task(0, 1, 3, priority=10)], [operator(0, [avail(0, 0, 4)])], horizon=4, groups=1)
    text = export_lp(inst)
    model = read_lp(text)
    xs = [v for v in model.binaries if v.startswith("x_")]
    assert xs == ["x_0_0"]
    three = [r for r in model.rows if r.family == "3"]
    assert len(three) == 1 and three[0].coeffs == {"x_0_0": 1, "z_0": -1} and three[0].sense == "<="
    # 1 x + 3*4 shift-time vars + 4 group-time vars + z, zh
    assert len(model.binaries) == 19
    # 4-bucket window: 7 per-bucket families, 2 step families of 3, 5 per shift, 2 task buckets, 1 selection
    assert len(model.rows) == 43
    assert expected_counts(inst) == (19, model.family_counts())


def test_lp_round_trip():
    inst = generate_instance("tiny", 5)
    model = build_model(inst, SETTINGS["Penalty"])
    back = read_lp(export_lp(inst, SETTINGS["Penalty"]))
    assert back.binaries == model.binaries
    assert back.objective == model.objective
    assert [(r.name, r.coeffs, r.sense, r.rhs) for r in back.rows] == \
        [(r.name, r.coeffs, r.sense, r.rhs) for r in model.rows]


def test_lp_comments_name_rows():
    text = export_lp(generate_instance("tiny", 2))
    assert "\\ c3:" in text and "Binary" in text and text.rstrip().endswith("End")


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 400))
def test_oracle_schedule_satisfies_model(seed):
    inst = generate_instance("tiny", seed)
    res = solve_exact(inst)
    model = build_model(inst)
    vec = schedule_vector(res.optimal_schedule)
    assert violated_rows(model, vec) == []
    assert sum(model.objective.get(v, 0) * x for v, x in vec.items()) == res.optimal_value
    n_vars, fams = expected_counts(inst)
    assert len(model.binaries) == n_vars and model.family_counts() == fams


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 400), st.integers(0, 50))
def test_alns_never_beats_oracle(seed, rng_seed):
    inst = generate_instance("tiny", seed)
    opt = solve_exact(inst).optimal_value
    res = run(inst, AlnsConfig(iterations=200, rng_seed=rng_seed), keep_log=False)
    assert res.best_value <= opt
