from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ptsp_ts.alns import build_start
from ptsp_ts.feasibility import Schedule, insert
from ptsp_ts.instance import generate_instance
from ptsp_ts.objective import (
    CONTROL, SETTINGS, InfeasibleScheduleError, ObjectiveWeights, delta_insert, evaluate, score,
)

from conftest import avail, make, one_shift, operator, task
from test_feasibility import forged


def test_empty_schedule_all_zero():
    b = evaluate(Schedule(one_shift([task(0, 0, 6)])))
    assert (b.priority_sum, b.penalty_sum, b.groups_avg, b.consec_same, b.workload_ratio) == (0, 0, 0, 0, 0)
    assert b.weighted_total == 0


def test_single_task_with_deviation():
    inst = make([task(0, 0, 12, priority=100, skill=70)],
                [operator(0, [avail(0)], skills=((0, 50, 6),))])
    s = Schedule(inst)
    assert insert(s, 0, 0)
    assert evaluate(s, ObjectiveWeights(1, 1, 0, 0, 0)).weighted_total == 80


def test_control_matches_resummation(medium1):
    s = build_start(medium1)
    direct = sum(medium1.task_by_id[t].priority - medium1.eligibility[t, sid].deviation
                 for t, sid in s.assignment.items())
    assert evaluate(s).weighted_total == direct == score(s, CONTROL)


def test_delta_plain():
    inst = one_shift([task(0, 0, 6, priority=50)])
    assert delta_insert(Schedule(inst), 0, 0) == 50


def test_delta_consec_term():
    inst = one_shift([task(0, 0, 6, priority=5), task(1, 6, 12, priority=5, pred=0)])
    s = Schedule(inst)
    insert(s, 0, 0)
    assert delta_insert(s, 1, 0, ObjectiveWeights(1, 1, 0, 1, 0)) == 6
    assert delta_insert(s, 1, 0, CONTROL) == 5


def test_delta_zero_weights():
    inst = one_shift([task(0, 0, 6, priority=50), task(1, 3, 9, group=1, bw=Fraction(1, 2))])
    s = Schedule(inst)
    zero = ObjectiveWeights(0, 0, 0, 0, 0)
    assert delta_insert(s, 0, 0, zero) == 0
    insert(s, 0, 0)
    assert delta_insert(Schedule(inst), 1, 0, zero) == 0


def test_secondary_terms():
    # two groups in one shift, a consecutive pair, some idle time
    inst = one_shift([task(0, 0, 6, bw=Fraction(1, 2)), task(1, 6, 12, pred=0),
                      task(2, 20, 24, group=1)])
    s = Schedule(inst)
    for t in (0, 1, 2):
        assert insert(s, t, 0)
    b = evaluate(s)
    assert b.groups_avg == 2 and b.max_groups == 2
    assert b.consec_same == 1 and b.consec_any == 1 and b.consec_available == 1
    # 16 busy buckets in a [0, 24) window
    assert b.workload_ratio == Fraction(16, 24)
    w = ObjectiveWeights(1, 1, -1, 1, 1000)
    assert evaluate(s, w).weighted_total == 30 - 2 + 1 + Fraction(16000, 24)
    assert score(s, w) == evaluate(s, w).weighted_total


def test_infeasible_rejected():
    inst = one_shift([task(0, 0, 6), task(1, 3, 9)])
    with pytest.raises(InfeasibleScheduleError):
        evaluate(forged(inst, {0: (0, 12, ())}, [(0, 0), (1, 0)]))


def test_weights_parse():
    assert ObjectiveWeights.parse("1,100,0,0,0") == SETTINGS["Penalty"]
    assert ObjectiveWeights.parse("TaskGroups").w_groups == -10
    assert ObjectiveWeights.parse("1,1,0.5,0,0").w_groups == Fraction(1, 2)
    with pytest.raises(ValueError):
        ObjectiveWeights.parse("1,2,3")


def test_named_settings():
    assert {k: str(v) for k, v in SETTINGS.items()} == {
        "Control": "1,1,0,0,0", "Priority": "1,0,0,0,0", "Penalty": "1,100,0,0,0",
        "TaskGroups": "1,1,-10,0,0", "Workload": "1,1,0,0,10000", "AllObjectives": "1,1,-1,1,1000",
    }


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 300), st.sampled_from(sorted(SETTINGS)))
def test_cached_score_equals_fresh(seed, name):
    inst = generate_instance("tiny", seed)
    w = SETTINGS[name]
    s = build_start(inst, w)
    assert Fraction(score(s, w)) == evaluate(s, w).weighted_total
