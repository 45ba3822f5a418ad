import json
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ptsp_ts.alns import (
    DESTROYERS, AlnsConfig, InstanceInfeasibleError, OperatorStats, RepairTables, accept, build_start,
    classify, destroy_operator, destroy_random, destroy_time, destroy_worst, repair, run,
    select_heuristic, slice_shuffle, stack, successor_destroy, successor_match, update_scores,
    update_weights,
)
from ptsp_ts.feasibility import Schedule, insert, validate
from ptsp_ts.objective import CONTROL, ObjectiveWeights, evaluate, score

from conftest import avail, make, one_shift, operator, task


def forced(lo, hi=None, **kw):
    return AlnsConfig(chance_lo=lo, chance_hi=lo if hi is None else hi, **kw)


def filled(inst, placements):
    s = Schedule(inst)
    for tid, sid in placements:
        assert insert(s, tid, sid), (tid, sid)
    return s


def hundred_tasks():
    tasks = [task(i, (i % 8) * 6, (i % 8) * 6 + 6, group=i % 2, bw=Fraction(1, 6)) for i in range(96)]
    tasks += [task(96 + i, 0, 6, group=2, bw=Fraction(1, 6)) for i in range(4)]
    skills = ((0, 100, 6), (1, 100, 6), (2, 100, 6))
    ops = [operator(o, [avail(o)], skills=skills) for o in range(3)]
    inst = make(tasks, ops)
    s = Schedule(inst)
    for t in inst.tasks:
        for sid in range(3):
            if insert(s, t.id, sid):
                break
    assert len(s.assignment) == 100
    return s


# ---------------------------------------------------------------- destroy


def test_destroy_random_all_and_none():
    s = hundred_tasks()
    rng = random.Random(1)
    assert destroy_random(s.copy(), forced(0), rng) == []
    c = s.copy()
    assert len(destroy_random(c, forced(1), rng)) == 100 and not c.assignment


def test_destroy_random_rate():
    s = hundred_tasks()
    rng = random.Random(7)
    counts = [len(destroy_random(s.copy(), forced(0.3), rng)) for _ in range(1000)]
    assert 25 <= sum(counts) / len(counts) <= 35


def test_destroy_random_spares_mandatory():
    inst = one_shift([task(0, 0, 6, mandatory=True), task(1, 6, 12)])
    s = filled(inst, [(0, 0), (1, 0)])
    assert destroy_random(s, forced(1), random.Random(0)) == [1]


def two_shift_instance(p_low=10, p_high=100, mandatory=False):
    tasks = [task(0, 0, 12, priority=p_low, mandatory=mandatory), task(1, 24, 36, priority=p_high)]
    ops = [operator(0, [avail(0, 0, 12)]), operator(1, [avail(1, 24, 36)])]
    return make(tasks, ops)


def test_destroy_worst_single_shift():
    inst = one_shift([task(0, 0, 6)])
    s = filled(inst, [(0, 0)])
    assert destroy_worst(s, forced(0.3), random.Random(0)) == [0]


def test_destroy_worst_lowest_first():
    s = filled(two_shift_instance(), [(0, 0), (1, 1)])
    assert destroy_worst(s, forced(0.5), random.Random(0)) == [0]
    assert s.plans[1].enabled and not s.plans[0].enabled


def test_destroy_worst_mandatory_exempt():
    inst = make([task(0, 0, 12, mandatory=True), task(1, 24, 36, mandatory=True)],
                [operator(0, [avail(0, 0, 12)]), operator(1, [avail(1, 24, 36)])])
    s = filled(inst, [(0, 0), (1, 1)])
    assert destroy_worst(s, forced(1), random.Random(0)) == []


def test_destroy_operator_forced():
    s = filled(two_shift_instance(), [(0, 0), (1, 1)])
    assert destroy_operator(s.copy(), forced(0), random.Random(0)) == []
    c = s.copy()
    assert sorted(destroy_operator(c, forced(1), random.Random(0))) == [0, 1]
    assert not c.assignment


def test_destroy_operator_reproducible():
    tasks = [task(i, (i % 4) * 12, (i % 4) * 12 + 12) for i in range(12)]
    ops = [operator(o, [avail(o)]) for o in range(3)]
    inst = make(tasks, ops)
    s = filled(inst, [(i, i // 4) for i in range(12)])
    a = destroy_operator(s.copy(), forced(0.5), random.Random(42))
    b = destroy_operator(s.copy(), forced(0.5), random.Random(42))
    assert a == b


def test_destroy_time_whole_horizon():
    s = hundred_tasks()
    cfg = AlnsConfig(width_lo=5 * 48, width_hi=5 * 48)

    class Zero(random.Random):
        def randrange(self, *a):
            return 0

        def randint(self, a, b):
            return b
    assert len(destroy_time(s, cfg, Zero(0))) == 100


def test_destroy_time_boundaries():
    # slice starts at bucket 12: a task ending at 12 stays, one covering 12 goes
    inst = one_shift([task(0, 6, 12, bw=Fraction(1, 2)), task(1, 8, 13, bw=Fraction(1, 2))])
    s = filled(inst, [(0, 0), (1, 0)])

    class At12(random.Random):
        def randrange(self, *a):
            return 12

        def randint(self, a, b):
            return a
    assert destroy_time(s, AlnsConfig(), At12(0)) == [1]
    assert 0 in s.assignment


# ---------------------------------------------------------------- repair


def test_sorter_a_lower_deviation_first():
    tasks = [task(0, 0, 6, skill=60, priority=20), task(1, 12, 18, skill=70, priority=20)]
    inst = make(tasks, [operator(0, [avail(0)], skills=((0, 60, 6),))])
    tables = RepairTables(inst, CONTROL)
    assert [t for t, _, _ in tables.order["A"]] == [0, 1]


def test_slice_shuffle_zero_is_identity():
    items = list(range(10))
    assert slice_shuffle(items, (0,), random.Random(0)) == items


def test_slice_shuffle_large_block():
    items = list(range(10))
    out = slice_shuffle(items, (16,), random.Random(3))
    assert sorted(out) == items


def test_slice_shuffle_blocks_of_four():
    items = list(range(10))
    for seed in range(30):
        out = slice_shuffle(items, (4,), random.Random(seed))
        assert set(out[0:4]) == {0, 1, 2, 3}
        assert set(out[4:8]) == {4, 5, 6, 7}
        assert set(out[8:]) == {8, 9}


def stack_instance(n):
    tasks = [task(i, 6, 12, bw=Fraction(1, 6)) for i in range(n)] + [task(n, 30, 36)]
    return make(tasks, [operator(0, [avail(0)])])


def test_stack_none():
    inst = stack_instance(0)
    s = Schedule(inst)
    tables = RepairTables(inst, CONTROL)
    assert insert(s, 0, 0)
    assert stack(s, 0, 0, tables, "A") == []


def test_stack_six_fill_the_bucket():
    inst = stack_instance(6)
    s = Schedule(inst)
    tables = RepairTables(inst, CONTROL)
    assert insert(s, 0, 0)
    assert sorted(stack(s, 0, 0, tables, "A")) == [1, 2, 3, 4, 5]
    assert s.bandwidth_profile(0)[6] == 60


def test_stack_seventh_excluded():
    inst = stack_instance(7)
    s = Schedule(inst)
    tables = RepairTables(inst, CONTROL)
    assert insert(s, 0, 0)
    assert len(stack(s, 0, 0, tables, "A")) == 5
    assert len(s.assignment) == 6 and validate(s).ok


def test_repair_fills_pool():
    inst = stack_instance(3)
    s = Schedule(inst)
    tables = RepairTables(inst, CONTROL)
    repair(s, "C", tables, AlnsConfig(), random.Random(0))
    assert len(s.assignment) == 4 and validate(s).ok


def test_build_start_empty():
    inst = make([], [operator(0, [avail(0)])])
    assert not build_start(inst).assignment


def test_build_start_prefers_efficiency():
    inst = one_shift([task(0, 0, 6, priority=30), task(1, 0, 12, priority=30)])
    assert set(build_start(inst).assignment) == {0}


def test_build_start_small(small1):
    s = build_start(small1)
    assert validate(s).ok and evaluate(s).weighted_total > 0


def test_build_start_mandatory_unplaceable():
    inst = one_shift([task(0, 0, 6, mandatory=True), task(1, 0, 6, mandatory=True)])
    with pytest.raises(InstanceInfeasibleError):
        build_start(inst)


# ---------------------------------------------------------------- acceptance and adaptation


def test_accept_new_best():
    assert accept(1000, 1001, 1000, Fraction(1, 200)) == "new_best"


def test_accept_band_boundary():
    assert accept(1000, 995, 1000, Fraction(1, 200)) == "accepted"
    assert accept(1000, 994, 1000, Fraction(1, 200)) == "rejected"
    assert accept(Fraction(2000, 3), Fraction(2000, 3) * Fraction(199, 200), 1000, Fraction(1, 200)) == "accepted"


def test_classify_outcomes():
    assert classify("new_best", 11, 10) == "global_improve"
    assert classify("accepted", 11, 10) == "incumbent_improve"
    assert classify("accepted", 10, 10) == "accepted_worse"
    assert classify("accepted", 9, 10) == "accepted_worse"
    assert classify("rejected", 1, 10) == "rejected"


def test_select_uniform():
    assert OperatorStats(DESTROYERS).probabilities() == [0.25] * 4


def test_select_proportional():
    stats = OperatorStats(("a", "b"), weights=[3.0, 1.0])
    assert stats.probabilities() == [0.75, 0.25]
    rng = random.Random(5)
    hits = Counter(select_heuristic(stats, rng) for _ in range(10_000))
    assert 7200 <= hits["a"] <= 7800


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(1e-6, 50.0), min_size=2, max_size=6), st.integers(0, 2**16))
def test_select_same_draws_as_choices(weights, seed):
    names = tuple(f"h{i}" for i in range(len(weights)))
    stats = OperatorStats(names, weights=list(weights))
    a, b = random.Random(seed), random.Random(seed)
    assert ([select_heuristic(stats, a) for _ in range(30)]
            == [b.choices(names, weights=weights)[0] for _ in range(30)])


def test_select_single():
    stats = OperatorStats(("only",))
    assert {select_heuristic(stats, random.Random(i)) for i in range(20)} == {"only"}


def test_scores():
    cfg = AlnsConfig()
    stats = OperatorStats(("a",))
    update_scores(stats, "a", "global_improve", cfg)
    assert stats.scores == [40] and stats.uses == [1]
    update_scores(stats, "a", "rejected", cfg)
    assert stats.scores == [40] and stats.uses == [2]
    update_scores(stats, "a", "accepted_worse", cfg.replace(eps3=0))
    assert stats.scores == [40]
    update_scores(stats, "a", "accepted_worse", cfg)
    assert stats.scores == [48]


def test_weight_update_value():
    stats = OperatorStats(("a",), weights=[1.0], scores=[40.0], uses=[1])
    update_weights(stats, AlnsConfig(p_react=0.1))
    assert stats.weights[0] == pytest.approx(4.9, abs=1e-12)
    assert stats.scores == [0.0] and stats.uses == [0]


def test_weight_update_unused_and_frozen():
    stats = OperatorStats(("a",), weights=[2.0])
    update_weights(stats, AlnsConfig())
    assert stats.weights[0] == pytest.approx(1.8)
    stats = OperatorStats(("a",), weights=[2.0], scores=[40.0], uses=[3])
    update_weights(stats, AlnsConfig(p_react=0))
    assert stats.weights == [2.0]


def test_weight_floor():
    stats = OperatorStats(("a",), weights=[1e-7])
    update_weights(stats, AlnsConfig())
    assert stats.weights[0] == 1e-6


# ---------------------------------------------------------------- ALNS+ pieces


def linked_instance():
    tasks = [task(0, 0, 6, bw=Fraction(1, 2)), task(1, 6, 12, pred=0, bw=Fraction(1, 2)),
             task(2, 30, 36)]
    ops = [operator(0, [avail(0, 0, 20)]), operator(1, [avail(1, 0, 48)])]
    return make(tasks, ops)


def test_successor_match_same_shift():
    inst = linked_instance()
    tables = RepairTables(inst, CONTROL)
    s = filled(inst, [(0, 0)])
    before = evaluate(s).consec_same
    assert successor_match(s, 0, 0, tables) == [1]
    assert s.assignment[1] == 0 and evaluate(s).consec_same == before + 1


def test_successor_match_partner_elsewhere():
    inst = linked_instance()
    tables = RepairTables(inst, CONTROL)
    s = filled(inst, [(1, 1), (0, 0)])
    assert successor_match(s, 0, 0, tables) == []


class Coin(random.Random):
    def __init__(self, heads):
        super().__init__(0)
        self.heads = heads

    def random(self):
        return 0.0 if self.heads else 0.99


def test_successor_destroy_coin():
    inst = linked_instance()
    s = filled(inst, [(0, 0), (1, 1)])
    from ptsp_ts.feasibility import remove_task
    remove_task(s, 0)
    c = s.copy()
    assert successor_destroy(c, [0], Coin(False)) == [] and 1 in c.assignment
    assert successor_destroy(s, [0], Coin(True)) == [1] and 1 not in s.assignment


def test_successor_destroy_unlinked():
    inst = linked_instance()
    s = filled(inst, [(2, 1)])
    from ptsp_ts.feasibility import remove_task
    remove_task(s, 2)
    assert successor_destroy(s, [2], Coin(True)) == []


def test_successor_mode_off_never_matches(monkeypatch):
    import ptsp_ts.alns as alns
    calls = []
    monkeypatch.setattr(alns, "successor_match", lambda *a, **k: calls.append(a) or [])
    monkeypatch.setattr(alns, "successor_destroy", lambda *a, **k: calls.append(a) or [])
    from ptsp_ts.instance import generate_instance
    run(generate_instance("small", 3), AlnsConfig(iterations=50), keep_log=False)
    assert calls == []


# ---------------------------------------------------------------- main loop


def test_zero_iterations_returns_start(small1):
    res = run(small1, AlnsConfig(iterations=0))
    assert res.best == build_start(small1) and res.best_value == res.start_value


def test_run_never_worse_and_feasible(small1):
    res = run(small1, AlnsConfig(iterations=300, rng_seed=2, check_every=1))
    assert res.best_value >= res.start_value
    assert validate(res.best).ok
    assert res.best_value == evaluate(res.best).weighted_total
    assert len(res.log) == 300


def test_run_log_deterministic(small1):
    cfg = AlnsConfig(iterations=200, rng_seed=9)
    assert run(small1, cfg).log_lines() == run(small1, cfg).log_lines()
    assert run(small1, cfg).log_lines() != run(small1, cfg.replace(rng_seed=10)).log_lines()


def test_log_records(small1):
    lines = run(small1, AlnsConfig(iterations=5)).log_lines({"seed": 0})
    recs = [json.loads(x) for x in lines]
    assert [r["iter"] for r in recs[:-1]] == [1, 2, 3, 4, 5]
    assert set(recs[0]) == {"iter", "destroy", "repair", "value", "outcome", "best"}
    assert recs[-1]["summary"] and recs[-1]["seed"] == 0


def test_checkpoints_are_prefixes(small1):
    cfg = AlnsConfig(iterations=400, rng_seed=4)
    long = run(small1, cfg, keep_log=False, checkpoints=[100, 400])
    short = run(small1, cfg.replace(iterations=100), keep_log=False)
    assert long.trace[0][1] == short.best_value
    assert long.trace[1][1] == long.best_value


def test_more_iterations_help():
    from ptsp_ts.instance import generate_instance
    inst = generate_instance("small", 1)
    res = [run(inst, AlnsConfig(iterations=2500, rng_seed=s), keep_log=False, checkpoints=[250, 2500]).trace
           for s in range(1, 6)]
    assert sum(t[1][1] for t in res) >= sum(t[0][1] for t in res)


def test_config_round_trip(tmp_path):
    cfg = AlnsConfig(iterations=10, eps3=0, weights=ObjectiveWeights.parse("AllObjectives"), successor_mode=True)
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg.to_dict()))
    assert AlnsConfig.load(p) == cfg
    with pytest.raises(ValueError):
        AlnsConfig.from_dict({"iterationz": 3})
    with pytest.raises(ValueError):
        AlnsConfig(chance_lo=0.6, chance_hi=0.5)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 500), st.integers(0, 1000))
def test_run_feasible_any_seed(inst_seed, rng_seed):
    from ptsp_ts.instance import generate_instance
    inst = generate_instance("tiny", inst_seed)
    res = run(inst, AlnsConfig(iterations=60, rng_seed=rng_seed, check_every=1), keep_log=False)
    assert validate(res.best).ok and score(res.best, CONTROL) == res.best_value
