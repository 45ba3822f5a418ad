"""Adaptive large neighborhood search over task-to-shift assignments."""

from __future__ import annotations

import dataclasses
import json
import math
import random
import time
from bisect import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from pathlib import Path
from typing import Callable, Sequence

from .feasibility import Schedule, apply_insertion, normalize, probe, try_insert, validate
from .instance import CAPACITY, Instance, Task
from .objective import CONTROL, ObjectiveBreakdown, ObjectiveWeights, evaluate, score

DESTROYERS = ("random", "worst", "operator", "time")
REPAIRERS = ("A", "B", "C", "D", "E")
OUTCOMES = ("global_improve", "incumbent_improve", "accepted_worse", "rejected")


class InstanceInfeasibleError(RuntimeError):
    """A mandatory task could not be placed by the constructive heuristic."""


@dataclass
class AlnsConfig:
    iterations: int = 1000
    segment_len: int = 100
    chance_lo: float = 0.1
    chance_hi: float = 0.5
    width_lo: int = 180  # minutes
    width_hi: int = 300
    slice_set: tuple[int, ...] = (0, 4, 8, 16)
    eps1: float = 40
    eps2: float = 25
    eps3: float = 8
    p_react: float = 0.1
    accept_band: Fraction = Fraction(1, 200)
    weights: ObjectiveWeights = CONTROL
    successor_mode: bool = False
    rng_seed: int = 0
    weight_floor: float = 1e-6
    check_every: int = 0  # validate the incumbent every n iterations; 0 = segment ends

    def __post_init__(self):
        if isinstance(self.accept_band, (int, float, str)):
            self.accept_band = Fraction(str(self.accept_band))
        if isinstance(self.weights, str):
            self.weights = ObjectiveWeights.parse(self.weights)
        elif isinstance(self.weights, (list, tuple)):
            self.weights = ObjectiveWeights(*self.weights)
        self.slice_set = tuple(self.slice_set)
        if not 0 <= self.chance_lo <= self.chance_hi <= 1:
            raise ValueError("need 0 <= chance_lo <= chance_hi <= 1")
        if self.accept_band < 0:
            raise ValueError("accept_band must be non-negative")
        if self.segment_len < 1:
            raise ValueError("segment_len must be >= 1")
        if self.width_lo > self.width_hi or not self.slice_set:
            raise ValueError("bad width limits or empty slice set")

    def replace(self, **changes) -> AlnsConfig:
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["accept_band"] = str(self.accept_band)
        d["weights"] = str(self.weights)
        d["slice_set"] = list(self.slice_set)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> AlnsConfig:
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> AlnsConfig:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# --------------------------------------------------------------------------
# Adaptive layer


@dataclass
class OperatorStats:
    names: tuple[str, ...]
    weights: list[float] = field(default_factory=list)
    scores: list[float] = field(default_factory=list)
    uses: list[int] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.names)
        self.weights = self.weights or [1.0] * n
        self.scores = self.scores or [0.0] * n
        self.uses = self.uses or [0] * n

    def probabilities(self) -> list[float]:
        total = sum(self.weights)
        return [w / total for w in self.weights]

    def index(self, name: str) -> int:
        return self.names.index(name)


def select_heuristic(stats: OperatorStats, rng: random.Random) -> str:
    """Roulette-wheel draw proportional to the weights."""
    return stats.names[_pick(stats.weights, rng)]


def _pick(weights: list[float], rng: random.Random) -> int:
    n = len(weights)
    if n == 1:
        return 0
    # same draw as rng.choices(range(n), weights=weights)
    cum = list(accumulate(weights))
    return bisect(cum, rng.random() * (cum[-1] + 0.0), 0, n - 1)


def update_scores(stats: OperatorStats, name: str, outcome: str, config: AlnsConfig) -> OperatorStats:
    _credit(stats, stats.index(name), _reward(outcome, config))
    return stats


def _reward(outcome: str, config: AlnsConfig) -> float:
    if outcome == "global_improve":
        return config.eps1
    if outcome == "incumbent_improve":
        return config.eps2
    if outcome == "accepted_worse":
        return config.eps3
    if outcome != "rejected":
        raise ValueError(f"unknown outcome {outcome!r}")
    return 0


def _credit(stats: OperatorStats, i: int, reward: float) -> None:
    if reward:
        stats.scores[i] += reward
    stats.uses[i] += 1


def update_weights(stats: OperatorStats, config: AlnsConfig) -> OperatorStats:
    p = config.p_react
    for i in range(len(stats.names)):
        eta = (1 - p) * stats.weights[i] + p * stats.scores[i] / max(1, stats.uses[i])
        stats.weights[i] = max(eta, config.weight_floor)
        stats.scores[i] = 0.0
        stats.uses[i] = 0
    return stats


def accept(incumbent_value, candidate_value, best_value, band: Fraction) -> str:
    """One of "new_best", "accepted", "rejected"; exact for ints and Fractions."""
    if candidate_value > best_value:
        return "new_best"
    if incumbent_value <= 0:
        return "accepted" if candidate_value >= incumbent_value else "rejected"
    num, den = band.numerator, band.denominator
    if candidate_value * den >= incumbent_value * (den - num):
        return "accepted"
    return "rejected"


def classify(decision: str, candidate_value, incumbent_value) -> str:
    if decision == "new_best":
        return "global_improve"
    if decision == "rejected":
        return "rejected"
    return "incumbent_improve" if candidate_value > incumbent_value else "accepted_worse"


# --------------------------------------------------------------------------
# Destroy operators.  Each mutates the schedule and returns the removed tasks.


def _clear(schedule: Schedule, task_ids) -> list[int]:
    """Unassign the listed tasks that are assigned; returns them in order."""
    asg, plans = schedule.assignment, schedule.plans
    out = []
    by_shift: dict[int, list[int]] = {}
    for tid in task_ids:
        sid = asg.get(tid)
        if sid is not None:
            group = by_shift.setdefault(sid, [])
            if tid not in group:
                group.append(tid)
                out.append(tid)
    tasks = schedule.instance.task_by_id
    for sid, group in by_shift.items():
        if len(group) == len(plans[sid].tasks):
            schedule._clear_shift(sid)
        else:
            for tid in group:
                schedule._discard(tasks[tid])
    return out


def _draw_chance(config: AlnsConfig, rng: random.Random) -> float:
    return rng.uniform(config.chance_lo, config.chance_hi)


def destroy_random(schedule: Schedule, config: AlnsConfig, rng: random.Random) -> list[int]:
    l = _draw_chance(config, rng)
    tasks = schedule.instance.task_by_id
    victims = [t for t in schedule.assignment if not tasks[t].mandatory and rng.random() < l]
    return _clear(schedule, victims)


def _has_mandatory(schedule: Schedule, sid: int) -> bool:
    tasks = schedule.instance.task_by_id
    return any(tasks[t].mandatory for t in schedule.plans[sid].tasks)


def shift_contribution(schedule: Schedule, sid: int, weights: ObjectiveWeights) -> Fraction:
    """Main-objective value of a shift's assignments per planned bucket.

    Returned as a float when the weights are integral (ints divide exactly
    enough to rank), else as a Fraction.
    """
    inst = schedule.instance
    plan = schedule.plans[sid]
    tasks, elig = inst.task_by_id, inst.eligibility
    length = plan.work_end - plan.work_start
    if weights.integral:
        w1, w2 = weights.w_priority.numerator, weights.w_penalty.numerator
        total = sum(w1 * tasks[t].priority - w2 * elig[t, sid].deviation for t in plan.tasks)
        return total / length
    total = sum(weights.contribution(tasks[t].priority, elig[t, sid].deviation) for t in plan.tasks)
    return Fraction(total, length)


def destroy_worst(schedule: Schedule, config: AlnsConfig, rng: random.Random) -> list[int]:
    l = _draw_chance(config, rng)
    enabled = schedule.enabled_shifts()
    count = math.ceil(len(enabled) * l)
    ranked = sorted(
        (shift_contribution(schedule, sid, config.weights), sid)
        for sid in enabled if not _has_mandatory(schedule, sid)
    )
    return [t for _, sid in ranked[:count] for t in schedule._clear_shift(sid)]


def destroy_operator(schedule: Schedule, config: AlnsConfig, rng: random.Random) -> list[int]:
    l = _draw_chance(config, rng)
    hit = []
    for op in schedule.instance.operators:
        if rng.random() < l:
            for av in op.availabilities:
                if schedule.plans[av.shift_id].enabled and not _has_mandatory(schedule, av.shift_id):
                    hit.append(av.shift_id)
    return [t for sid in hit for t in schedule._clear_shift(sid)]


def destroy_time(schedule: Schedule, config: AlnsConfig, rng: random.Random) -> list[int]:
    inst = schedule.instance
    m = inst.bucket_minutes
    t0 = rng.randrange(inst.horizon)
    t1 = t0 + rng.randint(config.width_lo // m, config.width_hi // m)
    tasks = inst.task_by_id
    victims = [t for t in schedule.assignment
               if tasks[t].start <= t1 and tasks[t].end > t0 and not tasks[t].mandatory]
    return _clear(schedule, victims)


DESTROY: dict[str, Callable[[Schedule, AlnsConfig, random.Random], list[int]]] = {
    "random": destroy_random,
    "worst": destroy_worst,
    "operator": destroy_operator,
    "time": destroy_time,
}


def successor_destroy(schedule: Schedule, removed: Sequence[int], rng: random.Random) -> list[int]:
    """Coin-gated removal of linked partners of removed tasks, in any shift."""
    if rng.random() >= 0.5:
        return []
    inst = schedule.instance
    tasks = inst.task_by_id
    extra = [p for t in removed for p in inst.partners(t)
             if p in schedule.assignment and not tasks[p].mandatory]
    return _clear(schedule, extra)


# --------------------------------------------------------------------------
# Repair


def slice_shuffle(items: list, slice_set: Sequence[int], rng: random.Random) -> list:
    """Shuffle within consecutive blocks of a size drawn from ``slice_set``."""
    mu = rng.choice(slice_set) if len(slice_set) > 1 else slice_set[0]
    if mu <= 1 or len(items) <= 1:
        return items
    out = items[:]
    for i in range(0, len(out), mu):
        block = out[i:i + mu]
        rng.shuffle(block)
        out[i:i + mu] = block
    return out


def sort_key(sorter: str, priority: int, deviation: int, level: int, required: int,
             bandwidth: int, length: int, n_groups: int, weights: ObjectiveWeights) -> tuple:
    """Sort key for one candidate pair, smaller first (ids appended by caller).

    ``bandwidth`` is in sixtieths of capacity.
    """
    fit = level - required if level >= required else deviation
    obj = weights.contribution(priority, deviation)
    if sorter == "A":
        return (deviation, -priority, fit)
    if sorter == "B":
        return (deviation, -priority, -fit)
    if sorter == "C":
        return (deviation, -priority, bandwidth, fit)
    if sorter == "D":
        return (-obj, -bandwidth, fit)
    if sorter == "E":
        eff = obj * CAPACITY / (bandwidth * length)
        return (-eff, -priority, bandwidth, n_groups)
    raise ValueError(f"unknown sorter {sorter!r}")


class RepairTables:
    """Static candidate orders per sorter; every key depends only on the instance."""

    def __init__(self, instance: Instance, weights: ObjectiveWeights):
        self.instance = instance
        self.weights = weights
        tasks = instance.task_by_id
        op_of = instance.operator_of_shift
        rows = []
        for (tid, sid), pen in instance.eligibility.items():
            task = tasks[tid]
            if not task.mandatory and weights.contribution(task.priority, pen.deviation) <= 0:
                continue
            op = op_of[sid]
            skill = op.skill_by_group[task.group]
            rows.append((tid, sid, pen.bandwidth, task, skill.level, pen.deviation, len(op.skills)))
        self.order: dict[str, list[tuple[int, int, int]]] = {}
        self.stacks: dict[str, dict[tuple, list[tuple[int, int]]]] = {}
        for sorter in REPAIRERS:
            keyed = sorted(
                (sort_key(sorter, task.priority, dev, level, task.required_skill, bw, task.length,
                          ng, weights) + (tid, sid), tid, sid, bw, task)
                for tid, sid, bw, task, level, dev, ng in rows
            )
            self.order[sorter] = [(tid, sid, bw) for _, tid, sid, bw, _ in keyed]
            stacks: dict[tuple, list[tuple[int, int]]] = {}
            for _, tid, sid, bw, task in keyed:
                stacks.setdefault((task.start, task.end, task.group, sid), []).append((tid, bw))
            self.stacks[sorter] = {k: v for k, v in stacks.items() if len(v) > 1}
        self.bandwidth = {(tid, sid): bw for tid, sid, bw, *_ in rows}
        self.gain = {(tid, sid): float(weights.contribution(task.priority, dev))
                     for tid, sid, bw, task, level, dev, ng in rows}
        self.gated = bool(weights.w_groups or weights.w_workload)
        self.wg, self.wc, self.ww = float(weights.w_groups), float(weights.w_consec), float(weights.w_workload)


class Inserter:
    """Places tasks during repair, skipping insertions that cannot pay off.

    With only the two main terms the static candidate filter already drops
    non-positive pairs, so every feasible insertion is taken.  When the
    groups or workload terms carry weight, the full marginal change of the
    weighted total is evaluated and optional insertions that do not raise it
    are skipped.
    """

    def __init__(self, schedule: Schedule, tables: RepairTables):
        self.gated = tables.gated
        self.gain = tables.gain
        self.wg, self.wc, self.ww = tables.wg, tables.wc, tables.ww
        self.n = self.groups = self.busy = self.length = 0
        if self.gated:
            for p in schedule.plans.values():
                if p.enabled:
                    self.n += 1
                    self.groups += len(p.group_tasks)
                    self.busy += p.busy
                    self.length += p.work_end - p.work_start

    def __call__(self, schedule: Schedule, task: Task, sid: int, bw: int) -> bool:
        if not self.gated:
            return try_insert(schedule, task, sid, bw)
        ins = probe(schedule, task, sid, bw)
        if ins is None:
            return False
        plan = schedule.plans[sid]
        dn = 0 if plan.enabled else 1
        old_len = plan.work_end - plan.work_start if plan.enabled else 0
        dg = 0 if task.group in plan.group_tasks else 1
        off = plan.offset
        dbusy = plan.load[task.start - off: task.end - off].count(0)
        dlen = ins.work_end - ins.work_start - old_len
        if not task.mandatory:
            n, g, busy, length = self.n, self.groups, self.busy, self.length
            delta = self.gain[task.id, sid]
            if self.wg:
                delta += self.wg * ((g + dg) / (n + dn) - (g / n if n else 0.0))
            if self.ww:
                delta += self.ww * ((busy + dbusy) / (length + dlen) - (busy / length if length else 0.0))
            if self.wc:
                asg = schedule.assignment
                delta += self.wc * sum(1 for p in schedule.instance.partners(task.id) if asg.get(p) == sid)
            if delta <= 0:
                return False
        apply_insertion(schedule, ins)
        self.n += dn
        self.groups += dg
        self.busy += dbusy
        self.length += dlen
        return True


def stack(schedule: Schedule, seed_task: int, shift: int, tables: RepairTables, sorter: str,
          place: Inserter | None = None) -> list[int]:
    """Insert pool tasks sharing the seed's interval and group; returns those inserted."""
    task = schedule.instance.task_by_id[seed_task]
    peers = tables.stacks[sorter].get((task.start, task.end, task.group, shift))
    if not peers:
        return []
    place = place or Inserter(schedule, tables)
    out = []
    asg = schedule.assignment
    tasks = schedule.instance.task_by_id
    for tid, bw in peers:
        if tid not in asg and place(schedule, tasks[tid], shift, bw):
            out.append(tid)
    return out


def successor_match(schedule: Schedule, inserted_task: int, shift: int, tables: RepairTables,
                    place: Inserter | None = None) -> list[int]:
    """Try to place unassigned linked partners into the same shift, chaining."""
    inst = schedule.instance
    tasks = inst.task_by_id
    asg = schedule.assignment
    place = place or Inserter(schedule, tables)
    out = []
    todo = [inserted_task]
    while todo:
        t = todo.pop()
        for p in inst.partners(t):
            if p in asg:
                continue
            bw = tables.bandwidth.get((p, shift))
            if bw is not None and place(schedule, tasks[p], shift, bw):
                out.append(p)
                todo.append(p)
    return out


def repair(schedule: Schedule, sorter: str, tables: RepairTables, config: AlnsConfig,
           rng: random.Random, order: list | None = None) -> Schedule:
    """One pass over the sorted, slice-shuffled candidate list."""
    tasks = schedule.instance.task_by_id
    asg = schedule.assignment
    full = tables.order[sorter] if order is None else order
    cands = [c for c in full if c[0] not in asg]
    if not cands:
        return schedule
    cands = slice_shuffle(cands, config.slice_set, rng)
    has_stacks = bool(tables.stacks[sorter])
    succ = config.successor_mode
    place = Inserter(schedule, tables) if tables.gated else try_insert
    for tid, sid, bw in cands:
        if tid in asg:
            continue
        if place(schedule, tasks[tid], sid, bw):
            placed = [tid]
            if has_stacks:
                placed += stack(schedule, tid, sid, tables, sorter, place)
            if succ:
                for t in list(placed):
                    successor_match(schedule, t, sid, tables, place)
    return schedule


def build_start(instance: Instance, weights: ObjectiveWeights = CONTROL,
                tables: RepairTables | None = None) -> Schedule:
    """Insert all pairs in efficiency order, mandatory tasks first."""
    tables = tables or RepairTables(instance, weights)
    sched = Schedule(instance)
    tasks = instance.task_by_id
    order = tables.order["E"]
    for tid, sid, bw in order:
        if tasks[tid].mandatory and tid not in sched.assignment:
            try_insert(sched, tasks[tid], sid, bw)
    missing = [t.id for t in instance.tasks if t.mandatory and t.id not in sched.assignment]
    if missing:
        raise InstanceInfeasibleError(f"mandatory tasks could not be placed: {missing}")
    place = Inserter(sched, tables)
    for tid, sid, bw in order:
        if tid not in sched.assignment:
            place(sched, tasks[tid], sid, bw)
    return sched


# --------------------------------------------------------------------------
# Main loop


@dataclass
class SearchState:
    incumbent: Schedule
    best: Schedule
    incumbent_value: object
    best_value: object
    iteration: int
    destroy_stats: OperatorStats
    repair_stats: OperatorStats
    rng: random.Random

    @property
    def pool(self) -> list[int]:
        return self.incumbent.unassigned()


@dataclass
class RunResult:
    best: Schedule
    best_value: object
    breakdown: ObjectiveBreakdown
    start_value: object
    log: list[tuple] | None
    state: SearchState
    trace: list | None = None  # (iteration, best value, seconds, assigned) per checkpoint

    def log_lines(self, extra_summary: dict | None = None) -> list[str]:
        """JSON-lines log: one record per iteration plus a summary record."""
        lines = []
        for it, d, r, val, outcome, best in self.log or ():
            lines.append(json.dumps({"iter": it, "destroy": d, "repair": r, "value": number(val),
                                     "outcome": outcome, "best": number(best)}))
        summary = {"summary": True, "start_value": number(self.start_value),
                   "best_value": number(self.best_value), **self.breakdown.row()}
        if extra_summary:
            summary.update(extra_summary)
        lines.append(json.dumps(summary))
        return lines


def number(v):
    """JSON-friendly exact-if-possible rendering of an objective value."""
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else float(v)
    return v


def run(instance: Instance, config: AlnsConfig, keep_log: bool = True,
        checkpoints: Sequence[int] = ()) -> RunResult:
    """Run the search for ``config.iterations`` iterations.

    ``checkpoints`` lists iteration counts at which the best value is
    recorded in ``RunResult.trace`` (the search itself is unaffected).
    """
    t_start = time.perf_counter()
    rng = random.Random(config.rng_seed)
    weights = config.weights
    tables = RepairTables(instance, weights)
    inc = build_start(instance, weights, tables)
    inc_val = score(inc, weights)
    state = SearchState(inc, inc, inc_val, inc_val, 0, OperatorStats(DESTROYERS),
                        OperatorStats(REPAIRERS), rng)
    dstats, rstats = state.destroy_stats, state.repair_stats
    best, best_val = inc, inc_val
    start_val = inc_val
    log: list[tuple] | None = [] if keep_log else None
    marks = set(checkpoints)
    trace = [] if checkpoints else None
    if 0 in marks:
        trace.append((0, best_val, time.perf_counter() - t_start, len(best.assignment)))
    band = config.accept_band
    succ = config.successor_mode
    check_every = config.check_every or config.segment_len
    seg = config.segment_len
    destroy_fns = [DESTROY[n] for n in dstats.names]
    dnames, rnames = dstats.names, rstats.names
    reward = {o: _reward(o, config) for o in OUTCOMES}
    for it in range(1, config.iterations + 1):
        di = _pick(dstats.weights, rng)
        ri = _pick(rstats.weights, rng)
        d, r = dnames[di], rnames[ri]
        cand = inc.copy()
        removed = destroy_fns[di](cand, config, rng)
        if succ and removed:
            removed += successor_destroy(cand, removed, rng)
        if removed:
            normalize(cand, sorted({inc.assignment[t] for t in removed}))
        repair(cand, r, tables, config, rng)
        val = score(cand, weights)
        decision = accept(inc_val, val, best_val, band)
        outcome = classify(decision, val, inc_val)
        if decision != "rejected":
            inc, inc_val = cand, val
            if decision == "new_best":
                best, best_val = cand, val
        gain = reward[outcome]
        _credit(dstats, di, gain)
        _credit(rstats, ri, gain)
        if log is not None:
            log.append((it, d, r, val, outcome, best_val))
        if it % seg == 0:
            update_weights(dstats, config)
            update_weights(rstats, config)
        if it % check_every == 0:
            report = validate(inc)
            if not report.ok:
                raise AssertionError(f"incumbent infeasible at iteration {it}: {report.violations[:3]}")
        if it in marks:
            trace.append((it, best_val, time.perf_counter() - t_start, len(best.assignment)))
    state.incumbent, state.best = inc, best
    state.incumbent_value, state.best_value = inc_val, best_val
    state.iteration = config.iterations
    return RunResult(best, best_val, evaluate(best, weights), start_val, log, state, trace)
