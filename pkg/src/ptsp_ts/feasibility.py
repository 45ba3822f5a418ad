"""Schedules, the exhaustive validator, and incremental insert/remove probes.

Bandwidth is integer sixtieths of capacity throughout, so the per-bucket
capacity test is exact.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence

from .instance import CAPACITY, Availability, Instance, Operator, Task

TAGS = (
    "Mandatory", "SingleAssign", "Eligibility", "Enabled", "Bandwidth", "ShiftWindow",
    "ShiftLength", "BreakTotal", "BreakWindow", "BreakMinRun", "PrepTime", "GroupLimit", "Rest",
)


class IneligibleError(ValueError):
    """The (task, shift) pair is not eligible at all."""


class NotAssignedError(KeyError):
    pass


@dataclass(slots=True)
class ShiftPlan:
    """Planned shift inside one availability plus its per-bucket caches.

    ``load``, ``gload`` and ``ngroups`` are indexed by ``bucket - offset``
    where ``offset`` is the availability's earliest start.
    """

    shift_id: int
    offset: int
    enabled: bool = False
    work_start: int | None = None
    work_end: int | None = None
    break_buckets: tuple[int, ...] = ()
    tasks: dict[int, int] = field(default_factory=dict)  # task id -> bandwidth
    load: list[int] = field(default_factory=list, repr=False)
    gload: dict[int, list[int]] = field(default_factory=dict, repr=False)
    ngroups: list[int] = field(default_factory=list, repr=False)
    group_tasks: dict[int, int] = field(default_factory=dict, repr=False)
    busy: int = field(default=0, repr=False)

    @classmethod
    def empty(cls, av: Availability) -> ShiftPlan:
        n = av.length
        return cls(av.shift_id, av.earliest_start, load=[0] * n, ngroups=[0] * n)

    @property
    def length(self) -> int:
        return self.work_end - self.work_start if self.enabled else 0

    def copy(self) -> ShiftPlan:
        new = _new_plan(ShiftPlan)
        new.shift_id = self.shift_id
        new.offset = self.offset
        new.enabled = self.enabled
        new.work_start = self.work_start
        new.work_end = self.work_end
        new.break_buckets = self.break_buckets
        new.tasks = self.tasks.copy()
        new.load = self.load[:]
        new.gload = {g: v[:] for g, v in self.gload.items()}
        new.ngroups = self.ngroups[:]
        new.group_tasks = self.group_tasks.copy()
        new.busy = self.busy
        return new


_new_plan = object.__new__


class Schedule:
    """A complete candidate solution.

    Plans are shared copy-on-write between copies, so ``copy()`` is O(|S|);
    mutate only through the module-level functions or the ``_`` methods.
    """

    __slots__ = ("instance", "plans", "assignment", "consec", "prio", "pen", "_owned")

    def __init__(self, instance: Instance):
        self.instance = instance
        self.plans = {sid: ShiftPlan.empty(av) for sid, av in sorted(instance.availability.items())}
        self.assignment: dict[int, int] = {}
        self.consec = 0
        self.prio = self.pen = 0  # running sums of p_i and d_is over the assignment
        self._owned = set(self.plans)

    def copy(self) -> Schedule:
        new = Schedule.__new__(Schedule)
        new.instance = self.instance
        new.plans = dict(self.plans)
        new.assignment = dict(self.assignment)
        new.consec = self.consec
        new.prio, new.pen = self.prio, self.pen
        new._owned = set()
        self._owned = set()
        return new

    def __eq__(self, other) -> bool:
        if not isinstance(other, Schedule):
            return NotImplemented
        return schedule_to_dict(self) == schedule_to_dict(other)

    def enabled_shifts(self) -> list[int]:
        return [sid for sid, p in self.plans.items() if p.enabled]

    def unassigned(self) -> list[int]:
        return [t.id for t in self.instance.tasks if t.id not in self.assignment]

    def bandwidth_profile(self, shift_id: int) -> list[int]:
        """Per-bucket load of the shift in sixtieths, indexed from e_s."""
        return self.plans[shift_id].load[:]

    # -- raw mutators (no feasibility checks) -----------------------------

    def _own(self, shift_id: int) -> ShiftPlan:
        if shift_id not in self._owned:
            self.plans[shift_id] = self.plans[shift_id].copy()
            self._owned.add(shift_id)
        return self.plans[shift_id]

    def _add(self, task: Task, shift_id: int, bw: int) -> None:
        plan = self.plans[shift_id] if shift_id in self._owned else self._own(shift_id)
        n = len(plan.load)
        s0 = max(task.start - plan.offset, 0)
        s1 = min(task.end - plan.offset, n)
        load, ng = plan.load, plan.ngroups
        g = task.group
        glist = plan.gload.get(g)
        if glist is None:
            glist = plan.gload[g] = [0] * n
        for t in range(s0, s1):
            if not load[t]:
                plan.busy += 1
            load[t] += bw
            if not glist[t]:
                ng[t] += 1
            glist[t] += 1
        plan.tasks[task.id] = bw
        plan.group_tasks[g] = plan.group_tasks.get(g, 0) + 1
        asg = self.assignment
        asg[task.id] = shift_id
        self.prio += task.priority
        pen = self.instance.eligibility.get((task.id, shift_id))
        if pen is not None:
            self.pen += pen.deviation
        if task.predecessor is not None and asg.get(task.predecessor) == shift_id:
            self.consec += 1
        for s in self.instance.successors[task.id]:
            if asg.get(s) == shift_id:
                self.consec += 1

    def _discard(self, task: Task) -> int:
        shift_id = self.assignment.pop(task.id)
        plan = self.plans[shift_id] if shift_id in self._owned else self._own(shift_id)
        bw = plan.tasks.pop(task.id)
        n = len(plan.load)
        s0 = max(task.start - plan.offset, 0)
        s1 = min(task.end - plan.offset, n)
        load, ng = plan.load, plan.ngroups
        g = task.group
        glist = plan.gload[g]
        for t in range(s0, s1):
            load[t] -= bw
            if not load[t]:
                plan.busy -= 1
            glist[t] -= 1
            if not glist[t]:
                ng[t] -= 1
        c = plan.group_tasks[g] - 1
        if c:
            plan.group_tasks[g] = c
        else:
            del plan.group_tasks[g]
        self.prio -= task.priority
        pen = self.instance.eligibility.get((task.id, shift_id))
        if pen is not None:
            self.pen -= pen.deviation
        asg = self.assignment
        if task.predecessor is not None and asg.get(task.predecessor) == shift_id:
            self.consec -= 1
        for s in self.instance.successors[task.id]:
            if asg.get(s) == shift_id:
                self.consec -= 1
        return shift_id

    def _clear_shift(self, shift_id: int) -> list[int]:
        """Unassign every task of a shift and disable it; same end state as
        discarding them one by one, without the per-bucket updates."""
        plan = self.plans[shift_id]
        out = list(plan.tasks)
        if not out:
            return out
        inst = self.instance
        tasks, elig = inst.task_by_id, inst.eligibility
        asg = self.assignment
        held = plan.tasks
        for tid in out:
            task = tasks[tid]
            del asg[tid]
            self.prio -= task.priority
            pen = elig.get((tid, shift_id))
            if pen is not None:
                self.pen -= pen.deviation
            if task.predecessor in held:
                self.consec -= 1
        self.plans[shift_id] = ShiftPlan.empty(inst.availability[shift_id])
        self._owned.add(shift_id)
        return out

    def _set_window(self, shift_id: int, start: int, end: int, breaks: tuple[int, ...]) -> None:
        plan = self._own(shift_id)
        plan.enabled = True
        plan.work_start, plan.work_end = start, end
        plan.break_buckets = breaks

    def _disable(self, shift_id: int) -> None:
        plan = self._own(shift_id)
        plan.enabled = False
        plan.work_start = plan.work_end = None
        plan.break_buckets = ()


# --------------------------------------------------------------------------
# Reporting


@dataclass(frozen=True)
class Violation:
    tag: str
    entities: tuple[int, ...]
    bucket: int | None
    detail: str

    def to_dict(self) -> dict:
        return {"tag": self.tag, "entities": list(self.entities), "bucket": self.bucket,
                "detail": self.detail}


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def tags(self) -> set[str]:
        return {v.tag for v in self.violations}

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _runs(buckets: Sequence[int]) -> list[tuple[int, int]]:
    """Maximal runs of consecutive integers as (first, last) pairs."""
    out: list[tuple[int, int]] = []
    for b in buckets:
        if out and b == out[-1][1] + 1:
            out[-1] = (out[-1][0], b)
        else:
            out.append((b, b))
    return out


def validate(schedule: Schedule) -> FeasibilityReport:
    """Check every constraint family from scratch and list all violations.

    Loads are recomputed from the assigned tasks; the schedule's caches are
    not trusted.
    """
    inst = schedule.instance
    out: list[Violation] = []

    def bad(tag: str, ents: tuple[int, ...], bucket: int | None, detail: str) -> None:
        out.append(Violation(tag, ents, bucket, detail))

    where: dict[int, list[int]] = defaultdict(list)
    for sid, plan in schedule.plans.items():
        for tid in plan.tasks:
            where[tid].append(sid)
    for tid, sids in sorted(where.items()):
        if len(sids) > 1:
            bad("SingleAssign", (tid, *sids), None, f"task {tid} assigned to shifts {sids}")
        elif schedule.assignment.get(tid) != sids[0]:
            bad("SingleAssign", (tid, sids[0]), None, f"task {tid}: assignment map disagrees with plan")
    for tid in schedule.assignment:
        if tid not in where:
            bad("SingleAssign", (tid,), None, f"task {tid}: assignment map lists a task no plan holds")
    for task in inst.tasks:
        if task.mandatory and task.id not in where:
            bad("Mandatory", (task.id,), None, f"mandatory task {task.id} unassigned")

    k = inst.group_parallel_limit
    rho = inst.prep_time
    for sid in inst.shift_ids:
        plan = schedule.plans[sid]
        av = inst.availability[sid]
        op = inst.operator_of_shift[sid]
        if not plan.enabled:
            for tid in sorted(plan.tasks):
                bad("Enabled", (tid, sid), None, f"task {tid} assigned to disabled shift {sid}")
            if plan.break_buckets:
                bad("Enabled", (sid,), None, f"disabled shift {sid} has breaks")
            continue
        ws, we = plan.work_start, plan.work_end
        if ws is None or we is None or not av.earliest_start <= ws < we <= av.latest_end:
            bad("ShiftWindow", (sid,), None,
                f"shift {sid}: window [{ws},{we}) not inside [{av.earliest_start},{av.latest_end})")
            continue
        length = we - ws
        if not av.min_shift_len <= length <= av.max_shift_len:
            bad("ShiftLength", (sid,), None,
                f"shift {sid}: length {length} outside [{av.min_shift_len},{av.max_shift_len}]")
        load: dict[int, int] = defaultdict(int)
        groups_at: dict[int, set[int]] = defaultdict(set)
        for tid in sorted(plan.tasks):
            task = inst.task_by_id[tid]
            pen = inst.eligibility.get((tid, sid))
            if pen is None:
                bad("Eligibility", (tid, sid), None, f"task {tid} not eligible for shift {sid}")
                bw = int(task.bandwidth * CAPACITY)
            else:
                bw = pen.bandwidth
            if task.start < ws or task.end > we:
                bad("ShiftWindow", (tid, sid), task.start,
                    f"task {tid} [{task.start},{task.end}) outside work window [{ws},{we})")
            for t in task.buckets:
                load[t] += bw
                groups_at[t].add(task.group)
        for t in sorted(load):
            if load[t] > CAPACITY:
                bad("Bandwidth", (sid,), t, f"shift {sid}: load {load[t]}/{CAPACITY} at bucket {t}")
        for t in sorted(groups_at):
            if len(groups_at[t]) > k:
                bad("GroupLimit", (sid,), t,
                    f"shift {sid}: {len(groups_at[t])} groups at bucket {t} (limit {k})")
        breaks = sorted(set(plan.break_buckets))
        if length > av.max_len_without_break and len(breaks) < op.min_total_break:
            bad("BreakTotal", (sid,), None,
                f"shift {sid}: {len(breaks)} break buckets, need {op.min_total_break}")
        for x in breaks:
            if not ws <= x < we:
                bad("BreakWindow", (sid,), x, f"shift {sid}: break bucket {x} outside work window")
            elif x < ws + av.break_window_open or x >= ws + av.break_window_close:
                bad("BreakWindow", (sid,), x, f"shift {sid}: break bucket {x} outside break window")
            if load.get(x, 0):
                bad("Bandwidth", (sid,), x, f"shift {sid}: work during break bucket {x}")
        for first, last in _runs(breaks):
            if last - first + 1 < op.min_partial_break:
                bad("BreakMinRun", (sid,), first,
                    f"shift {sid}: break run of {last - first + 1} < {op.min_partial_break}")
            for t in range(last + 1, last + 1 + rho):
                if load.get(t, 0):
                    bad("PrepTime", (sid,), t, f"shift {sid}: work at {t} within prep after break")

    for op in inst.operators:
        active = sorted(
            (schedule.plans[a.shift_id] for a in op.availabilities
             if schedule.plans[a.shift_id].enabled and schedule.plans[a.shift_id].work_start is not None),
            key=lambda p: p.work_start,
        )
        for i, p in enumerate(active):
            for q in active[i + 1:]:
                if q.work_start - p.work_end < op.min_rest:
                    bad("Rest", (p.shift_id, q.shift_id), p.work_end,
                        f"operator {op.id}: rest {q.work_start - p.work_end} < {op.min_rest}")
    return FeasibilityReport(tuple(out))


# --------------------------------------------------------------------------
# Break planning


def _plan_local(busy: Sequence[int], start: int, av: Availability, op: Operator,
                rho: int) -> tuple[int, ...] | None:
    """Greedy break placement on a window-local busy profile.

    Each idle gap can host one run ending ``rho`` buckets before the next
    work (or anywhere up to the window end).  Gaps are taken largest first,
    which is complete: the plan fails only if the usable idle time of gaps
    that fit a partial break is below the total break requirement.
    """
    gamma = op.min_total_break
    if gamma <= 0:
        return ()
    n = len(busy)
    beta = max(1, op.min_partial_break)
    lo = av.break_window_open
    hi = min(av.break_window_close, n)
    limit = min(n, hi + rho)
    segs: list[tuple[int, int]] = []
    t = lo
    while t < hi:
        if busy[t]:
            t += 1
            continue
        u = t + 1
        while u < limit and not busy[u]:
            u += 1
        s1 = hi if u == n else min(u - rho, hi)
        if s1 - t >= beta:
            segs.append((t - s1, t))
        t = u + 1
    if not segs:
        return None
    segs.sort()
    remaining = gamma
    out: list[int] = []
    for negcap, s0 in segs:
        size = min(-negcap, max(remaining, beta))
        out.extend(range(start + s0, start + s0 + size))
        remaining -= size
        if remaining <= 0:
            out.sort()
            return tuple(out)
    return None


_PLAN_MEMO_MAX = 1 << 16
_MISS = object()


def _plan_memo(inst: Instance, busy: list[int], start: int, av: Availability, op: Operator,
               rho: int) -> tuple[int, ...] | None:
    """``_plan_local`` through the instance's memo (the search revisits profiles)."""
    memo = inst.break_plans
    key = (av.shift_id, start, tuple(busy))
    out = memo.get(key, _MISS)
    if out is _MISS:
        if len(memo) >= _PLAN_MEMO_MAX:
            memo.clear()
        out = memo[key] = _plan_local(busy, start, av, op, rho)
    return out


def _breaks_ok_local(breaks: Sequence[int], busy: Sequence[int], start: int,
                     av: Availability, op: Operator, rho: int) -> bool:
    if len(breaks) < op.min_total_break:
        return False
    n = len(busy)
    lo = av.break_window_open
    hi = min(av.break_window_close, n)
    beta = op.min_partial_break
    run_first = None
    prev = None
    for x in breaks:
        r = x - start
        if r < lo or r >= hi or busy[r]:
            return False
        if prev is None or r != prev + 1:
            if prev is not None and not _run_ok(run_first, prev, busy, beta, rho):
                return False
            run_first = r
        prev = r
    return prev is None or _run_ok(run_first, prev, busy, beta, rho)


def _run_ok(first: int, last: int, busy: Sequence[int], beta: int, rho: int) -> bool:
    if last - first + 1 < beta:
        return False
    return not any(busy[last + 1: last + 1 + rho])


def plan_breaks(work_start: int, work_end: int, load: Sequence[int], av: Availability,
                op: Operator, prep_time: int) -> tuple[int, ...] | None:
    """Break buckets for the window ``[work_start, work_end)`` or None.

    ``load`` is the per-bucket bandwidth of the shift indexed from the
    availability's earliest start.  Shifts within the no-break length get
    an empty break set.
    """
    if work_end - work_start <= av.max_len_without_break:
        return ()
    off = av.earliest_start
    busy = load[work_start - off: work_end - off]
    return _plan_local(busy, work_start, av, op, prep_time)


# --------------------------------------------------------------------------
# Insertion and removal


class Insertion(NamedTuple):
    """A feasible insertion and the shift-plan mutation it requires."""

    task: int
    shift: int
    bandwidth: int
    work_start: int
    work_end: int
    break_buckets: tuple[int, ...]
    changes_window: bool


def _open_windows(task: Task, av: Availability) -> Iterator[tuple[int, int]]:
    ts, te = task.start, task.end
    alpha = av.min_shift_len
    if te - ts >= alpha:
        yield ts, te
        return
    lo = max(av.earliest_start, te - alpha)
    hi = min(ts, av.latest_end - alpha)
    if lo > hi:
        return
    need = alpha - (te - ts)
    a0 = min(max(ts - need // 2, lo), hi)
    yield a0, a0 + alpha
    for a in sorted(range(lo, hi + 1), key=lambda a: (abs(a - a0), -a)):
        if a != a0:
            yield a, a + alpha


def _rest_ok(schedule: Schedule, op: Operator, shift_id: int, a: int, b: int) -> bool:
    if len(op.availabilities) == 1:
        return True
    delta = op.min_rest
    plans = schedule.plans
    for av in op.availabilities:
        sid = av.shift_id
        if sid == shift_id:
            continue
        p = plans[sid]
        if not p.enabled:
            continue
        if p.work_start >= b:
            if p.work_start - b < delta:
                return False
        elif a - p.work_end < delta:
            return False
    return True


def _probe(schedule: Schedule, task: Task, shift_id: int, bw: int) -> Insertion | None:
    inst = schedule.instance
    plan = schedule.plans[shift_id]
    off = plan.offset
    s0, s1 = task.start - off, task.end - off
    if max(plan.load[s0:s1]) > CAPACITY - bw:
        return None
    k = inst.group_parallel_limit
    glist = plan.gload.get(task.group)
    ng = plan.ngroups
    if max(ng[s0:s1]) >= k:
        if glist is None:
            return None
        for t in range(s0, s1):
            if not glist[t] and ng[t] >= k:
                return None

    av = inst.availability[shift_id]
    op = inst.operator_of_shift[shift_id]
    rho = inst.prep_time
    if plan.enabled:
        ws, we = plan.work_start, plan.work_end
        a, b = min(ws, task.start), max(we, task.end)
        if a == ws and b == we:
            if b - a <= av.max_len_without_break:
                return Insertion(task.id, shift_id, bw, a, b, (), False)
            busy = plan.load[a - off: b - off]
            busy[task.start - a: task.end - a] = [1] * task.length
            if _breaks_ok_local(plan.break_buckets, busy, a, av, op, rho):
                return Insertion(task.id, shift_id, bw, a, b, plan.break_buckets, False)
            breaks = _plan_memo(inst, busy, a, av, op, rho)
            if breaks is None:
                return None
            return Insertion(task.id, shift_id, bw, a, b, breaks, True)
        windows: Iterator[tuple[int, int]] = iter(((a, b),))
    else:
        windows = _open_windows(task, av)

    for a, b in windows:
        if b - a > av.max_shift_len:
            continue
        if not _rest_ok(schedule, op, shift_id, a, b):
            continue
        if b - a <= av.max_len_without_break:
            return Insertion(task.id, shift_id, bw, a, b, (), True)
        busy = plan.load[a - off: b - off]
        busy[task.start - a: task.end - a] = [1] * task.length
        if plan.enabled and plan.break_buckets and _breaks_ok_local(
                plan.break_buckets, busy, a, av, op, rho):
            return Insertion(task.id, shift_id, bw, a, b, plan.break_buckets, True)
        breaks = _plan_memo(inst, busy, a, av, op, rho)
        if breaks is not None:
            return Insertion(task.id, shift_id, bw, a, b, breaks, True)
    return None


def can_insert(schedule: Schedule, task_id: int, shift_id: int) -> Insertion | None:
    """Probe inserting ``task_id`` into ``shift_id``.

    Returns the insertion with the window and breaks the shift needs, or
    None if no window placement allowed by the extension policy is feasible.
    """
    inst = schedule.instance
    pen = inst.eligibility.get((task_id, shift_id))
    if pen is None:
        raise IneligibleError(f"task {task_id} is not eligible for shift {shift_id}")
    if task_id in schedule.assignment:
        raise ValueError(f"task {task_id} is already assigned to shift {schedule.assignment[task_id]}")
    return _probe(schedule, inst.task_by_id[task_id], shift_id, pen.bandwidth)


def apply_insertion(schedule: Schedule, ins: Insertion) -> None:
    if ins.changes_window:
        schedule._set_window(ins.shift, ins.work_start, ins.work_end, ins.break_buckets)
    schedule._add(schedule.instance.task_by_id[ins.task], ins.shift, ins.bandwidth)


def insert(schedule: Schedule, task_id: int, shift_id: int) -> bool:
    """Insert if feasible; returns whether the schedule changed."""
    ins = can_insert(schedule, task_id, shift_id)
    if ins is None:
        return False
    apply_insertion(schedule, ins)
    return True


def probe(schedule: Schedule, task: Task, shift_id: int, bw: int) -> Insertion | None:
    """Unchecked fast probe for the search: caller guarantees eligibility."""
    plan = schedule.plans[shift_id]
    off = plan.offset
    if max(plan.load[task.start - off: task.end - off]) > CAPACITY - bw:
        return None
    return _probe(schedule, task, shift_id, bw)


def try_insert(schedule: Schedule, task: Task, shift_id: int, bw: int) -> bool:
    """Probe and apply in one step; returns whether the task was placed."""
    ins = _probe(schedule, task, shift_id, bw)
    if ins is None:
        return False
    if ins.changes_window:
        schedule._set_window(shift_id, ins.work_start, ins.work_end, ins.break_buckets)
    schedule._add(task, shift_id, bw)
    return True


def remove_task(schedule: Schedule, task_id: int) -> Schedule:
    """Unassign a task; the window is kept unless the shift becomes empty."""
    if task_id not in schedule.assignment:
        raise NotAssignedError(f"task {task_id} is not assigned")
    sid = schedule._discard(schedule.instance.task_by_id[task_id])
    if not schedule.plans[sid].tasks:
        schedule._disable(sid)
    return schedule


def normalize(schedule: Schedule, shift_ids: Sequence[int] | None = None) -> Schedule:
    """Shrink windows to the hull of their tasks and disable empty shifts.

    A hull shorter than the minimum shift length is widened symmetrically
    inside the availability, so the result depends only on the shift's
    tasks.  If rest or break rules forbid that window, the widening stays
    inside the old window; if breaks still cannot be planned the old window
    is kept.
    """
    inst = schedule.instance
    tasks = inst.task_by_id
    rho = inst.prep_time
    for sid in (schedule.plans if shift_ids is None else shift_ids):
        plan = schedule.plans[sid]
        if not plan.enabled:
            continue
        if not plan.tasks:
            schedule._disable(sid)
            continue
        h0 = min(tasks[t].start for t in plan.tasks)
        h1 = max(tasks[t].end for t in plan.tasks)
        ws, we = plan.work_start, plan.work_end
        if h0 == ws and h1 == we:
            continue
        av = inst.availability[sid]
        alpha = av.min_shift_len
        if h1 - h0 >= alpha:
            windows = [(h0, h1)]
        else:
            need = alpha - (h1 - h0)
            c = min(max(h0 - need // 2, av.earliest_start, h1 - alpha), h0, av.latest_end - alpha)
            a = min(max(h0 - need // 2, ws, h1 - alpha), h0, we - alpha)
            windows = [(c, c + alpha), (a, a + alpha)]
        op = inst.operator_of_shift[sid]
        for a, b in windows:
            if (a, b) == (ws, we):
                break
            if (a < ws or b > we) and not _rest_ok(schedule, op, sid, a, b):
                continue
            if b - a <= av.max_len_without_break:
                schedule._set_window(sid, a, b, ())
                break
            busy = plan.load[a - plan.offset: b - plan.offset]
            if plan.break_buckets and _breaks_ok_local(plan.break_buckets, busy, a, av, op, rho):
                schedule._set_window(sid, a, b, plan.break_buckets)
                break
            breaks = _plan_memo(inst, busy, a, av, op, rho)
            if breaks is not None:
                schedule._set_window(sid, a, b, breaks)
                break
    return schedule


# --------------------------------------------------------------------------
# Schedule file format (minutes, like the instance format)


def schedule_to_dict(schedule: Schedule) -> dict:
    m = schedule.instance.bucket_minutes
    shifts = []
    for sid, p in sorted(schedule.plans.items()):
        d: dict = {"shift_id": sid, "enabled": p.enabled}
        if p.enabled:
            d["work_start_minute"] = p.work_start * m
            d["work_end_minute"] = p.work_end * m
            d["break_minutes"] = [b * m for b in p.break_buckets]
        shifts.append(d)
    assignments = sorted([t, s] for s, p in schedule.plans.items() for t in p.tasks)
    return {"instance": schedule.instance.name, "shifts": shifts, "assignments": assignments}


def schedule_from_dict(instance: Instance, doc: dict) -> Schedule:
    """Build a schedule verbatim, without feasibility checks."""
    if doc.get("instance") != instance.name:
        raise ValueError(f"schedule is for instance {doc.get('instance')!r}, not {instance.name!r}")
    m = instance.bucket_minutes
    sched = Schedule(instance)
    for d in doc["shifts"]:
        sid = d["shift_id"]
        if sid not in sched.plans:
            raise ValueError(f"unknown shift {sid}")
        if d.get("enabled"):
            sched._set_window(sid, d["work_start_minute"] // m, d["work_end_minute"] // m,
                              tuple(sorted(b // m for b in d.get("break_minutes", []))))
    for tid, sid in doc["assignments"]:
        task = instance.task_by_id[tid]
        if sid not in sched.plans:
            raise ValueError(f"unknown shift {sid}")
        pen = instance.eligibility.get((tid, sid))
        bw = pen.bandwidth if pen else int(task.bandwidth * CAPACITY)
        if tid in sched.assignment:
            # keep the duplicate visible to validate()
            sched.plans[sid].tasks[tid] = bw
            continue
        sched._add(task, sid, bw)
    return sched


def save_schedule(schedule: Schedule, path: str | Path) -> None:
    Path(path).write_text(json.dumps(schedule_to_dict(schedule), indent=1) + "\n", encoding="utf-8")


def load_schedule(instance: Instance, path: str | Path) -> Schedule:
    return schedule_from_dict(instance, json.loads(Path(path).read_text(encoding="utf-8")))
