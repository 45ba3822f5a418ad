"""Problem data for personnel task scheduling with task selection.

All times inside the package are integer time buckets.  The JSON file format
stores minutes and is converted on load using ``bucket_minutes``.
"""

from __future__ import annotations

import json
import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any

# One unit of operator attention, in integer sixtieths (lcm of 1..6).
CAPACITY = 60
BANDWIDTHS = tuple(Fraction(1, n) for n in (6, 5, 4, 3, 2, 1))
MAX_PARALLEL = 6
NUM_GROUPS = 22

_NAME_RE = re.compile(r"^(\d+)_(\d+)_(\d+)$")


class InstanceError(ValueError):
    """Base class for problems with instance data."""


class InstanceFormatError(InstanceError):
    """The document is not well-formed; the message carries the field path."""


class InstanceValidationError(InstanceError):
    """A domain invariant does not hold; the message names the entity."""


@dataclass(frozen=True)
class TaskGroup:
    id: int
    name: str


@dataclass(frozen=True)
class Task:
    id: int
    group: int
    start: int  # first occupied bucket
    end: int  # exclusive
    priority: int
    required_skill: int
    mandatory: bool = False
    bandwidth: Fraction = Fraction(1)
    predecessor: int | None = None

    @property
    def length(self) -> int:
        return self.end - self.start

    @property
    def buckets(self) -> range:
        return range(self.start, self.end)


@dataclass(frozen=True)
class Skill:
    group: int
    level: int
    parallel_capacity: int = 1


@dataclass(frozen=True)
class Availability:
    shift_id: int
    earliest_start: int
    latest_end: int
    min_shift_len: int
    max_shift_len: int
    max_len_without_break: int
    break_window_open: int
    break_window_close: int

    @property
    def length(self) -> int:
        return self.latest_end - self.earliest_start


@dataclass(frozen=True)
class Operator:
    id: int
    skills: tuple[Skill, ...]
    min_partial_break: int
    min_total_break: int
    min_rest: int
    availabilities: tuple[Availability, ...]

    @cached_property
    def skill_by_group(self) -> dict[int, Skill]:
        return {s.group: s for s in self.skills}

    def skill_in(self, group: int) -> Skill | None:
        return self.skill_by_group.get(group)


@dataclass(frozen=True)
class SkillPenalty:
    """Cost data of one (task, shift) pair; ``bandwidth`` is b_is in sixtieths."""

    task: int
    shift: int
    deviation: int
    eligible: bool
    bandwidth: int = 0


def effective_bandwidth(task: Task, skill: Skill) -> Fraction:
    """Bandwidth of ``task`` for an operator holding ``skill``.

    A task never consumes less than its own demand, and an operator able to
    watch only ``c`` tasks at once spends at least ``1/c`` on each.
    """
    return max(task.bandwidth, Fraction(1, skill.parallel_capacity))


def skill_deviation(task: Task, skill: Skill) -> int:
    return max(0, task.required_skill - skill.level)


@dataclass(frozen=True)
class Instance:
    name: str
    horizon: int
    tasks: tuple[Task, ...]
    operators: tuple[Operator, ...]
    groups: tuple[TaskGroup, ...]
    bucket_minutes: int = 5
    prep_time: int = 4
    group_parallel_limit: int = 2

    @cached_property
    def task_by_id(self) -> dict[int, Task]:
        return {t.id: t for t in self.tasks}

    @cached_property
    def availability(self) -> dict[int, Availability]:
        return {a.shift_id: a for o in self.operators for a in o.availabilities}

    @cached_property
    def operator_of_shift(self) -> dict[int, Operator]:
        return {a.shift_id: o for o in self.operators for a in o.availabilities}

    @cached_property
    def shift_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.availability))

    @cached_property
    def eligibility(self) -> dict[tuple[int, int], SkillPenalty]:
        return eligibility(self)

    @cached_property
    def shifts_of_task(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {t.id: [] for t in self.tasks}
        for task, shift in self.eligibility:
            out[task].append(shift)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    @cached_property
    def successors(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {t.id: [] for t in self.tasks}
        for t in self.tasks:
            if t.predecessor is not None:
                out[t.predecessor].append(t.id)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def break_plans(self) -> dict:
        """Scratch memo for break planning, keyed by shift, start and busy profile."""
        return {}

    def partners(self, task_id: int) -> tuple[int, ...]:
        """Predecessor and successors linked to ``task_id``."""
        pred = self.task_by_id[task_id].predecessor
        head = () if pred is None else (pred,)
        return head + self.successors[task_id]

    @property
    def num_shifts(self) -> int:
        return len(self.availability)

    def validate(self) -> None:
        _validate(self)


def parse_name(name: str) -> tuple[int, int, int]:
    """Split an instance name ``H_S_V`` into (hours, shifts, tasks)."""
    m = _NAME_RE.match(name)
    if not m:
        raise InstanceFormatError(f"meta.name: {name!r} is not of the form H_S_V")
    return int(m[1]), int(m[2]), int(m[3])


def eligibility(instance: Instance) -> dict[tuple[int, int], SkillPenalty]:
    """All eligible (task, shift) pairs with their deviation and bandwidth.

    A pair is present iff the shift's operator has a skill in the task's group
    and the availability window covers the task.
    """
    out: dict[tuple[int, int], SkillPenalty] = {}
    for op in instance.operators:
        for av in op.availabilities:
            for task in instance.tasks:
                skill = op.skill_in(task.group)
                if skill is None:
                    continue
                if task.start < av.earliest_start or task.end > av.latest_end:
                    continue
                bw = effective_bandwidth(task, skill) * CAPACITY
                out[task.id, av.shift_id] = SkillPenalty(
                    task.id, av.shift_id, skill_deviation(task, skill), True, int(bw)
                )
    return out


def _validate(inst: Instance) -> None:
    def fail(msg: str) -> None:
        raise InstanceValidationError(msg)

    if inst.horizon <= 0:
        fail("meta: horizon must be positive")
    if [g.id for g in inst.groups] != list(range(len(inst.groups))):
        fail("groups: ids must be dense 0..|P|-1 in order")
    group_ids = {g.id for g in inst.groups}
    by_id: dict[int, Task] = {}
    for t in inst.tasks:
        if t.id in by_id:
            fail(f"task {t.id}: duplicate id")
        by_id[t.id] = t
    for t in inst.tasks:
        if t.group not in group_ids:
            fail(f"task {t.id}: group {t.group} does not exist")
        if not 0 <= t.start < t.end <= inst.horizon:
            fail(f"task {t.id}: buckets [{t.start},{t.end}) outside horizon {inst.horizon}")
        if t.priority < 0:
            fail(f"task {t.id}: negative priority")
        if not 0 <= t.required_skill <= 100:
            fail(f"task {t.id}: required_skill {t.required_skill} outside [0,100]")
        if t.bandwidth not in BANDWIDTHS:
            fail(f"task {t.id}: bandwidth {t.bandwidth} not in {{1/6..1}}")
        if t.predecessor is not None:
            p = by_id.get(t.predecessor)
            if p is None:
                fail(f"task {t.id}: predecessor {t.predecessor} does not exist")
            if p.group != t.group or p.end != t.start:
                fail(f"task {t.id}: predecessor {p.id} is not a same-group abutting task")
    seen_ops: set[int] = set()
    seen_shifts: set[int] = set()
    for op in inst.operators:
        if op.id in seen_ops:
            fail(f"operator {op.id}: duplicate id")
        seen_ops.add(op.id)
        groups = [s.group for s in op.skills]
        if len(groups) != len(set(groups)):
            fail(f"operator {op.id}: more than one skill per group")
        for s in op.skills:
            if s.group not in group_ids:
                fail(f"operator {op.id}: skill group {s.group} does not exist")
            if not 0 <= s.level <= 100:
                fail(f"operator {op.id}: skill level {s.level} outside [0,100]")
            if not 1 <= s.parallel_capacity <= MAX_PARALLEL:
                fail(f"operator {op.id}: parallel_capacity {s.parallel_capacity} outside [1,6]")
        if min(op.min_partial_break, op.min_total_break, op.min_rest) < 0:
            fail(f"operator {op.id}: negative break or rest duration")
        avs = sorted(op.availabilities, key=lambda a: a.earliest_start)
        for a, b in zip(avs, avs[1:]):
            if b.earliest_start < a.latest_end:
                fail(f"operator {op.id}: availabilities {a.shift_id} and {b.shift_id} overlap")
        for a in avs:
            if a.shift_id in seen_shifts:
                fail(f"availability {a.shift_id}: duplicate shift id")
            seen_shifts.add(a.shift_id)
            if not 0 <= a.earliest_start < a.latest_end <= inst.horizon:
                fail(f"availability {a.shift_id}: window outside horizon")
            if not 0 < a.min_shift_len <= a.max_shift_len <= a.length:
                fail(f"availability {a.shift_id}: need 0 < min_len <= max_len <= window")
            if a.max_len_without_break > a.max_shift_len:
                fail(f"availability {a.shift_id}: max_len_without_break exceeds max_len")
            if not 0 <= a.break_window_open <= a.break_window_close:
                fail(f"availability {a.shift_id}: break window open after close")
    shifts_of = inst.shifts_of_task
    for t in inst.tasks:
        if t.mandatory and not shifts_of[t.id]:
            fail(f"task {t.id}: mandatory but no eligible shift")


# --------------------------------------------------------------------------
# JSON format

_META_KEYS = {"name", "horizon_minutes", "bucket_minutes", "prep_minutes", "group_parallel_limit"}
_TASK_KEYS = {
    "id", "group", "start_minute", "end_minute", "priority", "required_skill",
    "mandatory", "bandwidth", "predecessor",
}
_OP_KEYS = {
    "id", "skills", "min_partial_break_minutes", "min_total_break_minutes",
    "min_rest_minutes", "availabilities",
}
_SKILL_KEYS = {"group", "level", "parallel_capacity"}
_AV_KEYS = {
    "shift_id", "earliest_start_minute", "latest_end_minute", "min_shift_minutes",
    "max_shift_minutes", "max_minutes_without_break", "break_window_open_minutes",
    "break_window_close_minutes",
}


class _Reader:
    def __init__(self, bucket_minutes: int = 5):
        self.bucket = bucket_minutes

    def obj(self, value: Any, path: str, keys: set[str], optional: set[str] = frozenset()) -> dict:
        if not isinstance(value, dict):
            raise InstanceFormatError(f"{path}: expected an object")
        unknown = set(value) - keys
        if unknown:
            raise InstanceFormatError(f"{path}: unknown field(s) {sorted(unknown)}")
        missing = keys - optional - set(value)
        if missing:
            raise InstanceFormatError(f"{path}: missing field(s) {sorted(missing)}")
        return value

    def array(self, value: Any, path: str) -> list:
        if not isinstance(value, list):
            raise InstanceFormatError(f"{path}: expected an array")
        return value

    def int(self, value: Any, path: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise InstanceFormatError(f"{path}: expected an integer, got {value!r}")
        return value

    def minutes(self, value: Any, path: str) -> int:
        v = self.int(value, path)
        if v % self.bucket:
            raise InstanceFormatError(f"{path}: {v} min is not a multiple of {self.bucket}")
        return v // self.bucket

    def fraction(self, value: Any, path: str) -> Fraction:
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError):
            raise InstanceFormatError(f"{path}: bad fraction {value!r}") from None


def instance_from_dict(doc: Any) -> Instance:
    r = _Reader()
    doc = r.obj(doc, "$", {"meta", "groups", "tasks", "operators"})
    meta = r.obj(doc["meta"], "meta", _META_KEYS)
    r.bucket = r.int(meta["bucket_minutes"], "meta.bucket_minutes")
    if r.bucket <= 0:
        raise InstanceFormatError("meta.bucket_minutes: must be positive")
    name = meta["name"]
    if not isinstance(name, str):
        raise InstanceFormatError("meta.name: expected a string")
    groups = []
    for i, g in enumerate(r.array(doc["groups"], "groups")):
        g = r.obj(g, f"groups[{i}]", {"id", "name"})
        groups.append(TaskGroup(r.int(g["id"], f"groups[{i}].id"), str(g["name"])))
    tasks = []
    for i, t in enumerate(r.array(doc["tasks"], "tasks")):
        p = f"tasks[{i}]"
        t = r.obj(t, p, _TASK_KEYS, optional={"mandatory", "predecessor"})
        pred = t.get("predecessor")
        mandatory = t.get("mandatory", False)
        if not isinstance(mandatory, bool):
            raise InstanceFormatError(f"{p}.mandatory: expected a boolean")
        tasks.append(Task(
            id=r.int(t["id"], f"{p}.id"),
            group=r.int(t["group"], f"{p}.group"),
            start=r.minutes(t["start_minute"], f"{p}.start_minute"),
            end=r.minutes(t["end_minute"], f"{p}.end_minute"),
            priority=r.int(t["priority"], f"{p}.priority"),
            required_skill=r.int(t["required_skill"], f"{p}.required_skill"),
            mandatory=mandatory,
            bandwidth=r.fraction(t["bandwidth"], f"{p}.bandwidth"),
            predecessor=None if pred is None else r.int(pred, f"{p}.predecessor"),
        ))
    operators = []
    for i, o in enumerate(r.array(doc["operators"], "operators")):
        p = f"operators[{i}]"
        o = r.obj(o, p, _OP_KEYS)
        skills = []
        for j, s in enumerate(r.array(o["skills"], f"{p}.skills")):
            q = f"{p}.skills[{j}]"
            s = r.obj(s, q, _SKILL_KEYS)
            skills.append(Skill(r.int(s["group"], f"{q}.group"), r.int(s["level"], f"{q}.level"),
                                r.int(s["parallel_capacity"], f"{q}.parallel_capacity")))
        avs = []
        for j, a in enumerate(r.array(o["availabilities"], f"{p}.availabilities")):
            q = f"{p}.availabilities[{j}]"
            a = r.obj(a, q, _AV_KEYS)
            avs.append(Availability(
                shift_id=r.int(a["shift_id"], f"{q}.shift_id"),
                earliest_start=r.minutes(a["earliest_start_minute"], f"{q}.earliest_start_minute"),
                latest_end=r.minutes(a["latest_end_minute"], f"{q}.latest_end_minute"),
                min_shift_len=r.minutes(a["min_shift_minutes"], f"{q}.min_shift_minutes"),
                max_shift_len=r.minutes(a["max_shift_minutes"], f"{q}.max_shift_minutes"),
                max_len_without_break=r.minutes(a["max_minutes_without_break"], f"{q}.max_minutes_without_break"),
                break_window_open=r.minutes(a["break_window_open_minutes"], f"{q}.break_window_open_minutes"),
                break_window_close=r.minutes(a["break_window_close_minutes"], f"{q}.break_window_close_minutes"),
            ))
        operators.append(Operator(
            id=r.int(o["id"], f"{p}.id"),
            skills=tuple(skills),
            min_partial_break=r.minutes(o["min_partial_break_minutes"], f"{p}.min_partial_break_minutes"),
            min_total_break=r.minutes(o["min_total_break_minutes"], f"{p}.min_total_break_minutes"),
            min_rest=r.minutes(o["min_rest_minutes"], f"{p}.min_rest_minutes"),
            availabilities=tuple(avs),
        ))
    inst = Instance(
        name=name,
        horizon=r.minutes(meta["horizon_minutes"], "meta.horizon_minutes"),
        tasks=tuple(tasks),
        operators=tuple(operators),
        groups=tuple(groups),
        bucket_minutes=r.bucket,
        prep_time=r.minutes(meta["prep_minutes"], "meta.prep_minutes"),
        group_parallel_limit=r.int(meta["group_parallel_limit"], "meta.group_parallel_limit"),
    )
    inst.validate()
    return inst


def instance_to_dict(inst: Instance) -> dict:
    m = inst.bucket_minutes
    tasks = []
    for t in inst.tasks:
        d = {
            "id": t.id, "group": t.group, "start_minute": t.start * m, "end_minute": t.end * m,
            "priority": t.priority, "required_skill": t.required_skill,
            "mandatory": t.mandatory, "bandwidth": str(t.bandwidth),
        }
        if t.predecessor is not None:
            d["predecessor"] = t.predecessor
        tasks.append(d)
    operators = []
    for o in inst.operators:
        operators.append({
            "id": o.id,
            "min_partial_break_minutes": o.min_partial_break * m,
            "min_total_break_minutes": o.min_total_break * m,
            "min_rest_minutes": o.min_rest * m,
            "skills": [{"group": s.group, "level": s.level, "parallel_capacity": s.parallel_capacity}
                       for s in o.skills],
            "availabilities": [{
                "shift_id": a.shift_id,
                "earliest_start_minute": a.earliest_start * m,
                "latest_end_minute": a.latest_end * m,
                "min_shift_minutes": a.min_shift_len * m,
                "max_shift_minutes": a.max_shift_len * m,
                "max_minutes_without_break": a.max_len_without_break * m,
                "break_window_open_minutes": a.break_window_open * m,
                "break_window_close_minutes": a.break_window_close * m,
            } for a in o.availabilities],
        })
    return {
        "meta": {
            "name": inst.name,
            "horizon_minutes": inst.horizon * m,
            "bucket_minutes": m,
            "prep_minutes": inst.prep_time * m,
            "group_parallel_limit": inst.group_parallel_limit,
        },
        "groups": [{"id": g.id, "name": g.name} for g in inst.groups],
        "tasks": tasks,
        "operators": operators,
    }


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=1) + "\n"


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(inst), encoding="utf-8")


def load_instance(path: str | Path) -> Instance:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"{path}: line {e.lineno} col {e.colno}: {e.msg}") from None
    return instance_from_dict(doc)


# --------------------------------------------------------------------------
# Synthetic generator


@dataclass(frozen=True)
class SizeClass:
    """Ranges for one benchmark size class; lengths in minutes."""

    hours: int
    tasks: tuple[int, int]
    shifts: tuple[int, int]
    availability_minutes: tuple[int, int]
    min_shift_minutes: int
    max_shift_minutes: int
    no_break_minutes: int
    break_open_minutes: int
    break_close_minutes: int
    task_minutes: tuple[int, ...]
    groups_per_operator: tuple[int, int]


SIZE_CLASSES: dict[str, SizeClass] = {
    # desk-scale class for exact cross-checks
    "tiny": SizeClass(4, (4, 8), (1, 2), (150, 240), 60, 240, 120, 30, 150,
                      (30, 45, 60, 90), (2, 4)),
    "small": SizeClass(8, (72, 172), (2, 6), (300, 480), 180, 480, 360, 120, 360,
                       (30, 45, 60, 90, 105, 120, 150, 180), (4, 9)),
    "medium": SizeClass(18, (400, 700), (4, 10), (480, 720), 240, 600, 360, 120, 420,
                        (45, 60, 90, 105, 120, 150, 180), (5, 10)),
    "large": SizeClass(24, (600, 1100), (38, 52), (480, 720), 240, 600, 360, 120, 420,
                       (45, 60, 90, 105, 120, 150, 180), (4, 9)),
    "xlarge": SizeClass(72, (2000, 3300), (180, 230), (480, 720), 240, 600, 360, 120, 420,
                        (45, 60, 90, 105, 120, 150, 180), (4, 9)),
}

# (partial break, total break, rest) in minutes; one regime per country.
_BREAK_REGIMES = ((15, 30, 660), (15, 45, 660), (10, 30, 720), (30, 60, 660))


@dataclass(frozen=True)
class GeneratorConfig:
    successor_fraction: float = 0.10
    mandatory_fraction: float = 0.0
    stack_fraction: float = 0.3  # chance a task copies the interval of an earlier one
    bucket_minutes: int = 5
    prep_minutes: int = 20
    group_parallel_limit: int = 2


def generate_instance(size: str, seed: int, config: GeneratorConfig = GeneratorConfig()) -> Instance:
    """Draw a random instance of the given size class; deterministic per seed."""
    if size not in SIZE_CLASSES:
        raise ValueError(f"unknown size class {size!r}; choose from {sorted(SIZE_CLASSES)}")
    sc = SIZE_CLASSES[size]
    rng = random.Random(f"{size}:{seed}")
    bm = config.bucket_minutes
    horizon = sc.hours * 60 // bm
    day = 24 * 60 // bm

    def buckets(minutes: int) -> int:
        return minutes // bm

    # group popularity: a few large leagues, a long tail
    popularity = [1.0 / (g + 1) ** 0.8 for g in range(NUM_GROUPS)]
    groups = tuple(TaskGroup(g, f"group-{g:02d}") for g in range(NUM_GROUPS))

    n_shifts = rng.randint(*sc.shifts)
    days = max(1, math.ceil(sc.hours / 24))
    n_ops = math.ceil(n_shifts / days)
    per_op = [n_shifts // n_ops + (1 if i < n_shifts % n_ops else 0) for i in range(n_ops)]

    operators = []
    shift_id = 0
    for op_id in range(n_ops):
        partial, total, rest = rng.choice(_BREAK_REGIMES)
        k = rng.randint(*sc.groups_per_operator)
        skill_groups = _weighted_sample(rng, range(NUM_GROUPS), popularity, k)
        skills = tuple(
            Skill(g, rng.randint(35, 100), rng.choice((1, 2, 3, 4, 4, 5, 6, 6)))
            for g in sorted(skill_groups)
        )
        avs = []
        for d in sorted(rng.sample(range(days), per_op[op_id])):
            span_start = d * day
            span = min(day, horizon - span_start)
            length = min(span, buckets(rng.randrange(sc.availability_minutes[0],
                                                     sc.availability_minutes[1] + 1, 15)))
            # keep availabilities of consecutive days apart by the rest time
            latest = span_start + span - length
            if d + 1 < days:
                latest = min(latest, span_start + day - length - buckets(rest))
            latest = max(latest, span_start)
            e = span_start + 3 * (rng.randint(0, (latest - span_start) // 3))
            length = min(length, horizon - e)
            max_len = min(length, buckets(sc.max_shift_minutes))
            min_len = min(buckets(sc.min_shift_minutes), max_len)
            avs.append(Availability(
                shift_id=shift_id,
                earliest_start=e,
                latest_end=e + length,
                min_shift_len=min_len,
                max_shift_len=max_len,
                max_len_without_break=min(buckets(sc.no_break_minutes), max_len),
                break_window_open=buckets(sc.break_open_minutes),
                break_window_close=buckets(sc.break_close_minutes),
            ))
            shift_id += 1
        operators.append(Operator(op_id, skills, buckets(partial), buckets(total),
                                  buckets(rest), tuple(avs)))

    covered = sorted({s.group for o in operators for s in o.skills})
    cover_weights = [popularity[g] for g in covered]
    n_tasks = rng.randint(*sc.tasks)
    n_succ = int(round(config.successor_fraction * n_tasks))
    n_base = n_tasks - n_succ
    grid = 15 // bm if 15 % bm == 0 else 1

    raw: list[dict] = []
    while len(raw) < n_base:
        if raw and rng.random() < config.stack_fraction:
            src = rng.choice(raw)
            start, end, group = src["start"], src["end"], src["group"]
        else:
            length = buckets(rng.choice(sc.task_minutes))
            if length >= horizon:
                continue
            start = grid * rng.randint(0, (horizon - length) // grid)
            end = start + length
            group = rng.choices(covered, cover_weights)[0]
        raw.append(_draw_task(rng, start, end, group))
    pool = [t for t in raw if t["end"] < horizon]
    rng.shuffle(pool)
    for pred in pool[:n_succ]:
        choices = [buckets(m) for m in sc.task_minutes if pred["end"] + buckets(m) <= horizon]
        if not choices:
            continue
        length = rng.choice(choices)
        succ = _draw_task(rng, pred["end"], pred["end"] + length, pred["group"])
        succ["pred"] = pred
        raw.append(succ)
    # top up if some predecessors had no room for a successor
    while len(raw) < n_tasks:
        length = buckets(rng.choice(sc.task_minutes))
        if length >= horizon:
            continue
        start = grid * rng.randint(0, (horizon - length) // grid)
        raw.append(_draw_task(rng, start, start + length, rng.choices(covered, cover_weights)[0]))

    order = sorted(range(len(raw)), key=lambda i: (raw[i]["start"], raw[i]["end"], raw[i]["group"], i))
    ids = {id(raw[i]): new for new, i in enumerate(order)}
    n_mand = int(round(config.mandatory_fraction * n_tasks))
    mandatory = set(rng.sample(range(n_tasks), n_mand)) if n_mand else set()
    tasks = []
    for new, i in enumerate(order):
        t = raw[i]
        pred = t.get("pred")
        tasks.append(Task(
            id=new, group=t["group"], start=t["start"], end=t["end"],
            priority=t["priority"], required_skill=t["skill"],
            mandatory=new in mandatory, bandwidth=t["bandwidth"],
            predecessor=None if pred is None else ids[id(pred)],
        ))

    inst = Instance(
        name=f"{sc.hours}_{n_shifts}_{n_tasks}",
        horizon=horizon,
        tasks=tuple(tasks),
        operators=tuple(operators),
        groups=groups,
        bucket_minutes=bm,
        prep_time=config.prep_minutes // bm,
        group_parallel_limit=config.group_parallel_limit,
    )
    if mandatory:
        inst = _drop_unplaceable_mandatory(inst)
    inst.validate()
    return inst


def _draw_task(rng: random.Random, start: int, end: int, group: int) -> dict:
    return {
        "start": start, "end": end, "group": group,
        "priority": rng.randint(1, 100),
        # most tasks need routine skill; a few need specialists
        "skill": min(100, int(rng.betavariate(1.5, 4.0) * 100)),
        "bandwidth": rng.choices(BANDWIDTHS, (3, 2, 3, 3, 2, 1))[0],
    }


def _weighted_sample(rng: random.Random, items, weights, k: int) -> list:
    items, weights = list(items), list(weights)
    out = []
    for _ in range(min(k, len(items))):
        i = rng.choices(range(len(items)), weights)[0]
        out.append(items.pop(i))
        weights.pop(i)
    return out


def _drop_unplaceable_mandatory(inst: Instance) -> Instance:
    shifts_of = inst.shifts_of_task
    tasks = tuple(
        t if shifts_of[t.id] or not t.mandatory else Task(**{**t.__dict__, "mandatory": False})
        for t in inst.tasks
    )
    return Instance(inst.name, inst.horizon, tasks, inst.operators, inst.groups,
                    inst.bucket_minutes, inst.prep_time, inst.group_parallel_limit)
