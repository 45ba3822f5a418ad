"""Exact reference solver for tiny instances and a binary-program exporter.

The exact solver never calls the search's insertion probe: each shift's
task set is checked by enumerating every admissible work window, which keeps
it an independent witness for the heuristic.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .feasibility import Schedule, plan_breaks, validate
from .instance import CAPACITY, Instance
from .objective import CONTROL, ObjectiveWeights


@dataclass(frozen=True)
class Limits:
    max_nodes: int = 2_000_000
    time_limit: float = 60.0  # seconds


@dataclass
class ExactResult:
    optimal_value: Fraction
    optimal_schedule: Schedule
    nodes_explored: int
    proven: bool


class _ShiftOracle:
    """Memoized window feasibility for task sets of one shift."""

    def __init__(self, instance: Instance, sid: int):
        self.inst = instance
        self.sid = sid
        self.av = instance.availability[sid]
        self.op = instance.operator_of_shift[sid]
        self.memo: dict[frozenset, tuple[tuple[int, int], ...]] = {}

    def windows(self, tasks: frozenset) -> tuple[tuple[int, int], ...]:
        """(work_end, largest feasible work_start) pairs, by work_end ascending."""
        hit = self.memo.get(tasks)
        if hit is not None:
            return hit
        inst, av, op = self.inst, self.av, self.op
        e, l = av.earliest_start, av.latest_end
        load = [0] * (l - e)
        for tid in tasks:
            task = inst.task_by_id[tid]
            bw = inst.eligibility[tid, self.sid].bandwidth
            for t in range(task.start - e, task.end - e):
                load[t] += bw
        h0 = min(inst.task_by_id[t].start for t in tasks)
        h1 = max(inst.task_by_id[t].end for t in tasks)
        out = []
        for b in range(h1, l + 1):
            for a in range(h0, e - 1, -1):
                n = b - a
                if n > av.max_shift_len:
                    break
                if n < av.min_shift_len:
                    continue
                if plan_breaks(a, b, load, av, op, inst.prep_time) is not None:
                    out.append((b, a))
                    break
        res = tuple(out)
        self.memo[tasks] = res
        return res


def _chain(oracles: list[_ShiftOracle], sets: list[frozenset], delta: int) -> list[tuple[int, int]] | None:
    """Pick windows for an operator's non-empty shifts (in time order) honoring rest."""
    bound = None
    picked = []
    for orc, ts in zip(oracles, sets):
        if not ts:
            picked.append(None)
            continue
        for b, a in orc.windows(ts):
            if bound is None or a >= bound:
                picked.append((a, b))
                bound = b + delta
                break
        else:
            return None
    return picked


def solve_exact(instance: Instance, weights: ObjectiveWeights = CONTROL,
                limits: Limits = Limits()) -> ExactResult:
    """Depth-first branch and bound over task -> shift-or-unassigned choices.

    Only the two main objective terms are optimized.  Assignments with a
    non-positive contribution are never branched on for optional tasks,
    since dropping such a task from a feasible schedule keeps it feasible.
    """
    inst = instance
    w1, w2 = weights.w_priority, weights.w_penalty
    contrib = {pair: w1 * inst.task_by_id[pair[0]].priority - w2 * pen.deviation
               for pair, pen in inst.eligibility.items()}
    order = sorted(inst.tasks, key=lambda t: (-t.priority, t.id))
    options: list[list[int]] = []
    for task in order:
        sids = [s for s in inst.shifts_of_task[task.id] if task.mandatory or contrib[task.id, s] > 0]
        sids.sort(key=lambda s: (-contrib[task.id, s], s))
        options.append(sids)
    best_gain = [max([contrib[t.id, s] for s in opts] + [Fraction(0)] if not t.mandatory
                     else [contrib[t.id, s] for s in opts])
                 for t, opts in zip(order, options)]
    suffix = [Fraction(0)] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + best_gain[i]

    oracles = {sid: _ShiftOracle(inst, sid) for sid in inst.shift_ids}
    op_shifts = {op.id: sorted((a.shift_id for a in op.availabilities),
                               key=lambda s: inst.availability[s].earliest_start)
                 for op in inst.operators}
    load = {sid: [0] * inst.availability[sid].length for sid in inst.shift_ids}
    groups = {sid: [dict() for _ in range(inst.availability[sid].length)] for sid in inst.shift_ids}
    sets = {sid: frozenset() for sid in inst.shift_ids}
    k = inst.group_parallel_limit

    best_value: Fraction | None = None
    best_sets: dict[int, frozenset] | None = None
    nodes = 0
    aborted = False
    deadline = time.monotonic() + limits.time_limit

    def fits(task, sid) -> bool:
        off = inst.availability[sid].earliest_start
        bw = inst.eligibility[task.id, sid].bandwidth
        ld, gs = load[sid], groups[sid]
        for t in range(task.start - off, task.end - off):
            if ld[t] + bw > CAPACITY:
                return False
            if task.group not in gs[t] and len(gs[t]) >= k:
                return False
        return True

    def place(task, sid, sign: int) -> None:
        off = inst.availability[sid].earliest_start
        bw = inst.eligibility[task.id, sid].bandwidth * sign
        ld, gs = load[sid], groups[sid]
        for t in range(task.start - off, task.end - off):
            ld[t] += bw
            c = gs[t].get(task.group, 0) + sign
            if c:
                gs[t][task.group] = c
            else:
                del gs[t][task.group]

    def operator_ok(sid) -> bool:
        op = inst.operator_of_shift[sid]
        chain = op_shifts[op.id]
        if len(chain) == 1:
            return bool(oracles[sid].windows(sets[sid]))
        return _chain([oracles[s] for s in chain], [sets[s] for s in chain], op.min_rest) is not None

    def dfs(i: int, value: Fraction) -> None:
        nonlocal best_value, best_sets, nodes, aborted
        nodes += 1
        if nodes >= limits.max_nodes or (nodes & 1023) == 0 and time.monotonic() > deadline:
            aborted = True
        if aborted:
            return
        if best_value is not None and value + suffix[i] <= best_value:
            return
        if i == len(order):
            best_value, best_sets = value, dict(sets)
            return
        task = order[i]
        for sid in options[i]:
            if not fits(task, sid):
                continue
            old = sets[sid]
            sets[sid] = old | {task.id}
            if operator_ok(sid):
                place(task, sid, 1)
                dfs(i + 1, value + contrib[task.id, sid])
                place(task, sid, -1)
            sets[sid] = old
            if aborted:
                return
        if not task.mandatory:
            dfs(i + 1, value)

    dfs(0, Fraction(0))
    if best_sets is None and aborted and not any(t.mandatory for t in inst.tasks):
        # the empty schedule is always feasible without mandatory tasks
        best_value, best_sets = Fraction(0), {sid: frozenset() for sid in inst.shift_ids}
    if best_sets is None:
        raise ValueError("no feasible schedule found" + (" within limits" if aborted else ""))
    sched = _materialize(inst, best_sets, oracles, op_shifts)
    report = validate(sched)
    if not report.ok:
        raise AssertionError(f"oracle schedule fails validation: {report.violations[:3]}")
    return ExactResult(Fraction(best_value), sched, nodes, not aborted)


def _materialize(inst: Instance, sets: dict[int, frozenset], oracles, op_shifts) -> Schedule:
    sched = Schedule(inst)
    for op in inst.operators:
        chain = op_shifts[op.id]
        picked = _chain([oracles[s] for s in chain], [sets[s] for s in chain], op.min_rest)
        for sid, win in zip(chain, picked):
            if win is None:
                continue
            a, b = win
            av = inst.availability[sid]
            for tid in sorted(sets[sid]):
                sched._add(inst.task_by_id[tid], sid, inst.eligibility[tid, sid].bandwidth)
            breaks = plan_breaks(a, b, sched.plans[sid].load, av, op, inst.prep_time)
            sched._set_window(sid, a, b, breaks)
    return sched


# --------------------------------------------------------------------------
# Binary program export

FAMILIES = {
    "1": "mandatory tasks assigned exactly once",
    "2": "optional tasks assigned at most once",
    "3": "assignment needs an enabled shift",
    "4": "load only after activation",
    "5": "activation is monotone",
    "6": "activation needs an enabled shift",
    "7": "deactivation is monotone",
    "8": "no load after deactivation",
    "9": "deactivation needs an enabled shift",
    "10": "minimum shift length",
    "10b": "maximum length, without break up to the no-break limit",
    "11": "preparation time after break buckets",
    "12": "no load during breaks",
    "13": "total break length when a break is required",
    "14": "breaks inside the work window",
    "15": "break window opens after work start",
    "16": "break window closes before work start plus close offset",
    "17": "no break run shorter than the partial minimum (interior form)",
    "17b": "every break run starts with the partial minimum",
    "18": "group indicator covers assigned tasks",
    "19": "group limit per bucket",
    "20": "rest between shifts of one operator",
}


def _x(i, s): return f"x_{i}_{s}"
def _u(s, t): return f"u_{s}_{t}"
def _r(s, t): return f"r_{s}_{t}"
def _v(s, t): return f"v_{s}_{t}"
def _a(s, t, g): return f"a_{s}_{t}_{g}"
def _z(s): return f"z_{s}"
def _zh(s): return f"zh_{s}"


def _coef(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else repr(float(c))


@dataclass
class Row:
    name: str
    family: str
    coeffs: dict[str, int]
    sense: str  # "<=", ">=", "="
    rhs: int

    def holds(self, values: dict[str, int]) -> bool:
        lhs = sum(c * values.get(v, 0) for v, c in self.coeffs.items())
        return lhs <= self.rhs if self.sense == "<=" else lhs >= self.rhs if self.sense == ">=" else lhs == self.rhs


@dataclass
class LpModel:
    objective: dict[str, Fraction]
    rows: list[Row]
    binaries: list[str]
    sense: str = "max"
    comments: list[str] = field(default_factory=list)

    def family_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.rows:
            out[r.family] = out.get(r.family, 0) + 1
        return out


def build_model(instance: Instance, weights: ObjectiveWeights = CONTROL) -> LpModel:
    """All rows of the binary program with integral coefficients.

    Bandwidth rows are in sixtieths so that every coefficient is an integer.
    """
    inst = instance
    rows: list[Row] = []
    counters: dict[str, int] = {}

    def add(fam: str, coeffs: dict[str, int], sense: str, rhs: int) -> None:
        n = counters.get(fam, 0)
        counters[fam] = n + 1
        rows.append(Row(f"c{fam}_{n}", fam, {v: c for v, c in coeffs.items() if c}, sense, rhs))

    pairs = sorted(inst.eligibility)
    cover: dict[tuple[int, int], list[tuple[int, int]]] = {}  # (shift, t) -> [(task, bw)]
    for tid, sid in pairs:
        task = inst.task_by_id[tid]
        for t in task.buckets:
            cover.setdefault((sid, t), []).append((tid, inst.eligibility[tid, sid].bandwidth))

    def load(sid, t, scale=1) -> dict[str, int]:
        return {_x(i, sid): bw * scale for i, bw in cover.get((sid, t), ())}

    for task in inst.tasks:
        xs = {_x(task.id, s): 1 for s in inst.shifts_of_task[task.id]}
        if task.mandatory:
            add("1", xs, "=", 1)
        elif xs:
            add("2", xs, "<=", 1)
    for tid, sid in pairs:
        add("3", {_x(tid, sid): 1, _z(sid): -1}, "<=", 0)

    C = CAPACITY
    rho = inst.prep_time
    for sid in inst.shift_ids:
        av = inst.availability[sid]
        op = inst.operator_of_shift[sid]
        T = list(range(av.earliest_start, av.latest_end))
        M = len(T)
        for t in T:
            add("4", {**load(sid, t), _u(sid, t): -C}, "<=", 0)
        for t in T[:-1]:
            add("5", {_u(sid, t + 1): 1, _u(sid, t): -1}, ">=", 0)
        add("6", {**{_u(sid, t): 1 for t in T}, _z(sid): -M}, "<=", 0)
        for t in T[:-1]:
            add("7", {_r(sid, t + 1): 1, _r(sid, t): -1}, ">=", 0)
        for t in T:
            add("8", {**load(sid, t), _r(sid, t): C}, "<=", C)
        add("9", {**{_r(sid, t): 1 for t in T}, _z(sid): -M}, "<=", 0)
        span = {**{_u(sid, t): 1 for t in T}}
        for t in T:
            span[_r(sid, t)] = -1
        add("10", {**span, _z(sid): -av.min_shift_len}, ">=", 0)
        add("10b", {**span, _z(sid): -av.max_len_without_break,
                    _zh(sid): -(av.max_shift_len - av.max_len_without_break)}, "<=", 0)
        for t in T:
            prep: dict[str, int] = {}
            for tp in range(t + 1, min(t + rho, T[-1]) + 1):
                for var, c in load(sid, tp).items():
                    prep[var] = prep.get(var, 0) + c
            add("11", {**prep, _v(sid, t): C * rho}, "<=", C * rho)
        for t in T:
            add("12", {**load(sid, t), _v(sid, t): C}, "<=", C)
        add("13", {**{_v(sid, t): 1 for t in T}, _zh(sid): -op.min_total_break}, ">=", 0)
        for t in T:
            add("14", {_v(sid, t): 1, _u(sid, t): -1, _r(sid, t): 1}, "<=", 0)
        e = av.earliest_start
        nu, lam = av.break_window_open, av.break_window_close
        for t in T:
            if t - e >= nu:
                add("15", {_v(sid, t): 1, _u(sid, t - nu): -1}, "<=", 0)
            else:
                add("15", {_v(sid, t): 1}, "<=", 0)
        for t in T:
            if t - e >= lam:
                add("16", {_v(sid, t): 1, _u(sid, t - lam): 1}, "<=", 1)
        beta = op.min_partial_break
        if beta >= 2:
            for t in T:
                if t + beta > T[-1]:
                    break
                inner = {_v(sid, tp): 1 for tp in range(t + 1, t + beta)}
                add("17", {**inner, _v(sid, t): -beta, _v(sid, t + beta): -beta}, "<=", 0)
            for t in T:
                for j in range(1, beta):
                    c: dict[str, int] = {_v(sid, t): -1}
                    if t - 1 >= e:
                        c[_v(sid, t - 1)] = 1
                    if t + j <= T[-1]:
                        c[_v(sid, t + j)] = 1
                    add("17b", c, ">=", 0)
    for tid, sid in pairs:
        task = inst.task_by_id[tid]
        for t in task.buckets:
            add("18", {_a(sid, t, task.group): 1, _x(tid, sid): -1}, ">=", 0)
    for sid in inst.shift_ids:
        av = inst.availability[sid]
        for t in range(av.earliest_start, av.latest_end):
            add("19", {_a(sid, t, g.id): 1 for g in inst.groups}, "<=", inst.group_parallel_limit)
    for op in inst.operators:
        delta = op.min_rest
        for av in op.availabilities:
            s = av.shift_id
            for other in op.availabilities:
                if other.shift_id == s:
                    continue
                s2 = other.shift_id
                for t in range(av.earliest_start, av.latest_end):
                    later = {_u(s2, tp): 1 for tp in range(t + 1, t + delta + 1)
                             if other.earliest_start <= tp < other.latest_end}
                    add("20", {**later, _u(s, t): delta, _r(s, t): -delta}, "<=", delta)

    w1, w2 = weights.w_priority, weights.w_penalty
    obj = {}
    for tid, sid in pairs:
        c = w1 * inst.task_by_id[tid].priority - w2 * inst.eligibility[tid, sid].deviation
        obj[_x(tid, sid)] = c
    binaries = [_x(i, s) for i, s in pairs]
    for sid in inst.shift_ids:
        av = inst.availability[sid]
        T = range(av.earliest_start, av.latest_end)
        binaries += [_u(sid, t) for t in T] + [_r(sid, t) for t in T] + [_v(sid, t) for t in T]
        binaries += [_a(sid, t, g.id) for t in T for g in inst.groups]
    binaries += [_z(s) for s in inst.shift_ids] + [_zh(s) for s in inst.shift_ids]
    return LpModel(obj, rows, binaries)


def expected_counts(instance: Instance) -> tuple[int, dict[str, int]]:
    """Variable count and rows per family, derived from the model definition alone."""
    inst = instance
    E = len(inst.eligibility)
    P = len(inst.groups)
    Ts = {s: inst.availability[s].length for s in inst.shift_ids}
    n_vars = E + 3 * sum(Ts.values()) + sum(Ts.values()) * P + 2 * len(Ts)
    U = sum(t.mandatory for t in inst.tasks)
    W = sum(1 for t in inst.tasks if not t.mandatory and inst.shifts_of_task[t.id])
    rows = {"1": U, "2": W, "3": E}
    total_T = sum(Ts.values())
    for fam in ("4", "8", "11", "12", "14", "15", "19"):
        rows[fam] = total_T
    for fam in ("5", "7"):
        rows[fam] = sum(n - 1 for n in Ts.values())
    for fam in ("6", "9", "10", "10b", "13"):
        rows[fam] = len(Ts)
    rows["16"] = sum(max(0, Ts[s] - inst.availability[s].break_window_close) for s in Ts)
    rows["17"] = rows["17b"] = 0
    for s, n in Ts.items():
        beta = inst.operator_of_shift[s].min_partial_break
        if beta >= 2:
            rows["17"] += max(0, n - beta)
            rows["17b"] += n * (beta - 1)
    rows["18"] = sum(inst.task_by_id[i].length for i, _ in inst.eligibility)
    rows["20"] = sum(Ts[a.shift_id] * (len(op.availabilities) - 1)
                     for op in inst.operators for a in op.availabilities)
    return n_vars, {k: v for k, v in rows.items() if v}


def _expr(coeffs: dict) -> str:
    parts = []
    for var, c in coeffs.items():
        s = _coef(c)
        parts.append(f"- {s[1:]} {var}" if s.startswith("-") else f"+ {s} {var}")
    return " ".join(parts)


def model_to_lp(model: LpModel, title: str = "") -> str:
    lines = [f"\\ {title}".rstrip(), "\\ coefficients of bandwidth rows are in sixtieths of capacity"]
    lines.append("Maximize")
    obj = _expr(model.objective)
    lines.append(f" obj: {obj}" if obj else " obj: 0 " + (model.binaries[0] if model.binaries else ""))
    lines.append("Subject To")
    fam = None
    for r in model.rows:
        if r.family != fam:
            fam = r.family
            lines.append(f"\\ c{fam}: {FAMILIES[fam]}")
        lhs = _expr(r.coeffs) or "0 " + model.binaries[0]
        lines.append(f" {r.name}: {lhs} {r.sense} {r.rhs}")
    lines.append("Binary")
    for i in range(0, len(model.binaries), 10):
        lines.append(" " + " ".join(model.binaries[i:i + 10]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_lp(instance: Instance, weights: ObjectiveWeights = CONTROL, path: str | Path | None = None) -> str:
    text = model_to_lp(build_model(instance, weights), f"instance {instance.name}, weights {weights}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


_TERM = re.compile(r"([+-])\s*(\d+(?:\.\d*)?(?:e[+-]?\d+)?)?\s*([A-Za-z_][\w.]*)")


def _parse_expr(text: str) -> dict[str, Fraction]:
    text = text.strip()
    if text and text[0] not in "+-":
        text = "+ " + text
    out: dict[str, Fraction] = {}
    pos = 0
    for m in _TERM.finditer(text):
        if text[pos:m.start()].strip():
            raise ValueError(f"cannot parse expression near {text[pos:m.start()]!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        out[m.group(3)] = out.get(m.group(3), 0) + sign * coef
    if text[pos:].strip():
        raise ValueError(f"trailing text {text[pos:]!r}")
    return out


def read_lp(text: str) -> LpModel:
    """Minimal reader for the layout written by ``model_to_lp``."""
    section = None
    objective: dict[str, Fraction] = {}
    rows: list[Row] = []
    binaries: list[str] = []
    comments = []
    sense = "max"
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("\\"):
            comments.append(line[1:].strip())
            continue
        low = line.lower()
        if low in ("maximize", "minimize"):
            section, sense = "obj", low[:3]
            continue
        if low == "subject to":
            section = "st"
            continue
        if low in ("binary", "binaries"):
            section = "bin"
            continue
        if low == "end":
            break
        if section == "obj":
            body = line.split(":", 1)[1]
            body = re.sub(r"^\s*0\s+\S+\s*$", "", body)
            objective = {v: c for v, c in _parse_expr(body).items() if c}
        elif section == "st":
            name, body = line.split(":", 1)
            m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)\s*$", body)
            if not m:
                raise ValueError(f"bad row: {line}")
            lhs = re.sub(r"^\s*0\s+\S+\s*$", "", m.group(1))
            coeffs = {v: int(c) for v, c in _parse_expr(lhs).items() if c}
            fam = name.strip()[1:].rsplit("_", 1)[0]
            rows.append(Row(name.strip(), fam, coeffs, m.group(2), int(m.group(3))))
        elif section == "bin":
            binaries.extend(line.split())
        else:
            raise ValueError(f"text outside a section: {line}")
    return LpModel(objective, rows, binaries, sense, comments)


# --------------------------------------------------------------------------
# Literal evaluation of a schedule against the exported rows


class NotRepresentable(ValueError):
    """The schedule uses a pair or window the binary program cannot encode."""


def schedule_vector(schedule: Schedule) -> dict[str, int]:
    """0/1 values of every model variable for the given schedule (zeros omitted)."""
    inst = schedule.instance
    vals: dict[str, int] = {}
    for sid, plan in schedule.plans.items():
        av = inst.availability[sid]
        for tid in plan.tasks:
            if (tid, sid) not in inst.eligibility:
                raise NotRepresentable(f"pair ({tid},{sid}) is not eligible")
            vals[_x(tid, sid)] = 1
            task = inst.task_by_id[tid]
            for t in task.buckets:
                if not av.earliest_start <= t < av.latest_end:
                    raise NotRepresentable(f"task {tid} outside availability of {sid}")
                vals[_a(sid, t, task.group)] = 1
        for b in plan.break_buckets:
            if not av.earliest_start <= b < av.latest_end:
                raise NotRepresentable(f"break bucket {b} outside availability of {sid}")
            vals[_v(sid, b)] = 1
        if not plan.enabled:
            continue
        ws, we = plan.work_start, plan.work_end
        if ws is None or we is None or not av.earliest_start <= ws < we <= av.latest_end:
            raise NotRepresentable(f"window of {sid} outside its availability")
        vals[_z(sid)] = 1
        if we - ws > av.max_len_without_break:
            vals[_zh(sid)] = 1
        for t in range(ws, av.latest_end):
            vals[_u(sid, t)] = 1
        for t in range(we, av.latest_end):
            vals[_r(sid, t)] = 1
    return vals


def violated_rows(model: LpModel, values: dict[str, int]) -> list[str]:
    return [r.name for r in model.rows if not r.holds(values)]


def solve_lp_highs(model: LpModel, time_limit: float = 60.0) -> Fraction | None:
    """Solve a parsed model with HiGHS through scipy, if scipy is installed.

    Returns the optimal objective (rounded to the nearest representable
    value) or None when the solver reports no optimum.
    """
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix

    index = {v: j for j, v in enumerate(model.binaries)}
    c = np.zeros(len(index))
    for v, coef in model.objective.items():
        c[index[v]] = -float(coef) if model.sense == "max" else float(coef)
    ri, ci, data, lo, hi = [], [], [], [], []
    for i, r in enumerate(model.rows):
        for v, coef in r.coeffs.items():
            ri.append(i)
            ci.append(index[v])
            data.append(coef)
        lo.append(r.rhs if r.sense in (">=", "=") else -np.inf)
        hi.append(r.rhs if r.sense in ("<=", "=") else np.inf)
    A = coo_matrix((data, (ri, ci)), shape=(len(model.rows), len(index))).tocsr()
    res = milp(c, constraints=LinearConstraint(A, lo, hi), integrality=np.ones(len(index)),
               bounds=Bounds(0, 1), options={"time_limit": time_limit})
    if res.status != 0 or res.x is None:
        return None
    x = np.round(res.x).astype(int)
    value = sum(model.objective.get(v, 0) * int(x[j]) for v, j in index.items())
    return Fraction(value)
