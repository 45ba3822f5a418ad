"""Static SVG Gantt view of a schedule, one row per operator."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .feasibility import Schedule
from .instance import CAPACITY

PX = 6  # pixels per bucket
ROW_H = 90
FRAME_H = 60
LANE_H = 9
LEFT = 150
TOP = 30


def _clock(bucket: int, minutes: int) -> str:
    t = bucket * minutes
    return f"{t // 60:02d}:{t % 60:02d}"


def _lanes(intervals: list[tuple[int, int, int]]) -> dict[int, int]:
    """Greedy lane per task so overlapping tasks do not draw over each other."""
    ends: list[int] = []
    out = {}
    for start, end, tid in sorted(intervals):
        for i, e in enumerate(ends):
            if e <= start:
                ends[i] = end
                out[tid] = i
                break
        else:
            out[tid] = len(ends)
            ends.append(end)
    return out


def render_svg(schedule: Schedule) -> str:
    inst = schedule.instance
    m = inst.bucket_minutes
    width = LEFT + inst.horizon * PX + 20
    height = TOP + ROW_H * len(inst.operators) + 20
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="9">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    for hour in range(0, inst.horizon * m // 60 + 1):
        x = LEFT + hour * 60 // m * PX
        out.append(f'<line class="grid" x1="{x}" y1="{TOP - 8}" x2="{x}" y2="{height - 20}" '
                   f'stroke="#eee"/>')
        out.append(f'<text x="{x + 2}" y="{TOP - 10}" fill="#888">{hour:02d}h</text>')
    for row, op in enumerate(inst.operators):
        y0 = TOP + row * ROW_H
        prio = pen = 0
        for av in op.availabilities:
            plan = schedule.plans[av.shift_id]
            for tid in plan.tasks:
                prio += inst.task_by_id[tid].priority
                pen += inst.eligibility[tid, av.shift_id].deviation
        out.append(f'<text class="operator" x="8" y="{y0 + 20}" font-size="11">operator {op.id}</text>')
        out.append(f'<text class="totals" x="8" y="{y0 + 36}">score {prio}</text>')
        out.append(f'<text class="totals" x="8" y="{y0 + 50}">penalty {pen}</text>')
        for av in op.availabilities:
            fy = y0 + 10
            ax = LEFT + av.earliest_start * PX
            out.append(f'<rect class="availability" data-shift="{av.shift_id}" x="{ax}" y="{fy}" '
                       f'width="{av.length * PX}" height="{FRAME_H}" fill="#f2f6fb" stroke="#c9d6e6"/>')
            plan = schedule.plans[av.shift_id]
            if not plan.enabled:
                continue
            sx = LEFT + plan.work_start * PX
            sw = (plan.work_end - plan.work_start) * PX
            load = [0] * av.length
            for tid, bw in plan.tasks.items():
                task = inst.task_by_id[tid]
                for t in task.buckets:
                    load[t - av.earliest_start] += bw
            for i, ld in enumerate(load):
                if ld:
                    h = FRAME_H * ld / CAPACITY
                    bx = LEFT + (av.earliest_start + i) * PX
                    out.append(f'<rect class="usage" x="{bx}" y="{fy + FRAME_H - h:g}" width="{PX}" '
                               f'height="{h:g}" fill="#bbb"/>')
            for b in plan.break_buckets:
                out.append(f'<rect class="break" x="{LEFT + b * PX}" y="{fy}" width="{PX}" '
                           f'height="{FRAME_H}" fill="#e8f4e4" opacity="0.8"/>')
            out.append(f'<rect class="shift" data-shift="{av.shift_id}" x="{sx}" y="{fy}" width="{sw}" '
                       f'height="{FRAME_H}" fill="none" stroke="#333" stroke-width="1.5"/>')
            out.append(f'<text class="shift-start" x="{sx + 1}" y="{fy + FRAME_H + 9}">'
                       f'{_clock(plan.work_start, m)}</text>')
            out.append(f'<text class="shift-end" x="{sx + sw - 26}" y="{fy + FRAME_H + 9}">'
                       f'{_clock(plan.work_end, m)}</text>')
            lanes = _lanes([(inst.task_by_id[t].start, inst.task_by_id[t].end, t) for t in plan.tasks])
            for tid in sorted(plan.tasks):
                task = inst.task_by_id[tid]
                tx = LEFT + task.start * PX
                ty = fy + 2 + lanes[tid] * LANE_H
                frac = inst.eligibility.get((tid, av.shift_id))
                label = str(task.bandwidth) if frac is None else _frac_label(frac.bandwidth)
                out.append(f'<rect class="task" data-task="{tid}" x="{tx}" y="{ty}" '
                           f'width="{task.length * PX}" height="{LANE_H - 1}" fill="#4a7ebb" '
                           f'stroke="#2d5a8c"><title>{escape(f"task {tid} p={task.priority}")}</title></rect>')
                out.append(f'<text class="bandwidth" x="{tx + 2}" y="{ty + LANE_H - 2}" fill="white" '
                           f'font-size="7">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _frac_label(sixtieths: int) -> str:
    return str(Fraction(sixtieths, CAPACITY))
