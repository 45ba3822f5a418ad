import xml.etree.ElementTree as ET
from fractions import Fraction

from ptsp_ts.alns import build_start
from ptsp_ts.feasibility import Schedule, insert
from ptsp_ts.render import FRAME_H, PX, render_svg

from conftest import avail, make, one_shift, operator, task

NS = "{http://www.w3.org/2000/svg}"


def rects(svg, cls):
    root = ET.fromstring(svg.encode())
    return [r for r in root.iter(NS + "rect") if r.get("class") == cls]


def test_empty_schedule():
    inst = make([task(0, 0, 6)], [operator(0, [avail(0, 0, 20)]), operator(1, [avail(1, 10, 40)])])
    svg = render_svg(Schedule(inst))
    assert len(rects(svg, "availability")) == 2
    for cls in ("task", "shift", "usage", "break"):
        assert rects(svg, cls) == []
    root = ET.fromstring(svg.encode())
    ops = [t.text for t in root.iter(NS + "text") if t.get("class") == "operator"]
    assert ops == ["operator 0", "operator 1"]


def test_one_task_geometry():
    inst = one_shift([task(0, 4, 13, bw=Fraction(1, 2))])
    s = Schedule(inst)
    insert(s, 0, 0)
    svg = render_svg(s)
    (r,) = rects(svg, "task")
    assert float(r.get("width")) == 9 * PX
    bars = rects(svg, "usage")
    assert len(bars) == 9 and all(float(b.get("height")) == FRAME_H / 2 for b in bars)


def test_full_bucket_reaches_top():
    inst = one_shift([task(0, 0, 6, bw=Fraction(1, 2)), task(1, 0, 6, bw=Fraction(1, 2))])
    s = Schedule(inst)
    insert(s, 0, 0), insert(s, 1, 0)
    bars = rects(render_svg(s), "usage")
    assert {float(b.get("height")) for b in bars} == {FRAME_H}


def test_medium_renders(medium1):
    svg = render_svg(build_start(medium1))
    ET.fromstring(svg.encode())
    assert len(rects(svg, "task")) == len(build_start(medium1).assignment)
