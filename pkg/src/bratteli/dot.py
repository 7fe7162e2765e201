"""Graphviz export: one rank row per level, parallel edges drawn repeatedly."""

from __future__ import annotations

from .diagram import BratteliDiagram, InvalidDiagramError, validate


def to_dot(d: BratteliDiagram) -> str:
    """Deterministic DOT text; marked vertices get a distinct shape.

    Vertices are named vL_I (level, index); labels show the vertex label.
    """
    report = validate(d, relax_emission=True)
    if not report.ok:
        raise InvalidDiagramError("refusing to export an invalid diagram", report)
    lines = ["digraph bratteli {", "  rankdir=TB;"]
    for n in range(1, d.num_levels + 1):
        names = " ".join(f"v{n}_{i};" for i in range(d.level_size(n)))
        lines.append(f"  {{ rank=same; {names} }}")
    for v in d.vertices():
        shape = "box" if v in d.marks else "circle"
        lines.append(f'  v{v.level}_{v.index} [label="d={d.label(v)}", shape={shape}];')
    for v in d.vertices():
        for e in d.out_edges(v):
            lines.append(f"  v{e.level}_{e.src} -> v{e.level + 1}_{e.dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"
