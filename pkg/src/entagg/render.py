"""Text, Newick and SVG renderings of dendrograms and matrices.

Output is a pure function of the inputs: fixed float formatting with a
``.`` decimal point, no timestamps and fixed viewport arithmetic.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import escape

from .agglomeration import Dendrogram
from .cod import CodMatrix
from .errors import InputError
from .io import format_height, newick_label, write_newick

ZERO_HEIGHT = 1e-12


@dataclass(frozen=True)
class RenderSpec:
    format: str = "text"
    collapse_zero_height: bool = False
    precision: int = 6

    def __post_init__(self):
        if self.format not in ("text", "newick", "svg"):
            raise InputError(f"unknown dendrogram format {self.format!r}")
        if self.precision < 1:
            raise InputError("precision must be at least 1")


def _collapsed_label(dendrogram: Dendrogram, node: int) -> str:
    members = sorted(dendrogram.members(node))
    return "{" + ",".join(dendrogram.label(e) for e in members) + "}"


def _is_collapsed(dendrogram: Dendrogram, node: int, spec: RenderSpec) -> bool:
    return (
        spec.collapse_zero_height
        and node > dendrogram.n
        and dendrogram.height(node) <= ZERO_HEIGHT
    )


def display_leaves(dendrogram: Dendrogram, spec: RenderSpec) -> list[tuple[int, str]]:
    """Displayed leaves in order as ``(node, label)``; collapsed subtrees appear once."""
    out = []
    stack = [dendrogram.root]
    while stack:
        v = stack.pop()
        ch = dendrogram.children(v)
        if ch is None:
            out.append((v, dendrogram.label(v)))
        elif _is_collapsed(dendrogram, v, spec):
            out.append((v, _collapsed_label(dendrogram, v)))
        else:
            stack.extend((ch[1], ch[0]))
    return out


def _render_text(dendrogram: Dendrogram, spec: RenderSpec) -> str:
    lines = []

    def walk(v: int, depth: int):
        pad = "  " * depth
        ch = dendrogram.children(v)
        if ch is None:
            lines.append(pad + dendrogram.label(v))
        elif _is_collapsed(dendrogram, v, spec):
            lines.append(pad + _collapsed_label(dendrogram, v))
        else:
            lines.append(f"{pad}[{format_height(dendrogram.height(v), spec.precision)}]")
            for c in ch:
                walk(c, depth + 1)

    walk(dendrogram.root, 0)
    return "\n".join(lines) + "\n"


def _render_newick_collapsed(dendrogram: Dendrogram, spec: RenderSpec) -> str:
    def walk(v: int) -> str:
        ch = dendrogram.children(v)
        if ch is None:
            return newick_label(dendrogram.label(v))
        if _is_collapsed(dendrogram, v, spec):
            return newick_label(_collapsed_label(dendrogram, v))
        return "(" + ",".join(walk(c) for c in ch) + f"):{format_height(dendrogram.height(v), spec.precision)}"

    return walk(dendrogram.root) + ";"


# SVG layout constants, in user units
_W = 640
_ROW = 18
_TOP = 20
_LABEL_W = 160
_RIGHT = 40
_AXIS = 40


def _render_svg(dendrogram: Dendrogram, spec: RenderSpec) -> str:
    leaves = display_leaves(dendrogram, spec)
    y = {node: _TOP + _ROW * (j + 0.5) for j, (node, _) in enumerate(leaves)}
    shown = {node for node, _ in leaves}
    heights = [s.height for s in dendrogram.steps]
    hmax = max(heights) if heights and max(heights) > 0 else 1.0
    x0, x1 = _LABEL_W, _W - _RIGHT

    def x(h: float) -> float:
        return x0 + (x1 - x0) * h / hmax

    def height(v: int) -> float:
        return 0.0 if v in shown else dendrogram.height(v)

    segments = []

    def place(v: int) -> float:
        if v in shown:
            return y[v]
        a, b = dendrogram.children(v)
        ya, yb = place(a), place(b)
        xv = x(height(v))
        segments.append((x(height(a)), ya, xv, ya))
        segments.append((x(height(b)), yb, xv, yb))
        segments.append((xv, ya, xv, yb))
        y[v] = (ya + yb) / 2
        return y[v]

    place(dendrogram.root)
    total_h = int(_TOP + _ROW * len(leaves) + _AXIS)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{total_h}" '
        f'viewBox="0 0 {_W} {total_h}">',
        '<g stroke="black" stroke-width="1" fill="none">',
    ]
    for xa, ya, xb, yb in segments:
        out.append(f'<line x1="{xa:.2f}" y1="{ya:.2f}" x2="{xb:.2f}" y2="{yb:.2f}"/>')
    out.append("</g>")
    out.append('<g font-size="11" text-anchor="end">')
    for node, label in leaves:
        out.append(f'<text x="{x0 - 6:.2f}" y="{y[node] + 4:.2f}">{escape(label)}</text>')
    out.append("</g>")
    axis_y = _TOP + _ROW * len(leaves) + 10
    out.append(f'<g stroke="black" stroke-width="1"><line x1="{x0:.2f}" y1="{axis_y:.2f}" x2="{x1:.2f}" y2="{axis_y:.2f}"/>')
    ticks = [hmax * j / 4 for j in range(5)]
    for t in ticks:
        out.append(f'<line x1="{x(t):.2f}" y1="{axis_y:.2f}" x2="{x(t):.2f}" y2="{axis_y + 4:.2f}"/>')
    out.append("</g>")
    out.append('<g font-size="10" text-anchor="middle">')
    for t in ticks:
        out.append(f'<text x="{x(t):.2f}" y="{axis_y + 16:.2f}">{t:.3f}</text>')
    out.append(f'<text x="{(x0 + x1) / 2:.2f}" y="{axis_y + 28:.2f}">entropy (nats)</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_dendrogram(dendrogram: Dendrogram, spec: RenderSpec | None = None) -> str:
    spec = spec or RenderSpec()
    if spec.format == "text":
        return _render_text(dendrogram, spec)
    if spec.format == "newick":
        if spec.collapse_zero_height:
            return _render_newick_collapsed(dendrogram, spec) + "\n"
        return write_newick(dendrogram, spec.precision) + "\n"
    return _render_svg(dendrogram, spec)


def format_value(v, precision: int = 6) -> str:
    if isinstance(v, numbers.Integral) or (isinstance(v, Fraction) and v.denominator == 1):
        return str(int(v))
    return format_height(float(v), precision)


def _square(matrix, order):
    rows = [list(r) for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError("matrix must be square")
    if order is None:
        return rows, list(range(1, n + 1))
    order = [int(e) for e in order]
    if sorted(order) != list(range(1, n + 1)):
        raise InputError(f"order must be a permutation of 1..{n}, got length {len(order)}")
    return [[rows[a - 1][b - 1] for b in order] for a in order], order


def render_matrix(matrix, order: Sequence[int] | None = None, fmt: str = "csv",
                  precision: int = 6, labels: Sequence[str] | None = None) -> str:
    """CSV or grayscale SVG for a COD matrix or a square (pairwise) matrix.

    ``order`` permutes rows and columns of square matrices. COD matrices
    are written as ragged lower-triangular rows and take no order.
    """
    if isinstance(matrix, CodMatrix):
        if order is not None:
            raise InputError("COD matrices cannot be reordered")
        rows = [list(r) for r in matrix.rows]
        names = None
    else:
        rows, perm = _square(matrix, order)
        names = [labels[e - 1] for e in perm] if labels is not None else None
    if fmt == "csv":
        lines = []
        if names is not None:
            lines.append("," + ",".join(names))
        for j, r in enumerate(rows):
            cells = [format_value(v, precision) for v in r]
            if names is not None:
                cells.insert(0, names[j])
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
    if fmt != "svg":
        raise InputError(f"unknown matrix format {fmt!r}")
    return _matrix_svg(rows)


def _matrix_svg(rows) -> str:
    cell = 12
    n = len(rows)
    vmax = max((float(v) for r in rows for v in r), default=0.0)
    vmax = vmax if vmax > 0 else 1.0
    size = cell * n
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}" shape-rendering="crispEdges">'
    ]
    for i, r in enumerate(rows):
        for k, v in enumerate(r):
            g = int(round(255 * (1 - float(v) / vmax)))
            out.append(
                f'<rect x="{k * cell}" y="{i * cell}" width="{cell}" height="{cell}" '
                f'fill="rgb({g},{g},{g})"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
