"""SVG drawing of a partition rotated 45 degrees, with its level-line
contours and the diagonal sums printed along the top.

Geometry (before the flip to SVG's downward y axis): cell (r, j) is a
diamond centred at x = (j - r) * s, y = (j + r) * s / 2, so diagonal i is
the vertical line x = i * s and cell (1, 1) sits at the bottom.  The level-k
contour crosses diagonal i just above its h[k][i]-th cell, which puts
every contour on cell edges and runs it from the left corner of the box to
the right corner.

Output is deterministic: fixed element and attribute order, coordinates
printed with three decimals, no timestamps.
"""
from __future__ import annotations

from .core import PlanePartition, contour_heights, diagonal_sums

__all__ = ["render_svg", "contour_polylines", "crossing_height"]

DEFAULT_CELL = 24.0


def crossing_height(dims, i: int, h: int, s: float = 1.0) -> float:
    """Height (upward) where a contour with h cells below it crosses
    diagonal i."""
    r0 = max(1, 1 - i)
    j0 = r0 + i
    return (r0 + j0 + 2 * h - 1) * s / 2


def contour_polylines(p: PlanePartition, s: float = 1.0) -> list[list[tuple[float, float]]]:
    """One polyline per level 1..c in unflipped coordinates (y up)."""
    hs = contour_heights(p)
    dims = p.dims
    return [
        [(i * s, crossing_height(dims, i, h, s)) for i, h in zip(dims.diagonals, hs.level(k))]
        for k in range(1, dims.c + 1)
    ]


def _f(v: float) -> str:
    return f"{v:.3f}"


def render_svg(p: PlanePartition, cell_size: float = DEFAULT_CELL, show_numbers: bool = True,
               show_contours: bool = True, show_sums: bool = True) -> str:
    a, b, c = p.dims
    s = float(cell_size)
    margin = s
    top = 2 * s if show_sums else s
    width = (a + b) * s + 2 * margin
    height = (a + b) * s / 2 + top + margin
    y_max = (a + b + 1) * s / 2

    def pt(x: float, y: float) -> str:
        return f"{_f(x + a * s + margin)},{_f(top + y_max - y)}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(width)}" '
        f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">',
        '<g id="cells" fill="#f4f4f4" stroke="#999999" stroke-width="1">',
    ]
    for r in range(1, a + 1):
        for j in range(1, b + 1):
            x, y = (j - r) * s, (j + r) * s / 2
            corners = [(x, y - s / 2), (x + s, y), (x, y + s / 2), (x - s, y)]
            out.append(f'<polygon points="{" ".join(pt(*q) for q in corners)}"/>')
    out.append("</g>")

    if show_numbers:
        out.append(f'<g id="numbers" font-family="sans-serif" font-size="{_f(s / 2)}" '
                   'text-anchor="middle" dominant-baseline="central">')
        for r in range(1, a + 1):
            for j in range(1, b + 1):
                x, y = pt((j - r) * s, (j + r) * s / 2).split(",")
                out.append(f'<text x="{x}" y="{y}">{p[r, j]}</text>')
        out.append("</g>")

    if show_contours:
        out.append('<g id="contours" fill="none" stroke="#c0392b" stroke-width="2">')
        for k, line in enumerate(contour_polylines(p, s), 1):
            pts = " ".join(pt(x, y) for x, y in line)
            out.append(f'<polyline class="contour" data-level="{k}" points="{pts}"/>')
        out.append("</g>")

    if show_sums:
        out.append(f'<g id="sums" font-family="sans-serif" font-size="{_f(s / 2)}" '
                   'text-anchor="middle">')
        sums = diagonal_sums(p)
        for i in p.dims.interior:
            x = _f(i * s + a * s + margin)
            out.append(f'<text class="sum" data-diagonal="{i}" x="{x}" y="{_f(top - s / 2)}">'
                       f"{sums[i]}</text>")
        out.append("</g>")

    out.append("</svg>")
    return "\n".join(out) + "\n"

