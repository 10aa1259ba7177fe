"""Static per-layer drawings: one panel per occupied layer, as text or SVG."""

from __future__ import annotations

from html import escape

from .configuration import Configuration
from .lattice import Coord


def _layers(cells) -> dict[int, list[Coord]]:
    by_z: dict[int, list[Coord]] = {}
    for c in sorted(cells):
        by_z.setdefault(c.z, []).append(c)
    return dict(sorted(by_z.items()))


def render_text(cfg: Configuration, labels: dict | None = None) -> str:
    """ASCII panels; rows run from high to low ``y``, empty sites print as '.'."""
    labels = labels or {}
    width = max([len(str(v)) for v in labels.values()] + [1])
    out = []
    for z, cells in _layers(cfg.occupied).items():
        xs = [c.x2 for c in cells]
        ys = [c.y2 for c in cells]
        occ = set(cells)
        out.append(f"z = {z}")
        for y2 in range(max(ys), min(ys) - 1, -2):
            row = []
            for x2 in range(min(xs), max(xs) + 1, 2):
                c = Coord(x2, y2, z)
                if c in occ:
                    row.append(str(labels.get(c, "o")).rjust(width))
                else:
                    row.append(".".rjust(width))
            out.append(" ".join(row))
        out.append("")
    return "\n".join(out)


def render_svg(cfg: Configuration, labels: dict | None = None, cell: int = 28) -> str:
    """Panels side by side; a half-step in-layer offset is half a cell."""
    labels = labels or {}
    layers = _layers(cfg.occupied)
    xs = [c.x2 for c in cfg.occupied]
    ys = [c.y2 for c in cfg.occupied]
    x_lo, x_hi, y_lo, y_hi = min(xs), max(xs), min(ys), max(ys)
    half = cell / 2
    pw = (x_hi - x_lo) * half + 2 * cell
    ph = (y_hi - y_lo) * half + 2 * cell + 20
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{pw * len(layers):.0f}" '
        f'height="{ph:.0f}" font-family="monospace" font-size="10">'
    ]
    for n, (z, cells) in enumerate(layers.items()):
        ox = n * pw
        parts.append(f'<g transform="translate({ox:.1f},0)">')
        parts.append(f'<rect x="1" y="1" width="{pw - 2:.1f}" height="{ph - 2:.1f}" fill="none" stroke="#999"/>')
        parts.append(f'<text x="6" y="14">z = {z}</text>')
        for c in cells:
            cx = cell + (c.x2 - x_lo) * half
            cy = 20 + cell + (y_hi - c.y2) * half
            parts.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{cell * 0.4:.1f}" '
                         f'fill="#cde" stroke="#345"/>')
            if c in labels:
                parts.append(f'<text x="{cx:.1f}" y="{cy + 3:.1f}" text-anchor="middle">'
                             f'{escape(str(labels[c]))}</text>')
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def final_states(events: list[dict]) -> dict:
    """Last recorded ``state`` of every particle in a trace."""
    out = {}
    for e in events:
        if e["kind"] == "state-change" and "state" in (e["payload"] or {}):
            out[Coord(*e["particle"])] = e["payload"]["state"]
    return out
