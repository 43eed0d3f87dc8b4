"""Deterministic renderers: arrow text frames, binary PPM images, CSV dumps.

All three are pure functions of the grid: identical inputs yield identical
bytes, which makes golden-file testing trivial.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .state import Grid

DEAD_PROBABILITY_EPS = 1e-6
STRONG_AMPLITUDE = 0.9

# Phase quantized to the nearest eighth turn; single-stroke arrows mark cells
# with |a| >= 0.9, double-stroke arrows mark partial amplitudes.
STRONG_ARROWS = "→↗↑↖←↙↓↘"
FAINT_ARROWS = "⇒⇗⇑⇖⇐⇙⇓⇘"


class RenderMode(Enum):
    ASCII_ARROWS = "ascii"
    IMAGE_PPM = "ppm"
    CSV = "csv"


@dataclass(frozen=True)
class RenderOptions:
    mode: RenderMode = RenderMode.ASCII_ARROWS
    cell_pixel_size: int = 1

    def __post_init__(self) -> None:
        if self.cell_pixel_size < 1:
            raise ValueError("cell_pixel_size must be >= 1")


def _octant(phase: float) -> int:
    return int(round(phase * 4.0 / math.pi)) % 8


def render_ascii(g: Grid) -> str:
    rows = []
    for y in range(g.height):
        row = []
        for x in range(g.width):
            c = g.cell(x, y)
            if abs(c.a) ** 2 < DEAD_PROBABILITY_EPS:
                row.append(".")
            else:
                glyphs = STRONG_ARROWS if abs(c.a) >= STRONG_AMPLITUDE else FAINT_ARROWS
                row.append(glyphs[_octant(cmath.phase(c.a))])
        rows.append("".join(row))
    return "\n".join(rows) + "\n"


def _hsv_bytes(phase: float, value: float) -> tuple[int, int, int]:
    # hue from phase (degrees on the color wheel), full saturation, brightness |a|^2
    v = min(max(value, 0.0), 1.0)
    if v == 0.0:
        return (0, 0, 0)
    h = (math.degrees(phase) % 360.0) / 60.0
    i = int(h) % 6
    f = h - int(h)
    q = v * (1.0 - f)
    t = v * f
    r, gg, b = ((v, t, 0.0), (q, v, 0.0), (0.0, v, t), (0.0, q, v), (t, 0.0, v), (v, 0.0, q))[i]
    return (round(255 * r), round(255 * gg), round(255 * b))


def render_ppm(g: Grid, opts: RenderOptions | None = None) -> bytes:
    opts = opts or RenderOptions(mode=RenderMode.IMAGE_PPM)
    if opts.mode is not RenderMode.IMAGE_PPM:
        raise ValueError("render_ppm requires IMAGE_PPM mode")
    size = opts.cell_pixel_size
    rgb = np.zeros((g.height, g.width, 3), dtype=np.uint8)
    for y in range(g.height):
        for x in range(g.width):
            c = g.cell(x, y)
            rgb[y, x] = _hsv_bytes(cmath.phase(c.a), abs(c.a) ** 2)
    img = np.repeat(np.repeat(rgb, size, axis=0), size, axis=1)
    header = f"P6\n{g.width * size} {g.height * size}\n255\n".encode("ascii")
    return header + img.tobytes()


def render_csv(g: Grid) -> str:
    """Row-major cell dump; 17 significant digits round-trip doubles losslessly."""
    lines = ["x,y,re_a,im_a,re_b,im_b,p_alive"]
    for y in range(g.height):
        for x in range(g.width):
            c = g.cell(x, y)
            lines.append(
                f"{x},{y},{c.a.real:.17g},{c.a.imag:.17g},"
                f"{c.b.real:.17g},{c.b.imag:.17g},{abs(c.a) ** 2:.17g}"
            )
    return "\n".join(lines) + "\n"
