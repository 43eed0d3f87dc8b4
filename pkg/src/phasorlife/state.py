"""Cell and grid value types, normalization, and the .sqp pattern file format.

A cell is a pair of complex coefficients (a, b) with |a|^2 + |b|^2 = 1; |a|^2
is the probability of reading the cell as alive. Grids are finite rectangles
with either a fixed-dead or toroidal boundary. Pattern files are small text
documents (extension ``.sqp``) whose grammar is documented in the README.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-9
ZERO_NORM = 1e-9


class Boundary(Enum):
    """How off-grid neighbors are treated."""

    FIXED_DEAD = "fixed"
    TORUS = "torus"


@dataclass(frozen=True)
class CellState:
    """One cell: complex alive coefficient ``a`` and dead coefficient ``b``."""

    a: complex
    b: complex

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(abs(self.a) ** 2 + abs(self.b) ** 2 - 1.0) <= tol


DEAD = CellState(0j, 1 + 0j)
ALIVE = CellState(1 + 0j, 0j)


def normalize(raw_a: complex, raw_b: complex) -> CellState:
    """Scale a raw coefficient pair to unit norm.

    A pair whose norm falls below ``ZERO_NORM`` (total cancellation) maps to
    the canonical dead cell instead of raising, so steppers stay total.
    """
    n = math.sqrt(abs(raw_a) ** 2 + abs(raw_b) ** 2)
    if n < ZERO_NORM:
        return DEAD
    return CellState(raw_a / n, raw_b / n)


def measure_alive_probability(c: CellState) -> float:
    """Probability of finding the cell alive: |a|^2."""
    return abs(c.a) ** 2


class Grid:
    """Rectangular array of cells plus a boundary policy.

    Coefficients live in two read-only complex arrays indexed ``[y, x]``.
    Grids are immutable values; steppers and editors return new instances.
    """

    __slots__ = ("_a", "_b", "_boundary")

    def __init__(self, a, b, boundary: Boundary = Boundary.FIXED_DEAD) -> None:
        aa = np.array(a, dtype=np.complex128)
        bb = np.array(b, dtype=np.complex128)
        if aa.ndim != 2 or aa.shape != bb.shape:
            raise ValueError("coefficient arrays must be 2-D with equal shapes")
        if min(aa.shape) < 1:
            raise ValueError("grid dimensions must be positive")
        aa.setflags(write=False)
        bb.setflags(write=False)
        self._a = aa
        self._b = bb
        self._boundary = boundary

    @classmethod
    def dead(cls, width: int, height: int, boundary: Boundary = Boundary.FIXED_DEAD) -> "Grid":
        a = np.zeros((height, width), dtype=np.complex128)
        b = np.ones((height, width), dtype=np.complex128)
        return cls(a, b, boundary)

    @classmethod
    def from_cells(
        cls,
        width: int,
        height: int,
        cells: Sequence[CellState] | Iterable[CellState],
        boundary: Boundary = Boundary.FIXED_DEAD,
    ) -> "Grid":
        cells = list(cells)
        if len(cells) != width * height:
            raise ValueError(f"expected {width * height} cells, got {len(cells)}")
        a = np.array([c.a for c in cells], dtype=np.complex128).reshape(height, width)
        b = np.array([c.b for c in cells], dtype=np.complex128).reshape(height, width)
        return cls(a, b, boundary)

    @property
    def a(self) -> np.ndarray:
        return self._a

    @property
    def b(self) -> np.ndarray:
        return self._b

    @property
    def boundary(self) -> Boundary:
        return self._boundary

    @property
    def width(self) -> int:
        return self._a.shape[1]

    @property
    def height(self) -> int:
        return self._a.shape[0]

    def cell(self, x: int, y: int) -> CellState:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise IndexError(f"cell ({x}, {y}) out of bounds for {self.width}x{self.height} grid")
        return CellState(complex(self._a[y, x]), complex(self._b[y, x]))

    def cells(self) -> list[CellState]:
        """Row-major list of cell states."""
        flat_a = self._a.ravel()
        flat_b = self._b.ravel()
        return [CellState(complex(x), complex(y)) for x, y in zip(flat_a, flat_b)]

    def with_cell(self, x: int, y: int, cell: CellState) -> "Grid":
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise IndexError(f"cell ({x}, {y}) out of bounds for {self.width}x{self.height} grid")
        a = self._a.copy()
        b = self._b.copy()
        a[y, x] = cell.a
        b[y, x] = cell.b
        return Grid(a, b, self._boundary)

    def with_boundary(self, boundary: Boundary) -> "Grid":
        return Grid(self._a, self._b, boundary)

    def alive_probability(self) -> np.ndarray:
        """Per-cell |a|^2 as a float array indexed [y, x]."""
        return np.abs(self._a) ** 2

    def total_alive_probability(self) -> float:
        return float(np.sum(np.abs(self._a) ** 2))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        norms = np.abs(self._a) ** 2 + np.abs(self._b) ** 2
        return bool(np.all(np.abs(norms - 1.0) <= tol))

    def allclose(self, other: "Grid", tol: float = 1e-9) -> bool:
        return (
            self._a.shape == other._a.shape
            and self._boundary is other._boundary
            and bool(np.all(np.abs(self._a - other._a) <= tol))
            and bool(np.all(np.abs(self._b - other._b) <= tol))
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return (
            self._a.shape == other._a.shape
            and self._boundary is other._boundary
            and bool(np.array_equal(self._a, other._a))
            and bool(np.array_equal(self._b, other._b))
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Grid({self.width}x{self.height}, {self._boundary.value})"


@dataclass(frozen=True)
class PatternDocument:
    """A parsed pattern file: grid content plus optional metadata."""

    grid: Grid
    version: int = 1
    name: str | None = None
    comment: str | None = None


class PatternError(ValueError):
    """Pattern text rejected; carries a 1-based line and, when known, column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


_GLYPH_CELLS = {
    ".": DEAD,
    ">": CellState(1 + 0j, 0j),
    "<": CellState(-1 + 0j, 0j),
    "^": CellState(1j, 0j),
    "v": CellState(-1j, 0j),
}

_TOKEN_RE = re.compile(r"\S+")


def _parse_token(token: str, line: int, column: int) -> CellState:
    if token in _GLYPH_CELLS:
        return _GLYPH_CELLS[token]
    if "@" in token:
        amp_text, _, deg_text = token.partition("@")
        try:
            amp = float(amp_text)
            deg = float(deg_text)
        except ValueError:
            raise PatternError(f"malformed token {token!r}", line, column) from None
        if not 0.0 <= amp <= 1.0:
            raise PatternError(f"amplitude out of [0, 1] in token {token!r}", line, column)
        if not -360.0 < deg < 360.0:
            raise PatternError(f"phase out of (-360, 360) degrees in token {token!r}", line, column)
        rad = math.radians(deg)
        a = amp * complex(math.cos(rad), math.sin(rad))
        b = complex(math.sqrt(max(0.0, 1.0 - amp * amp)), 0.0)
        return CellState(a, b)
    raise PatternError(f"unknown token {token!r}", line, column)


def parse_pattern(text: str) -> PatternDocument:
    """Parse .sqp text into a PatternDocument.

    Grammar: optional comment/blank lines anywhere, then the header lines
    ``version 1``, ``size W H``, ``boundary fixed|torus``, ``cells``, then
    exactly H rows of exactly W whitespace-separated tokens.
    """
    name: str | None = None
    comment: str | None = None
    significant: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            lowered = body.lower()
            if lowered.startswith("name:") and name is None:
                name = body[5:].strip()
            elif lowered.startswith("comment:") and comment is None:
                comment = body[8:].strip()
            continue
        significant.append((lineno, raw))

    pos = 0

    def next_line(expectation: str) -> tuple[int, str]:
        nonlocal pos
        if pos >= len(significant):
            last = significant[-1][0] if significant else 1
            raise PatternError(f"unexpected end of pattern: expected {expectation}", last)
        entry = significant[pos]
        pos += 1
        return entry

    lineno, line = next_line("'version' header")
    fields = line.split()
    if not fields or fields[0] != "version":
        raise PatternError(f"expected 'version', got {fields[0]!r}", lineno)
    if len(fields) != 2 or not fields[1].isdigit():
        raise PatternError("malformed version header", lineno)
    version = int(fields[1])
    if version != 1:
        raise PatternError(f"unsupported pattern version {version}", lineno)

    lineno, line = next_line("'size' header")
    fields = line.split()
    if len(fields) != 3 or fields[0] != "size":
        raise PatternError("malformed size header; expected 'size <width> <height>'", lineno)
    try:
        width = int(fields[1])
        height = int(fields[2])
    except ValueError:
        raise PatternError("size values must be integers", lineno) from None
    if width < 1 or height < 1:
        raise PatternError("size values must be positive", lineno)

    lineno, line = next_line("'boundary' header")
    fields = line.split()
    if len(fields) != 2 or fields[0] != "boundary":
        raise PatternError("malformed boundary header; expected 'boundary fixed|torus'", lineno)
    try:
        boundary = Boundary(fields[1])
    except ValueError:
        raise PatternError(f"unknown boundary keyword {fields[1]!r}", lineno) from None

    lineno, line = next_line("'cells' header")
    if line.split() != ["cells"]:
        raise PatternError("expected 'cells' header", lineno)

    cells: list[CellState] = []
    for _ in range(height):
        lineno, line = next_line("a cell row")
        matches = list(_TOKEN_RE.finditer(line))
        if len(matches) != width:
            raise PatternError(
                f"row length mismatch: expected {width} tokens, got {len(matches)}", lineno
            )
        for m in matches:
            cells.append(_parse_token(m.group(), lineno, m.start() + 1))

    if pos < len(significant):
        raise PatternError("unexpected content after cell rows", significant[pos][0])

    grid = Grid.from_cells(width, height, cells, boundary)
    return PatternDocument(grid=grid, version=version, name=name, comment=comment)


def _cell_token(c: CellState) -> str:
    a = c.a
    if a == 0:
        return "."
    if a == 1:
        return ">"
    if a == -1:
        return "<"
    if a == 1j:
        return "^"
    if a == -1j:
        return "v"
    # amp may exceed 1 by an ulp on normalized cells; clamp so the token re-parses
    amp = min(abs(a), 1.0)
    deg = math.degrees(cmath.phase(a))
    return f"{amp:.17g}@{deg:.17g}"


def serialize_pattern(doc: PatternDocument) -> str:
    """Render a PatternDocument back to .sqp text.

    Only the a coefficient of each cell is preserved; b is re-derived as the
    nonnegative real complement on parse. Re-parsing reproduces every a within
    1e-9 (exactly, for glyph tokens).
    """
    g = doc.grid
    lines: list[str] = []
    if doc.name:
        lines.append(f"# name: {doc.name}")
    if doc.comment:
        lines.append(f"# comment: {doc.comment}")
    lines.append(f"version {doc.version}")
    lines.append(f"size {g.width} {g.height}")
    lines.append(f"boundary {g.boundary.value}")
    lines.append("cells")
    for y in range(g.height):
        lines.append(" ".join(_cell_token(g.cell(x, y)) for x in range(g.width)))
    return "\n".join(lines) + "\n"
