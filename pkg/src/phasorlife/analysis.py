"""Long-run fate classification, phase sweeps, and burn-rate measurement.

Amplitudes are continuous, so "same pattern" is operationalized as recurrence
of the per-cell alive-probability map within a tolerance, optionally up to a
rigid translation (for moving patterns). A verdict is only issued once the
same recurrence is confirmed at two consecutive generations.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass

import numpy as np

from .rules import DEFAULT_CONFIG, StepConfig, step_grid
from .state import Boundary, CellState, Grid, PatternDocument

BORDER_EPS = 1e-6

VERDICT_DEAD = "dead"
VERDICT_STILL_LIFE = "still_life"
VERDICT_OSCILLATOR = "oscillator"
VERDICT_TRANSLATING = "translating"
VERDICT_UNRESOLVED = "unresolved"

STABLE_VERDICTS = frozenset({VERDICT_STILL_LIFE, VERDICT_OSCILLATOR, VERDICT_TRANSLATING})


class BurnRateUnmeasurable(RuntimeError):
    """The pattern died before enough frames existed to fit a rate."""


@dataclass(frozen=True)
class FateReport:
    """Classification of a pattern's long-run behavior with supporting metrics."""

    verdict: str
    generations_run: int
    max_alive_probability_final: float
    alive_probability_history: tuple[float, ...]
    generation: int | None = None  # first all-dead generation, for dead verdicts
    period: int | None = None
    dx: int | None = None
    dy: int | None = None
    border_contact: bool = False

    def is_stable(self) -> bool:
        return self.verdict in STABLE_VERDICTS

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "generation": self.generation,
            "period": self.period,
            "dx": self.dx,
            "dy": self.dy,
            "generations_run": self.generations_run,
            "max_alive_probability_final": self.max_alive_probability_final,
            "alive_probability_history": list(self.alive_probability_history),
            "border_contact": self.border_contact,
        }


@dataclass(frozen=True)
class SweepResult:
    """Per-phase fates for one swept cell, plus a bracketed transition if found."""

    phases: tuple[float, ...]
    reports: tuple[FateReport, ...]
    critical_angle_estimate: float | None


def grid_distance(g1: Grid, g2: Grid, *, phase_sensitive: bool = False) -> float:
    """Distance between two grids of equal dimensions.

    Default mode compares alive-probability maps (max over cells of the
    absolute difference of |a|^2), which is insensitive to phases. The
    phase-sensitive mode aligns one global phase and compares the a
    coefficients directly, for strict still-life certification.
    """
    if g1.a.shape != g2.a.shape:
        raise ValueError("grid dimensions differ")
    if not phase_sensitive:
        return float(np.max(np.abs(np.abs(g1.a) ** 2 - np.abs(g2.a) ** 2)))
    corr = complex(np.sum(g1.a * np.conj(g2.a)))
    rot = corr / abs(corr) if abs(corr) > 1e-15 else 1.0 + 0j
    return float(np.max(np.abs(g1.a - rot * g2.a)))


def _touches_border(probs: np.ndarray) -> bool:
    return bool(
        (probs[0, :] > BORDER_EPS).any()
        or (probs[-1, :] > BORDER_EPS).any()
        or (probs[:, 0] > BORDER_EPS).any()
        or (probs[:, -1] > BORDER_EPS).any()
    )


def _shifted(p: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """p translated by (dx, dy) with dead fill, matching a fixed boundary."""
    h, w = p.shape
    out = np.zeros_like(p)
    ys_dst = slice(max(0, dy), h + min(0, dy))
    xs_dst = slice(max(0, dx), w + min(0, dx))
    ys_src = slice(max(0, -dy), h + min(0, -dy))
    xs_src = slice(max(0, -dx), w + min(0, -dx))
    out[ys_dst, xs_dst] = p[ys_src, xs_src]
    return out


def _find_translation(
    p_now: np.ndarray, p_then: np.ndarray, gap: int, boundary: Boundary, tol: float
) -> tuple[int, int] | None:
    h, w = p_now.shape
    lim_x = min(gap, w - 1)  # speed of light: one cell per generation
    lim_y = min(gap, h - 1)
    if boundary is Boundary.TORUS:
        for dy in range(-lim_y, lim_y + 1):
            for dx in range(-lim_x, lim_x + 1):
                if dx == 0 and dy == 0:
                    continue
                if np.max(np.abs(p_now - np.roll(p_then, (dy, dx), axis=(0, 1)))) <= tol:
                    return (dx, dy)
        return None
    mass = float(p_then.sum())
    if mass <= tol:
        return None
    ys, xs = np.indices(p_now.shape)
    cx_now = float((p_now * xs).sum() / p_now.sum())
    cy_now = float((p_now * ys).sum() / p_now.sum())
    cx_then = float((p_then * xs).sum() / mass)
    cy_then = float((p_then * ys).sum() / mass)
    base_dx = round(cx_now - cx_then)
    base_dy = round(cy_now - cy_then)
    for ddy in (-1, 0, 1):
        for ddx in (-1, 0, 1):
            dx, dy = base_dx + ddx, base_dy + ddy
            if (dx, dy) == (0, 0) or abs(dx) > lim_x or abs(dy) > lim_y:
                continue
            if np.max(np.abs(p_now - _shifted(p_then, dx, dy))) <= tol:
                return (dx, dy)
    return None


def _match(
    probs: list[np.ndarray],
    i: int,
    j: int,
    boundary: Boundary,
    tol: float,
    cache: dict[tuple[int, int], tuple[int, int] | None],
) -> tuple[int, int] | None:
    key = (i, j)
    if key in cache:
        return cache[key]
    p_now, p_then = probs[i], probs[j]
    result: tuple[int, int] | None = None
    if np.max(np.abs(p_now - p_then)) <= tol:
        result = (0, 0)
    elif abs(float(p_now.sum()) - float(p_then.sum())) <= tol * p_now.size:
        # totals are translation invariant; only then is the offset search worth it
        result = _find_translation(p_now, p_then, i - j, boundary, tol)
    cache[key] = result
    return result


def classify(
    g0: Grid,
    cfg: StepConfig | None = None,
    max_gen: int = 200,
    tol: float = 1e-6,
) -> FateReport:
    """Run up to max_gen generations and classify the long-run behavior.

    Reports dead at the first generation where every cell's alive probability
    sits below the configured dead threshold; otherwise looks for the smallest
    recurrence period (still life, oscillator, or translation) confirmed at
    two consecutive generations; otherwise unresolved.
    """
    cfg = cfg or DEFAULT_CONFIG
    if max_gen < 1:
        raise ValueError("max_gen must be at least 1")
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    fixed = g0.boundary is Boundary.FIXED_DEAD
    g = g0
    probs = [g.alive_probability()]
    totals = [float(probs[0].sum())]
    border = fixed and _touches_border(probs[0])
    if border:
        warnings.warn(
            "live amplitude on the fixed boundary; the finite grid truncates the dynamics",
            RuntimeWarning,
            stacklevel=2,
        )

    def report(verdict: str, t: int, **extra) -> FateReport:
        return FateReport(
            verdict=verdict,
            generations_run=t,
            max_alive_probability_final=float(probs[-1].max()),
            alive_probability_history=tuple(totals),
            border_contact=border,
            **extra,
        )

    if probs[0].max() < cfg.dead_threshold:
        return report(VERDICT_DEAD, 0, generation=0)

    cache: dict[tuple[int, int], tuple[int, int] | None] = {}
    for t in range(1, max_gen + 1):
        g = step_grid(g, cfg)
        p = g.alive_probability()
        probs.append(p)
        totals.append(float(p.sum()))
        if fixed and not border and _touches_border(p):
            border = True
            warnings.warn(
                "live amplitude reached the fixed boundary; the finite grid truncates the dynamics",
                RuntimeWarning,
                stacklevel=2,
            )
        if p.max() < cfg.dead_threshold:
            return report(VERDICT_DEAD, t, generation=t)
        for period in range(1, t):
            offset = _match(probs, t, t - period, g.boundary, tol, cache)
            if offset is None:
                continue
            if _match(probs, t - 1, t - 1 - period, g.boundary, tol, cache) != offset:
                continue
            if offset == (0, 0):
                if period == 1:
                    return report(VERDICT_STILL_LIFE, t)
                return report(VERDICT_OSCILLATOR, t, period=period)
            return report(VERDICT_TRANSLATING, t, period=period, dx=offset[0], dy=offset[1])
    return report(VERDICT_UNRESOLVED, max_gen)


def _single_transition_estimate(
    phases: list[float], reports: list[FateReport]
) -> float | None:
    verdicts = [r.verdict for r in reports]
    forward = [
        i
        for i in range(len(verdicts) - 1)
        if verdicts[i] in STABLE_VERDICTS and verdicts[i + 1] == VERDICT_DEAD
    ]
    backward = any(
        verdicts[i] == VERDICT_DEAD and verdicts[i + 1] in STABLE_VERDICTS
        for i in range(len(verdicts) - 1)
    )
    if len(forward) == 1 and not backward:
        i = forward[0]
        return 0.5 * (phases[i] + phases[i + 1])
    return None


def sweep_phase(
    doc: PatternDocument,
    cell: tuple[int, int],
    phases: list[float],
    cfg: StepConfig | None = None,
    max_gen: int = 200,
    tol: float = 1e-6,
) -> SweepResult:
    """Classify the pattern once per phase value applied to one live cell.

    Each run replaces the target cell's a with |a| e^(i theta), keeping its
    magnitude. The critical angle estimate is the midpoint of the unique
    stable-to-dead consecutive pair, when exactly one such transition exists.
    """
    g = doc.grid
    x, y = cell
    if not (0 <= x < g.width and 0 <= y < g.height):
        raise IndexError(f"sweep cell ({x}, {y}) out of bounds")
    base = g.cell(x, y)
    amp = abs(base.a)
    if amp == 0.0:
        raise ValueError("sweep target cell is dead")
    phases = [float(p) for p in phases]
    if not phases:
        raise ValueError("phases must be non-empty")
    if any(b <= a for a, b in zip(phases, phases[1:])):
        raise ValueError("phases must be strictly increasing")
    reports = []
    for theta in phases:
        replaced = CellState(amp * cmath.exp(1j * theta), base.b)
        reports.append(classify(g.with_cell(x, y, replaced), cfg, max_gen, tol))
    estimate = _single_transition_estimate(phases, reports)
    return SweepResult(tuple(phases), tuple(reports), estimate)


def measure_burn_rate(
    doc: PatternDocument,
    cfg: StepConfig | None = None,
    max_gen: int = 200,
) -> float:
    """Rate at which the live bounding box shrinks along its major axis.

    Fits a least-squares line to the extent while it is still changing and
    returns the negated slope, so a structure consumed one cell per
    generation measures 1.0 and a static structure measures 0.0. Raises
    BurnRateUnmeasurable when the pattern dies before three frames exist.
    """
    cfg = cfg or DEFAULT_CONFIG
    g = doc.grid
    extents: list[int] = []
    axis: str | None = None
    died = False
    for _ in range(max_gen + 1):
        p = g.alive_probability()
        mask = p > cfg.dead_threshold
        if not mask.any():
            died = True
            break
        ys, xs = np.nonzero(mask)
        ext_x = int(xs.max() - xs.min() + 1)
        ext_y = int(ys.max() - ys.min() + 1)
        if axis is None:
            axis = "x" if ext_x >= ext_y else "y"
        extents.append(ext_x if axis == "x" else ext_y)
        g = step_grid(g, cfg)
    if died and len(extents) < 3:
        raise BurnRateUnmeasurable(
            f"pattern died after {len(extents)} frames; no rate to fit"
        )
    last_change = 0
    for i in range(1, len(extents)):
        if extents[i] != extents[i - 1]:
            last_change = i
    if last_change == 0:
        return 0.0
    series = np.asarray(extents[: last_change + 1], dtype=float)
    slope = np.polyfit(np.arange(series.size), series, 1)[0]
    return float(-slope)
