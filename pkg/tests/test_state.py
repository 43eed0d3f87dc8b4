from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from phasorlife import (
    ALIVE,
    DEAD,
    Boundary,
    CellState,
    Grid,
    PatternDocument,
    PatternError,
    measure_alive_probability,
    normalize,
    parse_pattern,
    serialize_pattern,
)

SQ2 = math.sqrt(2.0)


class TestNormalize:
    def test_pure_scaling(self):
        c = normalize(2 + 0j, 0j)
        assert c == CellState(1 + 0j, 0j)

    def test_symmetric_case(self):
        c = normalize(1 + 0j, 1 + 0j)
        assert abs(c.a - 1 / SQ2) < 1e-12
        assert abs(c.b - 1 / SQ2) < 1e-12

    def test_zero_norm_gives_dead_cell(self):
        assert normalize(0j, 0j) == DEAD

    def test_idempotent(self):
        c = normalize(0.3 + 0.4j, 0.5 - 0.7j)
        c2 = normalize(c.a, c.b)
        assert abs(c2.a - c.a) < 1e-12
        assert abs(c2.b - c.b) < 1e-12

    def test_preserves_phases(self):
        c = normalize(2j, -2 + 0j)
        assert abs(c.a - 1j / SQ2) < 1e-12
        assert abs(c.b + 1 / SQ2) < 1e-12


class TestMeasure:
    @pytest.mark.parametrize(
        "cell,expected",
        [(ALIVE, 1.0), (DEAD, 0.0), (CellState(1 / SQ2 + 0j, 1 / SQ2 + 0j), 0.5)],
    )
    def test_examples(self, cell, expected):
        assert measure_alive_probability(cell) == pytest.approx(expected, abs=1e-12)

    def test_probability_completeness(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            raw_a = complex(rng.normal(), rng.normal())
            raw_b = complex(rng.normal(), rng.normal())
            c = normalize(raw_a, raw_b)
            assert measure_alive_probability(c) + abs(c.b) ** 2 == pytest.approx(1.0, abs=1e-9)


class TestGrid:
    def test_dead_grid(self):
        g = Grid.dead(3, 2)
        assert g.width == 3 and g.height == 2
        assert all(c == DEAD for c in g.cells())

    def test_from_cells_roundtrip(self):
        cells = [ALIVE, DEAD, DEAD, ALIVE, DEAD, ALIVE]
        g = Grid.from_cells(3, 2, cells)
        assert g.cells() == cells
        assert g.cell(0, 0) == ALIVE
        assert g.cell(0, 1) == ALIVE

    def test_from_cells_length_mismatch(self):
        with pytest.raises(ValueError):
            Grid.from_cells(2, 2, [ALIVE])

    def test_cell_out_of_bounds(self):
        g = Grid.dead(2, 2)
        with pytest.raises(IndexError):
            g.cell(2, 0)

    def test_immutable_arrays(self):
        g = Grid.dead(2, 2)
        with pytest.raises(ValueError):
            g.a[0, 0] = 1.0

    def test_with_cell_copies(self):
        g = Grid.dead(2, 2)
        g2 = g.with_cell(1, 0, ALIVE)
        assert g.cell(1, 0) == DEAD
        assert g2.cell(1, 0) == ALIVE


class TestParse:
    def make(self, rows, boundary="fixed", header_extra=""):
        w = len(rows[0].split())
        return (
            f"version 1\nsize {w} {len(rows)}\nboundary {boundary}\ncells\n"
            + "\n".join(rows)
            + "\n"
        )

    def test_glyph_tokens(self):
        doc = parse_pattern(self.make(["> < ^ v ."]))
        cells = doc.grid.cells()
        assert cells[0].a == 1
        assert cells[1].a == -1
        assert cells[2].a == 1j
        assert cells[3].a == -1j
        assert cells[4] == DEAD
        assert all(c.b == 0 for c in cells[:4])

    def test_amp_deg_token(self):
        doc = parse_pattern(self.make(["0.6@90"]))
        c = doc.grid.cell(0, 0)
        assert abs(c.a - 0.6j) < 1e-9
        assert abs(c.b - 0.8) < 1e-9

    def test_negative_degrees(self):
        doc = parse_pattern(self.make(["1@-90"]))
        assert abs(doc.grid.cell(0, 0).a + 1j) < 1e-9

    def test_comments_and_blanks_ignored(self):
        text = "# a comment\n\nversion 1\n# another\nsize 1 1\nboundary torus\ncells\n.\n"
        doc = parse_pattern(text)
        assert doc.grid.boundary is Boundary.TORUS

    def test_metadata_captured(self):
        text = "# name: demo\n# comment: hello there\nversion 1\nsize 1 1\nboundary fixed\ncells\n.\n"
        doc = parse_pattern(text)
        assert doc.name == "demo"
        assert doc.comment == "hello there"

    def test_amplitude_out_of_range(self):
        with pytest.raises(PatternError, match="amplitude"):
            parse_pattern(self.make(["1.5@0"]))

    def test_degrees_out_of_range(self):
        with pytest.raises(PatternError, match="phase"):
            parse_pattern(self.make(["0.5@360"]))

    def test_unknown_token_reports_line_and_column(self):
        with pytest.raises(PatternError) as err:
            parse_pattern("version 1\nsize 2 1\nboundary fixed\ncells\n. x\n")
        assert err.value.line == 5
        assert err.value.column == 3

    def test_row_length_mismatch(self):
        with pytest.raises(PatternError, match="row length mismatch"):
            parse_pattern("version 1\nsize 3 1\nboundary fixed\ncells\n. .\n")

    def test_unknown_boundary(self):
        with pytest.raises(PatternError, match="unknown boundary keyword"):
            parse_pattern("version 1\nsize 1 1\nboundary moebius\ncells\n.\n")

    def test_bad_version(self):
        with pytest.raises(PatternError, match="version"):
            parse_pattern("version 2\nsize 1 1\nboundary fixed\ncells\n.\n")

    def test_missing_rows(self):
        with pytest.raises(PatternError, match="unexpected end"):
            parse_pattern("version 1\nsize 1 2\nboundary fixed\ncells\n.\n")

    def test_trailing_garbage(self):
        with pytest.raises(PatternError, match="unexpected content"):
            parse_pattern("version 1\nsize 1 1\nboundary fixed\ncells\n.\n>\n")


class TestSerialize:
    def test_glyphs_where_exact(self):
        g = Grid.from_cells(5, 1, [DEAD, ALIVE, CellState(-1 + 0j, 0j),
                                   CellState(1j, 0j), CellState(-1j, 0j)])
        text = serialize_pattern(PatternDocument(grid=g))
        assert text.splitlines()[-1] == ". > < ^ v"

    def test_amp_deg_fallback(self):
        c = normalize(0.5 * cmath.exp(1j * 0.7), 0.9j)
        g = Grid.from_cells(1, 1, [c])
        text = serialize_pattern(PatternDocument(grid=g))
        token = text.splitlines()[-1]
        assert "@" in token
        doc = parse_pattern(text)
        assert abs(doc.grid.cell(0, 0).a - c.a) < 1e-9

    def test_roundtrip_random_grids(self):
        rng = np.random.default_rng(42)
        for trial in range(1000):
            w = int(rng.integers(1, 6))
            h = int(rng.integers(1, 6))
            r = rng.random((h, w))
            pa = rng.uniform(-np.pi, np.pi, (h, w))
            pb = rng.uniform(-np.pi, np.pi, (h, w))
            a = r * np.exp(1j * pa)
            b = np.sqrt(1 - r * r) * np.exp(1j * pb)
            boundary = Boundary.TORUS if trial % 2 else Boundary.FIXED_DEAD
            g = Grid(a, b, boundary)
            doc2 = parse_pattern(serialize_pattern(PatternDocument(grid=g)))
            assert doc2.grid.boundary is boundary
            assert np.max(np.abs(doc2.grid.a - g.a)) < 1e-9

    def test_metadata_roundtrip(self):
        g = Grid.dead(1, 1)
        doc = PatternDocument(grid=g, name="x", comment="y")
        doc2 = parse_pattern(serialize_pattern(doc))
        assert (doc2.name, doc2.comment) == ("x", "y")
