import csv
import re

import pytest

from app.multicut.instance import EdgeLabeling
from app.multicut.solver import solve
from app.reporting import CSV_COLUMNS, format_solution, render_svg, write_csv, write_solution, write_svg
from app.schemas.solver import ConvergenceRecord, SolveConfig


def record(iteration, lower, upper, wall_time=None):
    return ConvergenceRecord(
        wall_time=0.01 * (iteration + 1) if wall_time is None else wall_time,
        iteration=iteration,
        lower_bound=lower,
        best_upper_bound=upper,
        n_edges=3,
        n_triangles=1,
        n_lollipops=0,
    )


def polyline(svg: str, css_class: str) -> list[tuple[float, float]]:
    match = re.search(rf'class="{css_class}"[^>]*points="([^"]*)"', svg)
    assert match is not None
    return [tuple(map(float, point.split(","))) for point in match.group(1).split()]


class TestCsv:
    """Test cases for the convergence CSV"""

    def test_single_record(self, tmp_path):
        """Test header plus one data row"""
        path = tmp_path / "log.csv"
        write_csv([record(0, -2.0, -1.0)], path)
        with open(path, newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == CSV_COLUMNS
        assert len(rows) == 2
        assert rows[1][1:] == ["0", "-2.0", "-1.0", "1", "0"]

    def test_empty_records_rejected(self, tmp_path):
        """Test that an empty stream raises ValueError"""
        with pytest.raises(ValueError):
            write_csv([], tmp_path / "log.csv")

    def test_unwritable_path(self, tmp_path):
        """Test that a missing directory raises OSError"""
        with pytest.raises(OSError):
            write_csv([record(0, 0.0, 0.0)], tmp_path / "missing" / "log.csv")


class TestSvg:
    """Test cases for the convergence plot"""

    def test_two_polylines_and_labels(self):
        """Test solid lower and dashed upper bound lines"""
        svg = render_svg([record(0, -2.0, -1.0), record(1, -1.5, -1.0), record(2, -1.0, -1.0)])
        assert svg.count("<polyline") == 2
        assert 'stroke-dasharray' in re.search(r'<polyline class="upper-bound"[^>]*>', svg).group(0)
        assert 'stroke-dasharray' not in re.search(r'<polyline class="lower-bound"[^>]*>', svg).group(0)
        assert "time [s] (log10)" in svg
        assert "objective" in svg

    def test_constant_lower_bound_is_horizontal(self):
        """Test a flat series"""
        svg = render_svg([record(i, -1.0, 0.0) for i in range(4)])
        ys = {y for _, y in polyline(svg, "lower-bound")}
        assert len(ys) == 1

    def test_log_time_axis(self):
        """Test that decades are evenly spaced"""
        svg = render_svg([record(0, 0.0, 1.0, 0.001), record(1, 0.5, 1.0, 0.01), record(2, 1.0, 1.0, 0.1)])
        xs = [x for x, _ in polyline(svg, "lower-bound")]
        assert xs[1] - xs[0] == pytest.approx(xs[2] - xs[1], abs=0.02)

    def test_zero_time_is_clamped(self):
        """Test that a zero wall time still renders"""
        svg = render_svg([record(0, -1.0, 0.0, 0.0), record(1, -0.5, 0.0, 1.0)])
        assert len(polyline(svg, "lower-bound")) == 2

    def test_triangle_run_ends_at_optimum(self, triangle_instance, tmp_path):
        """Test the final lower bound point of a solved triangle"""
        records = solve(triangle_instance, SolveConfig(tighten="cycles")).records
        path = tmp_path / "plot.svg"
        write_svg(records, path)
        svg = path.read_text()
        lower, upper = polyline(svg, "lower-bound"), polyline(svg, "upper-bound")
        # The upper bound is -1 throughout, so both lines end at the same height.
        assert lower[-1][1] == pytest.approx(upper[-1][1], abs=0.01)
        assert records[-1].lower_bound == pytest.approx(-1.0, abs=1e-6)


class TestSolutionFile:
    """Test cases for the solution writer"""

    def test_format(self, triangle_instance, tmp_path):
        """Test edge lines followed by node lines"""
        labeling = EdgeLabeling([1, 0, 1])
        assert format_solution(triangle_instance, labeling) == "0 1 1\n0 2 0\n1 2 1\n0 0\n1 1\n2 0\n"
        path = tmp_path / "solution.txt"
        write_solution(triangle_instance, labeling, path)
        assert path.read_text().splitlines()[0] == "0 1 1"
