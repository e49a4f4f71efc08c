import csv
from unittest.mock import patch

import pytest

from app.cli import EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, build_parser, main
from app.multicut.exceptions import SolverInvariantError

TRIANGLE_TEXT = "MULTICUT 3 3\n0 1 -2\n0 2 1\n1 2 1\n"
K4_TEXT = "MULTICUT 4 6\n0 1 1\n0 2 1\n0 3 1\n1 2 -1\n1 3 -1\n2 3 -1\n"


class TestSolveCommand:
    """Test cases for mcmp solve"""

    def test_triangle_prints_certified_bounds(self, instance_file, capsys):
        """Test the final status line"""
        path = instance_file(TRIANGLE_TEXT)
        assert main(["solve", "-i", str(path), "--tighten", "cycles"]) == EXIT_OK
        assert capsys.readouterr().out.strip().splitlines()[-1] == "LB=-1 UB=-1 status=optimal"

    def test_k4_writes_log(self, instance_file, tmp_path):
        """Test CSV output with odd-wheel separation"""
        path = instance_file(K4_TEXT, "k4.txt")
        log = tmp_path / "out.csv"
        assert main(["solve", "-i", str(path), "--tighten", "cycles+oddwheels", "--log", str(log)]) == EXIT_OK
        with open(log, newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["time", "iter", "lb", "ub", "n_triangles", "n_lollipops"]
        assert len(rows) > 2

    def test_plot_and_solution(self, instance_file, tmp_path):
        """Test SVG and solution outputs"""
        path = instance_file(TRIANGLE_TEXT)
        plot, solution = tmp_path / "plot.svg", tmp_path / "solution.txt"
        code = main(["solve", "-i", str(path), "--plot", str(plot), "--solution", str(solution), "--max-iter", "20"])
        assert code == EXIT_OK
        assert plot.read_text().startswith("<svg")
        assert len(solution.read_text().splitlines()) == 6

    def test_missing_input(self, tmp_path, capsys):
        """Test a nonzero exit with a diagnostic on stderr"""
        assert main(["solve", "-i", str(tmp_path / "missing.txt")]) == EXIT_USAGE
        assert "cannot read" in capsys.readouterr().err

    def test_malformed_input(self, instance_file, capsys):
        """Test that parse errors exit with code 1"""
        path = instance_file("MULTICUT 2 1\n0 0 1\n")
        assert main(["solve", "-i", str(path)]) == EXIT_USAGE
        assert "self-loop" in capsys.readouterr().err

    def test_invalid_settings(self, instance_file, capsys):
        """Test that out-of-range options exit with code 1"""
        path = instance_file(TRIANGLE_TEXT)
        assert main(["solve", "-i", str(path), "--epsilon", "0"]) == EXIT_USAGE
        assert "invalid settings" in capsys.readouterr().err

    def test_unknown_option(self):
        """Test that usage errors exit with code 1"""
        with pytest.raises(SystemExit) as error:
            main(["solve", "--bogus"])
        assert error.value.code == EXIT_USAGE

    def test_internal_error(self, instance_file, capsys):
        """Test that solver invariant violations exit with code 2"""
        path = instance_file(TRIANGLE_TEXT)
        with patch("app.cli.solve", side_effect=SolverInvariantError("broken order")):
            assert main(["solve", "-i", str(path)]) == EXIT_INTERNAL
        assert "internal error" in capsys.readouterr().err

    def test_store(self, instance_file, capsys):
        """Test that --store hands the run to the run store"""
        path = instance_file(TRIANGLE_TEXT)
        with patch("app.cli._store", return_value=4) as store:
            assert main(["solve", "-i", str(path), "--store", "--tighten", "cycles"]) == EXIT_OK
        assert store.call_args.args[0] == "instance.txt"
        assert store.call_args.args[3] == "cycles"
        assert "stored run 4" in capsys.readouterr().out


class TestOracleCommand:
    """Test cases for mcmp oracle"""

    def test_triangle(self, instance_file, capsys):
        """Test the exact optimum and its clusters"""
        path = instance_file(TRIANGLE_TEXT)
        assert main(["oracle", "-i", str(path)]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "OPT=-1"
        assert len(lines) == 3

    def test_too_large(self, instance_file, capsys):
        """Test the node cap"""
        path = instance_file("MULTICUT 13 1\n0 1 1\n")
        assert main(["oracle", "-i", str(path)]) == EXIT_USAGE
        assert "at most 12" in capsys.readouterr().err


def test_parser_requires_command():
    """Test that a bare invocation is a usage error"""
    with pytest.raises(SystemExit) as error:
        build_parser().parse_args([])
    assert error.value.code == EXIT_USAGE
