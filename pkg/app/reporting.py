"""Convergence logs, plots and solution files."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

from jinja2 import Environment, FileSystemLoader, select_autoescape

from app.multicut.instance import EdgeLabeling, MulticutInstance, components_of_uncut
from app.schemas.solver import ConvergenceRecord

CSV_COLUMNS = ["time", "iter", "lb", "ub", "n_triangles", "n_lollipops"]
TEMPLATE_DIR = Path(__file__).parent / "templates"
# Smallest time shown on the log axis.
MIN_TIME = 1e-6

WIDTH, HEIGHT = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 70, 620, 20, 360


def coord(value: float) -> str:
    return f"{value:.2f}"


def points(pairs: Sequence[tuple[float, float]]) -> str:
    return " ".join(f"{coord(x)},{coord(y)}" for x, y in pairs)


templates = Environment(loader=FileSystemLoader(TEMPLATE_DIR), autoescape=select_autoescape(["svg"]))
templates.filters["coord"] = coord
templates.filters["points"] = points


def _require_records(records: Sequence[ConvergenceRecord]) -> None:
    if not records:
        raise ValueError("at least one convergence record is required")


def write_csv(records: Sequence[ConvergenceRecord], path: str | Path) -> None:
    """One row per record; ``time`` is wall-clock and the only nondeterministic column."""
    _require_records(records)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow([
                repr(record.wall_time),
                record.iteration,
                repr(record.lower_bound),
                repr(record.best_upper_bound),
                record.n_triangles,
                record.n_lollipops,
            ])


def _scale(lo: float, hi: float, out_lo: float, out_hi: float):
    if hi - lo < 1e-12:
        middle = (out_lo + out_hi) / 2
        return lambda value: middle
    return lambda value: out_lo + (value - lo) / (hi - lo) * (out_hi - out_lo)


def render_svg(records: Sequence[ConvergenceRecord], title: str = "convergence") -> str:
    """Lower bound (solid) and best upper bound (dashed) over log10 wall time."""
    _require_records(records)
    times = [math.log10(max(record.wall_time, MIN_TIME)) for record in records]
    values = [record.lower_bound for record in records] + [record.best_upper_bound for record in records]
    finite = [value for value in values if math.isfinite(value)]
    y_lo, y_hi = min(finite, default=0.0), max(finite, default=0.0)

    to_x = _scale(min(times), max(times), LEFT, RIGHT)
    to_y = _scale(y_lo, y_hi, BOTTOM, TOP)
    lower_points = [(to_x(t), to_y(record.lower_bound)) for t, record in zip(times, records)]
    upper_points = [
        (to_x(t), to_y(record.best_upper_bound))
        for t, record in zip(times, records)
        if math.isfinite(record.best_upper_bound)
    ]

    x_ticks = [{"pos": to_x(t), "label": f"1e{t}"} for t in range(math.floor(min(times)), math.ceil(max(times)) + 1)
               if min(times) <= t <= max(times)]
    y_ticks = [{"pos": to_y(value), "label": f"{value:.4g}"} for value in sorted({y_lo, y_hi})]

    template = templates.get_template("convergence.svg")
    return template.render(
        title=title,
        width=WIDTH,
        height=HEIGHT,
        left=LEFT,
        right=RIGHT,
        top=TOP,
        bottom=BOTTOM,
        x_ticks=x_ticks,
        y_ticks=y_ticks,
        lower_points=lower_points,
        upper_points=upper_points,
    )


def write_svg(records: Sequence[ConvergenceRecord], path: str | Path, title: str = "convergence") -> None:
    Path(path).write_text(render_svg(records, title=title))


def format_solution(instance: MulticutInstance, labeling: EdgeLabeling) -> str:
    """Edge lines ``u v label`` followed by node lines ``node component``."""
    lines = [f"{u} {v} {label}" for (u, v), label in zip(instance.edges, labeling.labels.tolist())]
    partition = components_of_uncut(instance, labeling)
    lines.extend(f"{node} {component}" for node, component in enumerate(partition.component_id.tolist()))
    return "\n".join(lines) + "\n"


def write_solution(instance: MulticutInstance, labeling: EdgeLabeling, path: str | Path) -> None:
    Path(path).write_text(format_solution(instance, labeling))
