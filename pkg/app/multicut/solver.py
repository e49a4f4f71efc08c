"""The solve loop: message passing interleaved with separation and rounding."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable

from app.multicut.factors import FactorGraph, dual_lower_bound, table_magnitude
from app.multicut.instance import EdgeLabeling, MulticutInstance, Partition, components_of_uncut, trivial_lower_bound
from app.multicut.message_passing import compute_factor_order, receive_sweep, run_iteration
from app.multicut.rounding import round_solution
from app.multicut.separation import attach_odd_wheel, separate_cycles, separate_odd_wheels, triangulate_cycle
from app.schemas.solver import ConvergenceRecord, SolveConfig

logger = logging.getLogger(__name__)

STATUS_OPTIMAL = "optimal"
STATUS_FEASIBLE = "feasible"


@dataclass
class SolveResult:
    labeling: EdgeLabeling
    upper_bound: float
    lower_bound: float
    trivial_lower_bound: float
    status: str
    iterations: int
    records: list[ConvergenceRecord]
    graph: FactorGraph = field(repr=False)

    @property
    def partition(self) -> Partition:
        return components_of_uncut(self.graph.instance, self.labeling)

    @property
    def gap(self) -> float:
        return self.upper_bound - self.lower_bound

    @property
    def relative_gap(self) -> float:
        scale = max(abs(self.upper_bound), abs(self.lower_bound), 1e-12)
        return self.gap / scale

    @property
    def counts(self) -> dict[str, int]:
        return self.graph.counts()


def separation_round(graph: FactorGraph, config: SolveConfig) -> bool:
    """Attach separated odd wheels and cycles; returns True if any factor was added.

    Odd wheels are tested on the triangle costs as left by the last sweep, in
    which covered edges carry no cost. Cycles are searched on edge costs after
    a receive sweep.
    """
    triangles_before, lollipops_before = len(graph.triangles), len(graph.lollipops)
    if config.separates_odd_wheels:
        for wheel in separate_odd_wheels(graph, config.epsilon, per_center=config.wheel_cap_per_center):
            attach_odd_wheel(graph, wheel)
    receive_sweep(graph)
    for cycle in separate_cycles(graph, config.epsilon, limit=config.cycle_cap):
        triangulate_cycle(graph, cycle)
    added_triangles = len(graph.triangles) - triangles_before
    added_lollipops = len(graph.lollipops) - lollipops_before
    if added_triangles or added_lollipops:
        logger.info("separation added %d triangles and %d lollipops", added_triangles, added_lollipops)
    return bool(added_triangles or added_lollipops)


def solve(
    instance: MulticutInstance,
    config: SolveConfig | None = None,
    clock: Callable[[], float] = time.perf_counter,
) -> SolveResult:
    """Run message passing with periodic separation and rounding.

    Stops after ``max_iterations``, when the time limit is reached, or when the
    best multicut is within ``gap_tolerance`` of the lower bound. The reported
    bounds are the best seen so far.
    """
    config = config or SolveConfig()
    start = clock()
    graph = FactorGraph(instance)
    order = compute_factor_order(graph)
    records: list[ConvergenceRecord] = []

    lower = dual_lower_bound(graph)
    labeling, upper = round_solution(graph, max_passes=config.klj_max_passes)

    def record(iteration: int) -> None:
        counts = graph.counts()
        records.append(ConvergenceRecord(
            wall_time=max(clock() - start, 0.0),
            iteration=iteration,
            lower_bound=lower,
            best_upper_bound=upper,
            n_edges=counts["edges"],
            n_triangles=counts["triangles"],
            n_lollipops=counts["lollipops"],
        ))

    record(0)
    iteration = 0
    status = STATUS_OPTIMAL if upper - lower <= config.gap_tolerance else STATUS_FEASIBLE
    while status != STATUS_OPTIMAL and iteration < config.max_iterations:
        iteration += 1
        lower = max(lower, run_iteration(graph, order))
        if iteration % config.separation_interval == 0:
            if separation_round(graph, config):
                order = compute_factor_order(graph)
            lower = max(lower, dual_lower_bound(graph))

        out_of_time = clock() - start >= config.time_limit
        if iteration % config.rounding_interval == 0 or iteration == config.max_iterations or out_of_time:
            candidate, cost = round_solution(graph, max_passes=config.klj_max_passes)
            if cost < upper:
                labeling, upper = candidate, cost
            logger.info("iteration %d: lb=%.10g ub=%.10g factors=%s", iteration, lower, upper, graph.counts())
            logger.debug("largest factor cost magnitude %.6g", table_magnitude(graph))
        else:
            logger.debug("iteration %d: lb=%.10g", iteration, lower)

        record(iteration)
        if upper - lower <= config.gap_tolerance:
            status = STATUS_OPTIMAL
        elif out_of_time:
            logger.warning("time limit of %gs reached after %d iterations", config.time_limit, iteration)
            break

    return SolveResult(
        labeling=labeling,
        upper_bound=upper,
        lower_bound=lower,
        trivial_lower_bound=trivial_lower_bound(instance),
        status=status,
        iterations=iteration,
        records=records,
        graph=graph,
    )
