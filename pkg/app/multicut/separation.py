"""Dual separation of cycle and odd-wheel subproblems.

A cycle (odd wheel) is reported only when adding its triangulation (its
lollipops) is guaranteed to raise the dual lower bound by at least ``epsilon``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import networkx as nx
import numpy as np

from app.multicut.factors import TRIANGLE_STATES, FactorGraph, attach_lollipop, attach_triangle
from app.multicut.instance import DisjointSet

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-4


@dataclass(frozen=True)
class ViolatedCycle:
    """Cycle ``nodes[0] .. nodes[-1]`` closed by the repair edge ``(nodes[-1], nodes[0])``."""

    nodes: tuple[int, ...]
    repair_edge: tuple[int, int]
    guaranteed_increase: float

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class ViolatedOddWheel:
    center: int
    rim: tuple[int, ...]
    guaranteed_increase: float

    def __len__(self) -> int:
        return len(self.rim)


def canonical_cycle(nodes: tuple[int, ...] | list[int]) -> tuple[int, ...]:
    """Rotation- and reflection-invariant key for a cycle given by its node sequence."""
    nodes = list(nodes)
    start = nodes.index(min(nodes))
    rotated = nodes[start:] + nodes[:start]
    reflected = [rotated[0], *reversed(rotated[1:])]
    return tuple(min(rotated, reflected))


def separate_cycles(graph: FactorGraph, epsilon: float = DEFAULT_EPSILON, limit: int | None = None) -> list[ViolatedCycle]:
    """Cycles with one edge of cost <= -epsilon and all other edges >= epsilon.

    Candidates are ranked by their guaranteed lower bound increase.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    costs = graph.edge_costs
    components = DisjointSet(graph.node_count)
    attractive = nx.Graph()
    attractive.add_nodes_from(range(graph.node_count))
    for (u, v), cost in zip(graph.edges, costs):
        if cost >= epsilon:
            components.union(u, v)
            attractive.add_edge(u, v, cost=cost)

    cycles: list[ViolatedCycle] = []
    seen: set[tuple[int, ...]] = set()
    for (u, v), cost in zip(graph.edges, costs):
        if cost > -epsilon or not components.connected(u, v):
            continue
        path = nx.shortest_path(attractive, u, v)
        key = canonical_cycle(path)
        if key in seen:
            continue
        seen.add(key)
        path_minimum = min(attractive.edges[a, b]["cost"] for a, b in zip(path, path[1:]))
        cycles.append(ViolatedCycle(nodes=tuple(path), repair_edge=(u, v), guaranteed_increase=min(-cost, path_minimum)))

    cycles.sort(key=lambda cycle: -cycle.guaranteed_increase)
    if limit is not None:
        cycles = cycles[:limit]
    logger.debug("cycle separation found %d cycles at epsilon=%g", len(cycles), epsilon)
    return cycles


def triangulate_cycle(graph: FactorGraph, cycle: ViolatedCycle | tuple[int, ...] | list[int]) -> list[int]:
    """Attach the fan triangulation ``v1 v2 v3, v1 v3 v4, ..., v1 v(k-1) vk``."""
    nodes = cycle.nodes if isinstance(cycle, ViolatedCycle) else tuple(cycle)
    if len(nodes) < 3:
        raise ValueError(f"a cycle needs at least three nodes, got {nodes}")
    first = nodes[0]
    return [attach_triangle(graph, first, nodes[j], nodes[j + 1]) for j in range(1, len(nodes) - 1)]


def _wheel_margin(graph: FactorGraph, triangle_id: int, center: int) -> float:
    """Cost gap between cutting zero or two spokes and cutting exactly one spoke at ``center``."""
    triangle = graph.triangles[triangle_id]
    a, b, c = triangle.nodes
    pairs = ((a, b), (a, c), (b, c))
    spoke_columns = [column for column, pair in enumerate(pairs) if center in pair]
    one_spoke = TRIANGLE_STATES[:, spoke_columns].sum(axis=1) == 1
    return float(triangle.costs[~one_spoke].min() - triangle.costs[one_spoke].min())


def triangle_wheel_test(graph: FactorGraph, triangle_id: int, center: int, epsilon: float = DEFAULT_EPSILON) -> bool:
    """True iff the best one-spoke labeling beats every other labeling by ``epsilon``."""
    if center not in graph.triangles[triangle_id].nodes:
        raise ValueError(f"node {center} is not a corner of triangle {graph.triangles[triangle_id].nodes}")
    return _wheel_margin(graph, triangle_id, center) >= epsilon


def build_doubled_graph(graph: FactorGraph, center: int, epsilon: float = DEFAULT_EPSILON) -> nx.Graph:
    """Bipartite graph over rim copies ``(v, 0)`` and ``(v, 1)``.

    Every triangle ``center v w`` passing :func:`triangle_wheel_test` contributes
    the edges ``(v, 0)-(w, 1)`` and ``(v, 1)-(w, 0)`` with attribute ``margin``.
    """
    doubled = nx.Graph()
    for t in graph.node_triangles[center]:
        margin = _wheel_margin(graph, t, center)
        if margin < epsilon:
            continue
        v, w = (node for node in graph.triangles[t].nodes if node != center)
        doubled.add_edge((v, 0), (w, 1), margin=margin)
        doubled.add_edge((v, 1), (w, 0), margin=margin)
    return doubled


def _wheels_at(graph: FactorGraph, center: int, epsilon: float) -> list[ViolatedOddWheel]:
    doubled = build_doubled_graph(graph, center, epsilon)
    if doubled.number_of_edges() == 0:
        return []
    n = graph.node_count
    components = DisjointSet(2 * n)
    for (v, side_v), (w, side_w) in doubled.edges:
        components.union(v + side_v * n, w + side_w * n)

    wheels: list[ViolatedOddWheel] = []
    seen: set[tuple[int, ...]] = set()
    rim_nodes = sorted({v for v, _ in doubled.nodes})
    for v in rim_nodes:
        if not components.connected(v, v + n):
            continue
        path = nx.shortest_path(doubled, (v, 0), (v, 1))
        rim = [node for node, _ in path[:-1]]
        if len(set(rim)) != len(rim):
            continue
        key = canonical_cycle(rim)
        if key in seen:
            continue
        seen.add(key)
        increase = min(doubled.edges[a, b]["margin"] for a, b in zip(path, path[1:]))
        wheels.append(ViolatedOddWheel(center=center, rim=tuple(rim), guaranteed_increase=increase))
    return wheels


def separate_odd_wheels(graph: FactorGraph, epsilon: float = DEFAULT_EPSILON, per_center: int | None = 1) -> list[ViolatedOddWheel]:
    """Odd wheels whose rim triangles are attached and all pass the one-spoke test."""
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    wheels: list[ViolatedOddWheel] = []
    if not graph.triangles:
        return wheels
    for center in range(graph.node_count):
        found = _wheels_at(graph, center, epsilon)
        found.sort(key=lambda wheel: -wheel.guaranteed_increase)
        wheels.extend(found if per_center is None else found[:per_center])
    wheels.sort(key=lambda wheel: -wheel.guaranteed_increase)
    logger.debug("odd wheel separation found %d wheels at epsilon=%g", len(wheels), epsilon)
    return wheels


def attach_odd_wheel(graph: FactorGraph, wheel: ViolatedOddWheel) -> tuple[list[int], list[int]]:
    """Attach triangles ``u v1 vj`` (j = 2..k) and lollipops ``(u vj vj+1, v1)`` (j = 2..k-1)."""
    u, rim = wheel.center, wheel.rim
    k = len(rim)
    if k < 3 or k % 2 == 0:
        raise ValueError(f"odd wheel rim must have an odd length >= 3, got {k}")
    triangles = [attach_triangle(graph, u, rim[0], rim[j]) for j in range(1, k)]
    lollipops = [attach_lollipop(graph, u, rim[j], rim[j + 1], rim[0]) for j in range(1, k - 1)]
    return triangles, lollipops


def wheel_margins(graph: FactorGraph, wheel: ViolatedOddWheel) -> np.ndarray:
    """One-spoke margins of the rim triangles of a wheel, for diagnostics."""
    rim = wheel.rim
    margins = []
    for i, v in enumerate(rim):
        w = rim[(i + 1) % len(rim)]
        t = graph.triangle_index[tuple(sorted((wheel.center, v, w)))]
        margins.append(_wheel_margin(graph, t, wheel.center))
    return np.array(margins)
