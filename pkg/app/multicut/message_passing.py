"""Message passing between edge, triangle and lollipop subproblems.

Every update moves a cost vector from one subproblem to a coupled one: the
receiver gains exactly what the sender loses, so the total cost of every
feasible multicut is unchanged while the dual lower bound can only grow.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import NamedTuple

import numpy as np

from app.multicut.exceptions import SolverInvariantError
from app.multicut.factors import TRIANGLE_STATES, FactorGraph, dual_lower_bound

logger = logging.getLogger(__name__)

# _CUT_MASKS[c] selects the triangle states with coordinate c set to 1.
_CUT_MASKS = tuple(TRIANGLE_STATES[:, column] == 1 for column in range(3))
_UNCUT_MASKS = tuple(~mask for mask in _CUT_MASKS)


class FactorKind(str, Enum):
    EDGE = "edge"
    TRIANGLE = "triangle"


class FactorRef(NamedTuple):
    kind: FactorKind
    index: int


FactorOrder = list[FactorRef]


def compute_factor_order(graph: FactorGraph) -> FactorOrder:
    """Edges in lexicographic order, each triangle right after its smallest edge.

    Ties between triangles sharing a smallest edge are broken by node tuple.
    """
    edge_rank = {edge: rank for rank, edge in enumerate(sorted(range(graph.edge_count), key=graph.edges.__getitem__))}
    keyed = [((edge_rank[e], 0, graph.edges[e]), FactorRef(FactorKind.EDGE, e)) for e in range(graph.edge_count)]
    for t, triangle in enumerate(graph.triangles):
        first = min(edge_rank[e] for e in triangle.edges)
        keyed.append(((first, 1, triangle.nodes), FactorRef(FactorKind.TRIANGLE, t)))
    keyed.sort(key=lambda item: item[0])
    order = [ref for _, ref in keyed]
    _check_order(graph, order, edge_rank)
    return order


def _check_order(graph: FactorGraph, order: FactorOrder, edge_rank: dict[int, int]) -> None:
    position = {ref: i for i, ref in enumerate(order)}
    for t, triangle in enumerate(graph.triangles):
        ranked = sorted(triangle.edges, key=edge_rank.__getitem__)
        here = position[FactorRef(FactorKind.TRIANGLE, t)]
        if not position[FactorRef(FactorKind.EDGE, ranked[0])] < here < position[FactorRef(FactorKind.EDGE, ranked[2])]:
            raise SolverInvariantError(f"factor order violates the constraint for triangle {triangle.nodes}")


def edge_receive(graph: FactorGraph, edge: int) -> None:
    """Pull each coupled triangle's preference for cutting ``edge`` onto the edge."""
    for t, column in graph.edge_triangles[edge]:
        costs = graph.triangles[t].costs
        cut = _CUT_MASKS[column]
        delta = float(costs[cut].min() - costs[_UNCUT_MASKS[column]].min())
        graph.edge_costs[edge] += delta
        costs[cut] -= delta


def edge_send(graph: FactorGraph, edge: int) -> None:
    """Split the edge cost evenly over the coupled triangles; no-op without triangles."""
    coupled = graph.edge_triangles[edge]
    if not coupled:
        return
    delta = graph.edge_costs[edge] / len(coupled)
    graph.edge_costs[edge] = 0.0
    if delta == 0.0:
        return
    for t, column in coupled:
        graph.triangles[t].costs[_CUT_MASKS[column]] += delta


def _min_by_key(costs: np.ndarray, keys: np.ndarray, key_count: int) -> np.ndarray:
    minima = np.full(key_count, np.inf)
    np.minimum.at(minima, keys, costs)
    return minima


def triangle_receive(graph: FactorGraph, triangle_id: int) -> None:
    """Move every coupled lollipop's min-marginal over the shared edges onto the triangle."""
    triangle = graph.triangles[triangle_id]
    for coupling in triangle.coupled_lollipops:
        lollipop = graph.lollipops[coupling.lollipop]
        delta = _min_by_key(lollipop.costs, coupling.lollipop_keys, coupling.key_count)
        triangle.costs += delta[coupling.triangle_keys]
        lollipop.costs -= delta[coupling.lollipop_keys]


def triangle_send(graph: FactorGraph, triangle_id: int) -> None:
    """Distribute the triangle's min-marginals evenly over its coupled lollipops."""
    triangle = graph.triangles[triangle_id]
    alpha = len(triangle.coupled_lollipops)
    if alpha == 0:
        return
    messages = [
        _min_by_key(triangle.costs, coupling.triangle_keys, coupling.key_count) / alpha
        for coupling in triangle.coupled_lollipops
    ]
    for coupling, delta in zip(triangle.coupled_lollipops, messages):
        graph.lollipops[coupling.lollipop].costs += delta[coupling.lollipop_keys]
        triangle.costs -= delta[coupling.triangle_keys]


def visit(graph: FactorGraph, ref: FactorRef) -> None:
    if ref.kind is FactorKind.EDGE:
        edge_receive(graph, ref.index)
        edge_send(graph, ref.index)
    else:
        triangle_receive(graph, ref.index)
        triangle_send(graph, ref.index)


def run_iteration(graph: FactorGraph, order: FactorOrder) -> float:
    """One forward and one reverse sweep over ``order``; returns the new lower bound."""
    for ref in order:
        visit(graph, ref)
    for ref in reversed(order):
        visit(graph, ref)
    return dual_lower_bound(graph)


def receive_sweep(graph: FactorGraph) -> None:
    """Pull triangle preferences onto every edge, making edge costs informative."""
    for edge in sorted(range(graph.edge_count), key=graph.edges.__getitem__):
        edge_receive(graph, edge)
