"""Exhaustive reference routines for small instances.

Used to derive expected values in tests and by the ``oracle`` CLI command;
the solve path never calls into this module.
"""

from __future__ import annotations

import logging
from typing import Iterator, Sequence

import networkx as nx
import numpy as np

from app.multicut.exceptions import LabelingError, OracleLimitError
from app.multicut.instance import MulticutInstance, Partition
from app.multicut.separation import canonical_cycle

logger = logging.getLogger(__name__)

MAX_ORACLE_NODES = 12
MAX_CYCLE_NODES = 8
_CHUNK = 4096
_TOLERANCE = 1e-12


def bell_number(n: int) -> int:
    """Number of set partitions of an ``n``-element set (Bell triangle)."""
    row = [1]
    for _ in range(n):
        next_row = [row[-1]]
        for value in row:
            next_row.append(next_row[-1] + value)
        row = next_row
    return row[0]


class PartitionEnumerator:
    """Iterates all set partitions of ``{0..n-1}`` as restricted growth strings.

    Each yielded tuple ``a`` satisfies ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``,
    which visits every partition exactly once.
    """

    def __init__(self, node_count: int):
        if node_count < 0:
            raise ValueError("node count must be nonnegative")
        self.node_count = node_count

    def __len__(self) -> int:
        return bell_number(self.node_count)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        n = self.node_count
        if n == 0:
            yield ()
            return
        growth = [0] * n
        # prefix_max[i] = max(growth[:i + 1])
        prefix_max = [0] * n
        while True:
            yield tuple(growth)
            i = n - 1
            while i > 0 and growth[i] > prefix_max[i - 1]:
                i -= 1
            if i == 0:
                return
            growth[i] += 1
            prefix_max[i] = max(prefix_max[i - 1], growth[i])
            for j in range(i + 1, n):
                growth[j] = 0
                prefix_max[j] = prefix_max[i]


def exact_optimum(instance: MulticutInstance) -> tuple[float, Partition]:
    """Minimum multicut cost by enumerating all partitions; first optimum in enumeration order wins."""
    if instance.node_count > MAX_ORACLE_NODES:
        raise OracleLimitError(f"exact_optimum supports at most {MAX_ORACLE_NODES} nodes, got {instance.node_count}")
    us, vs = instance.endpoints
    best_cost, best_growth = np.inf, None
    chunk: list[tuple[int, ...]] = []

    def flush():
        nonlocal best_cost, best_growth
        labels = np.array(chunk, dtype=np.int8).reshape(len(chunk), instance.node_count)
        costs = (labels[:, us] != labels[:, vs]).astype(float) @ instance.costs
        index = int(np.argmin(costs))
        if costs[index] < best_cost:
            best_cost, best_growth = float(costs[index]), chunk[index]
        chunk.clear()

    for growth in PartitionEnumerator(instance.node_count):
        chunk.append(growth)
        if len(chunk) == _CHUNK:
            flush()
    if chunk:
        flush()
    return best_cost, Partition(np.array(best_growth, dtype=int))


def _simple_cycles(instance: MulticutInstance) -> list[list[int]]:
    if instance.node_count > MAX_CYCLE_NODES:
        raise OracleLimitError(f"cycle enumeration supports at most {MAX_CYCLE_NODES} nodes, got {instance.node_count}")
    graph = nx.Graph()
    graph.add_nodes_from(range(instance.node_count))
    graph.add_edges_from(instance.edges)
    cycles = {canonical_cycle(cycle) for cycle in nx.simple_cycles(graph) if len(cycle) >= 3}
    return [list(cycle) for cycle in sorted(cycles)]


def _cycle_edges(instance: MulticutInstance, cycle: Sequence[int]) -> list[int]:
    closed = list(cycle) + [cycle[0]]
    return [instance.edge_index[(min(a, b), max(a, b))] for a, b in zip(closed, closed[1:])]


def all_qualifying_cycles(instance: MulticutInstance, costs: Sequence[float] | np.ndarray, epsilon: float) -> list[tuple[int, ...]]:
    """Canonical simple cycles with exactly one edge <= -epsilon and all others >= epsilon."""
    costs = np.asarray(costs, dtype=float)
    qualifying = []
    for cycle in _simple_cycles(instance):
        values = costs[_cycle_edges(instance, cycle)]
        repulsive = values <= -epsilon
        if repulsive.sum() == 1 and (values[~repulsive] >= epsilon).all():
            qualifying.append(tuple(cycle))
    return qualifying


def _check_point(instance: MulticutInstance, x: Sequence[float] | np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (instance.edge_count,):
        raise LabelingError(f"point has shape {x.shape}, instance has {instance.edge_count} edges")
    if ((x < 0) | (x > 1)).any():
        raise LabelingError("point components must lie in [0, 1]")
    return x


def check_cycle_point(instance: MulticutInstance, x: Sequence[float] | np.ndarray) -> bool:
    """True iff ``x`` satisfies every cycle inequality of the instance."""
    x = _check_point(instance, x)
    for cycle in _simple_cycles(instance):
        values = x[_cycle_edges(instance, cycle)]
        if (values > values.sum() - values + _TOLERANCE).any():
            return False
    return True


def check_odd_wheel_point(instance: MulticutInstance, x: Sequence[float] | np.ndarray, center: int, rim: Sequence[int]) -> bool:
    """True iff ``x`` satisfies the odd-wheel inequality of wheel ``(center; rim)``.

    The inequality reads ``sum(rim edges) - sum(spokes) <= floor(k / 2)``.
    """
    x = _check_point(instance, x)
    k = len(rim)
    if k < 3 or k % 2 == 0:
        raise ValueError(f"odd wheel rim must have an odd length >= 3, got {k}")
    rim_total = x[_cycle_edges(instance, rim)].sum()
    spoke_total = sum(x[instance.edge_index[(min(center, v), max(center, v))]] for v in rim)
    return bool(rim_total - spoke_total <= k // 2 + _TOLERANCE)
