"""Primal rounding: greedy additive edge contraction followed by Kernighan-Lin with joins."""

from __future__ import annotations

import heapq
import logging
from collections import defaultdict

import numpy as np

from app.multicut.factors import FactorGraph
from app.multicut.instance import (
    DisjointSet,
    EdgeLabeling,
    MulticutInstance,
    Partition,
    components_of_uncut,
    labeling_cost,
    partition_to_labeling,
)
from app.multicut.message_passing import receive_sweep

logger = logging.getLogger(__name__)

KLJ_MAX_PASSES = 25
_GAIN_TOLERANCE = 1e-12


def _costs_of(instance: MulticutInstance, costs) -> np.ndarray:
    if costs is None:
        return instance.costs
    costs = np.asarray(costs, dtype=float)
    if costs.shape != (instance.edge_count,):
        raise ValueError(f"expected {instance.edge_count} costs, got shape {costs.shape}")
    return costs


def gaec(instance: MulticutInstance, costs=None) -> Partition:
    """Greedy additive edge contraction.

    Contracts the cluster pair with the largest positive joint weight until no
    pair has positive weight. Clusters are named by their smallest node, and
    equal weights are resolved by the smaller pair of names.
    """
    costs = _costs_of(instance, costs)
    adjacency: dict[int, dict[int, float]] = {node: {} for node in range(instance.node_count)}
    for (u, v), cost in zip(instance.edges, costs.tolist()):
        adjacency[u][v] = adjacency[u].get(v, 0.0) + cost
        adjacency[v][u] = adjacency[v].get(u, 0.0) + cost

    heap = [(-weight, u, v) for u in adjacency for v, weight in adjacency[u].items() if u < v and weight > 0]
    heapq.heapify(heap)
    clusters = DisjointSet(instance.node_count)
    contractions = 0
    while heap:
        negative_weight, a, b = heapq.heappop(heap)
        if b not in adjacency.get(a, {}) or adjacency[a][b] != -negative_weight:
            continue
        # a < b; b is merged into a.
        clusters.union(a, b)
        contractions += 1
        merged = adjacency.pop(b)
        del adjacency[a][b]
        for c, weight in merged.items():
            if c == a:
                continue
            del adjacency[c][b]
            joint = adjacency[a].get(c, 0.0) + weight
            adjacency[a][c] = joint
            adjacency[c][a] = joint
            if joint > 0:
                heapq.heappush(heap, (-joint, min(a, c), max(a, c)))
    logger.debug("gaec performed %d contractions", contractions)
    return Partition(np.array([clusters.find(node) for node in range(instance.node_count)], dtype=int))


class _KernighanLin:
    """Local search state: node labels, cluster members and weighted adjacency lists."""

    def __init__(self, instance: MulticutInstance, costs: np.ndarray, partition: Partition):
        self.edges = instance.edges
        self.adjacency: list[list[tuple[int, float]]] = [[] for _ in range(instance.node_count)]
        for (u, v), cost in zip(instance.edges, costs.tolist()):
            self.adjacency[u].append((v, cost))
            self.adjacency[v].append((u, cost))
        self.label = partition.component_id.astype(int).tolist()
        self.members: dict[int, set[int]] = defaultdict(set)
        for node, label in enumerate(self.label):
            self.members[label].add(node)
        self.members = dict(self.members)
        self.next_label = max(self.label, default=-1) + 1

    def move(self, node: int, label: int) -> None:
        old = self.label[node]
        if old == label:
            return
        cluster = self.members[old]
        cluster.discard(node)
        if not cluster:
            del self.members[old]
        self.members.setdefault(label, set()).add(node)
        self.label[node] = label

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        """Pairs of clusters joined by at least one edge, from one sweep over the edges."""
        pairs = set()
        for u, v in self.edges:
            a, b = self.label[u], self.label[v]
            if a != b:
                pairs.add((a, b) if a < b else (b, a))
        return sorted(pairs)

    def joint_weight(self, a: int, b: int) -> float:
        """Total cost of the edges between clusters ``a`` and ``b``."""
        smaller, other = sorted((a, b), key=lambda label: len(self.members.get(label, ())))
        return sum(
            cost
            for u in self.members.get(smaller, ())
            for v, cost in self.adjacency[u]
            if self.label[v] == other
        )

    def improve_pair(self, a: int, b: int) -> float:
        """Best of a gain-sequence exchange between clusters ``a`` and ``b`` and their join.

        ``b`` may be a fresh label, in which case nodes of ``a`` spawn a new cluster.
        Returns the applied cost decrease (0 if nothing improved).
        """
        nodes = sorted(self.members.get(a, set()) | self.members.get(b, set()))
        side = {node: self.label[node] for node in nodes}
        # gain[v]: cost decrease from moving v to the other cluster of the pair.
        gain = {}
        for node in nodes:
            own = other = 0.0
            for neighbor, cost in self.adjacency[node]:
                if neighbor not in side:
                    continue
                if side[neighbor] == side[node]:
                    own += cost
                else:
                    other += cost
            gain[node] = other - own

        # Largest gain first, smallest node on ties; outdated entries are skipped.
        queue = [(-gain[node], node) for node in nodes]
        heapq.heapify(queue)
        moved: list[int] = []
        unmoved = set(nodes)
        cumulative = best = 0.0
        best_length = 0
        while queue:
            negative_gain, node = heapq.heappop(queue)
            if node not in unmoved or -negative_gain != gain[node]:
                continue
            cumulative += gain[node]
            unmoved.discard(node)
            moved.append(node)
            old_side = side[node]
            side[node] = b if old_side == a else a
            for neighbor, cost in self.adjacency[node]:
                if neighbor in unmoved:
                    # node left neighbor's side or joined it.
                    gain[neighbor] += 2 * cost if side[neighbor] == old_side else -2 * cost
                    heapq.heappush(queue, (-gain[neighbor], neighbor))
            if cumulative > best + _GAIN_TOLERANCE:
                best, best_length = cumulative, len(moved)

        join_gain = self.joint_weight(a, b)
        if join_gain > best + _GAIN_TOLERANCE and join_gain > _GAIN_TOLERANCE:
            for node in list(self.members[b]):
                self.move(node, a)
            return join_gain
        if best_length == 0:
            return 0.0
        for node in moved[:best_length]:
            self.move(node, b if self.label[node] == a else a)
        return best

    def run(self, max_passes: int) -> None:
        for iteration in range(max_passes):
            improvement = 0.0
            for a, b in self.adjacent_pairs():
                if a in self.members and b in self.members:
                    improvement += self.improve_pair(a, b)
            for a in sorted(self.members):
                if a not in self.members:
                    continue
                spawned = self.next_label
                improvement += self.improve_pair(a, spawned)
                if spawned in self.members:
                    self.next_label += 1
            logger.debug("klj pass %d improved cost by %g", iteration, improvement)
            if improvement <= _GAIN_TOLERANCE:
                break


def klj(instance: MulticutInstance, partition: Partition, costs=None, max_passes: int = KLJ_MAX_PASSES) -> Partition:
    """Kernighan-Lin with joins: exchange, spawn and join moves until no pass improves the cost."""
    costs = _costs_of(instance, costs)
    search = _KernighanLin(instance, costs, partition)
    search.run(max_passes)
    # Split clusters that the moves left disconnected; the labeling is unchanged.
    labeling = partition_to_labeling(instance, Partition(np.array(search.label, dtype=int)))
    result = components_of_uncut(instance, labeling)
    before = float(costs[partition_to_labeling(instance, partition).labels == 1].sum())
    after = float(costs[labeling.labels == 1].sum())
    if after > before:
        return components_of_uncut(instance, partition_to_labeling(instance, partition))
    return result


def round_costs(instance: MulticutInstance, costs=None, max_passes: int = KLJ_MAX_PASSES) -> Partition:
    """GAEC followed by KLj on the given costs."""
    return klj(instance, gaec(instance, costs), costs, max_passes=max_passes)


def round_solution(graph: FactorGraph, max_passes: int = KLJ_MAX_PASSES) -> tuple[EdgeLabeling, float]:
    """Round on the original and on the reparameterized edge costs; keep the cheaper multicut.

    Runs a receive sweep first so that edge costs carry the triangle preferences.
    The returned cost is evaluated under the original costs of the input instance.
    """
    instance = graph.instance
    receive_sweep(graph)
    candidates = [round_costs(instance, max_passes=max_passes)]
    extended = graph.extended_instance()
    candidates.append(round_costs(extended, max_passes=max_passes))

    labelings = [partition_to_labeling(instance, partition) for partition in candidates]
    costs = [labeling_cost(instance, labeling) for labeling in labelings]
    logger.debug("rounding costs: original %.6g, reparameterized %.6g", *costs)
    best = int(np.argmin(costs))
    return labelings[best], costs[best]
