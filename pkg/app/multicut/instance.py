"""Multicut instances, edge labelings, node partitions and the disjoint-set forest."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from app.multicut.exceptions import InstanceFormatError, LabelingError

HEADER_KEYWORD = "MULTICUT"


class DisjointSet:
    """Union-find over the integers ``0..size-1`` with union by rank and path compression."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def __len__(self) -> int:
        return len(self.parent)

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        # Compress path.
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; returns False if they were already joined."""
        root_a = self.find(a)
        root_b = self.find(b)
        if root_a == root_b:
            return False
        if self.rank[root_a] < self.rank[root_b]:
            root_a, root_b = root_b, root_a
        self.parent[root_b] = root_a
        if self.rank[root_a] == self.rank[root_b]:
            self.rank[root_a] += 1
        return True

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


@dataclass(frozen=True, eq=False)
class MulticutInstance:
    """Undirected graph with one real cost per edge for cutting it.

    Edges are stored canonically (``u < v``) and without duplicates. Use
    :meth:`from_edges` to build an instance from raw input.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    costs: np.ndarray
    edge_index: dict[tuple[int, int], int] = field(init=False, repr=False)

    def __post_init__(self):
        costs = np.array(self.costs, dtype=float)
        if costs.shape != (len(self.edges),):
            raise InstanceFormatError(
                f"expected {len(self.edges)} costs, got shape {costs.shape}"
            )
        costs.setflags(write=False)
        object.__setattr__(self, "costs", costs)
        index = {}
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < v < self.node_count):
                raise InstanceFormatError(f"edge ({u}, {v}) is not canonical for {self.node_count} nodes")
            if (u, v) in index:
                raise InstanceFormatError(f"duplicate edge ({u}, {v})")
            index[(u, v)] = i
        object.__setattr__(self, "edge_index", index)

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int, float]]) -> "MulticutInstance":
        """Canonicalize ``(u, v, cost)`` triples; parallel edges are merged by summing costs."""
        if node_count < 0:
            raise InstanceFormatError("node count must be nonnegative")
        index: dict[tuple[int, int], int] = {}
        canonical: list[tuple[int, int]] = []
        costs: list[float] = []
        for u, v, cost in edges:
            u, v, cost = int(u), int(v), float(cost)
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise InstanceFormatError(f"node index out of range in edge ({u}, {v})")
            if u == v:
                raise InstanceFormatError(f"self-loop at node {u}")
            if not math.isfinite(cost):
                raise InstanceFormatError(f"non-finite cost on edge ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in index:
                costs[index[key]] += cost
            else:
                index[key] = len(canonical)
                canonical.append(key)
                costs.append(cost)
        return cls(node_count=node_count, edges=tuple(canonical), costs=np.array(costs, dtype=float))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint arrays ``(us, vs)`` aligned with the edge indices."""
        if not self.edges:
            empty = np.zeros(0, dtype=int)
            return empty, empty
        pairs = np.array(self.edges, dtype=int)
        return pairs[:, 0], pairs[:, 1]

    def with_costs(self, costs: Sequence[float] | np.ndarray) -> "MulticutInstance":
        return MulticutInstance(node_count=self.node_count, edges=self.edges, costs=np.asarray(costs, dtype=float))


@dataclass(frozen=True, eq=False)
class EdgeLabeling:
    """01-vector over the edges of an instance (1 = cut)."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1:
            raise LabelingError("labeling must be one-dimensional")
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise LabelingError("labels must be 0 or 1")
        labels = labels.astype(np.uint8)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeLabeling):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __hash__(self) -> int:
        return hash(self.labels.tobytes())

    @property
    def cut_count(self) -> int:
        return int(self.labels.sum())


@dataclass(frozen=True, eq=False)
class Partition:
    """Node-indexed component ids, contiguous ``0..k-1`` in order of first appearance."""

    component_id: np.ndarray

    def __post_init__(self):
        ids = np.asarray(self.component_id, dtype=int)
        relabeled = np.empty_like(ids)
        mapping: dict[int, int] = {}
        for node, cid in enumerate(ids.tolist()):
            relabeled[node] = mapping.setdefault(cid, len(mapping))
        relabeled.setflags(write=False)
        object.__setattr__(self, "component_id", relabeled)

    def __len__(self) -> int:
        return len(self.component_id)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.component_id, other.component_id)

    def __hash__(self) -> int:
        return hash(self.component_id.tobytes())

    @property
    def component_count(self) -> int:
        return int(self.component_id.max()) + 1 if len(self.component_id) else 0

    def clusters(self) -> list[list[int]]:
        groups: list[list[int]] = [[] for _ in range(self.component_count)]
        for node, cid in enumerate(self.component_id.tolist()):
            groups[cid].append(node)
        return groups

    @classmethod
    def from_clusters(cls, node_count: int, clusters: Iterable[Iterable[int]]) -> "Partition":
        ids = np.full(node_count, -1, dtype=int)
        for cid, cluster in enumerate(clusters):
            for node in cluster:
                ids[node] = cid
        if (ids < 0).any():
            raise LabelingError("clusters do not cover every node")
        return cls(ids)

    @classmethod
    def singletons(cls, node_count: int) -> "Partition":
        return cls(np.arange(node_count))

    @classmethod
    def single_cluster(cls, node_count: int) -> "Partition":
        return cls(np.zeros(node_count, dtype=int))


def _as_labels(instance: MulticutInstance, labeling: EdgeLabeling | Sequence[int] | np.ndarray) -> np.ndarray:
    if not isinstance(labeling, EdgeLabeling):
        labeling = EdgeLabeling(np.asarray(labeling))
    if len(labeling) != instance.edge_count:
        raise LabelingError(
            f"labeling has {len(labeling)} entries, instance has {instance.edge_count} edges"
        )
    return labeling.labels


def parse_instance(stream: IO[str] | Iterable[str]) -> MulticutInstance:
    """Read the ``MULTICUT <n> <m>`` text format; ``#`` lines are comments."""
    header: tuple[int, int] | None = None
    raw_edges: list[tuple[int, int, float]] = []
    for line_number, line in enumerate(stream, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        tokens = text.split()
        if header is None:
            if len(tokens) != 3 or tokens[0] != HEADER_KEYWORD:
                raise InstanceFormatError(f"expected '{HEADER_KEYWORD} <n> <m>', got {text!r}", line_number)
            try:
                header = (int(tokens[1]), int(tokens[2]))
            except ValueError:
                raise InstanceFormatError(f"malformed header {text!r}", line_number) from None
            if header[0] < 0 or header[1] < 0:
                raise InstanceFormatError("negative node or edge count in header", line_number)
            continue
        if len(tokens) != 3:
            raise InstanceFormatError(f"expected '<u> <v> <cost>', got {text!r}", line_number)
        try:
            u, v, cost = int(tokens[0]), int(tokens[1]), float(tokens[2])
        except ValueError:
            raise InstanceFormatError(f"malformed edge line {text!r}", line_number) from None
        if not (0 <= u < header[0] and 0 <= v < header[0]):
            raise InstanceFormatError(f"node index out of range in edge ({u}, {v})", line_number)
        if u == v:
            raise InstanceFormatError(f"self-loop at node {u}", line_number)
        if not math.isfinite(cost):
            raise InstanceFormatError(f"non-finite cost {tokens[2]!r}", line_number)
        raw_edges.append((u, v, cost))
    if header is None:
        raise InstanceFormatError("missing header")
    if len(raw_edges) != header[1]:
        raise InstanceFormatError(f"header announces {header[1]} edges, found {len(raw_edges)}")
    return MulticutInstance.from_edges(header[0], raw_edges)


def load_instance(path: str | Path) -> MulticutInstance:
    with open(path, encoding="utf-8") as stream:
        return parse_instance(stream)


def labeling_cost(instance: MulticutInstance, labeling: EdgeLabeling | Sequence[int] | np.ndarray) -> float:
    """Sum of the costs of the edges labeled 1."""
    labels = _as_labels(instance, labeling)
    return float(instance.costs[labels == 1].sum())


def trivial_lower_bound(instance: MulticutInstance) -> float:
    """``sum(min(0, cost))`` over all edges, the bound without any cycle constraints."""
    return float(np.minimum(instance.costs, 0.0).sum())


def components_of_uncut(instance: MulticutInstance, labeling: EdgeLabeling | Sequence[int] | np.ndarray) -> Partition:
    """Connected components of the subgraph formed by the edges labeled 0."""
    labels = _as_labels(instance, labeling)
    components = DisjointSet(instance.node_count)
    for (u, v), label in zip(instance.edges, labels.tolist()):
        if label == 0:
            components.union(u, v)
    return Partition(np.array([components.find(node) for node in range(instance.node_count)], dtype=int))


def partition_to_labeling(instance: MulticutInstance, partition: Partition) -> EdgeLabeling:
    """Label 1 exactly the edges whose endpoints lie in distinct components."""
    if len(partition) != instance.node_count:
        raise LabelingError(f"partition covers {len(partition)} nodes, instance has {instance.node_count}")
    us, vs = instance.endpoints
    ids = partition.component_id
    return EdgeLabeling((ids[us] != ids[vs]).astype(np.uint8))


def is_multicut(instance: MulticutInstance, labeling: EdgeLabeling | Sequence[int] | np.ndarray) -> bool:
    labels = _as_labels(instance, labeling)
    induced = partition_to_labeling(instance, components_of_uncut(instance, labels))
    return bool(np.array_equal(labels, induced.labels))
