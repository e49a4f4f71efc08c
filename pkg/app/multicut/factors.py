"""Edge, triangle and lollipop subproblems of the multicut decomposition.

The coupling matrices between subproblems are never stored. A coupling is
the set of edges two factors share, and a message is indexed by the joint
assignment of those shared edges.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from app.multicut.exceptions import FactorError, LabelingError
from app.multicut.instance import MulticutInstance, Partition

logger = logging.getLogger(__name__)

# Coordinates are (x_uv, x_uw, x_vw) for a triangle with u < v < w.
TRIANGLE_STATES = np.array(
    [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)],
    dtype=np.uint8,
)
TRIANGLE_STATES.setflags(write=False)

# Triangle state times spoke label; columns are the three triangle edges then the spoke.
LOLLIPOP_STATES = np.array(
    [(*state, spoke) for state in TRIANGLE_STATES.tolist() for spoke in (0, 1)],
    dtype=np.uint8,
)
LOLLIPOP_STATES.setflags(write=False)

# 3-bit code x_uv*4 + x_uw*2 + x_vw -> triangle state index, -1 for infeasible patterns.
_TRIANGLE_CODE_TO_STATE = np.full(8, -1, dtype=int)
for _index, (_a, _b, _c) in enumerate(TRIANGLE_STATES.tolist()):
    _TRIANGLE_CODE_TO_STATE[_a * 4 + _b * 2 + _c] = _index


def triangle_states() -> list[tuple[int, int, int]]:
    """The five feasible labelings of a triangle in canonical order."""
    return [tuple(state) for state in TRIANGLE_STATES.tolist()]


def triangle_state_index(x_uv: int, x_uw: int, x_vw: int) -> int:
    """Index of a labeling in :func:`triangle_states`, or -1 if it is not a multicut."""
    return int(_TRIANGLE_CODE_TO_STATE[x_uv * 4 + x_uw * 2 + x_vw])


@dataclass
class Coupling:
    """Link between a triangle and a lollipop over their shared edges.

    ``triangle_keys[s]`` and ``lollipop_keys[s]`` give, for every state of the
    respective factor, the index of its shared-edge assignment in ``0..key_count-1``.
    """

    triangle: int
    lollipop: int
    shared_edges: tuple[int, ...]
    triangle_keys: np.ndarray
    lollipop_keys: np.ndarray
    key_count: int


@dataclass
class TriangleFactor:
    nodes: tuple[int, int, int]
    edges: tuple[int, int, int]
    costs: np.ndarray = field(default_factory=lambda: np.zeros(len(TRIANGLE_STATES)))
    coupled_lollipops: list[Coupling] = field(default_factory=list)

    states = TRIANGLE_STATES


@dataclass
class LollipopFactor:
    """Triangle ``tri_nodes`` plus the pendant spoke ``(center, spoke_target)``."""

    center: int
    tri_nodes: tuple[int, int, int]
    spoke_target: int
    edges: tuple[int, int, int, int]
    costs: np.ndarray = field(default_factory=lambda: np.zeros(len(LOLLIPOP_STATES)))
    coupled_triangles: list[Coupling] = field(default_factory=list)

    states = LOLLIPOP_STATES

    @property
    def spoke_edge(self) -> int:
        return self.edges[3]


def _edge_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class FactorGraph:
    """Mutable solver state: the decomposition and its current reparameterized costs.

    Edges of the instance keep their indices; chords inserted for
    triangulations are appended with cost zero. ``original_costs`` keeps the
    input costs (zero for chords) separately from the working ``edge_costs``.
    """

    def __init__(self, instance: MulticutInstance):
        self.instance = instance
        self.edges: list[tuple[int, int]] = list(instance.edges)
        self.edge_index: dict[tuple[int, int], int] = dict(instance.edge_index)
        self.original_costs: list[float] = instance.costs.tolist()
        self.edge_costs: list[float] = instance.costs.tolist()
        # Per edge: (triangle id, column of the edge in that triangle).
        self.edge_triangles: list[list[tuple[int, int]]] = [[] for _ in self.edges]
        self.edge_lollipops: list[list[int]] = [[] for _ in self.edges]
        self.node_triangles: list[list[int]] = [[] for _ in range(instance.node_count)]
        self.triangles: list[TriangleFactor] = []
        self.triangle_index: dict[tuple[int, int, int], int] = {}
        self.lollipops: list[LollipopFactor] = []
        self.lollipop_index: dict[tuple[tuple[int, int, int], int, int], int] = {}

    @property
    def node_count(self) -> int:
        return self.instance.node_count

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def chord_count(self) -> int:
        return len(self.edges) - self.instance.edge_count

    def counts(self) -> dict[str, int]:
        return {
            "edges": self.edge_count,
            "triangles": len(self.triangles),
            "lollipops": len(self.lollipops),
        }

    def ensure_edge(self, a: int, b: int) -> int:
        """Index of edge ``ab``, appending a zero-cost chord if it is missing."""
        key = _edge_key(a, b)
        index = self.edge_index.get(key)
        if index is None:
            index = len(self.edges)
            self.edges.append(key)
            self.edge_index[key] = index
            self.original_costs.append(0.0)
            self.edge_costs.append(0.0)
            self.edge_triangles.append([])
            self.edge_lollipops.append([])
            logger.debug("inserted chord %s as edge %d", key, index)
        return index

    def extended_instance(self, costs: list[float] | np.ndarray | None = None) -> MulticutInstance:
        """The instance over all edges including chords, with the given (default: current) costs."""
        return MulticutInstance(
            node_count=self.node_count,
            edges=tuple(self.edges),
            costs=np.array(self.edge_costs if costs is None else costs, dtype=float),
        )


def _make_coupling(graph: FactorGraph, triangle_id: int, lollipop_id: int) -> Coupling | None:
    triangle = graph.triangles[triangle_id]
    lollipop = graph.lollipops[lollipop_id]
    shared = tuple(sorted(set(triangle.edges) & set(lollipop.edges)))
    if not shared:
        return None
    triangle_columns = [triangle.edges.index(e) for e in shared]
    lollipop_columns = [lollipop.edges.index(e) for e in shared]
    weights = 1 << np.arange(len(shared))
    triangle_codes = TRIANGLE_STATES[:, triangle_columns].astype(int) @ weights
    lollipop_codes = LOLLIPOP_STATES[:, lollipop_columns].astype(int) @ weights
    codes = np.union1d(triangle_codes, lollipop_codes)
    if not (np.array_equal(codes, np.unique(triangle_codes)) and np.array_equal(codes, np.unique(lollipop_codes))):
        raise FactorError(f"factors {triangle.nodes} and {lollipop.tri_nodes} realize different shared assignments")
    return Coupling(
        triangle=triangle_id,
        lollipop=lollipop_id,
        shared_edges=shared,
        triangle_keys=np.searchsorted(codes, triangle_codes),
        lollipop_keys=np.searchsorted(codes, lollipop_codes),
        key_count=len(codes),
    )


def _couple(graph: FactorGraph, triangle_id: int, lollipop_id: int) -> None:
    coupling = _make_coupling(graph, triangle_id, lollipop_id)
    if coupling is not None:
        graph.triangles[triangle_id].coupled_lollipops.append(coupling)
        graph.lollipops[lollipop_id].coupled_triangles.append(coupling)


def attach_triangle(graph: FactorGraph, u: int, v: int, w: int) -> int:
    """Add a zero-cost triangle subproblem over ``{u, v, w}`` and return its id.

    Missing edges are inserted as zero-cost chords. Attaching an existing
    triangle returns its id without changes.
    """
    nodes = tuple(sorted((u, v, w)))
    if len(set(nodes)) != 3:
        raise FactorError(f"triangle nodes must be distinct, got {(u, v, w)}")
    if nodes[0] < 0 or nodes[2] >= graph.node_count:
        raise FactorError(f"triangle {nodes} out of range for {graph.node_count} nodes")
    existing = graph.triangle_index.get(nodes)
    if existing is not None:
        return existing
    a, b, c = nodes
    edges = (graph.ensure_edge(a, b), graph.ensure_edge(a, c), graph.ensure_edge(b, c))
    triangle_id = len(graph.triangles)
    graph.triangles.append(TriangleFactor(nodes=nodes, edges=edges))
    graph.triangle_index[nodes] = triangle_id
    for column, edge in enumerate(edges):
        graph.edge_triangles[edge].append((triangle_id, column))
    for node in nodes:
        graph.node_triangles[node].append(triangle_id)
    # Lollipops attached earlier that overlap this triangle.
    for lollipop_id in sorted({lollipop for edge in edges for lollipop in graph.edge_lollipops[edge]}):
        _couple(graph, triangle_id, lollipop_id)
    return triangle_id


def attach_lollipop(graph: FactorGraph, u: int, a: int, b: int, s: int) -> int:
    """Add the lollipop made of triangle ``u a b`` and the spoke ``u s``."""
    if len({u, a, b, s}) != 4:
        raise FactorError(f"degenerate lollipop: triangle {(u, a, b)} with spoke target {s}")
    if s < 0 or s >= graph.node_count:
        raise FactorError(f"spoke target {s} out of range")
    tri_nodes = tuple(sorted((u, a, b)))
    key = (tri_nodes, u, s)
    existing = graph.lollipop_index.get(key)
    if existing is not None:
        return existing
    triangle_id = attach_triangle(graph, u, a, b)
    spoke = graph.ensure_edge(u, s)
    edges = (*graph.triangles[triangle_id].edges, spoke)
    lollipop_id = len(graph.lollipops)
    graph.lollipops.append(LollipopFactor(center=u, tri_nodes=tri_nodes, spoke_target=s, edges=edges))
    graph.lollipop_index[key] = lollipop_id
    for edge in edges:
        graph.edge_lollipops[edge].append(lollipop_id)
    overlapping = sorted({t for edge in edges for t, _ in graph.edge_triangles[edge]})
    for t in overlapping:
        _couple(graph, t, lollipop_id)
    return lollipop_id


def marginal_min(factor: TriangleFactor | LollipopFactor, fixed: Mapping[int, int]) -> float:
    """Minimum cost over the factor states agreeing with ``fixed`` (edge index -> 0/1).

    Returns ``inf`` when no state agrees.
    """
    mask = np.ones(len(factor.states), dtype=bool)
    for edge, value in fixed.items():
        try:
            column = factor.edges.index(edge)
        except ValueError:
            raise FactorError(f"edge {edge} is not a variable of factor over edges {factor.edges}") from None
        mask &= factor.states[:, column] == value
    if not mask.any():
        return float("inf")
    return float(factor.costs[mask].min())


def dual_lower_bound(graph: FactorGraph) -> float:
    """Sum over all subproblems of their minimal cost."""
    bound = float(np.minimum(np.asarray(graph.edge_costs), 0.0).sum()) if graph.edge_costs else 0.0
    bound += sum(float(t.costs.min()) for t in graph.triangles)
    bound += sum(float(l.costs.min()) for l in graph.lollipops)
    return bound


def table_magnitude(graph: FactorGraph) -> float:
    """Largest absolute cost entry over all subproblems."""
    magnitude = max((abs(c) for c in graph.edge_costs), default=0.0)
    for factor in (*graph.triangles, *graph.lollipops):
        magnitude = max(magnitude, float(np.abs(factor.costs).max()))
    return magnitude


def extend_labeling(graph: FactorGraph, partition: Partition) -> np.ndarray:
    """Labels over all edges of the graph (chords included) induced by a partition."""
    if len(partition) != graph.node_count:
        raise LabelingError(f"partition covers {len(partition)} nodes, graph has {graph.node_count}")
    ids = partition.component_id
    return np.array([int(ids[u] != ids[v]) for u, v in graph.edges], dtype=np.uint8)


def reparameterized_cost(graph: FactorGraph, partition: Partition) -> float:
    """Total cost of a feasible multicut summed over all subproblems."""
    labels = extend_labeling(graph, partition)
    total = float(np.dot(np.asarray(graph.edge_costs), labels)) if graph.edges else 0.0
    for triangle in graph.triangles:
        x = labels[list(triangle.edges)]
        total += float(triangle.costs[triangle_state_index(*x.tolist())])
    for lollipop in graph.lollipops:
        x = labels[list(lollipop.edges)].tolist()
        total += float(lollipop.costs[triangle_state_index(*x[:3]) * 2 + x[3]])
    return total
