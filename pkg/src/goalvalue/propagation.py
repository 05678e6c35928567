"""Impact propagation over the goal model's influence graph.

Value flows from ends to means: an element derives impact from the elements
it contributes to, refines, or is depended upon for. The total impact is the
unique fixed point of a damped averaging map, computed by synchronous
iteration; per-source impulse responses are obtained by running the same
iteration with the base restricted to one prioritized element at a time (all
impulse columns are iterated together, which is the identical update rule).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .fuzzy import TFN
from .model import ContributionLabel, GoalModel, LinkType, validate

#: Influence weight per contribution label.
CONTRIBUTION_WEIGHTS = {
    ContributionLabel.MAKE: 1.0,
    ContributionLabel.HELP: 0.5,
    ContributionLabel.HURT: -0.5,
    ContributionLabel.BREAK: -1.0,
}

REFINEMENT_WEIGHT = 1.0
DEPENDENCY_WEIGHT = 1.0


class InvalidModelError(ValueError):
    """The model has validation errors and cannot be propagated."""

    def __init__(self, report):
        self.report = report
        codes = ", ".join(f"{i.code}({i.subject_id})" for i in report.errors)
        super().__init__(f"model has validation errors: {codes}")


class NonConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class PropagationConfig:
    lambda_: float = 0.9
    epsilon: float = 1e-9
    max_iterations: int = 10000

    def __post_init__(self) -> None:
        if not (0.0 < self.lambda_ < 1.0):
            raise ValueError(f"lambda must be in (0, 1), got {self.lambda_}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iterations < 1:
            raise ValueError("maxIterations must be at least 1")

    def to_json(self) -> dict:
        return {
            "lambda": self.lambda_,
            "epsilon": self.epsilon,
            "maxIterations": self.max_iterations,
        }


@dataclass(frozen=True)
class InfluenceGraph:
    """Directed influence edges (from, to, weight); impact at `to` gathers
    the damped average of its incoming `from` values."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]
    in_degree: dict[str, int] = field(default_factory=dict)


def build_influence_graph(model: GoalModel) -> InfluenceGraph:
    """Derive the influence graph; requires a model free of validation errors."""
    report = validate(model)
    if not report.ok:
        raise InvalidModelError(report)

    nodes = tuple(sorted(set(model.all_elements()) | model.dependum_ids()))
    edges: list[tuple[str, str, float]] = []
    for link in model.links:
        if link.link_type is LinkType.CONTRIBUTION:
            weight = CONTRIBUTION_WEIGHTS[link.label]
            edges.append((link.target_id, link.source_id, weight))
        elif link.link_type in (LinkType.AND_REFINEMENT, LinkType.OR_REFINEMENT):
            edges.append((link.target_id, link.source_id, REFINEMENT_WEIGHT))
        else:  # dependency: depender => dependum => dependee
            edges.append((link.source_id, link.dependum_id, DEPENDENCY_WEIGHT))
            edges.append((link.dependum_id, link.target_id, DEPENDENCY_WEIGHT))

    in_degree: dict[str, int] = {node: 0 for node in nodes}
    for _, dst, _ in edges:
        in_degree[dst] += 1
    return InfluenceGraph(nodes=nodes, edges=tuple(edges), in_degree=in_degree)


def _tfn_from_components(components: np.ndarray) -> TFN:
    l, m, u = (float(c) for c in components)
    # Guard against last-bit rounding inversions from the vectorized updates.
    if l > m or m > u:
        if l - min(l, m, u) > 1e-9 or max(l, m, u) - u > 1e-9:
            raise AssertionError(f"propagation produced an unordered TFN ({l}, {m}, {u})")
        l, m, u = sorted((l, m, u))
    return TFN(l, m, u)


class PropagationResult:
    """Total fuzzy impact per node, plus the per-source impulse decomposition."""

    def __init__(
        self,
        nodes: tuple[str, ...],
        sources: tuple[str, ...],
        totals: np.ndarray,
        impulses: np.ndarray,
        base: dict[str, TFN],
        iterations: int,
    ):
        self._nodes = nodes
        self._index = {node: i for i, node in enumerate(nodes)}
        self._sources = sources
        self._source_index = {s: i for i, s in enumerate(sources)}
        self._totals = totals  # shape (3n,)
        self._impulses = impulses  # shape (3n, S)
        self.base = base
        self.iterations = iterations

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def sources(self) -> tuple[str, ...]:
        return self._sources

    def total_of(self, node: str) -> TFN:
        i = self._index[node]
        return _tfn_from_components(self._totals[3 * i : 3 * i + 3])

    @property
    def total(self) -> dict[str, TFN]:
        return {node: self.total_of(node) for node in self._nodes}

    def per_source(self, source: str, node: str) -> TFN:
        i = self._index[node]
        j = self._source_index[source]
        return _tfn_from_components(self._impulses[3 * i : 3 * i + 3, j])

    def impulses_at(self, node: str) -> dict[str, TFN]:
        """Nonzero impulse responses reaching `node`, keyed by source."""
        i = self._index[node]
        block = self._impulses[3 * i : 3 * i + 3, :]
        out = {}
        for j, source in enumerate(self._sources):
            if np.any(block[:, j] != 0.0):
                out[source] = _tfn_from_components(block[:, j])
        return out

    def node_rows(self, node: str) -> slice:
        i = self._index[node]
        return slice(3 * i, 3 * i + 3)

    def raw_impulses(self) -> np.ndarray:
        return self._impulses


def _update_matrix(graph: InfluenceGraph, lambda_: float) -> sparse.csr_matrix:
    index = {node: i for i, node in enumerate(graph.nodes)}
    n = len(graph.nodes)
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for src, dst, weight in graph.edges:
        coef = lambda_ * weight / max(1, graph.in_degree[dst])
        i, j = index[dst], index[src]
        if weight >= 0:
            for c in range(3):
                rows.append(3 * i + c)
                cols.append(3 * j + c)
                vals.append(coef)
        else:
            # negative weight swaps lower and upper bounds
            for c_dst, c_src in ((0, 2), (1, 1), (2, 0)):
                rows.append(3 * i + c_dst)
                cols.append(3 * j + c_src)
                vals.append(coef)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(3 * n, 3 * n))


def propagate(
    graph: InfluenceGraph,
    base: dict[str, TFN],
    config: PropagationConfig | None = None,
) -> PropagationResult:
    """Iterate the damped fixed point from zero until the largest
    componentwise change falls below epsilon.

    Column 0 carries the full base; one extra column per prioritized source
    carries its impulse. Iterating them together keeps superposition exact.
    """
    config = config or PropagationConfig()
    index = {node: i for i, node in enumerate(graph.nodes)}
    for node in base:
        if node not in index:
            raise KeyError(f"base references unknown node {node!r}")
    sources = tuple(sorted(base))
    n = len(graph.nodes)

    b = np.zeros((3 * n, 1 + len(sources)))
    for j, source in enumerate(sources):
        tfn = base[source]
        i = index[source]
        b[3 * i : 3 * i + 3, 1 + j] = tfn.as_tuple()
    b[:, 0] = b[:, 1:].sum(axis=1)

    matrix = _update_matrix(graph, config.lambda_)
    x = np.zeros_like(b)
    iterations = 0
    for _ in range(config.max_iterations):
        x_new = b + matrix @ x
        iterations += 1
        delta = np.abs(x_new - x).max() if x.size else 0.0
        x = x_new
        if delta < config.epsilon:
            break
    else:
        raise NonConvergenceError(
            f"propagation did not converge within {config.max_iterations} iterations"
        )

    return PropagationResult(
        nodes=graph.nodes,
        sources=sources,
        totals=x[:, 0],
        impulses=x[:, 1:],
        base=dict(base),
        iterations=iterations,
    )


def split_all(
    result: PropagationResult, model: GoalModel
) -> dict[str, tuple[TFN, TFN]]:
    """Same-actor / other-actor impact split for every actor-owned element.

    The element's own base is excluded from both sides; feedback of its own
    impulse through cycles counts as same-actor impact (the origin is the
    element itself). Sources owned by the synthetic unowned actor count as
    other-actor for everyone.
    """
    from .model import UNOWNED_ACTOR_ID

    owner = model.owner_of()
    impulses = result.raw_impulses()
    source_owner = [owner.get(s) for s in result.sources]

    out: dict[str, tuple[TFN, TFN]] = {}
    for eid in model.owned_elements():
        rows = result.node_rows(eid)
        block = impulses[rows, :]
        total = block.sum(axis=1)
        own = owner[eid]
        if own == UNOWNED_ACTOR_ID:
            same_mask = np.array([s == eid for s in result.sources], dtype=bool)
        else:
            same_mask = np.array([o == own for o in source_owner], dtype=bool)
        same = block[:, same_mask].sum(axis=1)
        base = np.array(result.base[eid].as_tuple()) if eid in result.base else np.zeros(3)
        same = same - base
        other = total - same - base
        out[eid] = (_tfn_from_components(same), _tfn_from_components(other))
    return out


def split_by_actor(
    result: PropagationResult, model: GoalModel, element: str
) -> tuple[TFN, TFN]:
    """Split one element's incoming impact into same-actor and other-actor
    parts; base(element) + same + other equals the total impact."""
    if element in model.dependum_ids():
        raise ValueError(f"{element!r} is a dependum; dependums have no actor split")
    if element not in model.owned_elements():
        raise KeyError(f"unknown or unowned element {element!r}")
    return split_all(result, model)[element]
