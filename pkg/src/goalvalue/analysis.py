"""Fuzzy-TOPSIS value analysis: decision matrices, closeness coefficients,
local/global values on [-100, 100], ranking, and provenance."""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .fuzzy import (
    IMPORTANCE_SCALE,
    Level,
    TFN,
    defuzzify,
    fuzzify,
    tfn_mul,
)
from .model import GoalModel, Prioritization, UNOWNED_ACTOR_ID, validate
from .propagation import (
    InvalidModelError,
    PropagationConfig,
    PropagationResult,
    build_influence_graph,
    propagate,
    split_all,
)

DEGENERATE_MATRIX_WARNING = (
    "all criteria are zero; every closeness coefficient defaults to 0.5"
)


class MissingPrioritiesError(ValueError):
    """Analysis requires every actor-owned element to be prioritized."""

    def __init__(self, missing: list[str]):
        self.missing = sorted(missing)
        super().__init__(
            "missing prioritization for elements: " + ", ".join(self.missing)
        )


@dataclass(frozen=True)
class DecisionMatrix:
    """Rectangular matrix of TFN cells: one row per alternative element, one
    column per criterion."""

    alternatives: tuple[str, ...]
    criteria: tuple[str, ...]
    cells: np.ndarray  # shape (len(alternatives), len(criteria), 3)

    def __post_init__(self) -> None:
        expected = (len(self.alternatives), len(self.criteria), 3)
        if self.cells.shape != expected:
            raise ValueError(f"cells must have shape {expected}, got {self.cells.shape}")

    def with_criterion_zeroed(self, criterion: str) -> "DecisionMatrix":
        cells = self.cells.copy()
        cells[:, self.criteria.index(criterion), :] = 0.0
        return DecisionMatrix(self.alternatives, self.criteria, cells)


@dataclass(frozen=True)
class ElementValue:
    name: str
    importance: Level
    confidence: Level
    local_value: float
    global_value: float
    same_actor_value: float
    other_actor_value: float


@dataclass(frozen=True)
class AnalysisResult:
    rows: dict[str, ElementValue]
    global_ranking: tuple[str, ...]
    local_rankings: dict[str, tuple[str, ...]]
    element_owner: dict[str, str]
    config: PropagationConfig
    created_at: str
    warnings: tuple[str, ...] = ()

    def to_json(self) -> dict:
        table = [
            {
                "id": eid,
                "name": row.name,
                "importance": row.importance.label,
                "confidence": row.confidence.label,
                "globalValue": round(row.global_value, 2),
                "localValue": round(row.local_value, 2),
                "sameActorValue": round(row.same_actor_value, 2),
                "otherActorValue": round(row.other_actor_value, 2),
            }
            for eid, row in ((eid, self.rows[eid]) for eid in self.global_ranking)
        ]
        return {
            "createdAt": self.created_at,
            "config": self.config.to_json(),
            "table": table,
            "values": {
                eid: {
                    "globalValue": row.global_value,
                    "localValue": row.local_value,
                    "sameActorValue": row.same_actor_value,
                    "otherActorValue": row.other_actor_value,
                }
                for eid, row in sorted(self.rows.items())
            },
            "globalRanking": list(self.global_ranking),
            "localRankings": {
                actor: list(ranking)
                for actor, ranking in sorted(self.local_rankings.items())
            },
            "elementOwners": dict(sorted(self.element_owner.items())),
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class ProvenanceEntry:
    source_id: str
    source_actor: str
    same_actor: bool
    impact: float
    impact_tfn: TFN

    def to_json(self) -> dict:
        return {
            "sourceId": self.source_id,
            "sourceActor": self.source_actor,
            "sameActor": self.same_actor,
            "impact": self.impact,
            "impactTfn": self.impact_tfn.to_json(),
        }


def _tfn_array(tfns: list[TFN]) -> np.ndarray:
    return np.array([t.as_tuple() for t in tfns], dtype=float)


def build_matrices(
    model: GoalModel,
    prioritization: Prioritization,
    prop: PropagationResult,
) -> tuple[DecisionMatrix, dict[str, DecisionMatrix]]:
    """Assemble the global matrix (weighted importance, same-actor impact,
    other-actor impact) and one local matrix per actor (unweighted importance,
    same-actor impact)."""
    owned = model.owned_elements()
    missing = [eid for eid in owned if eid not in prioritization.element_priorities]
    if missing:
        raise MissingPrioritiesError(missing)

    owner = model.owner_of()
    splits = split_all(prop, model)

    weight_tfn = {
        actor.id: IMPORTANCE_SCALE[prioritization.stakeholder_weights[actor.id]]
        if actor.id in prioritization.stakeholder_weights
        else TFN(1.0, 1.0, 1.0)
        for actor in model.actors
    }

    alternatives = tuple(sorted(owned))
    rows = []
    for eid in alternatives:
        importance, confidence = prioritization.element_priorities[eid]
        fuzz = fuzzify(importance, confidence)
        same, other = splits[eid]
        rows.append([tfn_mul(weight_tfn[owner[eid]], fuzz), same, other])
    global_matrix = DecisionMatrix(
        alternatives=alternatives,
        criteria=("C1", "C2", "C3"),
        cells=np.array(
            [[cell.as_tuple() for cell in row] for row in rows], dtype=float
        )
        if rows
        else np.zeros((0, 3, 3)),
    )

    local_matrices: dict[str, DecisionMatrix] = {}
    for actor in model.actors:
        ids = tuple(sorted(e.id for e in actor.elements))
        cells = []
        for eid in ids:
            importance, confidence = prioritization.element_priorities[eid]
            same, _ = splits[eid]
            cells.append([fuzzify(importance, confidence), same])
        local_matrices[actor.id] = DecisionMatrix(
            alternatives=ids,
            criteria=("C1", "C2"),
            cells=np.array(
                [[cell.as_tuple() for cell in row] for row in cells], dtype=float
            )
            if cells
            else np.zeros((0, 2, 3)),
        )
    return global_matrix, local_matrices


def ftopsis_closeness(
    matrix: DecisionMatrix,
) -> tuple[dict[str, float], list[str]]:
    """Closeness coefficient per alternative.

    Each criterion is normalized by its largest absolute bound, then distances
    to the fuzzy positive ideal (1,1,1) and negative ideal (-1,-1,-1) are
    summed over criteria. Criteria that are identically zero are dropped; if
    nothing remains every alternative sits at 0.5 with a warning.
    """
    if not matrix.alternatives:
        raise ValueError("decision matrix has no alternatives")
    cells = matrix.cells
    scale = np.max(np.abs(cells[:, :, [0, 2]]), axis=(0, 2))
    keep = scale > 0.0
    if not np.any(keep):
        return {a: 0.5 for a in matrix.alternatives}, [DEGENERATE_MATRIX_WARNING]
    r = cells[:, keep, :] / scale[keep][None, :, None]
    d_pos = np.sqrt(np.mean((r - 1.0) ** 2, axis=2)).sum(axis=1)
    d_neg = np.sqrt(np.mean((r + 1.0) ** 2, axis=2)).sum(axis=1)
    cc = d_neg / (d_pos + d_neg)
    return dict(zip(matrix.alternatives, cc.tolist())), []


def cc_to_value(cc: float) -> float:
    """Affine map from closeness coefficient [0, 1] to value [-100, 100]."""
    if not (0.0 <= cc <= 1.0):
        raise ValueError(f"closeness coefficient must be in [0, 1], got {cc}")
    return 200.0 * cc - 100.0


def _ranking(values: dict[str, float], names: dict[str, str]) -> tuple[str, ...]:
    return tuple(sorted(values, key=lambda eid: (-values[eid], names[eid], eid)))


def run_analysis(
    model: GoalModel,
    prioritization: Prioritization,
    config: PropagationConfig | None = None,
    created_at: str | None = None,
) -> tuple[AnalysisResult, PropagationResult]:
    """Full pipeline: propagation, matrices, values, rankings.

    Returns the propagation result alongside so provenance can be derived
    without recomputation.
    """
    config = config or PropagationConfig()
    report = validate(model, prioritization)
    if not report.ok:
        raise InvalidModelError(report)

    graph = build_influence_graph(model)
    base = {
        eid: fuzzify(importance, confidence)
        for eid, (importance, confidence) in prioritization.element_priorities.items()
    }
    owned = model.owned_elements()
    missing = [eid for eid in owned if eid not in base]
    if missing:
        raise MissingPrioritiesError(missing)
    prop = propagate(graph, base, config)

    global_matrix, local_matrices = build_matrices(model, prioritization, prop)
    warnings: list[str] = []

    cc_global, warn = ftopsis_closeness(global_matrix)
    warnings.extend(warn)
    # Same-actor share: re-run with the other-actor column silenced.
    cc_same, _ = ftopsis_closeness(global_matrix.with_criterion_zeroed("C3"))

    local_values: dict[str, float] = {}
    for actor_id, matrix in local_matrices.items():
        if not matrix.alternatives:
            continue
        cc_local, warn = ftopsis_closeness(matrix)
        for eid, cc in cc_local.items():
            local_values[eid] = cc_to_value(cc)

    names = model.element_names()
    owner = model.owner_of()
    rows: dict[str, ElementValue] = {}
    for eid in global_matrix.alternatives:
        importance, confidence = prioritization.element_priorities[eid]
        global_value = cc_to_value(cc_global[eid])
        same_value = cc_to_value(cc_same[eid])
        rows[eid] = ElementValue(
            name=names[eid],
            importance=importance,
            confidence=confidence,
            local_value=local_values[eid],
            global_value=global_value,
            same_actor_value=same_value,
            other_actor_value=global_value - same_value,
        )

    global_ranking = _ranking(
        {eid: row.global_value for eid, row in rows.items()}, names
    )
    local_rankings = {
        actor.id: _ranking(
            {e.id: rows[e.id].local_value for e in actor.elements}, names
        )
        for actor in model.actors
    }

    if created_at is None:
        created_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    result = AnalysisResult(
        rows=rows,
        global_ranking=global_ranking,
        local_rankings=local_rankings,
        element_owner=dict(owner),
        config=config,
        created_at=created_at,
        warnings=tuple(warnings),
    )
    return result, prop


def analyze(
    model: GoalModel,
    prioritization: Prioritization,
    config: PropagationConfig | None = None,
    created_at: str | None = None,
) -> AnalysisResult:
    result, _ = run_analysis(model, prioritization, config, created_at)
    return result


def rank(
    result: AnalysisResult,
    by: str = "global",
    actor_filter: str | None = None,
) -> list[tuple[str, float]]:
    """Ordered (elementId, value) pairs, descending, ties by name ascending."""
    if by not in ("global", "local"):
        raise ValueError(f"rank criterion must be 'global' or 'local', got {by!r}")
    if actor_filter is not None and actor_filter not in set(
        result.element_owner.values()
    ):
        raise KeyError(f"unknown actor {actor_filter!r}")
    if by == "global":
        ordering = result.global_ranking
        values = {eid: result.rows[eid].global_value for eid in ordering}
    else:
        if actor_filter is not None:
            ordering = result.local_rankings[actor_filter]
        else:
            merged = {
                eid: result.rows[eid].local_value
                for ranking in result.local_rankings.values()
                for eid in ranking
            }
            ordering = _ranking(
                merged, {eid: result.rows[eid].name for eid in merged}
            )
        values = {eid: result.rows[eid].local_value for eid in ordering}
    if actor_filter is not None:
        ordering = tuple(
            eid for eid in ordering if result.element_owner.get(eid) == actor_filter
        )
    return [(eid, values[eid]) for eid in ordering]


def explain(
    result: AnalysisResult,
    model: GoalModel,
    prop: PropagationResult,
    element_id: str,
) -> list[ProvenanceEntry]:
    """Provenance of an element's value: every source whose impulse reaches
    it plus its own fuzzified importance, by decreasing impact magnitude."""
    if element_id in model.dependum_ids():
        raise ValueError(f"{element_id!r} is a dependum and carries no value")
    owner = model.owner_of()
    if element_id not in owner:
        raise KeyError(f"unknown element {element_id!r}")

    own_actor = owner[element_id]
    entries: list[ProvenanceEntry] = []
    row = result.rows[element_id]
    self_tfn = fuzzify(row.importance, row.confidence)
    entries.append(
        ProvenanceEntry(
            source_id=element_id,
            source_actor=own_actor,
            same_actor=True,
            impact=defuzzify(self_tfn),
            impact_tfn=self_tfn,
        )
    )
    for source, tfn in prop.impulses_at(element_id).items():
        if source == element_id:
            continue
        source_actor = owner.get(source, UNOWNED_ACTOR_ID)
        same = source_actor == own_actor and source_actor != UNOWNED_ACTOR_ID
        entries.append(
            ProvenanceEntry(
                source_id=source,
                source_actor=source_actor,
                same_actor=same,
                impact=defuzzify(tfn),
                impact_tfn=tfn,
            )
        )
    entries.sort(key=lambda e: (-abs(e.impact), e.source_id))
    return entries
