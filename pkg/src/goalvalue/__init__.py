"""Value-based goal model analysis.

Qualitative importance and confidence levels are fuzzified into triangular
fuzzy numbers, impact is propagated along the model's typed relationships,
and a fuzzy-TOPSIS variant ranks every intentional element with local and
global values on the [-100, 100] scale.
"""
from .analysis import (
    AnalysisResult,
    DecisionMatrix,
    MissingPrioritiesError,
    ProvenanceEntry,
    analyze,
    build_matrices,
    cc_to_value,
    explain,
    ftopsis_closeness,
    rank,
    run_analysis,
)
from .canonical import LoadError, load, save
from .fuzzy import (
    IMPORTANCE_SCALE,
    Level,
    TFN,
    defuzzify,
    fuzzify,
    tfn_add,
    tfn_distance,
    tfn_mul,
    tfn_scale,
)
from .model import (
    Actor,
    ContributionLabel,
    Dependum,
    ElementKind,
    GoalModel,
    IntentionalElement,
    Link,
    LinkType,
    Prioritization,
    UNOWNED_ACTOR_ID,
    ValidationReport,
    validate,
)
from .pistar import PiStarParseError, import_pistar
from .propagation import (
    InfluenceGraph,
    InvalidModelError,
    NonConvergenceError,
    PropagationConfig,
    PropagationResult,
    build_influence_graph,
    propagate,
    split_by_actor,
)
from .store import SessionStore, VersionDiff

__all__ = [
    "AnalysisResult",
    "Actor",
    "ContributionLabel",
    "DecisionMatrix",
    "Dependum",
    "ElementKind",
    "GoalModel",
    "IMPORTANCE_SCALE",
    "InfluenceGraph",
    "IntentionalElement",
    "InvalidModelError",
    "Level",
    "Link",
    "LinkType",
    "LoadError",
    "MissingPrioritiesError",
    "NonConvergenceError",
    "PiStarParseError",
    "Prioritization",
    "PropagationConfig",
    "PropagationResult",
    "ProvenanceEntry",
    "SessionStore",
    "TFN",
    "UNOWNED_ACTOR_ID",
    "ValidationReport",
    "VersionDiff",
    "analyze",
    "build_influence_graph",
    "build_matrices",
    "cc_to_value",
    "defuzzify",
    "explain",
    "ftopsis_closeness",
    "fuzzify",
    "import_pistar",
    "load",
    "propagate",
    "rank",
    "run_analysis",
    "save",
    "split_by_actor",
    "tfn_add",
    "tfn_distance",
    "tfn_mul",
    "tfn_scale",
    "validate",
]
