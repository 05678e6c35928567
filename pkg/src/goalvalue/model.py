"""Goal model structure, prioritization, and structural validation."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .fuzzy import Level

#: Synthetic actor that owns imported elements without a real owner, so they
#: can still be prioritized and analyzed.
UNOWNED_ACTOR_ID = "__unowned__"


class ElementKind(str, enum.Enum):
    GOAL = "goal"
    QUALITY = "quality"
    TASK = "task"
    RESOURCE = "resource"


class LinkType(str, enum.Enum):
    CONTRIBUTION = "contribution"
    AND_REFINEMENT = "andRefinement"
    OR_REFINEMENT = "orRefinement"
    DEPENDENCY = "dependency"


class ContributionLabel(str, enum.Enum):
    MAKE = "make"
    HELP = "help"
    HURT = "hurt"
    BREAK = "break"


@dataclass(frozen=True)
class IntentionalElement:
    id: str
    name: str
    kind: ElementKind


@dataclass(frozen=True)
class Dependum:
    id: str
    name: str
    kind: ElementKind


@dataclass(frozen=True)
class Link:
    id: str
    link_type: LinkType
    source_id: str
    target_id: str
    label: ContributionLabel | None = None
    dependum_id: str | None = None

    def __post_init__(self) -> None:
        if (self.label is not None) != (self.link_type is LinkType.CONTRIBUTION):
            raise ValueError("contribution label present iff linkType is contribution")
        if (self.dependum_id is not None) != (self.link_type is LinkType.DEPENDENCY):
            raise ValueError("dependumId present iff linkType is dependency")


@dataclass(frozen=True)
class Actor:
    id: str
    name: str
    elements: tuple[IntentionalElement, ...] = ()


@dataclass(frozen=True)
class GoalModel:
    id: str
    name: str
    actors: tuple[Actor, ...] = ()
    orphans: tuple[IntentionalElement, ...] = ()
    dependums: tuple[Dependum, ...] = ()
    links: tuple[Link, ...] = ()
    image: str | None = None

    def owned_elements(self) -> dict[str, IntentionalElement]:
        """Elements owned by some actor (including the synthetic one)."""
        return {e.id: e for a in self.actors for e in a.elements}

    def all_elements(self) -> dict[str, IntentionalElement]:
        out = self.owned_elements()
        out.update({e.id: e for e in self.orphans})
        return out

    def owner_of(self) -> dict[str, str]:
        """Map element id -> owning actor id."""
        return {e.id: a.id for a in self.actors for e in a.elements}

    def dependum_ids(self) -> set[str]:
        return {d.id for d in self.dependums}

    def element_names(self) -> dict[str, str]:
        names = {e.id: e.name for e in self.all_elements().values()}
        names.update({d.id: d.name for d in self.dependums})
        return names


@dataclass
class Prioritization:
    """Per-element (importance, confidence) assignments plus per-actor
    stakeholder weights. Mutable draft; models stay immutable."""

    element_priorities: dict[str, tuple[Level, Level]] = field(default_factory=dict)
    stakeholder_weights: dict[str, Level] = field(default_factory=dict)

    def copy(self) -> "Prioritization":
        return Prioritization(
            dict(self.element_priorities), dict(self.stakeholder_weights)
        )

    def merged(self, other: "Prioritization") -> "Prioritization":
        merged = self.copy()
        merged.element_priorities.update(other.element_priorities)
        merged.stakeholder_weights.update(other.stakeholder_weights)
        return merged


@dataclass(frozen=True)
class Issue:
    code: str
    message: str
    subject_id: str

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, "subjectId": self.subject_id}


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Issue, ...] = ()
    warnings: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_json(self) -> dict:
        return {
            "errors": [i.to_json() for i in self.errors],
            "warnings": [i.to_json() for i in self.warnings],
        }


# Issue codes
DUPLICATE_ID = "DUPLICATE_ID"
DANGLING_LINK = "DANGLING_LINK"
SELF_LINK = "SELF_LINK"
CROSS_ACTOR_REFINEMENT = "CROSS_ACTOR_REFINEMENT"
DEPENDENCY_ENDPOINT_NOT_OWNED = "DEPENDENCY_ENDPOINT_NOT_OWNED"
DEPENDUM_PRIORITIZED = "DEPENDUM_PRIORITIZED"
UNKNOWN_PRIORITY_SUBJECT = "UNKNOWN_PRIORITY_SUBJECT"
UNKNOWN_STAKEHOLDER = "UNKNOWN_STAKEHOLDER"
CROSS_ACTOR_CONTRIBUTION = "CROSS_ACTOR_CONTRIBUTION"
MIXED_REFINEMENT = "MIXED_REFINEMENT"
UNLINKED_UNPRIORITIZED = "UNLINKED_UNPRIORITIZED"
ORPHAN_ELEMENT = "ORPHAN_ELEMENT"
UNUSED_DEPENDUM = "UNUSED_DEPENDUM"


def validate(
    model: GoalModel, prioritization: Prioritization | None = None
) -> ValidationReport:
    """Check every structural rule and report violations.

    Problems are reported, never raised; an empty error list means the model
    is analyzable. The report is deterministically ordered by subject id then
    code.
    """
    errors: list[Issue] = []
    warnings: list[Issue] = []

    owned = model.owned_elements()
    owner = model.owner_of()
    all_elements = model.all_elements()
    dependum_ids = model.dependum_ids()
    node_ids = set(all_elements) | dependum_ids

    # id uniqueness across the whole model
    seen: set[str] = set()
    ids = (
        [model.id]
        + [a.id for a in model.actors]
        + [e.id for a in model.actors for e in a.elements]
        + [e.id for e in model.orphans]
        + [d.id for d in model.dependums]
        + [l.id for l in model.links]
    )
    reported: set[str] = set()
    for i in ids:
        if i in seen and i not in reported:
            errors.append(Issue(DUPLICATE_ID, f"id {i!r} is used more than once", i))
            reported.add(i)
        seen.add(i)

    linked: set[str] = set()
    children_link_types: dict[str, set[LinkType]] = {}
    referenced_dependums: set[str] = set()

    for link in model.links:
        endpoints_ok = True
        for endpoint in (link.source_id, link.target_id):
            if endpoint not in node_ids:
                errors.append(
                    Issue(
                        DANGLING_LINK,
                        f"link {link.id!r} references unknown id {endpoint!r}",
                        link.id,
                    )
                )
                endpoints_ok = False
        if link.dependum_id is not None:
            referenced_dependums.add(link.dependum_id)
            if link.dependum_id not in dependum_ids:
                errors.append(
                    Issue(
                        DANGLING_LINK,
                        f"link {link.id!r} references unknown dependum "
                        f"{link.dependum_id!r}",
                        link.id,
                    )
                )
                endpoints_ok = False
        if link.source_id == link.target_id:
            errors.append(
                Issue(SELF_LINK, f"link {link.id!r} connects {link.source_id!r} to itself", link.id)
            )
            endpoints_ok = False
        if not endpoints_ok:
            continue
        linked.update((link.source_id, link.target_id))

        if link.link_type in (LinkType.AND_REFINEMENT, LinkType.OR_REFINEMENT):
            src_owner = owner.get(link.source_id)
            tgt_owner = owner.get(link.target_id)
            if src_owner is None or tgt_owner is None or src_owner != tgt_owner:
                errors.append(
                    Issue(
                        CROSS_ACTOR_REFINEMENT,
                        f"refinement {link.id!r} must connect elements of one actor",
                        link.id,
                    )
                )
            children_link_types.setdefault(link.target_id, set()).add(link.link_type)
        elif link.link_type is LinkType.CONTRIBUTION:
            src_owner = owner.get(link.source_id)
            tgt_owner = owner.get(link.target_id)
            if src_owner is not None and tgt_owner is not None and src_owner != tgt_owner:
                warnings.append(
                    Issue(
                        CROSS_ACTOR_CONTRIBUTION,
                        f"contribution {link.id!r} crosses actor boundaries",
                        link.id,
                    )
                )
        elif link.link_type is LinkType.DEPENDENCY:
            for endpoint in (link.source_id, link.target_id):
                if endpoint not in owned:
                    errors.append(
                        Issue(
                            DEPENDENCY_ENDPOINT_NOT_OWNED,
                            f"dependency {link.id!r} endpoint {endpoint!r} is not an "
                            "actor-owned element",
                            link.id,
                        )
                    )

    for parent, types in children_link_types.items():
        if len(types) > 1:
            warnings.append(
                Issue(
                    MIXED_REFINEMENT,
                    f"element {parent!r} mixes AND and OR refinement children",
                    parent,
                )
            )

    for d in model.dependums:
        if d.id not in referenced_dependums:
            warnings.append(
                Issue(
                    UNUSED_DEPENDUM,
                    f"dependum {d.id!r} is not referenced by any dependency link",
                    d.id,
                )
            )

    for e in model.orphans:
        warnings.append(
            Issue(ORPHAN_ELEMENT, f"element {e.id!r} belongs to no actor", e.id)
        )

    priorities = prioritization.element_priorities if prioritization else {}
    for eid in all_elements:
        if eid not in linked and eid not in priorities:
            warnings.append(
                Issue(
                    UNLINKED_UNPRIORITIZED,
                    f"element {eid!r} has no links and no prioritization",
                    eid,
                )
            )

    if prioritization is not None:
        actor_ids = {a.id for a in model.actors}
        for eid in prioritization.element_priorities:
            if eid in dependum_ids:
                errors.append(
                    Issue(
                        DEPENDUM_PRIORITIZED,
                        f"dependum {eid!r} cannot carry a prioritization",
                        eid,
                    )
                )
            elif eid not in all_elements:
                errors.append(
                    Issue(
                        UNKNOWN_PRIORITY_SUBJECT,
                        f"prioritization references unknown element {eid!r}",
                        eid,
                    )
                )
        for aid in prioritization.stakeholder_weights:
            if aid not in actor_ids:
                errors.append(
                    Issue(
                        UNKNOWN_STAKEHOLDER,
                        f"stakeholder weight references unknown actor {aid!r}",
                        aid,
                    )
                )

    key = lambda issue: (issue.subject_id, issue.code)
    return ValidationReport(
        errors=tuple(sorted(errors, key=key)),
        warnings=tuple(sorted(warnings, key=key)),
    )
