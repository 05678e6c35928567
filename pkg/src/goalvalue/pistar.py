"""Import of piStar tool JSON documents into the goal model structure."""
from __future__ import annotations

import hashlib
import json

from .model import (
    Actor,
    ContributionLabel,
    Dependum,
    ElementKind,
    GoalModel,
    IntentionalElement,
    Issue,
    Link,
    LinkType,
    UNOWNED_ACTOR_ID,
    ValidationReport,
    validate,
)

_NODE_TYPES = {
    "istar.Goal": ElementKind.GOAL,
    "istar.Quality": ElementKind.QUALITY,
    "istar.Softgoal": ElementKind.QUALITY,
    "istar.Task": ElementKind.TASK,
    "istar.Resource": ElementKind.RESOURCE,
}

UNSUPPORTED_NODE = "UNSUPPORTED_NODE"
UNSUPPORTED_LINK = "UNSUPPORTED_LINK"
BAD_CONTRIBUTION_LABEL = "BAD_CONTRIBUTION_LABEL"
INCOMPLETE_DEPENDENCY = "INCOMPLETE_DEPENDENCY"


class PiStarParseError(ValueError):
    """Malformed piStar document; carries the offending location."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


def _require_list(obj: dict, key: str, location: str) -> list:
    value = obj.get(key, [])
    if not isinstance(value, list):
        raise PiStarParseError(f"{location}.{key}", "expected an array")
    return value


def _node_name(node: dict, fallback: str) -> str:
    for key in ("text", "name"):
        value = node.get(key)
        if isinstance(value, str) and value:
            return value
    return fallback


def _parse_node(node, location: str, warnings: list[Issue]):
    if not isinstance(node, dict):
        raise PiStarParseError(location, "expected an object")
    node_id = node.get("id")
    if not isinstance(node_id, str) or not node_id:
        raise PiStarParseError(f"{location}.id", "missing node id")
    node_type = node.get("type", "")
    kind = _NODE_TYPES.get(node_type)
    if kind is None:
        warnings.append(
            Issue(
                UNSUPPORTED_NODE,
                f"node {node_id!r} has unsupported type {node_type!r}; skipped",
                node_id,
            )
        )
        return None
    return IntentionalElement(id=node_id, name=_node_name(node, node_id), kind=kind)


def derive_model_id(document: dict) -> str:
    """Stable, content-derived model identifier."""
    digest = hashlib.sha256(
        json.dumps(document, sort_keys=True).encode("utf-8")
    ).hexdigest()
    return f"model-{digest[:12]}"


def import_pistar(text: str) -> tuple[GoalModel, ValidationReport]:
    """Parse a piStar JSON document into a goal model.

    Unsupported node and link types are skipped with a warning. Orphan nodes
    are grouped under the synthetic actor so they can be prioritized. No
    prioritization is ever fabricated.
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PiStarParseError(
            f"$ (line {exc.lineno}, column {exc.colno})", exc.msg
        ) from None
    if not isinstance(document, dict):
        raise PiStarParseError("$", "expected a JSON object")
    if "actors" not in document:
        raise PiStarParseError("$.actors", "missing required field")

    warnings: list[Issue] = []
    actors: list[Actor] = []
    for i, actor in enumerate(_require_list(document, "actors", "$")):
        location = f"$.actors[{i}]"
        if not isinstance(actor, dict):
            raise PiStarParseError(location, "expected an object")
        actor_id = actor.get("id")
        if not isinstance(actor_id, str) or not actor_id:
            raise PiStarParseError(f"{location}.id", "missing actor id")
        elements = []
        for j, node in enumerate(_require_list(actor, "nodes", location)):
            element = _parse_node(node, f"{location}.nodes[{j}]", warnings)
            if element is not None:
                elements.append(element)
        actors.append(
            Actor(
                id=actor_id,
                name=_node_name(actor, actor_id),
                elements=tuple(elements),
            )
        )

    unowned = []
    for j, node in enumerate(_require_list(document, "orphans", "$")):
        element = _parse_node(node, f"$.orphans[{j}]", warnings)
        if element is not None:
            unowned.append(element)
    if unowned:
        actors.append(
            Actor(id=UNOWNED_ACTOR_ID, name="Unowned elements", elements=tuple(unowned))
        )

    dependums: list[Dependum] = []
    for j, node in enumerate(_require_list(document, "dependencies", "$")):
        element = _parse_node(node, f"$.dependencies[{j}]", warnings)
        if element is not None:
            dependums.append(Dependum(element.id, element.name, element.kind))
    dependum_ids = {d.id for d in dependums}

    links: list[Link] = []
    dep_in: dict[str, list[str]] = {}
    dep_out: dict[str, list[str]] = {}
    counter = 0
    for j, raw in enumerate(_require_list(document, "links", "$")):
        location = f"$.links[{j}]"
        if not isinstance(raw, dict):
            raise PiStarParseError(location, "expected an object")
        source = raw.get("source")
        target = raw.get("target")
        if not isinstance(source, str) or not isinstance(target, str):
            raise PiStarParseError(location, "link must have source and target ids")
        counter += 1
        link_id = raw.get("id") if isinstance(raw.get("id"), str) else f"link-{counter}"
        link_type = raw.get("type", "")

        if link_type == "istar.ContributionLink":
            raw_label = raw.get("label", "")
            try:
                label = ContributionLabel(str(raw_label).lower())
            except ValueError:
                warnings.append(
                    Issue(
                        BAD_CONTRIBUTION_LABEL,
                        f"contribution {link_id!r} has unknown label "
                        f"{raw_label!r}; skipped",
                        link_id,
                    )
                )
                continue
            links.append(
                Link(link_id, LinkType.CONTRIBUTION, source, target, label=label)
            )
        elif link_type == "istar.AndRefinementLink":
            links.append(Link(link_id, LinkType.AND_REFINEMENT, source, target))
        elif link_type == "istar.OrRefinementLink":
            links.append(Link(link_id, LinkType.OR_REFINEMENT, source, target))
        elif link_type == "istar.DependencyLink":
            # piStar splits a dependency into two half-links through the
            # dependum; pair them up afterwards.
            if target in dependum_ids:
                dep_in.setdefault(target, []).append(source)
            elif source in dependum_ids:
                dep_out.setdefault(source, []).append(target)
            else:
                warnings.append(
                    Issue(
                        INCOMPLETE_DEPENDENCY,
                        f"dependency link {link_id!r} touches no dependum; skipped",
                        link_id,
                    )
                )
        else:
            warnings.append(
                Issue(
                    UNSUPPORTED_LINK,
                    f"link {link_id!r} has unsupported type {link_type!r}; skipped",
                    link_id,
                )
            )

    used_dependums = []
    for d in dependums:
        dependers = dep_in.get(d.id, [])
        dependees = dep_out.get(d.id, [])
        if not dependers or not dependees:
            warnings.append(
                Issue(
                    INCOMPLETE_DEPENDENCY,
                    f"dependum {d.id!r} lacks a depender or dependee side; skipped",
                    d.id,
                )
            )
            continue
        used_dependums.append(d)
        for depender in sorted(dependers):
            for dependee in sorted(dependees):
                links.append(
                    Link(
                        id=f"dep-{d.id}-{depender}-{dependee}",
                        link_type=LinkType.DEPENDENCY,
                        source_id=depender,
                        target_id=dependee,
                        dependum_id=d.id,
                    )
                )

    diagram = document.get("diagram")
    name = ""
    if isinstance(diagram, dict):
        name = _node_name(diagram, "")
    model = GoalModel(
        id=derive_model_id(document),
        name=name or "imported model",
        actors=tuple(actors),
        orphans=(),
        dependums=tuple(used_dependums),
        links=tuple(links),
    )
    structural = validate(model)
    key = lambda issue: (issue.subject_id, issue.code)
    report = ValidationReport(
        errors=structural.errors,
        warnings=tuple(sorted([*warnings, *structural.warnings], key=key)),
    )
    return model, report
