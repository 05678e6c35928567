"""Canonical JSON persistence for a goal model plus its prioritization.

The format is deterministic: keys are sorted and collections are ordered by
id, so semantically equal inputs serialize to byte-equal documents.
"""
from __future__ import annotations

import json

from .fuzzy import Level
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
)

FORMAT_VERSION = "1.0"


class LoadError(ValueError):
    """Schema violation while reading a canonical document; names the first
    violating path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _expect(value, kind, path: str):
    if not isinstance(value, kind):
        raise LoadError(path, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def _get(obj: dict, key: str, kind, path: str):
    if key not in obj:
        raise LoadError(f"{path}.{key}", "missing required field")
    return _expect(obj[key], kind, f"{path}.{key}")


def _enum(cls, value: str, path: str):
    try:
        return cls(value)
    except ValueError:
        allowed = ", ".join(repr(v.value) for v in cls)
        raise LoadError(path, f"{value!r} is not one of {allowed}") from None


def _level(value, path: str) -> Level:
    _expect(value, str, path)
    try:
        return Level.from_label(value)
    except ValueError as exc:
        raise LoadError(path, str(exc)) from None


def _element_to_json(e: IntentionalElement) -> dict:
    return {"id": e.id, "name": e.name, "kind": e.kind.value}


def _link_to_json(link: Link) -> dict:
    out = {
        "id": link.id,
        "linkType": link.link_type.value,
        "sourceId": link.source_id,
        "targetId": link.target_id,
    }
    if link.label is not None:
        out["label"] = link.label.value
    if link.dependum_id is not None:
        out["dependumId"] = link.dependum_id
    return out


def model_to_json(model: GoalModel) -> dict:
    by_id = lambda x: x["id"]
    out = {
        "id": model.id,
        "name": model.name,
        "actors": sorted(
            (
                {
                    "id": a.id,
                    "name": a.name,
                    "elements": sorted(
                        (_element_to_json(e) for e in a.elements), key=by_id
                    ),
                }
                for a in model.actors
            ),
            key=by_id,
        ),
        "orphans": sorted((_element_to_json(e) for e in model.orphans), key=by_id),
        "dependums": sorted((_element_to_json(d) for d in model.dependums), key=by_id),
        "links": sorted((_link_to_json(l) for l in model.links), key=by_id),
    }
    if model.image is not None:
        out["image"] = model.image
    return out


def prioritization_to_json(prioritization: Prioritization) -> dict:
    return {
        "elementPriorities": {
            eid: {"importance": imp.label, "confidence": conf.label}
            for eid, (imp, conf) in sorted(prioritization.element_priorities.items())
        },
        "stakeholderWeights": {
            aid: level.label
            for aid, level in sorted(prioritization.stakeholder_weights.items())
        },
    }


def save(model: GoalModel, prioritization: Prioritization) -> str:
    document = {
        "formatVersion": FORMAT_VERSION,
        "model": model_to_json(model),
        "prioritization": prioritization_to_json(prioritization),
    }
    return canonical_dumps(document)


def canonical_dumps(document) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _element_from_json(obj, path: str) -> IntentionalElement:
    _expect(obj, dict, path)
    return IntentionalElement(
        id=_get(obj, "id", str, path),
        name=_get(obj, "name", str, path),
        kind=_enum(ElementKind, _get(obj, "kind", str, path), f"{path}.kind"),
    )


def _link_from_json(obj, path: str) -> Link:
    _expect(obj, dict, path)
    link_type = _enum(LinkType, _get(obj, "linkType", str, path), f"{path}.linkType")
    label = None
    dependum_id = None
    if link_type is LinkType.CONTRIBUTION:
        label = _enum(
            ContributionLabel, _get(obj, "label", str, path), f"{path}.label"
        )
    elif "label" in obj:
        raise LoadError(f"{path}.label", "label is only valid on contribution links")
    if link_type is LinkType.DEPENDENCY:
        dependum_id = _get(obj, "dependumId", str, path)
    elif "dependumId" in obj:
        raise LoadError(
            f"{path}.dependumId", "dependumId is only valid on dependency links"
        )
    return Link(
        id=_get(obj, "id", str, path),
        link_type=link_type,
        source_id=_get(obj, "sourceId", str, path),
        target_id=_get(obj, "targetId", str, path),
        label=label,
        dependum_id=dependum_id,
    )


def model_from_json(obj, path: str = "model") -> GoalModel:
    _expect(obj, dict, path)
    actors = []
    for i, a in enumerate(_get(obj, "actors", list, path)):
        apath = f"{path}.actors[{i}]"
        _expect(a, dict, apath)
        actors.append(
            Actor(
                id=_get(a, "id", str, apath),
                name=_get(a, "name", str, apath),
                elements=tuple(
                    _element_from_json(e, f"{apath}.elements[{j}]")
                    for j, e in enumerate(_get(a, "elements", list, apath))
                ),
            )
        )
    orphans = tuple(
        _element_from_json(e, f"{path}.orphans[{i}]")
        for i, e in enumerate(_get(obj, "orphans", list, path))
    )
    dependums = tuple(
        _element_from_json(d, f"{path}.dependums[{i}]")
        for i, d in enumerate(_get(obj, "dependums", list, path))
    )
    dependums = tuple(Dependum(d.id, d.name, d.kind) for d in dependums)
    links = tuple(
        _link_from_json(l, f"{path}.links[{i}]")
        for i, l in enumerate(_get(obj, "links", list, path))
    )
    image = obj.get("image")
    if image is not None:
        _expect(image, str, f"{path}.image")
    return GoalModel(
        id=_get(obj, "id", str, path),
        name=_get(obj, "name", str, path),
        actors=tuple(actors),
        orphans=orphans,
        dependums=dependums,
        links=links,
        image=image,
    )


def prioritization_from_json(obj, path: str = "prioritization") -> Prioritization:
    _expect(obj, dict, path)
    priorities: dict[str, tuple[Level, Level]] = {}
    for eid, entry in _get(obj, "elementPriorities", dict, path).items():
        epath = f"{path}.elementPriorities.{eid}"
        _expect(entry, dict, epath)
        priorities[eid] = (
            _level(_get(entry, "importance", str, epath), f"{epath}.importance"),
            _level(_get(entry, "confidence", str, epath), f"{epath}.confidence"),
        )
    weights = {
        aid: _level(label, f"{path}.stakeholderWeights.{aid}")
        for aid, label in _get(obj, "stakeholderWeights", dict, path).items()
    }
    return Prioritization(priorities, weights)


def load(text: str) -> tuple[GoalModel, Prioritization]:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError("$", f"invalid JSON: {exc}") from None
    _expect(document, dict, "$")
    version = _get(document, "formatVersion", str, "$")
    if version != FORMAT_VERSION:
        raise LoadError("$.formatVersion", f"unsupported version {version!r}")
    model = model_from_json(_get(document, "model", dict, "$"))
    prioritization = prioritization_from_json(
        _get(document, "prioritization", dict, "$")
    )
    return model, prioritization
