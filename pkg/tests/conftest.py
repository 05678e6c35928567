import random
from pathlib import Path

import pytest

from goalvalue.fuzzy import Level
from goalvalue.model import (
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

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def pistar_minimal() -> str:
    return (FIXTURES / "pistar_minimal.json").read_text()


@pytest.fixture
def pistar_scheduler() -> str:
    return (FIXTURES / "pistar_scheduler.json").read_text()


def element(eid: str, kind: ElementKind = ElementKind.GOAL) -> IntentionalElement:
    return IntentionalElement(id=eid, name=eid, kind=kind)


def simple_model(
    actors: dict[str, list[str]],
    links: list[Link] = (),
    dependums: list[str] = (),
    model_id: str = "m-test",
) -> GoalModel:
    return GoalModel(
        id=model_id,
        name="test model",
        actors=tuple(
            Actor(id=aid, name=aid, elements=tuple(element(e) for e in elements))
            for aid, elements in actors.items()
        ),
        dependums=tuple(Dependum(d, d, ElementKind.RESOURCE) for d in dependums),
        links=tuple(links),
    )


def contribution(lid, src, tgt, label) -> Link:
    return Link(lid, LinkType.CONTRIBUTION, src, tgt, label=ContributionLabel(label))


def refinement(lid, child, parent, kind="and") -> Link:
    link_type = LinkType.AND_REFINEMENT if kind == "and" else LinkType.OR_REFINEMENT
    return Link(lid, link_type, child, parent)


def dependency(lid, depender, dependum, dependee) -> Link:
    return Link(
        lid, LinkType.DEPENDENCY, depender, dependee, dependum_id=dependum
    )


def full_prioritization(model: GoalModel, rng: random.Random | None = None) -> Prioritization:
    """Prioritize every actor-owned element (randomly when a RNG is given)."""
    levels = list(Level)
    priorities = {}
    for eid in sorted(model.owned_elements()):
        if rng is None:
            priorities[eid] = (Level.MEDIUM, Level.MEDIUM)
        else:
            priorities[eid] = (rng.choice(levels), rng.choice(levels))
    weights = {}
    if rng is not None:
        for actor in model.actors:
            if rng.random() < 0.5:
                weights[actor.id] = rng.choice(levels)
    return Prioritization(priorities, weights)


def random_model(rng: random.Random, max_elements: int = 30) -> GoalModel:
    """Random valid goal model: several actors, mixed link types, cycles allowed."""
    n_actors = rng.randint(1, 4)
    n_elements = rng.randint(n_actors, max_elements)
    kinds = list(ElementKind)
    actors: dict[str, list[str]] = {f"a{i}": [] for i in range(n_actors)}
    all_ids = []
    for i in range(n_elements):
        eid = f"e{i}"
        actors[f"a{rng.randrange(n_actors)}"].append(eid)
        all_ids.append(eid)
    owner = {eid: aid for aid, ids in actors.items() for eid in ids}

    links: list[Link] = []
    dependums: list[str] = []
    n_links = rng.randint(0, 2 * n_elements)
    counter = 0
    for _ in range(n_links):
        kind = rng.choice(["contribution", "refinement", "dependency"])
        counter += 1
        lid = f"l{counter}"
        if kind == "contribution" and n_elements >= 2:
            src, tgt = rng.sample(all_ids, 2)
            links.append(
                contribution(
                    lid, src, tgt, rng.choice(["make", "help", "hurt", "break"])
                )
            )
        elif kind == "refinement":
            aid = rng.choice(list(actors))
            members = actors[aid]
            if len(members) < 2:
                continue
            child, parent = rng.sample(members, 2)
            links.append(refinement(lid, child, parent, rng.choice(["and", "or"])))
        else:
            if n_elements < 2:
                continue
            src, tgt = rng.sample(all_ids, 2)
            did = f"d{counter}"
            dependums.append(did)
            links.append(dependency(lid, src, did, tgt))

    model = GoalModel(
        id="m-random",
        name="random model",
        actors=tuple(
            Actor(
                id=aid,
                name=aid,
                elements=tuple(
                    element(eid, rng.choice(kinds)) for eid in ids
                ),
            )
            for aid, ids in actors.items()
        ),
        dependums=tuple(Dependum(d, d, ElementKind.RESOURCE) for d in dependums),
        links=tuple(links),
    )
    return model
