"""Generic triple export for ontology interoperation.

Category levels, tags, and functional components of a model are mapped
to subject/predicate/object statements and rendered as N-Triples, whose
line-oriented form keeps golden outputs bit-exact. The vocabulary
namespace is a placeholder IRI, configurable per export.
"""

from __future__ import annotations

import json

from .documents import Entity
from .entities import CompoundModel, Triple, UnitModel

DEFAULT_BASE_IRI = "urn:catecom:"


def _literal(value) -> str:
    if isinstance(value, float) or isinstance(value, int):
        return json.dumps(value)
    return str(value)


def _unit_model_triples(model: UnitModel, base: str) -> list[Triple]:
    subject = f"{base}model/{model.slug}"
    triples = []
    for level_name, slug in model.categories.levels():
        triples.append(Triple(subject, f"{base}{level_name}", slug))
    for tag in model.tags:
        triples.append(Triple(subject, f"{base}tag", tag))
    if model.functional is not None:
        for component in model.functional.components:
            component_iri = f"{base}component/{component.slug}"
            triples.append(
                Triple(
                    subject,
                    f"{base}functionalComponent",
                    component_iri,
                    object_is_iri=True,
                )
            )
            triples.append(
                Triple(
                    component_iri,
                    f"{base}fraction",
                    _literal(component.fraction),
                )
            )
    return triples


def export_triples(entity: Entity, base_iri: str = DEFAULT_BASE_IRI) -> list[Triple]:
    """Triples for an entity, in deterministic order.

    Unit models yield one triple per category level, per tag, and per
    functional component (with the component's fraction as a literal).
    Compound models yield their units' triples in chain order.
    """
    if isinstance(entity, UnitModel):
        return _unit_model_triples(entity, base_iri)
    if isinstance(entity, CompoundModel):
        triples = []
        for node in entity.ordered_nodes():
            unit = entity.units.get(node.flowchart_id)
            if unit is not None:
                triples.extend(_unit_model_triples(unit, base_iri))
        return triples
    return []


_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}


def _escape_literal(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


def to_ntriples(triples: list[Triple]) -> str:
    """Render triples in N-Triples form, one statement per line."""
    lines = []
    for t in triples:
        obj = f"<{t.object}>" if t.object_is_iri else f'"{_escape_literal(t.object)}"'
        lines.append(f"<{t.subject}> <{t.predicate}> {obj} .")
    return "\n".join(lines) + ("\n" if lines else "")


def to_json(triples: list[Triple]) -> str:
    """Render triples as a JSON array of statement objects."""
    return (
        json.dumps(
            [
                {
                    "subject": t.subject,
                    "predicate": t.predicate,
                    "object": t.object,
                    "objectIsIri": t.object_is_iri,
                }
                for t in triples
            ],
            ensure_ascii=False,
            indent=1,
        )
        + "\n"
    )
