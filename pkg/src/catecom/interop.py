"""Binding compound models to workflow units and tracking property
provenance along the model chain.

A unit model is associated with exactly one workflow unit, while one
workflow unit may carry several unit models. Bindings are persistent
values: recording a property returns a new binding, so readers never
observe partial updates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

from .entities import (
    CompoundModel,
    PropertyRecord,
    UnitType,
    WorkflowUnitStub,
)
from .errors import MissingWorkflowUnitError, UnknownNodeError


@dataclass(frozen=True)
class InteropBinding:
    compound_model: CompoundModel
    workflow_units: tuple[WorkflowUnitStub, ...]
    properties: tuple[PropertyRecord, ...] = ()

    def workflow_unit(self, unit_id: str) -> WorkflowUnitStub | None:
        for wu in self.workflow_units:
            if wu.id == unit_id:
                return wu
        return None


def bind(
    cm: CompoundModel, workflow_units: list[WorkflowUnitStub] | tuple
) -> InteropBinding:
    """Attach workflow units to a compound model.

    Every workflowUnitId referenced by the model graph must be supplied.
    """
    units = tuple(workflow_units)
    ids = [wu.id for wu in units]
    if len(set(ids)) != len(ids):
        raise ValueError("workflow unit ids must be unique within a workflow")
    known = set(ids)
    missing = sorted(
        {n.workflow_unit_id for n in cm.model_graph} - known
    )
    if missing:
        raise MissingWorkflowUnitError(
            "model graph references unknown workflow units: " + ", ".join(missing)
        )
    return InteropBinding(cm, units)


def record_property(
    binding: InteropBinding,
    name: str,
    flowchart_id: str,
    a_priori: bool = False,
) -> InteropBinding:
    """Record that a node of the chain produced (or consumed) a property.

    The record's ``order`` is the node's chain position, so later
    occurrences sort after earlier ones regardless of insertion order.
    """
    positions = binding.compound_model.chain_positions()
    if flowchart_id not in positions:
        raise UnknownNodeError(f"no node with flowchartId {flowchart_id!r}")
    node = binding.compound_model.node(flowchart_id)
    record = PropertyRecord(
        name=name,
        source_flowchart_id=flowchart_id,
        source_workflow_unit_id=node.workflow_unit_id,
        order=positions[flowchart_id],
        a_priori=a_priori,
    )
    return replace(binding, properties=binding.properties + (record,))


def property_trace(binding: InteropBinding, name: str) -> list[PropertyRecord]:
    """All records of a property in ascending chain order (stable)."""
    return sorted(
        (r for r in binding.properties if r.name == name), key=lambda r: r.order
    )


def last_occurrence(binding: InteropBinding, name: str) -> PropertyRecord | None:
    """The record of maximal chain position, or None if never recorded."""
    trace = property_trace(binding, name)
    return trace[-1] if trace else None


def _workflow_unit_doc(wu: WorkflowUnitStub) -> dict:
    doc: dict[str, Any] = {
        "id": wu.id,
        "unitType": wu.unit_type.value,
        "application": wu.application,
    }
    if wu.flavor_id is not None:
        doc["flavorId"] = wu.flavor_id
    return doc


def _record_doc(r: PropertyRecord) -> dict:
    return {
        "name": r.name,
        "sourceFlowchartId": r.source_flowchart_id,
        "sourceWorkflowUnitId": r.source_workflow_unit_id,
        "order": r.order,
        "aPriori": r.a_priori,
    }


def binding_to_document(
    binding: InteropBinding, compound_model_ref: str | None = None
) -> dict:
    """Export a binding for consumption by the registry or the trace CLI."""
    doc: dict[str, Any] = {}
    if compound_model_ref is not None:
        doc["compoundModelRef"] = compound_model_ref
    doc["workflowUnits"] = [_workflow_unit_doc(wu) for wu in binding.workflow_units]
    doc["properties"] = [_record_doc(r) for r in binding.properties]
    return doc


def records_from_document(doc: dict) -> list[PropertyRecord]:
    """Property records of an exported binding document."""
    records = []
    for entry in doc.get("properties", []):
        records.append(
            PropertyRecord(
                name=entry["name"],
                source_flowchart_id=entry["sourceFlowchartId"],
                source_workflow_unit_id=entry["sourceWorkflowUnitId"],
                order=int(entry["order"]),
                a_priori=bool(entry.get("aPriori", False)),
            )
        )
    return records


def workflow_units_from_document(doc: dict) -> list[WorkflowUnitStub]:
    units = []
    for entry in doc.get("workflowUnits", []):
        units.append(
            WorkflowUnitStub(
                id=entry["id"],
                unit_type=UnitType(entry["unitType"]),
                application=entry["application"],
                flavor_id=entry.get("flavorId"),
            )
        )
    return units


def load_binding_document(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
