"""Parsing, validation, and canonical serialization of entity documents.

The external document format is UTF-8 JSON, one entity per file. Required
keys follow the entity field lists; optional keys are absent rather than
null. Unknown keys on unit models are preserved in ``extras``; the
database-reserved key ``_id`` is accepted on input and discarded.

Canonical serialization emits keys in a fixed schema-defined order, then
lexicographically for open maps, with no insignificant whitespace, so two
serializations of the same entity are byte-identical. Parsing and
serialization are pure functions and safe to call concurrently.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .entities import (
    CategoryPath,
    ComponentType,
    CompoundModel,
    EntityKind,
    Functional,
    FunctionalComponent,
    LEVEL_NAMES,
    Method,
    MethodParameter,
    ModelGraphNode,
    RangeKind,
    UnitModel,
    ValidationProfile,
)
from .errors import DocumentSyntaxError, SchemaError, Violation
from .taxonomy import TaxonomyTree, builtin_taxonomy

Entity = UnitModel | CompoundModel | Method

_UNIT_MODEL_KEYS = (
    "categories",
    "name",
    "slug",
    "flowchartId",
    "tags",
    "augmentations",
    "modifiers",
    "references",
    "functional",
    "method",
)
_METHOD_KEYS = ("type", "subtype", "parameters", "precision", "data")
_COMPOUND_KEYS = ("modelGraph", "method", "units")
_NODE_KEYS = ("flowchartId", "name", "slug", "head", "next", "workflowUnitId")
_COMPONENT_KEYS = (
    "name",
    "slug",
    "componentType",
    "fraction",
    "rangeKind",
    "screeningParameter",
)
_PARAMETER_KEYS = ("key", "value", "categories", "unit")


def _kind_name(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, (list, tuple)):
        return "array"
    if isinstance(value, dict):
        return "object"
    return type(value).__name__


def _expect_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(path, f"expected string, got {_kind_name(value)}")
    return value


def _expect_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(path, f"expected boolean, got {_kind_name(value)}")
    return value


def _expect_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected number, got {_kind_name(value)}")
    return float(value)


def _expect_obj(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(path, f"expected object, got {_kind_name(value)}")
    return value


def _expect_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected array, got {_kind_name(value)}")
    return value


def _expect_str_list(value: Any, path: str) -> tuple[str, ...]:
    items = _expect_list(value, path)
    return tuple(_expect_str(v, f"{path}/{i}") for i, v in enumerate(items))


def _require(obj: dict, key: str, path: str) -> Any:
    if key not in obj:
        raise SchemaError(f"{path}/{key}", "missing required field")
    return obj[key]


def _reject_null(value: Any, path: str) -> Any:
    if value is None:
        raise SchemaError(path, "null is not allowed; omit the key instead")
    return value


def _enum_member(enum_cls, value: Any, path: str):
    text = _expect_str(value, path)
    try:
        return enum_cls(text)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        raise SchemaError(path, f"expected one of [{allowed}], got {text!r}") from None


def _parse_category_level(value: Any, path: str) -> str:
    # Tolerate the {name, slug} object form; the name is absorbed the
    # same way `_id` is.
    if isinstance(value, dict):
        return _expect_str(_require(value, "slug", path), f"{path}/slug")
    return _expect_str(value, path)


def _parse_category_path(value: Any, path: str) -> CategoryPath:
    obj = _expect_obj(value, path)
    unknown = set(obj) - set(LEVEL_NAMES)
    if unknown:
        raise SchemaError(
            f"{path}/{sorted(unknown)[0]}", "unknown category level"
        )
    slugs = {
        level: _parse_category_level(obj[level], f"{path}/{level}")
        for level in LEVEL_NAMES
        if level in obj and _reject_null(obj[level], f"{path}/{level}") is not None
    }
    if "tier1" not in slugs:
        raise SchemaError(f"{path}/tier1", "missing required field")
    return CategoryPath(**slugs)


def _parse_component(value: Any, path: str) -> FunctionalComponent:
    obj = _expect_obj(value, path)
    unknown = set(obj) - set(_COMPONENT_KEYS)
    if unknown:
        raise SchemaError(f"{path}/{sorted(unknown)[0]}", "unknown component field")
    range_kind = None
    if "rangeKind" in obj:
        range_kind = _enum_member(RangeKind, obj["rangeKind"], f"{path}/rangeKind")
    screening = None
    if "screeningParameter" in obj:
        screening = _expect_number(
            obj["screeningParameter"], f"{path}/screeningParameter"
        )
    return FunctionalComponent(
        name=_expect_str(_require(obj, "name", path), f"{path}/name"),
        slug=_expect_str(_require(obj, "slug", path), f"{path}/slug"),
        component_type=_enum_member(
            ComponentType, _require(obj, "componentType", path), f"{path}/componentType"
        ),
        fraction=_expect_number(_require(obj, "fraction", path), f"{path}/fraction"),
        range_kind=range_kind,
        screening_parameter=screening,
    )


def _parse_functional(value: Any, path: str) -> Functional:
    obj = _expect_obj(value, path)
    components = _expect_list(_require(obj, "components", path), f"{path}/components")
    return Functional(
        name=_expect_str(_require(obj, "name", path), f"{path}/name"),
        slug=_expect_str(_require(obj, "slug", path), f"{path}/slug"),
        components=tuple(
            _parse_component(c, f"{path}/components/{i}")
            for i, c in enumerate(components)
        ),
    )


def _parse_parameter_value(value: Any, path: str) -> Any:
    if value is None or isinstance(value, dict):
        raise SchemaError(
            path, f"expected scalar or array of scalars, got {_kind_name(value)}"
        )
    if isinstance(value, list):
        for i, item in enumerate(value):
            if item is None or isinstance(item, (dict, list)):
                raise SchemaError(f"{path}/{i}", "array values must be scalars")
        return tuple(value)
    return value


def _parse_parameter(value: Any, path: str) -> MethodParameter:
    obj = _expect_obj(value, path)
    unknown = set(obj) - set(_PARAMETER_KEYS)
    if unknown:
        raise SchemaError(f"{path}/{sorted(unknown)[0]}", "unknown parameter field")
    categories: tuple[str, ...] = ()
    if "categories" in obj:
        categories = _expect_str_list(obj["categories"], f"{path}/categories")
    unit = None
    if "unit" in obj:
        unit = _expect_str(obj["unit"], f"{path}/unit")
    return MethodParameter(
        key=_expect_str(_require(obj, "key", path), f"{path}/key"),
        value=_parse_parameter_value(_require(obj, "value", path), f"{path}/value"),
        categories=categories,
        unit=unit,
    )


def _parse_method(value: Any, path: str) -> Method:
    obj = _expect_obj(value, path)
    unknown = set(obj) - set(_METHOD_KEYS) - {"_id"}
    if unknown:
        raise SchemaError(f"{path}/{sorted(unknown)[0]}", "unknown method field")
    parameters = _expect_list(
        _require(obj, "parameters", path), f"{path}/parameters"
    )
    data = _expect_obj(_require(obj, "data", path), f"{path}/data")
    if "searchText" in data:
        _expect_str(data["searchText"], f"{path}/data/searchText")
    return Method(
        type=_expect_str(_require(obj, "type", path), f"{path}/type"),
        subtype=_expect_str(_require(obj, "subtype", path), f"{path}/subtype"),
        parameters=tuple(
            _parse_parameter(p, f"{path}/parameters/{i}")
            for i, p in enumerate(parameters)
        ),
        precision=_expect_str_list(
            _require(obj, "precision", path), f"{path}/precision"
        ),
        data=dict(data),
    )


def _parse_unit_model(value: Any, path: str) -> UnitModel:
    obj = dict(_expect_obj(value, path))
    obj.pop("_id", None)
    categories = _parse_category_path(
        _require(obj, "categories", path), f"{path}/categories"
    )
    functional = None
    if "functional" in obj:
        functional = _parse_functional(
            _reject_null(obj["functional"], f"{path}/functional"),
            f"{path}/functional",
        )
    method = None
    if "method" in obj:
        method = _parse_method(
            _reject_null(obj["method"], f"{path}/method"), f"{path}/method"
        )
    extras = {
        k: _reject_null(v, f"{path}/{k}")
        for k, v in obj.items()
        if k not in _UNIT_MODEL_KEYS
    }
    return UnitModel(
        categories=categories,
        name=_expect_str(_require(obj, "name", path), f"{path}/name"),
        slug=_expect_str(_require(obj, "slug", path), f"{path}/slug"),
        flowchart_id=_expect_str(
            _require(obj, "flowchartId", path), f"{path}/flowchartId"
        ),
        tags=_expect_str_list(_require(obj, "tags", path), f"{path}/tags"),
        augmentations=_expect_str_list(
            _require(obj, "augmentations", path), f"{path}/augmentations"
        ),
        modifiers=_expect_str_list(
            _require(obj, "modifiers", path), f"{path}/modifiers"
        ),
        references=_expect_str_list(
            _require(obj, "references", path), f"{path}/references"
        ),
        functional=functional,
        method=method,
        extras=extras,
    )


def _parse_node(value: Any, path: str) -> ModelGraphNode:
    obj = _expect_obj(value, path)
    unknown = set(obj) - set(_NODE_KEYS)
    if unknown:
        raise SchemaError(f"{path}/{sorted(unknown)[0]}", "unknown node field")
    nxt = None
    if "next" in obj:
        nxt = _expect_str(obj["next"], f"{path}/next")
    return ModelGraphNode(
        flowchart_id=_expect_str(
            _require(obj, "flowchartId", path), f"{path}/flowchartId"
        ),
        name=_expect_str(_require(obj, "name", path), f"{path}/name"),
        slug=_expect_str(_require(obj, "slug", path), f"{path}/slug"),
        head=_expect_bool(_require(obj, "head", path), f"{path}/head"),
        workflow_unit_id=_expect_str(
            _require(obj, "workflowUnitId", path), f"{path}/workflowUnitId"
        ),
        next=nxt,
    )


def _parse_compound(value: Any, path: str) -> CompoundModel:
    obj = dict(_expect_obj(value, path))
    obj.pop("_id", None)
    unknown = set(obj) - set(_COMPOUND_KEYS)
    if unknown:
        raise SchemaError(f"{path}/{sorted(unknown)[0]}", "unknown compound field")
    graph = _expect_list(_require(obj, "modelGraph", path), f"{path}/modelGraph")
    units = _expect_obj(_require(obj, "units", path), f"{path}/units")
    return CompoundModel(
        model_graph=tuple(
            _parse_node(n, f"{path}/modelGraph/{i}") for i, n in enumerate(graph)
        ),
        method=_parse_method(_require(obj, "method", path), f"{path}/method"),
        units={
            fid: _parse_unit_model(u, f"{path}/units/{fid}")
            for fid, u in units.items()
        },
    )


def _raise_on_constant(text: str):
    raise DocumentSyntaxError(f"non-finite JSON constant {text!r} is not allowed")


def from_document(doc: dict, kind: EntityKind) -> Entity:
    """Build a typed entity from an already-decoded JSON object."""
    if kind is EntityKind.UNIT_MODEL:
        return _parse_unit_model(doc, "")
    if kind is EntityKind.COMPOUND_MODEL:
        return _parse_compound(doc, "")
    if kind is EntityKind.METHOD:
        return _parse_method(doc, "")
    raise ValueError(f"unknown entity kind: {kind!r}")


def parse_document(raw: bytes | str, kind: EntityKind) -> Entity:
    """Parse a raw UTF-8 document into a typed entity.

    Raises DocumentSyntaxError on malformed JSON and SchemaError (with a
    path to the offending key) on schema violations.
    """
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"document is not UTF-8: {exc}") from None
    try:
        doc = json.loads(raw, parse_constant=_raise_on_constant)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentSyntaxError(
            f"document root must be an object, got {_kind_name(doc)}"
        )
    return from_document(doc, kind)


def sniff_kind(doc: dict) -> EntityKind:
    """Infer the entity kind of a decoded document from its shape."""
    if "modelGraph" in doc:
        return EntityKind.COMPOUND_MODEL
    if "categories" in doc:
        return EntityKind.UNIT_MODEL
    if "parameters" in doc:
        return EntityKind.METHOD
    raise SchemaError("", "cannot infer entity kind from document shape")


def parse_any(raw: bytes | str) -> Entity:
    """Parse a document, inferring its entity kind from its shape."""
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    try:
        doc = json.loads(raw, parse_constant=_raise_on_constant)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentSyntaxError(
            f"document root must be an object, got {_kind_name(doc)}"
        )
    return from_document(doc, sniff_kind(doc))


def kind_of(entity: Entity) -> EntityKind:
    if isinstance(entity, UnitModel):
        return EntityKind.UNIT_MODEL
    if isinstance(entity, CompoundModel):
        return EntityKind.COMPOUND_MODEL
    if isinstance(entity, Method):
        return EntityKind.METHOD
    raise TypeError(f"not an entity: {type(entity).__name__}")


def _canonical_open_value(value: Any) -> Any:
    """Deep-canonicalize open-map content: sort keys recursively."""
    if isinstance(value, dict):
        return {k: _canonical_open_value(value[k]) for k in sorted(value)}
    if isinstance(value, (list, tuple)):
        return [_canonical_open_value(v) for v in value]
    return value


def _category_doc(path: CategoryPath) -> dict:
    return {name: slug for name, slug in path.levels()}


def _component_doc(c: FunctionalComponent) -> dict:
    doc: dict[str, Any] = {
        "name": c.name,
        "slug": c.slug,
        "componentType": c.component_type.value,
        "fraction": c.fraction,
    }
    if c.range_kind is not None:
        doc["rangeKind"] = c.range_kind.value
    if c.screening_parameter is not None:
        doc["screeningParameter"] = c.screening_parameter
    return doc


def _functional_doc(f: Functional) -> dict:
    return {
        "name": f.name,
        "slug": f.slug,
        "components": [_component_doc(c) for c in f.components],
    }


def _parameter_doc(p: MethodParameter) -> dict:
    doc: dict[str, Any] = {
        "key": p.key,
        "value": list(p.value) if isinstance(p.value, tuple) else p.value,
        "categories": list(p.categories),
    }
    if p.unit is not None:
        doc["unit"] = p.unit
    return doc


def _method_doc(m: Method) -> dict:
    return {
        "type": m.type,
        "subtype": m.subtype,
        "parameters": [_parameter_doc(p) for p in m.parameters],
        "precision": list(m.precision),
        "data": _canonical_open_value(m.data),
    }


def _unit_model_doc(u: UnitModel) -> dict:
    doc: dict[str, Any] = {
        "categories": _category_doc(u.categories),
        "name": u.name,
        "slug": u.slug,
        "flowchartId": u.flowchart_id,
        "tags": list(u.tags),
        "augmentations": list(u.augmentations),
        "modifiers": list(u.modifiers),
        "references": list(u.references),
    }
    if u.functional is not None:
        doc["functional"] = _functional_doc(u.functional)
    if u.method is not None:
        doc["method"] = _method_doc(u.method)
    for key in sorted(u.extras):
        doc[key] = _canonical_open_value(u.extras[key])
    return doc


def _node_doc(n: ModelGraphNode) -> dict:
    doc: dict[str, Any] = {
        "flowchartId": n.flowchart_id,
        "name": n.name,
        "slug": n.slug,
        "head": n.head,
    }
    if n.next is not None:
        doc["next"] = n.next
    doc["workflowUnitId"] = n.workflow_unit_id
    return doc


def _compound_doc(c: CompoundModel) -> dict:
    return {
        "modelGraph": [_node_doc(n) for n in c.model_graph],
        "method": _method_doc(c.method),
        "units": {fid: _unit_model_doc(c.units[fid]) for fid in sorted(c.units)},
    }


def to_document(entity: Entity) -> dict:
    """Entity -> plain JSON object in canonical key order."""
    if isinstance(entity, UnitModel):
        return _unit_model_doc(entity)
    if isinstance(entity, CompoundModel):
        return _compound_doc(entity)
    if isinstance(entity, Method):
        return _method_doc(entity)
    raise TypeError(f"not an entity: {type(entity).__name__}")


def dumps_canonical(doc: Any) -> bytes:
    """Canonical JSON bytes: given key order, no whitespace, UTF-8."""
    return json.dumps(
        doc, ensure_ascii=False, separators=(",", ":"), allow_nan=False
    ).encode("utf-8")


def serialize_document(entity: Entity) -> bytes:
    """Canonical external form of an entity, newline-terminated."""
    return dumps_canonical(to_document(entity)) + b"\n"


_NUMERIC = (int, float)


def is_numeric_value(value: Any) -> bool:
    """Numbers and arrays of numbers count as numeric; booleans do not."""
    if isinstance(value, bool):
        return False
    if isinstance(value, _NUMERIC):
        return True
    if isinstance(value, (list, tuple)):
        return bool(value) and all(
            isinstance(v, _NUMERIC) and not isinstance(v, bool) for v in value
        )
    return False


def _method_violations(m: Method, prefix: str) -> list[Violation]:
    violations = []
    seen_keys: set[str] = set()
    precision_keys = set()
    for i, p in enumerate(m.parameters):
        if not p.key:
            violations.append(
                Violation(
                    f"{prefix}/parameters/{i}/key",
                    "method.parameter-key",
                    "parameter key must be nonempty",
                )
            )
        if p.key in seen_keys:
            violations.append(
                Violation(
                    f"{prefix}/parameters/{i}/key",
                    "method.duplicate-key",
                    f"duplicate parameter key {p.key!r}",
                )
            )
        seen_keys.add(p.key)
        if p.unit is not None and not is_numeric_value(p.value):
            violations.append(
                Violation(
                    f"{prefix}/parameters/{i}/unit",
                    "method.unit-non-numeric",
                    f"unit given for non-numeric value of {p.key!r}",
                )
            )
        if "precision" in p.categories:
            precision_keys.add(p.key)
            if p.key not in m.precision:
                violations.append(
                    Violation(
                        f"{prefix}/parameters/{i}",
                        "method.precision-missing",
                        f"parameter {p.key!r} is precision-categorized but "
                        "absent from the precision list",
                    )
                )
    for i, name in enumerate(m.precision):
        if name not in precision_keys:
            violations.append(
                Violation(
                    f"{prefix}/precision/{i}",
                    "method.precision-unknown",
                    f"precision entry {name!r} has no matching "
                    "precision-categorized parameter",
                )
            )
    return violations


def _category_violations(
    path: CategoryPath, tree: TaxonomyTree, prefix: str
) -> list[Violation]:
    if not path.is_contiguous():
        return [
            Violation(
                f"{prefix}/categories",
                "category.contiguity",
                f"category levels must be contiguous, got {path._raw()}",
            )
        ]
    for depth in range(1, path.depth + 1):
        sub = path.truncate(depth)
        if not tree.contains(sub):
            level_name = sub.levels()[-1][0]
            return [
                Violation(
                    f"{prefix}/categories/{level_name}",
                    "category.unknown",
                    f"{sub} is not a registered category",
                )
            ]
    return []


def _functional_violations(
    f: Functional, profile: ValidationProfile, prefix: str
) -> list[Violation]:
    violations = []
    if not f.components:
        violations.append(
            Violation(
                f"{prefix}/components",
                "functional.empty",
                "functional must have at least one component",
            )
        )
    seen = set()
    for i, c in enumerate(f.components):
        if c.slug in seen:
            violations.append(
                Violation(
                    f"{prefix}/components/{i}/slug",
                    "functional.duplicate-component",
                    f"duplicate component slug {c.slug!r}",
                )
            )
        seen.add(c.slug)
        if not math.isfinite(c.fraction):
            violations.append(
                Violation(
                    f"{prefix}/components/{i}/fraction",
                    "functional.fraction-finite",
                    "fraction must be finite",
                )
            )
        elif profile is ValidationProfile.STRICT and not 0.0 <= c.fraction <= 1.0:
            violations.append(
                Violation(
                    f"{prefix}/components/{i}/fraction",
                    "functional.fraction-range",
                    f"fraction {c.fraction} outside [0, 1] (strict profile)",
                )
            )
    return violations


def _unit_model_violations(
    u: UnitModel, tree: TaxonomyTree, profile: ValidationProfile, prefix: str
) -> list[Violation]:
    violations = []
    if not u.flowchart_id:
        violations.append(
            Violation(
                f"{prefix}/flowchartId",
                "model.flowchart-id",
                "flowchartId must be nonempty",
            )
        )
    violations.extend(_category_violations(u.categories, tree, prefix))
    if u.functional is not None:
        if u.categories.tier3 != "dft":
            violations.append(
                Violation(
                    f"{prefix}/functional",
                    "model.functional-requires-dft",
                    f"a functional requires tier3 dft, "
                    f"model is categorized {u.categories}",
                )
            )
        violations.extend(
            _functional_violations(u.functional, profile, f"{prefix}/functional")
        )
    if u.method is not None:
        violations.extend(_method_violations(u.method, f"{prefix}/method"))
    return violations


def validate_compound_graph(c: CompoundModel) -> list[Violation]:
    """Graph-level checks: one head, covering acyclic chain, resolvable
    next links, and every node backed by a unit model."""
    violations = []
    by_id: dict[str, ModelGraphNode] = {}
    for i, n in enumerate(c.model_graph):
        if n.flowchart_id in by_id:
            violations.append(
                Violation(
                    f"/modelGraph/{i}/flowchartId",
                    "compound.duplicate-node",
                    f"duplicate flowchartId {n.flowchart_id!r}",
                )
            )
        else:
            by_id[n.flowchart_id] = n
    heads = [n for n in c.model_graph if n.head]
    if not heads:
        violations.append(
            Violation("/modelGraph", "compound.no-head", "no head node")
        )
    elif len(heads) > 1:
        violations.append(
            Violation(
                "/modelGraph",
                "compound.multiple-heads",
                "multiple heads: "
                + ", ".join(n.flowchart_id for n in heads),
            )
        )
    for i, n in enumerate(c.model_graph):
        if n.next is not None:
            if n.next == n.flowchart_id:
                violations.append(
                    Violation(
                        f"/modelGraph/{i}/next",
                        "compound.self-cycle",
                        f"node {n.flowchart_id!r} points to itself",
                    )
                )
            elif n.next not in by_id:
                violations.append(
                    Violation(
                        f"/modelGraph/{i}/next",
                        "compound.dangling-next",
                        f"next {n.next!r} names no node",
                    )
                )
        if n.flowchart_id not in c.units:
            violations.append(
                Violation(
                    f"/modelGraph/{i}/flowchartId",
                    "compound.unmapped-node",
                    f"node {n.flowchart_id!r} has no unit model in units",
                )
            )
    # Chain coverage: only meaningful once the above structure holds.
    if heads and not violations:
        seen = set()
        current: ModelGraphNode | None = heads[0]
        while current is not None and current.flowchart_id not in seen:
            seen.add(current.flowchart_id)
            current = by_id.get(current.next) if current.next is not None else None
        if current is not None:
            violations.append(
                Violation(
                    "/modelGraph",
                    "compound.cycle",
                    f"chain revisits node {current.flowchart_id!r}",
                )
            )
        elif len(seen) != len(c.model_graph):
            missing = sorted(set(by_id) - seen)
            violations.append(
                Violation(
                    "/modelGraph",
                    "compound.unreachable",
                    "chain does not cover nodes: " + ", ".join(missing),
                )
            )
    for fid in sorted(c.units):
        if not any(n.flowchart_id == fid for n in c.model_graph):
            violations.append(
                Violation(
                    f"/units/{fid}",
                    "compound.orphan-unit",
                    f"unit model {fid!r} is not referenced by the model graph",
                )
            )
    return violations


def _compound_violations(
    c: CompoundModel, tree: TaxonomyTree, profile: ValidationProfile
) -> list[Violation]:
    violations = validate_compound_graph(c)
    violations.extend(_method_violations(c.method, "/method"))
    for fid in sorted(c.units):
        unit = c.units[fid]
        if unit.flowchart_id != fid:
            violations.append(
                Violation(
                    f"/units/{fid}/flowchartId",
                    "compound.unit-key-mismatch",
                    f"unit keyed {fid!r} carries flowchartId "
                    f"{unit.flowchart_id!r}",
                )
            )
        violations.extend(
            _unit_model_violations(unit, tree, profile, f"/units/{fid}")
        )
    return violations


def validate_entity(
    entity: Entity,
    taxonomy: TaxonomyTree | None = None,
    profile: ValidationProfile = ValidationProfile.STRICT,
) -> list[Violation]:
    """Check all type invariants of a parsed entity.

    Total: returns violations as data and never raises on parseable
    input. Tag scoping is checked separately by `taxonomy.validate_tags`.
    """
    tree = taxonomy or builtin_taxonomy()
    if isinstance(entity, UnitModel):
        return _unit_model_violations(entity, tree, profile, "")
    if isinstance(entity, CompoundModel):
        return _compound_violations(entity, tree, profile)
    if isinstance(entity, Method):
        return _method_violations(entity, "")
    raise TypeError(f"not an entity: {type(entity).__name__}")
