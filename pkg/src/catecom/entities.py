"""Typed domain entities for computational-model metadata.

Entities are immutable values: the dataclasses are frozen and sequence
fields are normalized to tuples on construction, so they can be shared
freely between threads and reused across compound models. Mapping fields
(``extras``, ``data``, ``units``) are plain dicts owned by the entity and
must not be mutated after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class EntityKind(str, Enum):
    UNIT_MODEL = "unit-model"
    COMPOUND_MODEL = "compound-model"
    METHOD = "method"


class ComponentType(str, Enum):
    EXCHANGE = "exchange"
    CORRELATION = "correlation"
    EXCHANGE_CORRELATION = "exchange-correlation"
    KINETIC = "kinetic"
    NON_LOCAL_CORRELATION = "non-local-correlation"


class RangeKind(str, Enum):
    FULL = "full"
    SHORT_RANGE = "short-range"
    LONG_RANGE = "long-range"


class TagKind(str, Enum):
    ATTRIBUTE = "attribute"
    MODIFIER = "modifier"
    AUGMENTATION = "augmentation"
    USER = "user"


class UnitType(str, Enum):
    EXECUTION = "execution"
    IO = "io"
    CONDITIONAL = "conditional"
    OTHER = "other"


class ValidationProfile(str, Enum):
    STRICT = "strict"
    PERMISSIVE = "permissive"


# Category levels in hierarchy order: three tiers, then type and subtype.
LEVEL_NAMES = ("tier1", "tier2", "tier3", "type", "subtype")


def _freeze(obj: Any, *names: str) -> None:
    for name in names:
        value = getattr(obj, name)
        if isinstance(value, list):
            object.__setattr__(obj, name, tuple(value))


@dataclass(frozen=True)
class CategoryPath:
    """Ordered taxonomy coordinates locating a unit model in the tree."""

    tier1: str
    tier2: str | None = None
    tier3: str | None = None
    type: str | None = None
    subtype: str | None = None

    def levels(self) -> tuple[tuple[str, str], ...]:
        """(level name, slug) pairs for the levels that are present."""
        return tuple(
            (name, slug)
            for name, slug in zip(LEVEL_NAMES, self._raw())
            if slug is not None
        )

    def _raw(self) -> tuple[str | None, ...]:
        return (self.tier1, self.tier2, self.tier3, self.type, self.subtype)

    def slugs(self) -> tuple[str, ...]:
        return tuple(slug for _, slug in self.levels())

    @property
    def depth(self) -> int:
        return len(self.levels())

    def is_contiguous(self) -> bool:
        """True when present levels form a prefix of the level order."""
        raw = self._raw()
        seen_gap = False
        for slug in raw:
            if slug is None:
                seen_gap = True
            elif seen_gap:
                return False
        return True

    def joined(self) -> str:
        return "/".join(self.slugs())

    def __str__(self) -> str:
        return self.joined()

    @classmethod
    def from_string(cls, text: str) -> "CategoryPath":
        parts = [p for p in text.strip().split("/") if p]
        if not parts or len(parts) > len(LEVEL_NAMES):
            raise ValueError(f"not a category path: {text!r}")
        return cls(*parts)

    @classmethod
    def from_slugs(cls, slugs) -> "CategoryPath":
        slugs = tuple(slugs)
        if not slugs or len(slugs) > len(LEVEL_NAMES):
            raise ValueError(f"not a category path: {slugs!r}")
        return cls(*slugs)

    def is_prefix_of(self, other: "CategoryPath") -> bool:
        mine, theirs = self.slugs(), other.slugs()
        return theirs[: len(mine)] == mine

    def truncate(self, depth: int) -> "CategoryPath":
        return CategoryPath.from_slugs(self.slugs()[:depth])

    def prefixes(self) -> tuple["CategoryPath", ...]:
        """All prefixes of this path, shortest first, including itself."""
        slugs = self.slugs()
        return tuple(
            CategoryPath.from_slugs(slugs[:n]) for n in range(1, len(slugs) + 1)
        )


@dataclass(frozen=True)
class CategoryNode:
    """One registered category: machine slug plus human-readable name."""

    slug: str
    name: str
    tier_level: int
    parent_slug: str | None = None


@dataclass(frozen=True)
class TagDescriptor:
    """A tag label with the scope at which it becomes applicable.

    ``scope_path`` is ``None`` for user-defined tags, which apply
    everywhere. ``parameter`` carries the integer of parameterized
    labels such as ``scaling-power:3``.
    """

    label: str
    scope_path: CategoryPath | None
    kind: TagKind
    parameter: int | None = None


@dataclass(frozen=True)
class FunctionalComponent:
    """One contribution entering a density-functional approximation."""

    name: str
    slug: str
    component_type: ComponentType
    fraction: float
    range_kind: RangeKind | None = None
    screening_parameter: float | None = None


@dataclass(frozen=True)
class Functional:
    name: str
    slug: str
    components: tuple[FunctionalComponent, ...]

    def __post_init__(self):
        _freeze(self, "components")


@dataclass(frozen=True)
class MethodParameter:
    """Annotated input variable: key as it appears in the input file,
    its value, category keywords, and an optional unit for numeric values."""

    key: str
    value: Any
    categories: tuple[str, ...] = ()
    unit: str | None = None

    def __post_init__(self):
        _freeze(self, "categories")
        if isinstance(self.value, list):
            object.__setattr__(self, "value", tuple(self.value))


@dataclass(frozen=True)
class Method:
    """Precision-side counterpart of a model: typed parameters, the list
    of precision-relevant parameter keys, and auxiliary data."""

    type: str
    subtype: str
    parameters: tuple[MethodParameter, ...] = ()
    precision: tuple[str, ...] = ()
    data: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        _freeze(self, "parameters", "precision")

    def parameter(self, key: str) -> MethodParameter | None:
        for p in self.parameters:
            if p.key == key:
                return p
        return None


@dataclass(frozen=True)
class UnitModel:
    """Smallest logically consistent model unit."""

    categories: CategoryPath
    name: str
    slug: str
    flowchart_id: str
    tags: tuple[str, ...] = ()
    augmentations: tuple[str, ...] = ()
    modifiers: tuple[str, ...] = ()
    references: tuple[str, ...] = ()
    functional: Functional | None = None
    method: Method | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        _freeze(self, "tags", "augmentations", "modifiers", "references")


@dataclass(frozen=True)
class ModelGraphNode:
    """Node of a compound model's graph: one unit model plus chain links
    and the workflow unit it is carried out by."""

    flowchart_id: str
    name: str
    slug: str
    head: bool
    workflow_unit_id: str
    next: str | None = None


@dataclass(frozen=True)
class CompoundModel:
    """A head-linked chain of unit-model nodes plus a global method."""

    model_graph: tuple[ModelGraphNode, ...]
    method: Method
    units: dict[str, UnitModel] = field(default_factory=dict)

    def __post_init__(self):
        _freeze(self, "model_graph")

    def node(self, flowchart_id: str) -> ModelGraphNode | None:
        for n in self.model_graph:
            if n.flowchart_id == flowchart_id:
                return n
        return None

    def ordered_nodes(self) -> tuple[ModelGraphNode, ...]:
        """Nodes in chain order, following ``next`` from the head.

        Raises ValueError when the graph is not a single covering chain;
        validate first when the input is untrusted.
        """
        heads = [n for n in self.model_graph if n.head]
        if len(heads) != 1:
            raise ValueError(f"expected exactly one head node, found {len(heads)}")
        by_id = {n.flowchart_id: n for n in self.model_graph}
        if len(by_id) != len(self.model_graph):
            raise ValueError("duplicate flowchartId in model graph")
        ordered: list[ModelGraphNode] = []
        seen: set[str] = set()
        current: ModelGraphNode | None = heads[0]
        while current is not None:
            if current.flowchart_id in seen:
                raise ValueError("cycle in model graph")
            ordered.append(current)
            seen.add(current.flowchart_id)
            current = by_id.get(current.next) if current.next is not None else None
        if len(ordered) != len(self.model_graph):
            raise ValueError("model graph chain does not cover all nodes")
        return tuple(ordered)

    def chain_positions(self) -> dict[str, int]:
        """flowchartId -> zero-based position along the chain."""
        return {n.flowchart_id: i for i, n in enumerate(self.ordered_nodes())}


@dataclass(frozen=True)
class WorkflowUnitStub:
    """Minimal workflow-unit handle needed for model interoperation."""

    id: str
    unit_type: UnitType
    application: str
    flavor_id: str | None = None


@dataclass(frozen=True)
class PropertyRecord:
    """Provenance of one property value along a compound-model chain."""

    name: str
    source_flowchart_id: str
    source_workflow_unit_id: str
    order: int
    a_priori: bool = False


@dataclass(frozen=True)
class Fingerprint:
    """Content digest of a canonicalized model+method combination."""

    digest: str
    canonical_form: bytes


@dataclass(frozen=True)
class Triple:
    """Subject/predicate/object statement for ontology interoperation."""

    subject: str
    predicate: str
    object: str
    object_is_iri: bool = False
