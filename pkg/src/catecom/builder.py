"""Construction of unit and compound models, plus the functional library.

The library carries component breakdowns for common density-functional
approximations. Hybrid range separation is encoded per component via
``range_kind`` and a ``screening_parameter`` (inverse length, implied
bohr^-1); a plain GGA component has neither.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .documents import (
    parse_any,
    serialize_document,
    validate_compound_graph,
    validate_entity,
)
from .entities import (
    CategoryPath,
    ComponentType,
    CompoundModel,
    Functional,
    FunctionalComponent,
    Method,
    ModelGraphNode,
    RangeKind,
    UnitModel,
)
from .errors import (
    DuplicateFlowchartIdError,
    TagScopeError,
    UnknownCategoryError,
    UnknownFunctionalError,
    UnmappedUnitError,
    ValidationError,
    Violation,
)
from .taxonomy import TaxonomyTree, builtin_taxonomy, validate_tags


@dataclass(frozen=True)
class FunctionalLibraryEntry:
    slug: str
    name: str
    default_components: tuple[FunctionalComponent, ...]


def _entry(slug: str, name: str, *components: FunctionalComponent):
    return FunctionalLibraryEntry(slug, name, tuple(components))


# HSE06 screening parameter in inverse bohr.
_HSE06_OMEGA = 0.11

FUNCTIONAL_LIBRARY: dict[str, FunctionalLibraryEntry] = {
    e.slug: e
    for e in (
        _entry(
            "pbe",
            "PBE",
            FunctionalComponent(
                "PBE exchange", "pbe-exchange", ComponentType.EXCHANGE, 1.0
            ),
            FunctionalComponent(
                "PBE correlation", "pbe-correlation", ComponentType.CORRELATION, 1.0
            ),
        ),
        _entry(
            "hse06",
            "HSE06",
            FunctionalComponent(
                "Short-range exact exchange",
                "exact-exchange-sr",
                ComponentType.EXCHANGE,
                0.25,
                range_kind=RangeKind.SHORT_RANGE,
                screening_parameter=_HSE06_OMEGA,
            ),
            FunctionalComponent(
                "Short-range PBE exchange",
                "pbe-exchange-sr",
                ComponentType.EXCHANGE,
                0.75,
                range_kind=RangeKind.SHORT_RANGE,
                screening_parameter=_HSE06_OMEGA,
            ),
            FunctionalComponent(
                "Long-range PBE exchange",
                "pbe-exchange-lr",
                ComponentType.EXCHANGE,
                1.0,
                range_kind=RangeKind.LONG_RANGE,
                screening_parameter=_HSE06_OMEGA,
            ),
            FunctionalComponent(
                "PBE correlation", "pbe-correlation", ComponentType.CORRELATION, 1.0
            ),
        ),
        _entry(
            "gam",
            "GAM",
            FunctionalComponent(
                "GAM exchange-correlation",
                "gam-xc",
                ComponentType.EXCHANGE_CORRELATION,
                1.0,
            ),
        ),
        _entry(
            "thomas-fermi",
            "Thomas-Fermi",
            FunctionalComponent(
                "Thomas-Fermi kinetic energy",
                "thomas-fermi-kinetic",
                ComponentType.KINETIC,
                1.0,
            ),
        ),
        _entry(
            "vv10",
            "VV10",
            FunctionalComponent(
                "VV10 non-local correlation",
                "vv10-nlc",
                ComponentType.NON_LOCAL_CORRELATION,
                1.0,
            ),
        ),
    )
}


def resolve_functional(functional: str | Functional) -> Functional:
    if isinstance(functional, Functional):
        return functional
    entry = FUNCTIONAL_LIBRARY.get(functional)
    if entry is None:
        raise UnknownFunctionalError(
            f"unknown functional {functional!r}; known: "
            + ", ".join(sorted(FUNCTIONAL_LIBRARY))
        )
    return Functional(entry.name, entry.slug, entry.default_components)


def build_unit_model(
    path: CategoryPath | str,
    name: str,
    slug: str,
    flowchart_id: str,
    *,
    functional: str | Functional | None = None,
    tags: Iterable[str] = (),
    augmentations: Iterable[str] = (),
    modifiers: Iterable[str] = (),
    references: Iterable[str] = (),
    method: Method | None = None,
    extras: Mapping[str, Any] | None = None,
    taxonomy: TaxonomyTree | None = None,
) -> UnitModel:
    """Build a unit model that passes entity and tag validation.

    Raises UnknownCategoryError / UnknownFunctionalError on unresolvable
    inputs, TagScopeError when a controlled tag lands outside its scope,
    and ValidationError for any other violated invariant.
    """
    tree = taxonomy or builtin_taxonomy()
    if isinstance(path, str):
        path = CategoryPath.from_string(path)
    if not tree.contains(path):
        raise UnknownCategoryError(f"unknown category path: {path}")
    model = UnitModel(
        categories=path,
        name=name,
        slug=slug,
        flowchart_id=flowchart_id,
        tags=tuple(tags),
        augmentations=tuple(augmentations),
        modifiers=tuple(modifiers),
        references=tuple(references),
        functional=resolve_functional(functional) if functional is not None else None,
        method=method,
        extras=dict(extras or {}),
    )
    tag_violations = validate_tags(model)
    if tag_violations:
        raise TagScopeError(tag_violations)
    violations = validate_entity(model, taxonomy=tree)
    if violations:
        raise ValidationError(violations)
    return model


def compose_compound_model(
    unit_models: Sequence[UnitModel],
    workflow_mapping: Mapping[str, str],
    global_method: Method,
) -> CompoundModel:
    """Chain unit models in list order into a compound model.

    The first node is the head, each node points to its successor, and
    several flowchartIds may share one workflow unit.
    """
    seen: set[str] = set()
    for u in unit_models:
        if u.flowchart_id in seen:
            raise DuplicateFlowchartIdError(
                f"duplicate flowchartId {u.flowchart_id!r}"
            )
        seen.add(u.flowchart_id)
    unmapped = [u.flowchart_id for u in unit_models if u.flowchart_id not in workflow_mapping]
    if unmapped:
        raise UnmappedUnitError(
            "unit models without workflow mapping: " + ", ".join(unmapped)
        )
    nodes = []
    for i, u in enumerate(unit_models):
        successor = unit_models[i + 1].flowchart_id if i + 1 < len(unit_models) else None
        nodes.append(
            ModelGraphNode(
                flowchart_id=u.flowchart_id,
                name=u.name,
                slug=u.slug,
                head=(i == 0),
                workflow_unit_id=workflow_mapping[u.flowchart_id],
                next=successor,
            )
        )
    return CompoundModel(
        model_graph=tuple(nodes),
        method=global_method,
        units={u.flowchart_id: u for u in unit_models},
    )


def validate_compound_model(cm: CompoundModel) -> list[Violation]:
    """Graph contract of a compound model; violations as data."""
    return validate_compound_graph(cm)


def fixture_dir() -> Path:
    return Path(str(resources.files("catecom").joinpath("fixtures")))


def fixture_names() -> list[str]:
    return sorted(p.name for p in fixture_dir().glob("*.json"))


def load_fixture(name: str):
    """Parse one shipped fixture by filename."""
    raw = fixture_dir().joinpath(name).read_bytes()
    return parse_any(raw)


def load_fixture_bytes(name: str) -> bytes:
    return fixture_dir().joinpath(name).read_bytes()


def builtin_corpus() -> dict[str, Any]:
    """All shipped fixtures, parsed, keyed by filename."""
    return {name: load_fixture(name) for name in fixture_names()}


def write_fixture(entity, path: str | Path) -> None:
    Path(path).write_bytes(serialize_document(entity))
