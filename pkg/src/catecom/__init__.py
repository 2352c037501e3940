"""Categorization framework and metadata tooling for computational models.

Typed entities for unit models, compound models, and methods; a
rule-driven taxonomy; canonical fingerprinting; and a searchable
file-backed registry, all exposed through the ``catecom`` CLI.
"""

from .builder import (
    FUNCTIONAL_LIBRARY,
    FunctionalLibraryEntry,
    build_unit_model,
    builtin_corpus,
    compose_compound_model,
    fixture_dir,
    fixture_names,
    load_fixture,
    load_fixture_bytes,
    resolve_functional,
    validate_compound_model,
)
from .documents import (
    dumps_canonical,
    from_document,
    parse_any,
    parse_document,
    serialize_document,
    sniff_kind,
    to_document,
    validate_entity,
)
from .entities import (
    CategoryNode,
    CategoryPath,
    ComponentType,
    CompoundModel,
    EntityKind,
    Fingerprint,
    Functional,
    FunctionalComponent,
    Method,
    MethodParameter,
    ModelGraphNode,
    PropertyRecord,
    RangeKind,
    TagDescriptor,
    TagKind,
    Triple,
    UnitModel,
    UnitType,
    ValidationProfile,
    WorkflowUnitStub,
)
from .errors import (
    AmbiguityError,
    CatecomError,
    ContradictionError,
    DocumentSyntaxError,
    DuplicateFingerprintError,
    DuplicateFlowchartIdError,
    DuplicateSlugError,
    MissingWorkflowUnitError,
    NoMatchError,
    NotFoundError,
    SchemaError,
    TagScopeError,
    TypeMismatchError,
    UnknownCategoryError,
    UnknownFilterError,
    UnknownFunctionalError,
    UnknownNodeError,
    UnmappedUnitError,
    ValidationError,
    Violation,
)
from .interop import (
    InteropBinding,
    bind,
    binding_to_document,
    last_occurrence,
    property_trace,
    record_property,
)
from .methods import (
    FlavorDefaults,
    PrecisionFeature,
    PrecisionFeatureVector,
    diff_against_defaults,
    extract_precision_features,
    feature_passthrough,
    load_flavor_defaults,
    merge_methods,
    score_method,
)
from .registry import Registry, StoreResult, fingerprint
from .taxonomy import (
    CONTROLLED_TAG_SCOPES,
    ClassificationRule,
    Feature,
    RULES,
    TaxonomyTree,
    audit_category_path,
    builtin_taxonomy,
    classify,
    load_taxonomy_extension,
    tag_scope,
    validate_tags,
)
from .triples import export_triples, to_json, to_ntriples

__version__ = "0.1.0"
