"""Exception hierarchy and the :class:`Violation` diagnostic record."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    """One failed invariant, reported as data rather than raised.

    ``path`` is a JSON-pointer-style location within the offending
    document, ``rule_id`` a stable machine token naming the rule.
    """

    path: str
    rule_id: str
    message: str

    def render(self, filename: str) -> str:
        return f"{filename}:{self.path}: {self.rule_id}: {self.message}"


class CatecomError(Exception):
    """Base class for all library errors."""


class DocumentSyntaxError(CatecomError):
    """Raw input is not well-formed JSON."""


class SchemaError(CatecomError):
    """Well-formed document that violates the entity schema."""

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class ValidationError(CatecomError):
    """An operation required a valid entity but got violations instead."""

    def __init__(self, violations, message: str = "entity fails validation"):
        self.violations = list(violations)
        detail = "; ".join(v.render("") for v in self.violations)
        super().__init__(f"{message}: {detail}" if detail else message)


class TagScopeError(ValidationError):
    """A controlled-vocabulary tag was used outside its scope."""

    def __init__(self, violations):
        super().__init__(violations, "tag outside its applicable scope")


class ContradictionError(CatecomError):
    """Feature set asserts mutually exclusive model features."""


class AmbiguityError(CatecomError):
    """Two sibling classification rules are satisfied at once."""

    def __init__(self, candidates):
        self.candidates = list(candidates)
        super().__init__(
            "ambiguous classification, candidates: " + ", ".join(self.candidates)
        )


class NoMatchError(CatecomError):
    """No classification rule matches the feature set."""


class UnknownCategoryError(CatecomError):
    """Category path is not registered in the taxonomy."""


class DuplicateSlugError(CatecomError):
    """Slug already registered under the same parent category."""


class UnknownFunctionalError(CatecomError):
    """Functional slug not present in the functional library."""


class DuplicateFlowchartIdError(CatecomError):
    """Two unit models share a flowchartId within one compound model."""


class UnmappedUnitError(CatecomError):
    """A unit model has no workflow-unit mapping."""


class MissingWorkflowUnitError(CatecomError):
    """A model-graph node references a workflow unit that was not supplied."""


class UnknownNodeError(CatecomError):
    """flowchartId does not name a node of the compound model."""


class TypeMismatchError(CatecomError):
    """The same parameter key carries values of different kinds."""


class DuplicateFingerprintError(CatecomError):
    """An entity with the same fingerprint is already stored."""

    def __init__(self, digest: str, existing_id: str):
        self.digest = digest
        self.existing_id = existing_id
        super().__init__(f"fingerprint {digest} already stored as {existing_id}")


class NotFoundError(CatecomError):
    """No stored document under the given id."""


class UnknownFilterError(CatecomError):
    """Query filter key is not part of the filter vocabulary."""
