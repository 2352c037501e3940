"""Method-entity logic: default diffing, precision features, merging.

Values are compared by kind first (boolean, number, string, array), so a
boolean never equals an integer and no numeric tolerance is applied;
stored values are user-specified literals. Units are opaque strings with
no conversion semantics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

from .documents import is_numeric_value
from .entities import Method, MethodParameter
from .errors import TypeMismatchError


@dataclass(frozen=True)
class FlavorDefaults:
    """Default input variables associated with one workflow flavor."""

    flavor_id: str
    defaults: Mapping[str, Any]


@dataclass(frozen=True)
class PrecisionFeature:
    key: str
    value: float | int
    unit: str | None = None


@dataclass(frozen=True)
class PrecisionFeatureVector:
    """Numeric precision parameters in sorted key order, plus the names
    of precision parameters excluded for being non-numeric."""

    entries: tuple[PrecisionFeature, ...]
    excluded: tuple[str, ...] = ()


def value_kind(value: Any) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, (list, tuple)):
        return "array"
    return type(value).__name__


def values_equal(a: Any, b: Any) -> bool:
    if value_kind(a) != value_kind(b):
        return False
    if isinstance(a, tuple) or isinstance(b, tuple):
        return tuple(a) == tuple(b)
    return a == b


def diff_against_defaults(
    parameters: Iterable[MethodParameter], defaults: FlavorDefaults
) -> list[MethodParameter]:
    """Parameters whose value deviates from the flavor default (or that
    have no default), preserving input order."""
    return [
        p
        for p in parameters
        if p.key not in defaults.defaults
        or not values_equal(p.value, defaults.defaults[p.key])
    ]


def extract_precision_features(m: Method) -> PrecisionFeatureVector:
    """Numeric scalar precision parameters, sorted by key.

    Non-numeric (and array-valued) precision parameters cannot serve as
    scalar features; they are excluded and reported by name.
    """
    entries = []
    excluded = []
    for key in sorted(m.precision):
        param = m.parameter(key)
        if param is None:
            excluded.append(key)
            continue
        value = param.value
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            excluded.append(key)
            continue
        entries.append(PrecisionFeature(key, value, param.unit))
    return PrecisionFeatureVector(tuple(entries), tuple(excluded))


def merge_methods(global_method: Method, local_method: Method) -> Method:
    """Layer a local method over a global one.

    Local parameter keys override global ones; the data map is merged
    with local priority; type/subtype come from the local method. The
    precision list is rebuilt from both lists against the merged
    parameters so the precision/parameter consistency invariant always
    holds, and merging a method with itself is the identity.
    """
    merged: dict[str, MethodParameter] = {p.key: p for p in global_method.parameters}
    for p in local_method.parameters:
        existing = merged.get(p.key)
        if existing is not None and value_kind(existing.value) != value_kind(p.value):
            raise TypeMismatchError(
                f"parameter {p.key!r} is {value_kind(existing.value)} globally "
                f"but {value_kind(p.value)} locally"
            )
        merged[p.key] = p
    parameters = tuple(merged.values())
    # Union of the precision lists (local entries first), restricted to
    # keys that stay precision-categorized after the merge; any newly
    # precision-categorized key is appended in sorted order.
    precision_keys = {p.key for p in parameters if "precision" in p.categories}
    ordered: list[str] = []
    for key in (*local_method.precision, *global_method.precision):
        if key in precision_keys and key not in ordered:
            ordered.append(key)
    for key in sorted(precision_keys):
        if key not in ordered:
            ordered.append(key)
    precision = tuple(ordered)
    data = dict(global_method.data)
    data.update(local_method.data)
    return Method(
        type=local_method.type,
        subtype=local_method.subtype,
        parameters=parameters,
        precision=precision,
        data=data,
    )


# A scoring plug maps a feature vector to whatever score representation
# the caller layers on; no default formula is claimed.
PrecisionScorer = Callable[[PrecisionFeatureVector], Any]


def feature_passthrough(vector: PrecisionFeatureVector) -> PrecisionFeatureVector:
    """Reference scoring plug: exposes the features unchanged."""
    return vector


def score_method(m: Method, scorer: PrecisionScorer = feature_passthrough) -> Any:
    return scorer(extract_precision_features(m))


def load_flavor_defaults(source: str | Path | dict) -> dict[str, FlavorDefaults]:
    """Load a flavor-defaults file: JSON map flavorId -> {key: value}."""
    if isinstance(source, (str, Path)):
        data = json.loads(Path(source).read_text(encoding="utf-8"))
    else:
        data = source
    if not isinstance(data, dict):
        raise ValueError("flavor defaults must be a JSON object")
    out = {}
    for flavor_id, defaults in data.items():
        if not isinstance(defaults, dict):
            raise ValueError(f"defaults for {flavor_id!r} must be an object")
        out[flavor_id] = FlavorDefaults(flavor_id, dict(defaults))
    return out
