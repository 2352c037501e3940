"""Categorization tree, tag vocabulary, and the classification rule engine.

The built-in tree carries the three tier levels (with ``pb`` and ``st``
roots) plus a small set of type-level nodes below ``dft``. Classification
works on declared model features: each category down to tier III has one
rule, a conjunction of required/forbidden features, and a model is placed
at the deepest category whose rule chain is fully satisfied. The engine
refuses ambiguous feature sets instead of guessing; disambiguation by
model objective is the caller's job (drop the non-objective feature).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

from .entities import CategoryNode, CategoryPath, TagDescriptor, TagKind, UnitModel
from .errors import (
    AmbiguityError,
    ContradictionError,
    DuplicateSlugError,
    NoMatchError,
    UnknownCategoryError,
    Violation,
)


class Feature(str, Enum):
    """Fixed vocabulary of model features the rules are written against."""

    PHYSICS_BASED = "physics-based"
    DATA_DRIVEN = "data-driven"
    ELECTRONIC_COORDINATES_OR_WAVEFUNCTION = "electronic-coordinates-or-wavefunction"
    FIRST_PRINCIPLES_WAVEFUNCTION = "first-principles-wavefunction"
    DENSITY_FUNCTIONAL = "density-functional"
    VALENCE_ONLY_OR_PARAMETRIZED_INTEGRALS = "valence-only-or-parametrized-integrals"
    ATOMIC_COORDINATES_ONLY = "atomic-coordinates-only"
    CONFLATED_PARTICLES = "conflated-particles"
    RANDOMNESS = "randomness"
    DETERMINISTIC = "deterministic"
    LINEAR_COMBINATION = "linear-combination"
    NEURAL_NETWORK = "neural-network"
    DECISION_TREE = "decision-tree"


# Which top-level branch a feature discriminates for. Asserting features
# from both branches at once is a contradiction, not an ambiguity.
_PB_FEATURES = frozenset(
    {
        Feature.PHYSICS_BASED,
        Feature.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION,
        Feature.FIRST_PRINCIPLES_WAVEFUNCTION,
        Feature.DENSITY_FUNCTIONAL,
        Feature.VALENCE_ONLY_OR_PARAMETRIZED_INTEGRALS,
        Feature.ATOMIC_COORDINATES_ONLY,
        Feature.CONFLATED_PARTICLES,
    }
)
_ST_FEATURES = frozenset(set(Feature) - _PB_FEATURES)

# Mutually exclusive pairs within one branch.
_EXCLUSIVE_PAIRS = (
    (Feature.RANDOMNESS, Feature.DETERMINISTIC),
    (Feature.ATOMIC_COORDINATES_ONLY, Feature.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION),
)


@dataclass(frozen=True)
class RuleTerm:
    feature: Feature
    asserted: bool = True


@dataclass(frozen=True)
class ClassificationRule:
    """One category's admission rule: a conjunction of feature terms."""

    rule_id: str
    target: CategoryPath
    terms: tuple[RuleTerm, ...]

    @property
    def description(self) -> str:
        requires = [t.feature.value for t in self.terms if t.asserted]
        excludes = [t.feature.value for t in self.terms if not t.asserted]
        parts = []
        if requires:
            parts.append("requires " + ", ".join(requires))
        if excludes:
            parts.append("excludes " + ", ".join(excludes))
        return "; ".join(parts)

    def satisfied_by(self, features: frozenset[Feature]) -> bool:
        return all(
            (term.feature in features) == term.asserted for term in self.terms
        )

    @property
    def parent_id(self) -> str | None:
        return self.rule_id.rsplit(".", 1)[0] if "." in self.rule_id else None


def _rule(rule_id: str, path: str, *terms: RuleTerm) -> ClassificationRule:
    return ClassificationRule(rule_id, CategoryPath.from_string(path), tuple(terms))


def _yes(f: Feature) -> RuleTerm:
    return RuleTerm(f, True)


def _no(f: Feature) -> RuleTerm:
    return RuleTerm(f, False)


RULES: tuple[ClassificationRule, ...] = (
    _rule("1", "pb", _yes(Feature.PHYSICS_BASED)),
    _rule("1.1", "pb/qm", _yes(Feature.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION)),
    _rule("1.1.1", "pb/qm/abin", _yes(Feature.FIRST_PRINCIPLES_WAVEFUNCTION)),
    _rule("1.1.2", "pb/qm/dft", _yes(Feature.DENSITY_FUNCTIONAL)),
    _rule("1.1.3", "pb/qm/semp", _yes(Feature.VALENCE_ONLY_OR_PARAMETRIZED_INTEGRALS)),
    _rule(
        "1.2",
        "pb/at",
        _yes(Feature.ATOMIC_COORDINATES_ONLY),
        _no(Feature.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION),
    ),
    _rule("1.3", "pb/mes", _yes(Feature.CONFLATED_PARTICLES)),
    _rule("2", "st", _yes(Feature.DATA_DRIVEN)),
    _rule("2.1", "st/prob", _yes(Feature.RANDOMNESS)),
    _rule("2.2", "st/det", _yes(Feature.DETERMINISTIC), _no(Feature.RANDOMNESS)),
    _rule("2.2.1", "st/det/lin", _yes(Feature.LINEAR_COMBINATION)),
    _rule("2.2.2", "st/det/nn", _yes(Feature.NEURAL_NETWORK)),
    _rule("2.2.3", "st/det/dtr", _yes(Feature.DECISION_TREE)),
)

RULES_BY_ID = {r.rule_id: r for r in RULES}
_RULES_BY_TARGET = {r.target.joined(): r for r in RULES}


def rule_for_path(path: CategoryPath) -> ClassificationRule | None:
    return _RULES_BY_TARGET.get(path.joined())


_SLUG_RE = re.compile(r"^[a-z0-9-]+$")


class TaxonomyTree:
    """Immutable categorization tree.

    Nodes are addressed by their slug path from a root. Extension returns
    a new tree; built-in nodes are never removed.
    """

    def __init__(self, nodes: dict[tuple[str, ...], CategoryNode]):
        self._nodes = dict(nodes)
        self._children: dict[tuple[str, ...], list[str]] = {}
        for key in self._nodes:
            self._children.setdefault(key[:-1], []).append(key[-1])

    def contains(self, path: CategoryPath) -> bool:
        return path.slugs() in self._nodes

    def node(self, path: CategoryPath) -> CategoryNode:
        try:
            return self._nodes[path.slugs()]
        except KeyError:
            raise UnknownCategoryError(f"unknown category path: {path}") from None

    def children(self, path: CategoryPath | None) -> tuple[CategoryNode, ...]:
        key = path.slugs() if path is not None else ()
        return tuple(
            self._nodes[key + (slug,)] for slug in self._children.get(key, ())
        )

    def name_of(self, path: CategoryPath) -> str:
        return self.node(path).name

    def all_paths(self) -> tuple[CategoryPath, ...]:
        return tuple(
            CategoryPath.from_slugs(key)
            for key in self._nodes
        )

    def tier_leaves(self) -> tuple[CategoryPath, ...]:
        """Tier-level paths (depth <= 3) without child tiers.

        Type and subtype nodes sit below the tier structure and do not
        affect leaf-ness.
        """
        leaves = []
        for key, node in self._nodes.items():
            if node.tier_level > 3:
                continue
            child_tiers = [
                s
                for s in self._children.get(key, ())
                if self._nodes[key + (s,)].tier_level <= 3
            ]
            if not child_tiers:
                leaves.append(CategoryPath.from_slugs(key))
        return tuple(leaves)

    def extend(self, parent: CategoryPath, node: CategoryNode) -> "TaxonomyTree":
        """Return a new tree with ``node`` registered under ``parent``."""
        parent_key = parent.slugs()
        if parent_key not in self._nodes:
            raise UnknownCategoryError(f"unknown category path: {parent}")
        if not _SLUG_RE.match(node.slug):
            raise ValueError(f"not a valid slug: {node.slug!r}")
        key = parent_key + (node.slug,)
        if key in self._nodes:
            raise DuplicateSlugError(
                f"slug {node.slug!r} already registered under {parent}"
            )
        expected_level = self._nodes[parent_key].tier_level + 1
        if node.tier_level != expected_level:
            raise ValueError(
                f"tier level of {node.slug!r} must be {expected_level}, "
                f"got {node.tier_level}"
            )
        if len(key) > 5:
            raise ValueError("taxonomy is at most five levels deep")
        nodes = dict(self._nodes)
        nodes[key] = CategoryNode(
            node.slug, node.name, node.tier_level, parent_slug=parent_key[-1]
        )
        return TaxonomyTree(nodes)


def _builtin_nodes() -> dict[tuple[str, ...], CategoryNode]:
    entries = (
        (("pb",), "Physics-based"),
        (("pb", "qm"), "Quantum-mechanical"),
        (("pb", "qm", "abin"), "Ab initio"),
        (("pb", "qm", "dft"), "Density functional theory"),
        (("pb", "qm", "dft", "ksdft"), "Kohn-Sham DFT"),
        (("pb", "qm", "dft", "ofdft"), "Orbital-free DFT"),
        (("pb", "qm", "semp"), "Semi-empirical"),
        (("pb", "at"), "Atomistic"),
        (("pb", "mes"), "Mesoscopic"),
        (("st",), "Statistical"),
        (("st", "prob"), "Probabilistic"),
        (("st", "det"), "Deterministic"),
        (("st", "det", "lin"), "Linear"),
        (("st", "det", "nn"), "Neural network"),
        (("st", "det", "dtr"), "Decision tree"),
    )
    nodes = {}
    for key, name in entries:
        parent = key[-2] if len(key) > 1 else None
        nodes[key] = CategoryNode(key[-1], name, len(key), parent_slug=parent)
    return nodes


_BUILTIN = TaxonomyTree(_builtin_nodes())


def builtin_taxonomy() -> TaxonomyTree:
    return _BUILTIN


def load_taxonomy_extension(
    source: str | Path | list, base: TaxonomyTree | None = None
) -> TaxonomyTree:
    """Apply a taxonomy extension file (list of {parentPath, slug, name,
    tierLevel}) on top of ``base``."""
    if isinstance(source, (str, Path)):
        entries = json.loads(Path(source).read_text(encoding="utf-8"))
    else:
        entries = source
    if not isinstance(entries, list):
        raise ValueError("taxonomy extension must be a JSON list")
    tree = base or builtin_taxonomy()
    for entry in entries:
        parent = CategoryPath.from_string(entry["parentPath"])
        node = CategoryNode(
            slug=entry["slug"],
            name=entry["name"],
            tier_level=int(entry["tierLevel"]),
        )
        tree = tree.extend(parent, node)
    return tree


def _normalize_features(features: Iterable[Feature | str]) -> frozenset[Feature]:
    out = set()
    for f in features:
        out.add(f if isinstance(f, Feature) else Feature(f))
    return frozenset(out)


def check_features(features: Iterable[Feature | str]) -> frozenset[Feature]:
    """Normalize a feature set, raising on contradictory assertions."""
    fs = _normalize_features(features)
    for a, b in _EXCLUSIVE_PAIRS:
        if a in fs and b in fs:
            raise ContradictionError(f"{a.value} contradicts {b.value}")
    pb = sorted(f.value for f in fs & _PB_FEATURES)
    st = sorted(f.value for f in fs & _ST_FEATURES)
    if pb and st:
        raise ContradictionError(
            f"{pb[0]} (physics branch) contradicts {st[0]} (statistical branch); "
            "drop the feature that is not the model's objective"
        )
    return fs


def _child_rules(rule: ClassificationRule) -> tuple[ClassificationRule, ...]:
    return tuple(r for r in RULES if r.parent_id == rule.rule_id)


def classify(features: Iterable[Feature | str]) -> CategoryPath:
    """Place a feature set at the deepest category whose rule chain holds.

    Raises ContradictionError on conflicting features, NoMatchError when
    no root rule is satisfied, and AmbiguityError when two sibling rules
    match at the same depth.
    """
    fs = check_features(features)
    roots = [r for r in RULES if r.parent_id is None and r.satisfied_by(fs)]
    if not roots:
        raise NoMatchError("no classification rule matches the feature set")
    if len(roots) > 1:
        raise AmbiguityError([r.target.joined() for r in roots])
    rule = roots[0]
    while True:
        matching = [r for r in _child_rules(rule) if r.satisfied_by(fs)]
        if len(matching) > 1:
            raise AmbiguityError([r.target.joined() for r in matching])
        if not matching:
            return rule.target
        rule = matching[0]


def audit_category_path(
    path: CategoryPath,
    features: Iterable[Feature | str],
    taxonomy: TaxonomyTree | None = None,
) -> list[Violation]:
    """Check a declared category path against the rules it implies.

    Returns one violation per rule level (tiers I-III) the features fail
    to satisfy. Type/subtype levels carry no rules and validate by
    existence only.
    """
    tree = taxonomy or builtin_taxonomy()
    if not tree.contains(path):
        raise UnknownCategoryError(f"unknown category path: {path}")
    fs = _normalize_features(features)
    violations = []
    for depth in range(1, min(path.depth, 3) + 1):
        prefix = path.truncate(depth)
        rule = rule_for_path(prefix)
        if rule is None:
            continue
        if not rule.satisfied_by(fs):
            level_name = prefix.levels()[-1][0]
            violations.append(
                Violation(
                    path=f"/categories/{level_name}",
                    rule_id=rule.rule_id,
                    message=(
                        f"declared category {prefix} fails its rule "
                        f"({rule.description})"
                    ),
                )
            )
    return violations


# Controlled tag vocabulary: label -> scope path at which it applies.
CONTROLLED_TAG_SCOPES: dict[str, str] = {
    "relativistic": "pb",
    "user-adjustable": "pb",
    "self-consistent": "pb/qm",
    "temperature": "pb/qm",
    "excited-states": "pb/qm",
    "spin-orbit-coupling": "pb/qm",
    "variational": "pb/qm",
    "single-reference": "pb/qm",
    "multi-reference": "pb/qm",
    "perturbative": "pb/qm/abin",
}

SCALING_POWER_PREFIX = "scaling-power:"
_SCALING_POWER_RE = re.compile(r"^scaling-power:(\d+)$")
SCALING_POWER_SCOPE = "pb"


def tag_scope(label: str) -> TagDescriptor:
    """Resolve a tag label to its descriptor.

    Controlled-vocabulary labels carry their registered scope; anything
    else is a user tag with universal scope. Never raises.
    """
    scope = CONTROLLED_TAG_SCOPES.get(label)
    if scope is not None:
        return TagDescriptor(label, CategoryPath.from_string(scope), TagKind.ATTRIBUTE)
    match = _SCALING_POWER_RE.match(label)
    if match:
        return TagDescriptor(
            label,
            CategoryPath.from_string(SCALING_POWER_SCOPE),
            TagKind.ATTRIBUTE,
            parameter=int(match.group(1)),
        )
    return TagDescriptor(label, None, TagKind.USER)


def validate_tags(model: UnitModel) -> list[Violation]:
    """One violation per controlled tag used outside its scope."""
    violations = []
    for i, label in enumerate(model.tags):
        descriptor = tag_scope(label)
        if descriptor.scope_path is None:
            continue
        if not descriptor.scope_path.is_prefix_of(model.categories):
            violations.append(
                Violation(
                    path=f"/tags/{i}",
                    rule_id="tag.scope",
                    message=(
                        f"tag {label!r} applies under {descriptor.scope_path} "
                        f"but the model is categorized {model.categories}"
                    ),
                )
            )
    return violations
