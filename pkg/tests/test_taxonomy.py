from __future__ import annotations

import pytest
from hypothesis import given, settings

from catecom.entities import CategoryNode, CategoryPath, TagKind, UnitModel
from catecom.errors import (
    AmbiguityError,
    ContradictionError,
    DuplicateSlugError,
    NoMatchError,
    UnknownCategoryError,
)
from catecom.taxonomy import (
    Feature,
    RULES,
    audit_category_path,
    builtin_taxonomy,
    classify,
    load_taxonomy_extension,
    tag_scope,
    validate_tags,
)

from strategies import branch_feature_sets, feature_sets

F = Feature


def path(text: str) -> CategoryPath:
    return CategoryPath.from_string(text)


def model_at(p: CategoryPath | str, tags=()) -> UnitModel:
    if isinstance(p, str):
        p = path(p)
    return UnitModel(
        categories=p, name="m", slug="m", flowchart_id="f", tags=tuple(tags)
    )


class TestTree:
    def test_builtin_children(self):
        tree = builtin_taxonomy()
        children = lambda p: {n.slug for n in tree.children(path(p))}
        assert children("pb") == {"qm", "at", "mes"}
        assert children("pb/qm") == {"abin", "dft", "semp"}
        assert children("st") == {"prob", "det"}
        assert children("st/det") == {"lin", "nn", "dtr"}

    def test_tier_leaves_match_tree_structure(self):
        leaves = {p.joined() for p in builtin_taxonomy().tier_leaves()}
        assert leaves == {
            "pb/qm/abin",
            "pb/qm/dft",
            "pb/qm/semp",
            "pb/at",
            "pb/mes",
            "st/prob",
            "st/det/lin",
            "st/det/nn",
            "st/det/dtr",
        }

    def test_type_nodes_sit_below_tiers(self):
        tree = builtin_taxonomy()
        assert tree.node(path("pb/qm/dft/ksdft")).tier_level == 4
        # type-level children do not remove dft from the tier leaves
        assert path("pb/qm/dft") in tree.tier_leaves()

    def test_extend_adds_node(self):
        tree = builtin_taxonomy().extend(
            path("st/det"), CategoryNode("svm", "Support vector machine", 3)
        )
        assert tree.contains(path("st/det/svm"))
        # original tree untouched
        assert not builtin_taxonomy().contains(path("st/det/svm"))

    def test_extend_rejects_duplicate_slug(self):
        with pytest.raises(DuplicateSlugError):
            builtin_taxonomy().extend(
                path("pb/qm"), CategoryNode("dft", "again", 3)
            )

    def test_extend_rejects_unknown_parent(self):
        with pytest.raises(UnknownCategoryError):
            builtin_taxonomy().extend(
                path("pb/xx"), CategoryNode("new", "New", 3)
            )

    def test_extension_file_format(self, tmp_path):
        f = tmp_path / "extra.json"
        f.write_text(
            '[{"parentPath": "st/det", "slug": "svm", '
            '"name": "Support vector machine", "tierLevel": 3}]'
        )
        tree = load_taxonomy_extension(f)
        assert tree.contains(path("st/det/svm"))

    def test_extend_checks_tier_level(self):
        with pytest.raises(ValueError):
            builtin_taxonomy().extend(
                path("st/det"), CategoryNode("svm", "SVM", 5)
            )


class TestClassify:
    def test_dft_features(self):
        assert classify(
            {F.PHYSICS_BASED, F.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION, F.DENSITY_FUNCTIONAL}
        ) == path("pb/qm/dft")

    def test_neural_network_features(self):
        assert classify(
            {F.DATA_DRIVEN, F.DETERMINISTIC, F.NEURAL_NETWORK}
        ) == path("st/det/nn")

    def test_stochastic_wavefunction_model_needs_curation(self):
        # With randomness dropped the objective wins: ab initio.
        kept = {
            F.PHYSICS_BASED,
            F.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION,
            F.FIRST_PRINCIPLES_WAVEFUNCTION,
        }
        assert classify(kept) == path("pb/qm/abin")
        with pytest.raises(ContradictionError):
            classify(kept | {F.RANDOMNESS})

    def test_empty_feature_set_has_no_match(self):
        with pytest.raises(NoMatchError):
            classify(set())

    def test_sibling_rules_are_ambiguous(self):
        with pytest.raises(AmbiguityError) as exc:
            classify(
                {
                    F.PHYSICS_BASED,
                    F.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION,
                    F.FIRST_PRINCIPLES_WAVEFUNCTION,
                    F.DENSITY_FUNCTIONAL,
                }
            )
        assert set(exc.value.candidates) == {"pb/qm/abin", "pb/qm/dft"}

    def test_accepts_string_feature_names(self):
        assert classify(
            {"data-driven", "deterministic", "decision-tree"}
        ) == path("st/det/dtr")

    def test_all_rule_targets_reachable(self):
        # For every rule, the union of positive terms along its chain
        # classifies exactly to its target.
        for rule in RULES:
            features = set()
            rule_id = rule.rule_id
            while True:
                r = next(r for r in RULES if r.rule_id == rule_id)
                features |= {t.feature for t in r.terms if t.asserted}
                if "." not in rule_id:
                    break
                rule_id = rule_id.rsplit(".", 1)[0]
            assert classify(features) == rule.target, rule.rule_id


class TestAudit:
    def test_matching_path_is_clean(self):
        assert (
            audit_category_path(
                path("pb/qm/dft"),
                {
                    F.PHYSICS_BASED,
                    F.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION,
                    F.DENSITY_FUNCTIONAL,
                },
            )
            == []
        )

    def test_wavefunction_feature_fails_atomistic_rule(self):
        violations = audit_category_path(
            path("pb/at"),
            {F.PHYSICS_BASED, F.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION},
        )
        assert [v.rule_id for v in violations] == ["1.2"]

    def test_linear_model_path_is_clean(self):
        assert (
            audit_category_path(
                path("st/det/lin"),
                {F.DATA_DRIVEN, F.DETERMINISTIC, F.LINEAR_COMBINATION},
            )
            == []
        )

    def test_unknown_path_raises(self):
        with pytest.raises(UnknownCategoryError):
            audit_category_path(path("pb/xx"), set())

    def test_type_levels_validate_by_existence(self):
        assert (
            audit_category_path(
                path("pb/qm/dft/ksdft"),
                {
                    F.PHYSICS_BASED,
                    F.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION,
                    F.DENSITY_FUNCTIONAL,
                },
            )
            == []
        )

    def test_one_violation_per_failed_level(self):
        violations = audit_category_path(path("st/det/lin"), set())
        assert [v.rule_id for v in violations] == ["2", "2.2", "2.2.1"]


class TestTags:
    def test_perturbative_scope(self):
        d = tag_scope("perturbative")
        assert d.scope_path == path("pb/qm/abin")
        assert d.kind is TagKind.ATTRIBUTE

    def test_scaling_power_parameter(self):
        d = tag_scope("scaling-power:3")
        assert d.scope_path == path("pb")
        assert d.parameter == 3
        assert d.kind is TagKind.ATTRIBUTE

    def test_user_tag_is_universal(self):
        d = tag_scope("my-team-tag")
        assert d.scope_path is None
        assert d.kind is TagKind.USER

    def test_malformed_scaling_power_falls_back_to_user(self):
        assert tag_scope("scaling-power:x").kind is TagKind.USER

    def test_perturbative_on_dft_violates(self):
        violations = validate_tags(model_at("pb/qm/dft", ["perturbative"]))
        assert len(violations) == 1
        assert violations[0].rule_id == "tag.scope"
        assert violations[0].path == "/tags/0"

    def test_relativistic_on_any_pb_model(self):
        for p in ("pb", "pb/qm", "pb/at", "pb/mes", "pb/qm/dft/ksdft"):
            assert validate_tags(model_at(p, ["relativistic"])) == []

    def test_user_tag_never_violates(self):
        for p in ("pb/qm/dft", "st/det/lin"):
            assert validate_tags(model_at(p, ["my-team-tag"])) == []

    def test_scope_is_prefix_transitive(self):
        # A tag valid at P stays valid at every registered descendant.
        tree = builtin_taxonomy()
        for p in tree.all_paths():
            for label in ("relativistic", "self-consistent", "perturbative"):
                if validate_tags(model_at(p, [label])):
                    continue
                for child in tree.children(p):
                    deeper = CategoryPath.from_slugs(p.slugs() + (child.slug,))
                    assert validate_tags(model_at(deeper, [label])) == []


class TestProperties:
    @given(branch_feature_sets())
    @settings(max_examples=150)
    def test_classify_and_audit_agree(self, features):
        try:
            result = classify(features)
        except (ContradictionError, AmbiguityError):
            return  # vacuous: engine refused the set
        assert audit_category_path(result, features) == []

    @given(feature_sets)
    @settings(max_examples=150)
    def test_classify_deterministic(self, features):
        try:
            first = classify(features)
        except (ContradictionError, NoMatchError, AmbiguityError) as exc:
            with pytest.raises(type(exc)):
                classify(features)
            return
        assert classify(features) == first

    @pytest.mark.parametrize(
        "base,tier3_feature,expected",
        [
            (
                {F.PHYSICS_BASED, F.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION},
                F.DENSITY_FUNCTIONAL,
                "pb/qm/dft",
            ),
            (
                {F.PHYSICS_BASED, F.ELECTRONIC_COORDINATES_OR_WAVEFUNCTION},
                F.FIRST_PRINCIPLES_WAVEFUNCTION,
                "pb/qm/abin",
            ),
            (
                {F.DATA_DRIVEN, F.DETERMINISTIC},
                F.DECISION_TREE,
                "st/det/dtr",
            ),
        ],
    )
    def test_adding_tier3_feature_is_depth_monotone(
        self, base, tier3_feature, expected
    ):
        shallow = classify(base)
        deep = classify(base | {tier3_feature})
        assert deep == path(expected)
        assert shallow.is_prefix_of(deep)
