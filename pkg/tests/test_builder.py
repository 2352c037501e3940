from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catecom.builder import (
    FUNCTIONAL_LIBRARY,
    build_unit_model,
    compose_compound_model,
    fixture_names,
    load_fixture,
    resolve_functional,
    validate_compound_model,
)
from catecom.documents import validate_entity
from catecom.entities import (
    CategoryPath,
    Method,
    MethodParameter,
    RangeKind,
)
from catecom.errors import (
    DuplicateFlowchartIdError,
    TagScopeError,
    UnknownCategoryError,
    UnknownFunctionalError,
    UnmappedUnitError,
)
from catecom.taxonomy import validate_tags


def pw_us_method() -> Method:
    return Method(
        type="pseudopotential",
        subtype="us",
        parameters=(
            MethodParameter("ecutrho", 200, categories=("precision",), unit="Ry"),
            MethodParameter("ecutwfc", 50, categories=("precision",), unit="Ry"),
            MethodParameter("occupations", "smearing"),
        ),
        precision=("ecutrho", "ecutwfc"),
        data={
            "pseudo": "us-gga-pbe-v1",
            "searchText": "plane-wave ultrasoft pseudopotential",
        },
    )


class TestFunctionalLibrary:
    def test_required_entries_present(self):
        assert {"pbe", "hse06", "gam", "thomas-fermi", "vv10"} <= set(
            FUNCTIONAL_LIBRARY
        )

    def test_pbe_is_full_weight_exchange_plus_correlation(self):
        pbe = resolve_functional("pbe")
        # Pure GGA: both contributions enter at full weight.
        assert [(c.component_type.value, c.fraction) for c in pbe.components] == [
            ("exchange", 1.0),
            ("correlation", 1.0),
        ]

    def test_hse06_short_range_exact_exchange_fraction(self):
        hse06 = resolve_functional("hse06")
        exact = next(c for c in hse06.components if c.slug == "exact-exchange-sr")
        assert exact.fraction == 0.25
        assert exact.range_kind is RangeKind.SHORT_RANGE
        assert exact.screening_parameter == pytest.approx(0.11)

    def test_unknown_functional(self):
        with pytest.raises(UnknownFunctionalError):
            resolve_functional("b3lyp")


class TestBuildUnitModel:
    def test_pbe_ksdft_matches_fixture(self):
        built = build_unit_model(
            "pb/qm/dft/ksdft",
            "PBE KS-DFT",
            "ksdft-pbe",
            "fid-1",
            functional="pbe",
            tags=["self-consistent", "scaling-power:3"],
            method=pw_us_method(),
        )
        assert built == load_fixture("um_ksdft-pbe.json")

    def test_hse06_matches_fixture(self):
        built = build_unit_model(
            "pb/qm/dft/ksdft",
            "HSE06 KS-DFT",
            "ksdft-hse06",
            "fid-4",
            functional="hse06",
            tags=["self-consistent"],
            method=pw_us_method(),
        )
        assert built == load_fixture("um_ksdft-hse06.json")

    def test_ccsd_matches_fixture(self):
        built = build_unit_model(
            "pb/qm/abin",
            "CCSD",
            "ccsd",
            "fid-2",
            tags=["single-reference", "coupled-cluster"],
        )
        assert built == load_fixture("um_ccsd.json")

    def test_ols_matches_fixture(self):
        built = build_unit_model("st/det/lin", "OLS", "ols", "fid-3")
        assert built == load_fixture("um_ols.json")

    def test_output_passes_validators(self):
        model = build_unit_model(
            "pb/qm/dft", "m", "m", "f", functional="gam", tags=["relativistic"]
        )
        assert validate_entity(model) == []
        assert validate_tags(model) == []

    def test_unknown_category(self):
        with pytest.raises(UnknownCategoryError):
            build_unit_model("pb/nope", "m", "m", "f")

    def test_unknown_functional(self):
        with pytest.raises(UnknownFunctionalError):
            build_unit_model("pb/qm/dft", "m", "m", "f", functional="nope")

    def test_out_of_scope_tag_raises(self):
        with pytest.raises(TagScopeError):
            build_unit_model("pb/qm/dft", "m", "m", "f", tags=["perturbative"])


class TestCompose:
    def _units(self, n=3):
        return [
            build_unit_model("pb/qm/abin", f"u{i}", f"u{i}", f"fid-{i}")
            for i in range(n)
        ]

    def test_three_nodes_two_workflow_units(self, dft_gw_bse):
        nodes = dft_gw_bse.ordered_nodes()
        assert [n.slug for n in nodes] == ["ksdft-pbe", "gw", "bse"]
        assert nodes[0].head and not nodes[1].head and not nodes[2].head
        assert [n.next for n in nodes] == ["fid-5", "fid-6", None]
        assert len({n.workflow_unit_id for n in nodes}) == 2

    def test_singleton_chain(self):
        (unit,) = self._units(1)
        cm = compose_compound_model([unit], {"fid-0": "wu"}, pw_us_method())
        assert len(cm.model_graph) == 1
        assert cm.model_graph[0].head
        assert cm.model_graph[0].next is None

    def test_unmapped_unit(self):
        a, b = self._units(2)
        with pytest.raises(UnmappedUnitError):
            compose_compound_model([a, b], {"fid-0": "wu"}, pw_us_method())

    def test_duplicate_flowchart_id(self):
        a, _ = self._units(2)
        with pytest.raises(DuplicateFlowchartIdError):
            compose_compound_model([a, a], {"fid-0": "wu"}, pw_us_method())

    def test_chain_preserves_input_order(self):
        units = self._units(4)
        cm = compose_compound_model(
            units, {u.flowchart_id: "wu" for u in units}, pw_us_method()
        )
        assert [n.flowchart_id for n in cm.ordered_nodes()] == [
            u.flowchart_id for u in units
        ]

    def test_unit_model_reuse_across_compounds(self):
        units = self._units(2)
        cm1 = compose_compound_model(
            units, {u.flowchart_id: "wu" for u in units}, pw_us_method()
        )
        cm2 = compose_compound_model(
            list(reversed(units)),
            {u.flowchart_id: "wu2" for u in units},
            pw_us_method(),
        )
        assert cm1.units["fid-0"] == cm2.units["fid-0"] == units[0]

    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=3))
    @settings(max_examples=30)
    def test_compose_output_always_validates(self, n, n_wu):
        units = [
            build_unit_model("st/det/dtr", f"t{i}", f"t{i}", f"id-{i}")
            for i in range(n)
        ]
        mapping = {u.flowchart_id: f"wu-{i % n_wu}" for i, u in enumerate(units)}
        cm = compose_compound_model(units, mapping, pw_us_method())
        assert validate_compound_model(cm) == []
        assert validate_entity(cm) == []


class TestValidateCompound:
    def test_fixture_is_clean(self, dft_gw_bse):
        assert validate_compound_model(dft_gw_bse) == []

    def test_multiple_heads(self, dft_gw_bse):
        graph = list(dft_gw_bse.model_graph)
        graph[1] = dataclasses.replace(graph[1], head=True)
        bad = dataclasses.replace(dft_gw_bse, model_graph=tuple(graph))
        assert "compound.multiple-heads" in [
            v.rule_id for v in validate_compound_model(bad)
        ]

    def test_self_cycle(self, dft_gw_bse):
        graph = list(dft_gw_bse.model_graph)
        graph[2] = dataclasses.replace(graph[2], next=graph[2].flowchart_id)
        bad = dataclasses.replace(dft_gw_bse, model_graph=tuple(graph))
        assert "compound.self-cycle" in [
            v.rule_id for v in validate_compound_model(bad)
        ]

    def test_cycle_back_to_head(self, dft_gw_bse):
        graph = list(dft_gw_bse.model_graph)
        graph[2] = dataclasses.replace(graph[2], next=graph[0].flowchart_id)
        bad = dataclasses.replace(dft_gw_bse, model_graph=tuple(graph))
        assert "compound.cycle" in [v.rule_id for v in validate_compound_model(bad)]

    def test_dangling_next(self, dft_gw_bse):
        graph = list(dft_gw_bse.model_graph)
        graph[1] = dataclasses.replace(graph[1], next="missing")
        bad = dataclasses.replace(dft_gw_bse, model_graph=tuple(graph))
        assert "compound.dangling-next" in [
            v.rule_id for v in validate_compound_model(bad)
        ]

    def test_unmapped_node(self, dft_gw_bse):
        units = dict(dft_gw_bse.units)
        units.pop("fid-6")
        bad = dataclasses.replace(dft_gw_bse, units=units)
        assert "compound.unmapped-node" in [
            v.rule_id for v in validate_compound_model(bad)
        ]


class TestCorpus:
    def test_required_fixtures_present(self):
        names = set(fixture_names())
        assert {
            "um_ksdft-pbe.json",
            "um_ksdft-hse06.json",
            "um_ccsd.json",
            "um_ols.json",
            "um_gw.json",
            "um_bse.json",
            "cm_dft-gw-bse.json",
            "cm_random-forest.json",
            "method_pw-us.json",
        } <= names

    def test_every_fixture_passes_all_validators(self):
        from catecom.entities import CompoundModel, UnitModel

        for name in fixture_names():
            entity = load_fixture(name)
            assert validate_entity(entity) == [], name
            if isinstance(entity, UnitModel):
                assert validate_tags(entity) == [], name
            if isinstance(entity, CompoundModel):
                assert validate_compound_model(entity) == [], name
                for unit in entity.units.values():
                    assert validate_tags(unit) == [], name

    def test_random_forest_is_a_decision_tree_compound(self):
        forest = load_fixture("cm_random-forest.json")
        assert len(forest.model_graph) == 3
        assert all(
            u.categories == CategoryPath("st", "det", "dtr")
            for u in forest.units.values()
        )
        assert len({n.workflow_unit_id for n in forest.model_graph}) == 1
