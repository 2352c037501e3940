from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catecom.documents import validate_entity
from catecom.entities import Method, MethodParameter
from catecom.errors import TypeMismatchError
from catecom.methods import (
    FlavorDefaults,
    PrecisionFeature,
    diff_against_defaults,
    extract_precision_features,
    feature_passthrough,
    load_flavor_defaults,
    merge_methods,
    score_method,
)

from strategies import methods_


def param(key, value, precision=False, unit=None):
    return MethodParameter(
        key, value, ("precision",) if precision else (), unit
    )


class TestDiff:
    def test_deviating_parameter_is_kept(self):
        params = [param("ecutwfc", 40), param("occupations", "smearing")]
        defaults = FlavorDefaults("pw", {"ecutwfc": 40})
        assert [p.key for p in diff_against_defaults(params, defaults)] == [
            "occupations"
        ]

    def test_all_defaults_yields_empty_diff(self):
        params = [param("ecutwfc", 40), param("nspin", 1)]
        defaults = FlavorDefaults("pw", {"ecutwfc": 40, "nspin": 1})
        assert diff_against_defaults(params, defaults) == []

    def test_no_defaults_keeps_everything(self, pw_us_method):
        kept = diff_against_defaults(
            pw_us_method.parameters, FlavorDefaults("pw", {})
        )
        assert [p.key for p in kept] == ["ecutrho", "ecutwfc", "occupations"]

    def test_kind_mismatch_counts_as_deviation(self):
        # True == 1 in Python; value kinds keep them distinct.
        params = [param("flag", True)]
        defaults = FlavorDefaults("pw", {"flag": 1})
        assert [p.key for p in diff_against_defaults(params, defaults)] == ["flag"]

    @given(methods_(), st.dictionaries(st.text(max_size=6), st.integers(), max_size=4))
    @settings(max_examples=60)
    def test_diff_is_idempotent(self, method, raw_defaults):
        defaults = FlavorDefaults("f", raw_defaults)
        once = diff_against_defaults(method.parameters, defaults)
        assert diff_against_defaults(once, defaults) == once


class TestPrecisionFeatures:
    def test_listing_method_features(self, pw_us_method):
        vector = extract_precision_features(pw_us_method)
        assert vector.entries == (
            PrecisionFeature("ecutrho", 200, "Ry"),
            PrecisionFeature("ecutwfc", 50, "Ry"),
        )
        assert vector.excluded == ()

    def test_empty_precision_list(self):
        method = Method("t", "s", (param("x", 1),), (), {})
        assert extract_precision_features(method).entries == ()

    def test_string_valued_precision_parameter_is_excluded(self):
        method = Method(
            "t",
            "s",
            (param("ecutwfc", 40, precision=True), param("mode", "fast", precision=True)),
            ("ecutwfc", "mode"),
            {},
        )
        vector = extract_precision_features(method)
        assert [e.key for e in vector.entries] == ["ecutwfc"]
        assert vector.excluded == ("mode",)

    def test_entries_sorted_by_key(self):
        method = Method(
            "t",
            "s",
            (param("zeta", 1, precision=True), param("alpha", 2, precision=True)),
            ("zeta", "alpha"),
            {},
        )
        assert [e.key for e in extract_precision_features(method).entries] == [
            "alpha",
            "zeta",
        ]

    @given(methods_())
    @settings(max_examples=60)
    def test_length_bounded_by_precision_list(self, method):
        vector = extract_precision_features(method)
        assert len(vector.entries) <= len(method.precision)
        all_numeric = all(
            isinstance(method.parameter(k).value, (int, float))
            and not isinstance(method.parameter(k).value, bool)
            for k in method.precision
        )
        assert (len(vector.entries) == len(method.precision)) == all_numeric

    def test_passthrough_scorer(self, pw_us_method):
        assert score_method(pw_us_method) == extract_precision_features(
            pw_us_method
        )
        assert feature_passthrough is not None


class TestMerge:
    def test_local_overrides_global(self):
        g = Method("t", "s", (param("ecutwfc", 40),), (), {})
        l = Method("t", "s", (param("ecutwfc", 50),), (), {})
        merged = merge_methods(g, l)
        assert merged.parameter("ecutwfc").value == 50

    def test_precision_lists_unioned_sorted(self):
        g = Method("t", "s", (param("ecutwfc", 40, precision=True),), ("ecutwfc",), {})
        l = Method("t", "s", (param("ecutrho", 160, precision=True),), ("ecutrho",), {})
        merged = merge_methods(g, l)
        # Oracle: plain set union of the two lists.
        assert set(merged.precision) == {"ecutwfc"} | {"ecutrho"}
        assert merged.precision == ("ecutrho", "ecutwfc")

    def test_kind_conflict_raises(self):
        g = Method("t", "s", (param("occupations", "smearing"),), (), {})
        l = Method("t", "s", (param("occupations", 3),), (), {})
        with pytest.raises(TypeMismatchError):
            merge_methods(g, l)

    def test_data_merged_with_local_priority(self):
        g = Method("t", "s", (), (), {"searchText": "global", "pseudo": "a"})
        l = Method("t", "s", (), (), {"searchText": "local"})
        merged = merge_methods(g, l)
        assert merged.data == {"searchText": "local", "pseudo": "a"}

    @given(methods_())
    @settings(max_examples=60)
    def test_self_merge_is_identity(self, method):
        assert merge_methods(method, method) == method

    @given(methods_(), methods_())
    @settings(max_examples=60)
    def test_merged_method_satisfies_precision_invariant(self, g, l):
        try:
            merged = merge_methods(g, l)
        except TypeMismatchError:
            return
        precision_rules = [
            v.rule_id
            for v in validate_entity(merged)
            if v.rule_id.startswith("method.precision")
        ]
        assert precision_rules == []


class TestFlavorDefaults:
    def test_load_file(self, tmp_path):
        f = tmp_path / "defaults.json"
        f.write_text('{"pw-scf": {"ecutwfc": 40, "occupations": "smearing"}}')
        defaults = load_flavor_defaults(f)
        assert defaults["pw-scf"].defaults["ecutwfc"] == 40

    def test_reject_non_object(self, tmp_path):
        f = tmp_path / "defaults.json"
        f.write_text("[1, 2]")
        with pytest.raises(ValueError):
            load_flavor_defaults(f)
