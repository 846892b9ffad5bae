import json

import pytest

from chartforge.errors import (
    AmbiguousSubtype,
    ConfigError,
    ParseError,
    StructuralError,
    UnsupportedChart,
)
from chartforge.generator import generate_spec_procedural
from chartforge.spec_core import (
    Axis,
    AxisKind,
    ChartSpec,
    DataPoint,
    Series,
    SeriesKind,
    classify_spec,
    default_taxonomy,
    parse_spec,
    serialize_spec,
    validate_spec,
)
from chartforge.spec_core.taxonomy import features, matches
from conftest import spec_stream

MINIMAL_BAR = '{"xAxis":{"type":"category","data":["A","B"]},"yAxis":{},"series":[{"type":"bar","data":[1,2]}]}'


class TestParse:
    def test_minimal_bar(self):
        spec = parse_spec(MINIMAL_BAR)
        assert spec.category == "bar"
        assert spec.subtype == "basic_bar"
        assert len(spec.series) == 1
        assert len(spec.series[0].data) == 2
        assert spec.x_axis.labels == ("A", "B")
        assert spec.source_text == MINIMAL_BAR

    def test_length_mismatch_is_structural_error(self):
        doc = MINIMAL_BAR.replace("[1,2]", "[1,2,3]")
        with pytest.raises(StructuralError):
            parse_spec(doc)

    def test_malformed_document(self):
        with pytest.raises(ParseError):
            parse_spec("{not json")

    def test_empty_document(self):
        with pytest.raises(ParseError):
            parse_spec("   ")

    def test_non_finite_rejected(self):
        doc = MINIMAL_BAR.replace("[1,2]", "[1,NaN]")
        with pytest.raises(StructuralError):
            parse_spec(doc)

    def test_unknown_series_kind(self):
        doc = MINIMAL_BAR.replace('"bar"', '"sankey"')
        with pytest.raises(UnsupportedChart):
            parse_spec(doc)

    def test_html_wrapper_extraction(self):
        html = (
            "<html><head><script>\n"
            "var chart = echarts.init(document.getElementById('c'));\n"
            f"var option = {MINIMAL_BAR};\n"
            "chart.setOption(option);\n"
            "</script></head><body></body></html>"
        )
        spec = parse_spec(html)
        assert spec.subtype == "basic_bar"
        assert spec.source_text == html

    def test_html_without_option(self):
        with pytest.raises(ParseError):
            parse_spec("<html><body>no chart here</body></html>")

    def test_html_with_brace_in_string(self):
        doc = MINIMAL_BAR.replace('"A"', '"A {weird}"')
        html = f"<script>option = {doc};</script>"
        assert parse_spec(html).x_axis.labels[0] == "A {weird}"

    def test_axis_unit_extraction(self):
        doc = json.loads(MINIMAL_BAR)
        doc["yAxis"] = {"type": "value", "name": "Revenue (USD)"}
        spec = parse_spec(json.dumps(doc))
        assert spec.y_axis.name == "Revenue"
        assert spec.y_axis.unit == "USD"

    def test_duplicate_labels_rejected(self):
        doc = MINIMAL_BAR.replace('["A","B"]', '["A","a "]')
        with pytest.raises(StructuralError):
            parse_spec(doc)

    def test_fixture_sweep_classifies_to_own_subtype(self, fixture_docs, taxonomy):
        assert len(fixture_docs) == 49
        for subtype, doc in fixture_docs.items():
            spec = parse_spec(doc, taxonomy)
            assert spec.subtype == subtype
            assert taxonomy.contains(spec.category, spec.subtype)


class TestSerialize:
    def test_round_trip_identity(self):
        spec = parse_spec(MINIMAL_BAR)
        again = parse_spec(serialize_spec(spec))
        assert again.structurally_equal(spec)
        assert again.id == spec.id

    def test_byte_determinism(self):
        spec = parse_spec(MINIMAL_BAR)
        assert serialize_spec(spec) == serialize_spec(spec)

    def test_round_trip_over_1000_specs(self, templates, topic_pairs):
        count = 0
        for spec in spec_stream(templates, topic_pairs, range(21)):
            text = serialize_spec(spec)
            again = parse_spec(text)
            assert again.structurally_equal(spec), spec.subtype
            assert serialize_spec(again) == text
            count += 1
        assert count >= 1000


class TestValidate:
    def test_valid_bar(self, sample_spec):
        report = validate_spec(sample_spec)
        assert report.valid and not report.errors

    def test_parser_output_always_validates(self, templates, topic_pairs):
        for spec in spec_stream(templates, topic_pairs, [5]):
            assert validate_spec(parse_spec(serialize_spec(spec))).valid

    def test_empty_series(self):
        spec = ChartSpec(id="x", category="bar", subtype="basic_bar", series=())
        report = validate_spec(spec)
        assert not report.valid
        assert report.errors[0]["code"] == "EMPTY_SERIES"

    def _bar_spec(self, series):
        return ChartSpec(
            id="x",
            category="bar",
            subtype="basic_bar",
            x_axis=Axis(kind=AxisKind.CATEGORY, labels=("A", "B")),
            y_axis=Axis(kind=AxisKind.VALUE),
            series=series,
        )

    def test_scatter_arity_mismatch(self):
        spec = ChartSpec(
            id="x",
            category="scatter",
            subtype="basic_scatter",
            x_axis=Axis(kind=AxisKind.VALUE),
            y_axis=Axis(kind=AxisKind.VALUE),
            series=(
                Series(name="s", kind=SeriesKind.SCATTER, data=(DataPoint(values=(1.0,)),)),
            ),
        )
        codes = {e["code"] for e in validate_spec(spec).errors}
        assert "ARITY_MISMATCH" in codes

    def test_non_finite_value(self):
        series = (
            Series(
                name="s",
                kind=SeriesKind.BAR,
                data=(DataPoint(values=(1.0,)), DataPoint(values=(float("inf"),))),
            ),
        )
        codes = {e["code"] for e in validate_spec(self._bar_spec(series)).errors}
        assert "NONFINITE_VALUE" in codes

    def test_negative_pie_slice(self):
        spec = ChartSpec(
            id="x",
            category="pie",
            subtype="basic_pie",
            series=(
                Series(
                    name="s",
                    kind=SeriesKind.PIE,
                    data=(
                        DataPoint(values=(1.0,), label="a"),
                        DataPoint(values=(-2.0,), label="b"),
                        DataPoint(values=(3.0,), label="c"),
                    ),
                ),
            ),
        )
        codes = {e["code"] for e in validate_spec(spec).errors}
        assert "NEGATIVE_VALUE" in codes

    def test_missing_title_is_warning(self):
        spec = parse_spec(MINIMAL_BAR)
        report = validate_spec(spec)
        assert report.valid
        assert any(w["code"] == "MISSING_TITLE" for w in report.warnings)

    def test_unknown_subtype(self, sample_spec):
        import dataclasses

        bogus = dataclasses.replace(sample_spec, subtype="no_such_subtype")
        codes = {e["code"] for e in validate_spec(bogus).errors}
        assert "UNKNOWN_SUBTYPE" in codes


class TestClassify:
    def test_single_bar_category_axis(self):
        assert classify_spec(parse_spec(MINIMAL_BAR)) == ("bar", "basic_bar")

    def test_two_bar_series_grouped(self):
        doc = json.loads(MINIMAL_BAR)
        doc["series"].append({"type": "bar", "name": "second", "data": [3, 4]})
        assert classify_spec(parse_spec(json.dumps(doc))) == ("bar", "grouped_bar")

    def test_pie_no_axes(self):
        doc = {
            "series": [
                {"type": "pie", "data": [{"value": 1, "name": "a"}, {"value": 2, "name": "b"}, {"value": 3, "name": "c"}]}
            ]
        }
        assert classify_spec(parse_spec(json.dumps(doc))) == ("pie", "basic_pie")

    def test_classification_is_unique_over_corpus(self, templates, topic_pairs, taxonomy):
        for spec in spec_stream(templates, topic_pairs, [11, 12]):
            feats = features(spec)
            hits = [d.name for d in taxonomy.subtypes if matches(d, feats)]
            assert hits == [spec.subtype], (spec.subtype, hits)

    def test_ambiguous_taxonomy_is_config_error(self, sample_spec):
        from chartforge.spec_core.taxonomy import SubtypeDescriptor, Taxonomy

        dup = Taxonomy(
            categories={
                "bar": (
                    SubtypeDescriptor("a", "bar", "bar", {"kinds": ["bar"]}),
                    SubtypeDescriptor("b", "bar", "bar", {"kinds": ["bar"]}),
                )
            }
        )
        with pytest.raises(AmbiguousSubtype):
            classify_spec(sample_spec, dup)


class TestTaxonomy:
    def test_default_counts(self, taxonomy):
        assert taxonomy.category_count == 9
        assert taxonomy.subtype_count == 49

    def test_duplicate_names_rejected(self, tmp_path):
        from chartforge.spec_core import load_taxonomy

        bad = {
            "categories": {
                "bar": [{"name": "dup", "series_kind": "bar", "constraints": {}}],
                "line": [{"name": "dup", "series_kind": "line", "constraints": {}}],
            }
        }
        path = tmp_path / "tax.json"
        path.write_text(json.dumps(bad))
        with pytest.raises(ConfigError):
            load_taxonomy(path)

    def test_custom_taxonomy_usable(self, tmp_path):
        from chartforge.spec_core import load_taxonomy

        mini = {
            "categories": {
                "bar": [
                    {"name": "any_bar", "series_kind": "bar", "constraints": {"kinds": ["bar"]}}
                ]
            }
        }
        path = tmp_path / "tax.json"
        path.write_text(json.dumps(mini))
        tax = load_taxonomy(path)
        assert classify_spec(parse_spec(MINIMAL_BAR, tax), tax) == ("bar", "any_bar")
