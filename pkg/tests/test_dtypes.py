from datetime import datetime

import pytest
from hypothesis import given, strategies as st

from vita.dtypes import (
    BOOL,
    DATETIME,
    FLOAT,
    INT,
    STRING,
    TEXT,
    DomainType,
    Null,
    dict_of,
    format_dtype,
    infer_type,
    list_of,
    parse_dtype,
    value_from_json,
    value_matches,
    value_to_json,
    vector_of,
)


class TestInferType:
    @pytest.mark.parametrize(
        "raw,expected",
        [
            ("42", INT),
            ("-7", INT),
            ("true", BOOL),
            ("False", BOOL),
            ("3.14", FLOAT),
            ("1e-3", FLOAT),
            ("2021-03-04", DATETIME),
            ("2021-03-04T05:06:07", DATETIME),
            ("Very comfy shoes!", STRING),
            ("", STRING),
            ("2021-13-40", STRING),  # date-shaped but not a date
        ],
    )
    def test_precedence(self, raw, expected):
        assert infer_type(raw) == expected

    def test_int_wins_over_float_and_datetime(self):
        # digits alone are Int even when they could be read other ways
        assert infer_type("20210304") == INT

    @given(st.text(max_size=60))
    def test_total_on_any_string(self, raw):
        dt = infer_type(raw)
        assert dt.tag in ("String", "Int", "Float", "Bool", "DateTime")


class TestDomainType:
    def test_parameterized_types_round_trip(self):
        for dt in [
            STRING,
            TEXT,
            list_of(STRING),
            vector_of(FLOAT),
            dict_of(STRING, FLOAT),
            list_of(vector_of(FLOAT)),
            dict_of(STRING, list_of(INT)),
        ]:
            assert parse_dtype(format_dtype(dt)) == dt

    def test_vector_requires_numeric_inner(self):
        with pytest.raises(ValueError):
            DomainType("Vector", inner=STRING)

    def test_list_requires_inner(self):
        with pytest.raises(ValueError):
            DomainType("List")

    def test_unknown_tag_rejected(self):
        with pytest.raises(ValueError):
            DomainType("Map")

    def test_primitive_and_synthesized_split(self):
        assert STRING.is_primitive and INT.is_primitive
        assert not TEXT.is_primitive and not DomainType("Visualization").is_primitive


class TestValues:
    def test_null_is_singleton_and_matches_any_column_type(self):
        assert Null is type(Null)()
        for dt in [STRING, INT, FLOAT, BOOL, DATETIME, TEXT, list_of(STRING)]:
            assert value_matches(Null, dt)

    def test_bool_is_not_an_int(self):
        assert value_matches(True, BOOL)
        assert not value_matches(True, INT)
        assert not value_matches(1, BOOL)

    def test_vector_values_are_numeric_tuples(self):
        assert value_matches((1.0, 2.0), vector_of(FLOAT))
        assert not value_matches((1.0, Null), vector_of(FLOAT))
        assert value_matches((Null, "x"), list_of(STRING))

    def test_json_round_trip(self):
        cases = [
            (STRING, "hi"),
            (INT, 3),
            (FLOAT, 2.5),
            (BOOL, False),
            (DATETIME, datetime(2021, 3, 4, 5, 6, 7)),
            (list_of(STRING), ("a", Null, "b")),
            (vector_of(FLOAT), (0.25, 0.75)),
            (dict_of(STRING, FLOAT), {"a": 1.5, "b": 0.0}),
        ]
        for dt, v in cases:
            assert value_from_json(value_to_json(v, dt), dt) == v

    def test_visualization_cells_hold_chart_specs(self):
        from vita.dtypes import VISUALIZATION
        from vita.viz import VizSpec

        spec = VizSpec("v1", "bar", ({"token": "a", "score": 1.0},), {}, {}, ())
        assert value_matches(spec, VISUALIZATION)
        assert not value_matches("not a chart", VISUALIZATION)
        restored = value_from_json(value_to_json(spec, VISUALIZATION), VISUALIZATION)
        assert restored == spec
