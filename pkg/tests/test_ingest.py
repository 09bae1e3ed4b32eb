import datetime
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from trimodal.ingest import (
    Dataset, ParseError, apply_types, distinct_count, infer_key, infer_types,
    load_dataset, load_typed, parse_number, parse_temporal,
)
from trimodal.model import Measure


def test_csv_basic():
    ds = load_dataset(b"a,b\n1,x\n2,y\n")
    assert ds.column_names() == ("a", "b")
    assert ds.rows == (("1", "x"), ("2", "y"))


def test_csv_ragged_row_reports_line():
    with pytest.raises(ParseError) as e:
        load_dataset(b"a,b\n1,x\n2\n")
    assert e.value.line == 3


def test_csv_null_strings_become_none():
    ds = load_dataset(b"a,b\n,NA\nnull,3\n")
    assert ds.rows == ((None, None), (None, "3"))


def test_csv_quoted_fields():
    ds = load_dataset(b'a,b\n"x, y",2\n')
    assert ds.rows == (("x, y", "2"),)


def test_json_records_union_of_keys():
    ds = load_dataset(b'[{"a": 1}, {"b": 2, "a": 3}]', "json-records")
    assert ds.column_names() == ("a", "b")
    assert ds.rows == ((1, None), (3, 2))


def test_json_records_rejects_non_array():
    with pytest.raises(ParseError):
        load_dataset(b'{"a": 1}', "json-records")


def test_parse_temporal_variants():
    assert parse_temporal("1990") == 1990
    assert parse_temporal(1990) == 1990
    assert parse_temporal("2001-05-02") == datetime.date(2001, 5, 2)
    assert parse_temporal("not a date") is None
    assert parse_temporal(42) is None  # out of year range
    assert parse_temporal(True) is None


def test_parse_number():
    assert parse_number("3.5") == 3.5
    assert parse_number(2) == 2.0
    assert parse_number("x") is None
    assert parse_number(True) is None


def test_type_inference_order():
    # Years parse as numbers too; the temporal check must win.
    ds = load_dataset(b"year,name,value\n1990,a,1.5\n1991,b,2.5\n")
    types = infer_types(ds)
    assert types == {"year": Measure.TEMPORAL, "name": Measure.NOMINAL,
                     "value": Measure.QUANTITATIVE}


def test_all_null_column_is_nominal():
    ds = load_dataset(b"a,b\n,1\n,2\n")
    assert infer_types(ds)["a"] == Measure.NOMINAL


def test_apply_types_coerces_values():
    ds = load_dataset(b"year,value\n1990,2\n1991,2.5\n")
    typed = apply_types(ds, infer_types(ds))
    assert typed.rows == ((1990, 2), (1991, 2.5))
    assert isinstance(typed.rows[0][1], int)


def test_key_inference_stocks(stocks):
    assert set(stocks.key) == {"symbol", "date"}


def test_key_inference_gapminder(gapminder):
    assert set(gapminder.key) == {"year", "country"}


def test_key_excludes_quantitative(penguins):
    # beak/flipper/mass are quantitative and may not participate in keys.
    assert penguins.key == ()


def test_key_nulls_disqualify():
    ds = load_typed(b"id,v\na,1\n,2\n")
    assert ds.key == ()


def test_key_tie_break_prefers_fewer_fields():
    ds = load_typed(b"id,grp,v\na,g1,1\nb,g1,2\nc,g2,3\n")
    assert ds.key == ("id",)


def _brute_force_key(ds: Dataset, max_size=4):
    """Independent oracle: smallest unique subset by (size, distinct product,
    column order)."""
    cands = [n for n in ds.column_names()
             if ds.measure(n) in (Measure.TEMPORAL, Measure.NOMINAL, Measure.ORDINAL)]
    order = {n: i for i, n in enumerate(ds.column_names())}
    best = None
    for size in range(1, min(max_size, len(cands)) + 1):
        for combo in itertools.combinations(cands, size):
            tuples = [tuple(r[ds.index(c)] for c in combo) for r in ds.rows]
            if any(None in t for t in tuples) or len(set(tuples)) != len(tuples):
                continue
            prod = 1
            for c in combo:
                prod *= distinct_count(ds, c)
            rank = (size, prod, tuple(order[c] for c in combo))
            if best is None or rank < best[0]:
                best = (rank, combo)
        if best:
            return list(best[1])
    return []


@given(st.data())
@settings(max_examples=80, deadline=None)
def test_key_inference_matches_brute_force(data):
    n_cols = data.draw(st.integers(2, 4))
    n_rows = data.draw(st.integers(1, 25))
    cols = [f"c{i}" for i in range(n_cols)]
    cats = ["u", "v", "w", "x"]
    rows = [tuple(data.draw(st.sampled_from(cats)) for _ in cols) for _ in range(n_rows)]
    csv = "\n".join([",".join(cols)] + [",".join(r) for r in rows]) + "\n"
    ds = load_typed(csv.encode())
    assert list(ds.key) == _brute_force_key(ds)
