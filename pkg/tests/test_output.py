import json

import numpy as np

from pdmwell.output import emit, format_value, rows_to_csv, rows_to_json


def test_format_value():
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(np.float64(2.0)) == "2"
    assert format_value(True) == "true" and format_value(np.bool_(False)) == "false"
    assert format_value(np.int64(3)) == "3" and format_value(None) == ""


def test_csv_and_json(tmp_path):
    rows = [{"a": 1, "b": 0.5}, {"a": 2, "b": np.float64(1 / 3)}]
    text = rows_to_csv(rows)
    assert text == "a,b\n1,0.5\n2,0.33333333333333331\n"
    data = json.loads(rows_to_json({"rows": rows, "arr": np.arange(2.0), "inf": float("inf")}))
    assert data["rows"][1]["b"] == 1 / 3 and data["arr"] == [0.0, 1.0] and data["inf"] == "inf"
    f = tmp_path / "o.csv"
    emit(text, str(f))
    assert f.read_bytes() == text.encode()
